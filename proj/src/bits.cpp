#include "advex/bits.hpp"

#include <stdexcept>

#include <json.hpp>

namespace advex {

namespace {

int bitlength_ll(long long v) {
    int n = 0;
    while (v > 0) {
        n++;
        v >>= 1;
    }
    return n;
}

int bitlength_big(Big v) {
    if (v <= 0) return 0;
    return static_cast<int>(boost::multiprecision::msb(v)) + 1;
}

}  // namespace

uint8_t AdviceTape::read_bit() {
    if (cursor >= bits.size()) throw std::runtime_error("advice tape exhausted");
    return bits[cursor++];
}

std::vector<uint8_t> AdviceTape::encode_count(long long x) {
    if (x < 2) throw std::invalid_argument("write_count requires x >= 2");
    long long y = x - 1;
    int n = bitlength_ll(y);
    int l = bitlength_ll(n) - 1;
    std::vector<uint8_t> out;
    for (int i = 0; i < l; i++) out.push_back(0);
    for (int i = l; i >= 0; i--) out.push_back(static_cast<uint8_t>((n >> i) & 1));
    for (int i = n - 2; i >= 0; i--) out.push_back(static_cast<uint8_t>((y >> i) & 1));
    return out;
}

long long AdviceTape::read_count() {
    int l = 0;
    while (read_bit() == 0) l++;
    long long n = 1;
    for (int i = 0; i < l; i++) n = (n << 1) | read_bit();
    long long y = 1;
    for (long long i = 0; i < n - 1; i++) y = (y << 1) | read_bit();
    return y + 1;
}

std::vector<uint8_t> AdviceTape::encode_fixed(const Big& x, int width) {
    if (x < 0 || (width < 64 && x >= (Big(1) << width)))
        throw std::invalid_argument("write_fixed overflow");
    if (bitlength_big(x) > width) throw std::invalid_argument("write_fixed overflow");
    std::vector<uint8_t> out(static_cast<size_t>(width));
    for (int i = 0; i < width; i++)
        out[static_cast<size_t>(width - 1 - i)] = static_cast<uint8_t>(bit_test(x, static_cast<unsigned>(i)) ? 1 : 0);
    return out;
}

Big AdviceTape::read_fixed(int width) {
    Big v = 0;
    for (int i = 0; i < width; i++) v = (v << 1) | read_bit();
    return v;
}

int AdviceTape::choices_width(int count, int k) {
    Big top = 1;
    for (int i = 0; i < count; i++) top *= k;
    return bitlength_big(top - 1);
}

std::vector<uint8_t> AdviceTape::encode_choices(const std::vector<int>& digits, int k) {
    Big v = 0;
    for (int d : digits) {
        if (d < 0 || d >= k) throw std::invalid_argument("choice digit out of range");
        v = v * k + d;
    }
    return encode_fixed(v, choices_width(static_cast<int>(digits.size()), k));
}

std::vector<int> AdviceTape::unpack_choices(int count, int k) {
    Big v = read_fixed(choices_width(count, k));
    std::vector<int> digits(static_cast<size_t>(count));
    for (int i = count - 1; i >= 0; i--) {
        digits[static_cast<size_t>(i)] = static_cast<int>(v % k);
        v /= k;
    }
    return digits;
}

std::string bits_to_string(const std::vector<uint8_t>& bits) {
    std::string s;
    for (uint8_t b : bits) s += b ? '1' : '0';
    return s;
}

std::string tape_to_json(const AdviceTape& t) {
    static const char* hexdigits = "0123456789abcdef";
    std::string hex;
    for (size_t byte = 0; byte * 8 < t.bits.size(); byte++) {
        unsigned v = 0;
        for (size_t i = 0; i < 8; i++) {
            size_t pos = byte * 8 + i;
            v = (v << 1) | (pos < t.bits.size() ? t.bits[pos] : 0);
        }
        hex += hexdigits[v >> 4];
        hex += hexdigits[v & 0xf];
    }
    nlohmann::json doc;
    doc["length"] = t.bits.size();
    doc["bits"] = hex;
    return doc.dump();
}

AdviceTape tape_from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& ex) {
        throw std::runtime_error(std::string("tape document is not valid JSON: ") + ex.what());
    }
    size_t length = doc.at("length").get<size_t>();
    std::string hex = doc.at("bits").get<std::string>();
    if (hex.size() * 4 < length) throw std::runtime_error("tape document shorter than declared length");
    AdviceTape t;
    for (size_t pos = 0; pos < length; pos++) {
        char c = hex[pos / 4];
        int v = (c >= '0' && c <= '9')   ? c - '0'
                : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                         : -1;
        if (v < 0) throw std::runtime_error("tape document has invalid hex");
        t.bits.push_back(static_cast<uint8_t>((v >> (3 - pos % 4)) & 1));
    }
    return t;
}

size_t TapeBuilder::append_bit(uint8_t b) {
    slots.push_back(b ? 1 : 0);
    return slots.size() - 1;
}

void TapeBuilder::append(const std::vector<uint8_t>& bs) {
    for (uint8_t b : bs) append_bit(b);
}

size_t TapeBuilder::reserve(size_t nbits) {
    size_t start = slots.size();
    slots.insert(slots.end(), nbits, static_cast<int8_t>(-1));
    return start;
}

void TapeBuilder::fill_bit(size_t pos, uint8_t b) {
    if (pos >= slots.size()) throw std::logic_error("tape fill out of range");
    if (slots[pos] >= 0) throw std::logic_error("tape position filled twice");
    slots[pos] = b ? 1 : 0;
}

void TapeBuilder::fill(size_t pos, const std::vector<uint8_t>& bs) {
    for (size_t i = 0; i < bs.size(); i++) fill_bit(pos + i, bs[i]);
}

AdviceTape TapeBuilder::finalize() const {
    AdviceTape t;
    t.bits.reserve(slots.size());
    for (int8_t s : slots) {
        if (s < 0) throw std::logic_error("tape finalized with unfilled reservation");
        t.bits.push_back(static_cast<uint8_t>(s));
    }
    return t;
}

}  // namespace advex

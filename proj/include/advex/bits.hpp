#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advex/graph.hpp"  // Big

namespace advex {

// Sequential-access bit tape. Writing appends; reading consumes from a cursor
// that never moves backwards.
struct AdviceTape {
    std::vector<uint8_t> bits;
    size_t cursor = 0;

    size_t written() const { return bits.size(); }
    size_t consumed() const { return cursor; }
    bool exhausted() const { return cursor >= bits.size(); }

    void append_bit(uint8_t b) { bits.push_back(b ? 1 : 0); }
    void append(const std::vector<uint8_t>& bs) { bits.insert(bits.end(), bs.begin(), bs.end()); }
    uint8_t read_bit();

    void write_count(long long x) { append(encode_count(x)); }
    long long read_count();

    void write_fixed(const Big& x, int width) { append(encode_fixed(x, width)); }
    Big read_fixed(int width);

    void pack_choices(const std::vector<int>& digits, int k) { append(encode_choices(digits, k)); }
    std::vector<int> unpack_choices(int count, int k);

    // Self-delimiting code for x >= 2 (Elias delta of x-1); length is at most
    // log2(x) + 2*log2(log2(x)) + 2 bits.
    static std::vector<uint8_t> encode_count(long long x);
    // Big-endian fixed-width binary, 0 <= x < 2^width.
    static std::vector<uint8_t> encode_fixed(const Big& x, int width);
    // Base-k block in exactly bitlength(k^count - 1) = ceil(count*log2(k)) bits,
    // first digit most significant.
    static std::vector<uint8_t> encode_choices(const std::vector<int>& digits, int k);

    static int choices_width(int count, int k);
};

std::string bits_to_string(const std::vector<uint8_t>& bits);

std::string tape_to_json(const AdviceTape& t);
AdviceTape tape_from_json(const std::string& json_text);

// Append-ordered bit stream with fixed-size reservations that are filled later;
// used by the recording oracle for advice whose position is known before its
// value is (classification blocks in discovery order, the end-rank field).
struct TapeBuilder {
    std::vector<int8_t> slots;  // 0/1, or -1 for a reserved unfilled hole

    size_t append_bit(uint8_t b);
    void append(const std::vector<uint8_t>& bs);
    size_t reserve(size_t nbits);  // returns start position
    void fill_bit(size_t pos, uint8_t b);
    void fill(size_t pos, const std::vector<uint8_t>& bs);
    bool filled(size_t pos) const { return slots[pos] >= 0; }
    size_t size() const { return slots.size(); }
    AdviceTape finalize() const;
};

}  // namespace advex

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace colornn {

/// Fixed-length vector over GF(2), packed into 64-bit words.
///
/// Bits beyond size() in the last word are always zero, so word-level
/// operations (popcount, equality, hashing) never see garbage.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    static BitVector from_indices(std::size_t n, std::span<const int> indices);
    static BitVector from_string(std::string_view bits);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true) {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
    bool operator[](std::size_t i) const { return get(i); }

    void clear();
    std::size_t popcount() const;
    bool any() const;
    bool none() const { return !any(); }

    /// Parity of the bitwise AND with `other` (the GF(2) inner product).
    bool dot(const BitVector &other) const;

    BitVector &operator^=(const BitVector &other);
    BitVector &operator&=(const BitVector &other);
    BitVector &operator|=(const BitVector &other);
    friend BitVector operator^(BitVector a, const BitVector &b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector &b) { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector &b) { return a |= b; }
    bool operator==(const BitVector &other) const = default;

    /// Indices of set bits, ascending.
    std::vector<int> ones() const;

    /// Appends `other` after the current bits.
    void append(const BitVector &other);
    BitVector slice(std::size_t begin, std::size_t count) const;

    /// '0'/'1' characters, index 0 first.
    std::string to_string() const;

    std::span<std::uint64_t> words() { return words_; }
    std::span<const std::uint64_t> words() const { return words_; }

    /// Little-endian byte packing: bit i lands in byte i/8, bit position i%8.
    std::vector<std::uint8_t> to_bytes() const;
    static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t n);

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitVectorHash {
    std::size_t operator()(const BitVector &v) const noexcept;
};

}  // namespace colornn

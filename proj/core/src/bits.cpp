#include "colornn/bits.hpp"

#include <algorithm>
#include <stdexcept>

namespace colornn {

BitVector BitVector::from_indices(std::size_t n, std::span<const int> indices) {
    BitVector v(n);
    for (int i : indices) {
        if (i < 0 || static_cast<std::size_t>(i) >= n) {
            throw std::out_of_range("BitVector::from_indices: index out of range");
        }
        v.set(static_cast<std::size_t>(i));
    }
    return v;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("BitVector::from_string: expected only '0' and '1'");
        }
    }
    return v;
}

void BitVector::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BitVector::popcount() const {
    std::size_t c = 0;
    for (auto w : words_) {
        c += static_cast<std::size_t>(std::popcount(w));
    }
    return c;
}

bool BitVector::any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

bool BitVector::dot(const BitVector &other) const {
    std::uint64_t acc = 0;
    const std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
        acc ^= words_[i] & other.words_[i];
    }
    return std::popcount(acc) & 1;
}

BitVector &BitVector::operator^=(const BitVector &other) {
    if (other.size_ != size_) {
        throw std::invalid_argument("BitVector: size mismatch in xor");
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] ^= other.words_[i];
    }
    return *this;
}

BitVector &BitVector::operator&=(const BitVector &other) {
    if (other.size_ != size_) {
        throw std::invalid_argument("BitVector: size mismatch in and");
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] &= other.words_[i];
    }
    return *this;
}

BitVector &BitVector::operator|=(const BitVector &other) {
    if (other.size_ != size_) {
        throw std::invalid_argument("BitVector: size mismatch in or");
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] |= other.words_[i];
    }
    return *this;
}

std::vector<int> BitVector::ones() const {
    std::vector<int> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t word = words_[w];
        while (word) {
            out.push_back(static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(word))));
            word &= word - 1;
        }
    }
    return out;
}

void BitVector::append(const BitVector &other) {
    const std::size_t old = size_;
    size_ += other.size_;
    words_.resize((size_ + 63) / 64, 0);
    for (std::size_t i = 0; i < other.size_; ++i) {
        if (other.get(i)) {
            set(old + i);
        }
    }
}

BitVector BitVector::slice(std::size_t begin, std::size_t count) const {
    if (begin + count > size_) {
        throw std::out_of_range("BitVector::slice out of range");
    }
    BitVector out(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (get(begin + i)) {
            out.set(i);
        }
    }
    return out;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if (get(i)) {
            s[i] = '1';
        }
    }
    return s;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
    std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
    }
    return out;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t n) {
    if (bytes.size() != (n + 7) / 8) {
        throw std::invalid_argument("BitVector::from_bytes: byte count does not match bit count");
    }
    BitVector v(n);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        v.words_[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
    }
    if (n % 64 != 0 && !v.words_.empty()) {
        v.words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
    }
    return v;
}

std::size_t BitVectorHash::operator()(const BitVector &v) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ v.size();
    for (auto w : v.words()) {
        h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

}  // namespace colornn

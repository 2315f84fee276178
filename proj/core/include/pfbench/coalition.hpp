#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pfbench/errors.hpp"
#include "pfbench/rng.hpp"

namespace pfb {

/// Subset S of the feature set {0,...,n-1}. Backed by a word-packed bitset so
/// membership tests stay O(1) for n up to several thousand.
class Coalition {
public:
    Coalition() = default;
    explicit Coalition(std::size_t n)
        : n_(n), words_((n + 63) / 64, 0), count_(0) {}

    static Coalition empty(std::size_t n) { return Coalition(n); }
    static Coalition full(std::size_t n) {
        Coalition c(n);
        for (std::size_t i = 0; i < n; ++i) c.insert(i);
        return c;
    }
    static Coalition from_members(std::size_t n,
                                  const std::vector<std::size_t>& members) {
        Coalition c(n);
        for (auto i : members) c.insert(i);
        return c;
    }

    std::size_t n() const { return n_; }
    std::size_t size() const { return count_; }
    bool is_empty() const { return count_ == 0; }
    bool is_full() const { return count_ == n_; }

    bool contains(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void insert(std::size_t i) {
        check_index(i);
        std::uint64_t bit = 1ULL << (i & 63);
        if (!(words_[i >> 6] & bit)) {
            words_[i >> 6] |= bit;
            ++count_;
        }
    }
    void erase(std::size_t i) {
        check_index(i);
        std::uint64_t bit = 1ULL << (i & 63);
        if (words_[i >> 6] & bit) {
            words_[i >> 6] &= ~bit;
            --count_;
        }
    }

    Coalition complement() const {
        Coalition c(n_);
        for (std::size_t i = 0; i < n_; ++i)
            if (!contains(i)) c.insert(i);
        return c;
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> m;
        m.reserve(count_);
        for (std::size_t i = 0; i < n_; ++i)
            if (contains(i)) m.push_back(i);
        return m;
    }

    /// Order-independent 64-bit hash of the membership bitset.
    std::uint64_t hash64() const {
        std::uint64_t h = StreamRng::mix(n_);
        for (auto w : words_) h = StreamRng::mix(h ^ StreamRng::mix(w));
        return h;
    }

    bool operator==(const Coalition& o) const = default;

private:
    void check_index(std::size_t i) const {
        if (i >= n_) throw ValidationError("coalition index out of range");
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
    std::size_t count_ = 0;
};

}  // namespace pfb

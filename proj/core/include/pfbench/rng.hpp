#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace pfb {

// Counter-based generator: every draw is a stateless hash of (key, counter),
// so a stream is fully determined by its key and results never depend on
// which thread or in which order streams are consumed.
class StreamRng {
public:
    StreamRng() : key_(0) {}

    /// Derive a stream from an ordered list of key parts, e.g.
    /// {master_seed, image_id, coalition_hash, sample_index}.
    StreamRng(std::initializer_list<std::uint64_t> parts) : key_(0) {
        for (auto p : parts) absorb(p);
    }

    void absorb(std::uint64_t part) {
        key_ = mix(key_ ^ mix(part + 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t next_u64() {
        return mix(key_ + mix(counter_++ * 0xbf58476d1ce4e5b9ULL + 1));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // Lemire's multiply-shift; rejection loop removes modulo bias.
        std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            unsigned __int128 m = static_cast<unsigned __int128>(r) * bound;
            if (static_cast<std::uint64_t>(m) >= threshold)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

    /// Fisher-Yates shuffle; spelled out so results are platform-stable.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// A uniformly random permutation of {0,...,n-1}.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        shuffle(p);
        return p;
    }

    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Stable 64-bit hash of a string, used to key RNG streams by textual ids.
inline std::uint64_t hash_id(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace pfb

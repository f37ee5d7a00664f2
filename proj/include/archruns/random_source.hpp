#pragma once

#include <concepts>
#include <cstdint>
#include <random>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace archruns {

/// Anything that can draw a uniform big integer in [0, m).
template <class S>
concept BigUniformSource = requires(S& s, const BigInt& m) {
    { s.uniform_below(m) } -> std::convertible_to<BigInt>;
};

/// Seedable source backed by mt19937_64. Draws use rejection against the
/// smallest power-of-two envelope covering m, so there is no modulo bias.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for the index-th unit of work under `seed`.
    /// Split rule: mt19937_64 seeded from seed_seq{seed_lo, seed_hi, index_lo, index_hi}.
    static RandomSource substream(std::uint64_t seed, std::uint64_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
        return RandomSource(seq);
    }

    BigInt uniform_below(const BigInt& m) {
        if (sgn(m) <= 0) throw domain_error("uniform_below: empty range");
        const std::size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
        const std::size_t words = (bits + 63) / 64;
        const unsigned top_bits = static_cast<unsigned>(bits - (words - 1) * 64);
        const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << top_bits) - 1;
        buffer_.resize(words);
        BigInt r;
        do {
            for (auto& w : buffer_) w = engine_();
            buffer_.back() &= top_mask;  // most significant word, order = -1 below
            mpz_import(r.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buffer_.data());
            ++draws_;
        } while (r >= m);
        return r;
    }

    [[nodiscard]] std::uint64_t attempts() const noexcept { return draws_; }

private:
    explicit RandomSource(std::seed_seq& seq) : engine_(seq) {}

    std::mt19937_64 engine_;
    std::vector<std::uint64_t> buffer_;
    std::uint64_t draws_ = 0;
};

static_assert(BigUniformSource<RandomSource>);

}  // namespace archruns

#pragma once

#include <array>
#include <cstdint>

namespace hdmt {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of
/// (counter, key); used as the block generator behind `RngStream`.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Deterministic random stream identified by (seed, stream id).
///
/// Block b of stream s under seed k is philox4x32_10({b_lo, b_hi, s_lo, s_hi},
/// {k_lo, k_hi}); words are consumed in order. Uniforms take the top 53 bits
/// of two consecutive words; normals use the Box-Muller transform and consume
/// uniforms in pairs. The construction is platform independent up to the
/// libm accuracy of log, sqrt, sin and cos.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal.
    double normal();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finalizer; derives independent seeds for grid points.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace hdmt

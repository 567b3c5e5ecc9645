#pragma once

#include <array>
#include <cstdint>

namespace sconv {

/// Counter-based random stream built on Philox4x32-10.
///
/// The 128-bit counter is (block index, stream id) and the 64-bit key is the
/// seed, so every (seed, stream_id) pair addresses an independent sequence and
/// any position can be reached without generating the prefix. The generator
/// algorithm is fixed for the lifetime of the repository: changing it would
/// change every emitted artifact.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    /// Number of 64-bit words consumed so far.
    std::uint64_t position() const noexcept { return position_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1); never returns 0 or 1.
    double next_uniform() noexcept;

    void discard(std::uint64_t words) noexcept { position_ += words; }

    /// A stream on a different stream id, keyed by the same seed.
    RngStream substream(std::uint64_t stream_id) const noexcept { return RngStream(seed_, stream_id); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t position_ = 0;
    std::uint64_t cached_block_ = ~std::uint64_t{0};
    std::array<std::uint32_t, 4> cache_{};
};

RngStream make_rng_stream(std::uint64_t seed, std::uint64_t stream_id);

/// Raw Philox4x32-10 block function (exposed for known-answer tests).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer; used to derive stream ids from labels.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace sconv

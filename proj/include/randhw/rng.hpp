#pragma once

#include "randhw/normal.hpp"

#include <cstdint>

namespace rhw {

// splitmix64 finalizer: a full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based per-path random stream: the state is a key derived from
// (seed, stream id) and a draw counter, so path j's draws are independent of
// how many paths exist, results are bit-reproducible across thread layouts,
// and a run can be extended path-wise without replaying earlier paths.
// Normals come from the inverse CDF, keeping simulation byte-deterministic.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) ^
                       mix64(stream + 0x14057b7ef767814fULL))) {}

    // Additional stream dimensions (e.g. nested simulations keyed by date and
    // collocation node) fold extra ids into the key.
    PathRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
        : PathRng(mix64(seed + 0x9e3779b97f4a7c15ULL * substream), stream) {}

    double next_uniform() {
        // splitmix64 sequence from the per-stream state: open interval (0,1).
        const std::uint64_t z = mix64(state_ += 0x9e3779b97f4a7c15ULL);
        return static_cast<double>(z >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double next_normal() { return norm_ppf(next_uniform()); }

  private:
    std::uint64_t state_;
};

} // namespace rhw

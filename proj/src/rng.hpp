#pragma once

#include <cstdint>
#include <complex>

namespace rmp::rng {

// Counter-based generator (Philox-4x64-10). A stream is a pure function of
// (seed, stream id): any realization can be regenerated independently of
// worker count or draw order, which is what makes the Monte Carlo layer
// reproducible under arbitrary parallelism.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : key0_(seed), key1_(stream_id) {}

    std::uint64_t next_u64();
    // Uniform on [0, 1).
    double next_double();
    // Standard normal via Box-Muller (one spare cached).
    double next_gaussian();
    // (x + iy)/sqrt(2) with x, y standard normal: E|z|^2 = 1.
    std::complex<double> next_complex_gaussian();

    std::uint64_t seed() const { return key0_; }
    std::uint64_t stream_id() const { return key1_; }

  private:
    void refill();

    std::uint64_t key0_, key1_;
    std::uint64_t ctr_[4] = {0, 0, 0, 0};
    std::uint64_t buf_[4] = {0, 0, 0, 0};
    int avail_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rmp::rng

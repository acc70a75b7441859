#pragma once

#include <cstdint>

namespace bt {

// splitmix64 finalizer; used to build stream ids and hashes.
std::uint64_t mix64(std::uint64_t x) noexcept;

// What a substream is consumed for.  Keying the stream id on the purpose
// guarantees that e.g. lifetime draws never share counters with Gaussian
// increments of the same particle.
enum class StreamPurpose : std::uint64_t {
    lifetime  = 1,
    offspring = 2,
    gauss     = 3,
    generic   = 4,
};

// Derive a 64-bit stream id from (path, label-hash, purpose).
std::uint64_t stream_id(std::uint64_t path_index,
                        std::uint64_t label_hash,
                        StreamPurpose purpose) noexcept;

// Counter-based generator (Philox4x32-10).  A generator is fully determined
// by (seed, stream): the n-th variate of a stream is a pure function of
// (seed, stream, n), so creating additional streams can never perturb the
// draws of an existing one.  One block yields four 32-bit lanes = two
// 53-bit uniforms.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;

    // uniform on (0,1): (k + 0.5) * 2^-53, never exactly 0 or 1
    double uniform01() noexcept;

    // standard normal via Box-Muller; second variate of each pair is cached
    double normal() noexcept;

    // Exp(rate); rate == 0 yields +infinity
    double exponential(double rate) noexcept;

    // offspring-count style draw: inverse CDF walk over (value, prob) pairs
    template <class Pmf>
    unsigned sample_pmf(const Pmf& pmf) noexcept {
        const double u = uniform01();
        double acc = 0.0;
        unsigned last = 0;
        for (const auto& [k, p] : pmf) {
            acc += p;
            last = k;
            if (u <= acc) return k;
        }
        return last; // guard against rounding in the final bucket
    }

  private:
    void refill() noexcept;

    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t buf_[4];
    int buf_pos_; // next unread 32-bit lane in buf_, 4 = empty
    double cached_normal_;
    bool has_cached_normal_;
};

} // namespace bt

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsbox/rational.hpp"

namespace nsbox {

// Counter-based splittable generator (splitmix64 finalizer). A stream is
// identified by a 64-bit key; next() advances a counter, split() derives an
// independent child stream. Identical seeds give identical streams on every
// platform, which is what makes experiment reports replayable.
class SplitRng {
  public:
    explicit SplitRng(uint64_t key) : key_(key), ctr_(0) {}

    static SplitRng from_hex(const std::string& hex);

    uint64_t next_u64();

    // Child stream; deterministic in (key, tag), independent of the counter.
    SplitRng split(uint64_t tag) const;

    // Unbiased integer in [0, bound).
    uint64_t below(uint64_t bound);

    bool bit() { return (next_u64() >> 63) != 0; }

    double uniform01();  // 53-bit mantissa

    // Unbiased big integer in [0, bound), bound > 0.
    Int below_big(const Int& bound);

    // Index sampled with probability weights[i]/sum(weights), exactly.
    size_t sample_discrete(const std::vector<Rat>& weights);

    uint64_t key() const { return key_; }

  private:
    uint64_t key_;
    uint64_t ctr_;
};

}  // namespace nsbox

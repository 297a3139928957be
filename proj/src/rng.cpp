#include "nsbox/rng.hpp"

#include <stdexcept>

namespace nsbox {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

SplitRng SplitRng::from_hex(const std::string& hex) {
    if (hex.empty()) throw std::invalid_argument("empty seed");
    uint64_t v = 0;
    for (char c : hex) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else if (c == 'x' || c == 'X') continue;  // tolerate 0x prefix
        else throw std::invalid_argument("bad hex seed: " + hex);
        v = (v << 4) | static_cast<uint64_t>(d);
    }
    return SplitRng(v);
}

uint64_t SplitRng::next_u64() {
    ++ctr_;
    return mix64(key_ + kGolden * ctr_);
}

SplitRng SplitRng::split(uint64_t tag) const {
    return SplitRng(mix64(key_ ^ mix64(tag * kGolden + 0x632BE59BD9B4E019ULL)));
}

uint64_t SplitRng::below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below(0)");
    // Rejection sampling on the top bits.
    uint64_t mask = bound - 1;
    mask |= mask >> 1; mask |= mask >> 2; mask |= mask >> 4;
    mask |= mask >> 8; mask |= mask >> 16; mask |= mask >> 32;
    for (;;) {
        uint64_t v = next_u64() & mask;
        if (v < bound) return v;
    }
}

double SplitRng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Int SplitRng::below_big(const Int& bound) {
    if (bound <= 0) throw std::invalid_argument("below_big: bound <= 0");
    size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    size_t words = (bits + 63) / 64;
    for (;;) {
        Int v = 0;
        for (size_t i = 0; i < words; ++i) {
            v <<= 64;
            Int w(static_cast<unsigned long>(next_u64() >> 32));
            w <<= 32;
            w += static_cast<unsigned long>(next_u64() & 0xFFFFFFFFULL);
            v += w;
        }
        // Trim to exactly `bits` bits, then reject.
        Int m = 1;
        m <<= bits;
        v %= m;
        if (v < bound) return v;
    }
}

size_t SplitRng::sample_discrete(const std::vector<Rat>& weights) {
    if (weights.empty()) throw std::invalid_argument("sample_discrete: empty");
    // Common denominator D, draw uniformly in [0, total*D).
    Int den = 1;
    Rat total = 0;
    for (const auto& w : weights) {
        if (w < 0) throw std::invalid_argument("sample_discrete: negative weight");
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w.get_den().get_mpz_t());
        total += w;
    }
    if (total <= 0) throw std::invalid_argument("sample_discrete: zero total");
    Rat scaled_total = total * Rat(den);
    Int bound(scaled_total.get_num());  // scaled_total is integral
    Int r = below_big(bound);
    Int acc = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        Rat sw = weights[i] * Rat(den);
        acc += sw.get_num();
        if (r < acc) return i;
    }
    return weights.size() - 1;  // unreachable for consistent weights
}

}  // namespace nsbox

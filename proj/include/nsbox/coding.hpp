#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsbox/rational.hpp"
#include "nsbox/rng.hpp"

namespace nsbox {

// Bit convention throughout: index 0 is the leftmost symbol and maps to bit 0
// of the word. Block lengths are capped at 64 (desk scale).

struct CodingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinearCode {
    int n = 0;  // block length
    int k = 0;  // dimension (Rn)
    std::vector<uint64_t> h;  // (n-k) parity rows
    enum class DistStatus { Exact, LowerBounded, Unverified } dist_status = DistStatus::Unverified;
    int distance = 0;

    Rat rate() const { return Rat(k, n); }
    int parity_bits() const { return n - k; }
};

// syn(x) = H x over GF(2); the stored rows realize the paper's transposed
// convention directly.
uint64_t syndrome(const LinearCode& code, uint64_t x);

// Basis of the null space of H (the codewords' generator), via Gaussian
// elimination.
std::vector<uint64_t> code_generator(const LinearCode& code);

// Exact minimum distance by enumerating all 2^k - 1 nonzero codewords.
// Requires k <= 24; the empty-dual full-space code has distance 1.
int min_distance_exact(const LinearCode& code);

// Samples uniform full-row-rank parity matrices until the minimum distance
// reaches d_min. Distance is Exact when k <= 24, else lower-bounded by
// searching words of weight < d_min. Throws RetriesExhausted with the best
// distance seen.
struct RetriesExhausted : CodingError {
    int best_distance;
    RetriesExhausted(std::string msg, int best) : CodingError(std::move(msg)), best_distance(best) {}
};

LinearCode sample_code(int n, const Rat& rate, int d_min, SplitRng& rng, int max_retries = 1000);

// Code file format: "code n k" then n-k rows of 0/1 strings.
std::string serialize_code(const LinearCode& code);
LinearCode parse_code(const std::string& text);

// Toeplitz two-universal hashing: output bit j = sum_i seed[l-1-j+i] x_i.
struct ToeplitzSeed {
    int n = 0;
    int l = 0;
    std::vector<uint64_t> bits;  // n+l-1 bits, word-packed, bit t = bits[t/64]>>(t%64)

    bool bit(int t) const { return (bits[static_cast<size_t>(t) / 64] >> (t % 64)) & 1; }
    static ToeplitzSeed random(int n, int l, SplitRng& rng);
    static ToeplitzSeed zero(int n, int l);
    std::string to_hex() const;
    static ToeplitzSeed from_hex(int n, int l, const std::string& hex);
};

uint64_t toeplitz_ext(const ToeplitzSeed& seed, uint64_t x);

// Exhaustive max collision probability over all seeds and input differences
// (collision depends on x0 ^ x1 only, by linearity). n <= 12, l <= 4.
Rat verify_two_universal(int n, int l);

// Exact statistical distance of (ext(S,X), S) from (U, S): source given as
// (value, probability) pairs over n-bit strings, n <= 16.
Rat leftover_distance(const std::vector<std::pair<uint64_t, Rat>>& source, int n, int l);

}  // namespace nsbox

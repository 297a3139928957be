#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsbox/box.hpp"
#include "nsbox/rational.hpp"

namespace nsbox {

// H(X|Y) in bits from a joint table P(x,y), index x*ny + y.
double shannon_conditional_entropy(const std::vector<double>& joint, int nx, int ny);
double shannon_conditional_entropy(const std::vector<Rat>& joint, int nx, int ny);

// gamma for Protocol I: min over Bob inputs v of H(X_v | Y_v) with Alice's
// input pinned to ua.
double gamma_of_box(const Box& box, int ua);
// Exact positivity check (no floating point): gamma > 0 iff for every v some
// Bob outcome leaves Alice's output undetermined.
bool gamma_positive_exact(const Box& box, int ua);

double min_entropy_bits(const std::vector<double>& dist);

// Typicality. Counts are compared against eps*n exactly (rational
// cross-multiplication), so accept/reject is bit-reproducible.
bool is_typical(const std::vector<int>& seq, const std::vector<Rat>& p, const Rat& eps);

struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// w[in][out] is the channel; zero-probability transitions must not occur.
bool is_cond_typical(const std::vector<int>& out_seq, const std::vector<int>& in_seq,
                     const std::vector<std::vector<Rat>>& w, const Rat& eps);

// sum_{i<=k} C(n,i) p^i (1-p)^(n-i), exact.
Rat exact_binomial_tail(int n, const Rat& p, int k);

// tail <= 2^(-2np^2 + 4pk) compared exactly (both sides raised to the
// exponent's denominator).
bool binomial_tail_bound_holds(int n, const Rat& p, int k);

struct ParameterOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-form bound evaluators. Ids:
//   chernoff_upper(mu, delta)        exp(-delta^2 mu / 3)   [upper tail]
//   chernoff_lower(mu, delta)        exp(-delta^2 mu / 2)   [lower tail]
//   hoeffding(n, delta)              exp(-2 delta^2 / n)
//   typical1(n, eps, X)              1 - 2|X| exp(-n eps^2 / 3)
//   typical2(n, eps, X, Z)           1 - 2|X||Z| exp(-n eps^2 / 3)
//   statlemma(n, lambda, delta, kappa, Z)  derives eps = lambda delta kappa / (2|Z|),
//                                    value 2 exp(-n eps^2 / 3)
//   binom_tail(n, p, k)              2^(-2np^2+4pk), plus the exact tail
//   chain_rule(H, Y_bits, eps_prime) H - Y_bits - log2(1/eps')
//   smooth_product(H, n, eps, X)     H - 4 sqrt(n log2(1/eps)) log2|X|
//   leftover_threshold(h_min, eps)   h_min - 2 log2(1/eps)  [max extractable bits]
struct BoundQuery {
    std::string id;
    std::map<std::string, double> params;
    std::map<std::string, Rat> exact_params;  // optional exact values (binom_tail p)
};

struct BoundResult {
    double value = 0.0;
    bool vacuous = false;
    std::map<std::string, double> derived;
    std::optional<Rat> exact;  // exact companion value where one exists
};

BoundResult evaluate_bound(const BoundQuery& q);

// Wilson score interval at 95%.
struct RateEstimate {
    int successes = 0;
    int trials = 0;
    double rate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};
RateEstimate wilson_interval(int successes, int trials);

}  // namespace nsbox

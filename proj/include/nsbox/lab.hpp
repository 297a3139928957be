#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsbox/protocol.hpp"
#include "nsbox/stats.hpp"

namespace nsbox {

struct TooLargeForExhaustive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AttackOutcome {
    Verdict verdict;
    std::map<std::string, std::string> diagnostics;
};

// Alice opens at Hamming distance >= t from her true string, staying inside
// her syndrome coset when the code allows it (t >= d); for t below the code
// distance she flips t positions outright and loses the syndrome check. She
// always adjusts the claimed value to satisfy the hash equation.
AttackOutcome attack_flip(Session1& s, int t, SplitRng& rng);

// Protocol II delayed-input attack: Alice withholds her inputs on the first m
// boxes during commit, fills the syndromes from a guess rule (the default
// samples inputs uniformly and outputs from the marginal), then inputs the
// guessed values during open and claims the coset member closest to what the
// boxes actually produced.
AttackOutcome attack_delay(const Box& box, const Protocol2Params& params, int m, uint64_t b,
                           SplitRng& rng, Transcript* transcript = nullptr);

// Exact upper bound for the full-delay attack: the probability mass of the
// committed x-coset under the delayed output distribution, weighted per
// changed position by the worst-case chance q that a wrong claim stays off
// the channel's zero cells:  sum_x P[x] q^{d(x, coset)}.  n <= 16.
Rat delay_ball_mass_exact(const Box& box, const Protocol2Params& params);

// Exhaustive double-opening search over the committed coset(s) against the
// realized transcript. Absence is a binding certificate for this transcript.
struct DoubleOpening1 {
    Open1 first, second;
};
std::optional<DoubleOpening1> equivocation_search(const Session1& s, uint64_t b0, uint64_t b1);
struct DoubleOpening2 {
    Open2 first, second;
};
std::optional<DoubleOpening2> equivocation_search(const Session2& s, uint64_t b0, uint64_t b1);

// Bob-side measurement of hiding. The commit-message distribution is computed
// exactly per sampled view (all seeds, all private strings weighted by their
// posterior); the returned advantage is the average total-variation distance
// between the b0 and b1 message distributions.
struct BobAttack {
    enum class Kind { HonestUniform, FixedInput, MaxLikelihood } kind = Kind::HonestUniform;
    int fixed_v = 0;
};

struct HidingResult {
    double advantage = 0.0;        // mean per-view total variation
    double max_view = 0.0;
    int views = 0;
    bool oracle_pad = false;       // true when the key was replaced by fresh uniform bits
};

HidingResult hiding_advantage_exact_p1(const Box& box, const Protocol1Params& params,
                                       const BobAttack& attack, uint64_t b0, uint64_t b1,
                                       int views, SplitRng& rng, bool oracle_pad = false);
HidingResult hiding_advantage_exact_p2(const Box& box, const Protocol2Params& params,
                                       const BobAttack& attack, uint64_t b0, uint64_t b1,
                                       int views, SplitRng& rng, bool oracle_pad = false);

// Monte Carlo acceptance rate of an Alice attack over fresh sessions, with a
// Wilson 95% interval.
struct AliceAttack {
    enum class Kind { Identity, Flip, Delay } kind = Kind::Identity;
    int t = 0;  // flip distance
    int m = 0;  // delayed boxes
};

RateEstimate binding_rate_p1(const Box& box, const Protocol1Params& params, const AliceAttack& attack,
                             int trials, SplitRng& rng);
RateEstimate binding_rate_p2(const Box& box, const Protocol2Params& params, const AliceAttack& attack,
                             int trials, SplitRng& rng);

}  // namespace nsbox

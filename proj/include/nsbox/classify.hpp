#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsbox/box.hpp"
#include "nsbox/rational.hpp"

namespace nsbox {

struct EmptyHull : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AlphabetTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Unclassifiable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact L1 distance from `target` to the convex hull of `others`, with the
// achieving weights. Solved as a rational LP.
struct HullDistance {
    Rat distance;
    std::vector<Rat> weights;
};
HullDistance min_l1_to_hull(const std::vector<Rat>& target,
                            const std::vector<std::vector<Rat>>& others);

// Per-row extremality of the hat matrix: margin = L1 distance to the hull of
// the other defined rows (a duplicated row is non-extreme with margin 0).
struct ExtremalityReport {
    struct Entry {
        int x = 0, u = 0;
        bool defined = false;
        bool extreme = false;
        Rat margin;
        std::vector<Rat> witness;  // hull weights reproducing the row when non-extreme
    };
    std::vector<Entry> rows;       // indexed like HatMatrix rows
    Rat min_positive_margin;       // 0 when no extreme row exists
    int extreme_count = 0;
};
ExtremalityReport extremality(const HatMatrix& hat);

// Condition backing Protocol I: an extreme row a = (x_a, u_a) plus positive
// conditional entropy of Alice's output for every Bob input.
struct Condition1 {
    int xa = 0, ua = 0;
    Rat delta;
    double gamma = 0.0;
};
std::optional<Condition1> check_condition1(const Box& box);

// Condition backing Protocol II (two inputs whose four rows contain at most
// one non-extreme point).
struct Condition3 {
    int u0 = 0, u1 = 0;
    std::optional<std::pair<int, int>> exempt;  // (x, u) of the non-extreme row, if any
    Rat delta;
};
std::optional<Condition3> check_condition3(const Box& box);

// Alternative Protocol II condition: two extreme rows on distinct inputs, and
// each complementary row stays delta * P(c')-far from any mixture that uses
// the other complementary row with weight P(c') and avoids itself. The scaled
// margin is what the security argument consumes; it is computed exactly by a
// normalized LP (minimize ||sum mu_z (W_c - W_z)||_1 with mu_{c'} = 1).
struct Condition4 {
    int u0 = 0, u1 = 0, x0 = 0, x1 = 0;
    Rat delta;
};
std::optional<Condition4> check_condition4(const Box& box);

// Removal of simulable Alice inputs (zero-marginal rows or coinciding hat
// rows), to fixpoint. Each step records the local simulation recipe.
struct ReduceStep {
    enum class Rule { ZeroMarginal, SameInputRows, DuplicateRow };
    Rule rule;
    int removed_u;            // index in the box this step acted on
    int removed_u_original;   // index in the original box
    int x0 = 0;
    // DuplicateRow only: surviving row (x1, u1) and p = W^A(x0|u0)/W^A(x1|u1).
    int x1 = 0;
    int u1 = 0;               // index in the box this step acted on
    Rat p;
    // ZeroMarginal / SameInputRows: Alice answers u0 locally from W^A(.|u0).
    Rat marginal0;            // W^A(0|u0)
};
struct ReduceResult {
    Box reduced;
    std::vector<ReduceStep> steps;
    std::vector<int> kept_original;  // reduced input index -> original index
};
ReduceResult reduce_box(const Box& box);

// Lifts a decomposition of the reduced box back to the original box, exactly.
LocalDecomposition lift_decomposition(const LocalDecomposition& d, const ReduceResult& red);

// Membership in the local polytope via the deterministic-vertex LP.
// Desk-scale alphabets only (|U|, |V| <= 4).
std::optional<LocalDecomposition> is_local(const Box& box);

// Shared-randomness triviality: a two-term decomposition whose index both
// parties can read off at some input pair (u0, v0).
struct TrivialCertificate {
    LocalDecomposition decomposition;
    // Absent for independent boxes (no shared randomness to reveal).
    std::optional<std::pair<int, int>> revealing;
    bool anti = false;  // revealing pair is anti-correlated
};
std::optional<TrivialCertificate> theorem1_trivial(const Box& box);

struct ClassificationResult {
    enum class Verdict { Trivial, ProtocolI, ProtocolII };
    Verdict verdict;
    std::optional<TrivialCertificate> trivial;
    std::optional<Condition1> cond1;
    std::optional<Condition3> cond3;
    std::optional<Condition4> cond4;
    // Locality certificate for the original box whenever one is known (always
    // for Trivial; for Protocol verdicts when the case analysis or the
    // membership LP produced one). A Protocol verdict with no certificate
    // means the box is non-local at desk scale.
    std::optional<LocalDecomposition> local_decomposition;
    ReduceResult reduction;
    std::string case_path;  // which branch of the case analysis fired
};

ClassificationResult classify(const Box& box);

}  // namespace nsbox

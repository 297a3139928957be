#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsbox/rational.hpp"
#include "nsbox/rng.hpp"

namespace nsbox {

// Raw entry table before validation. Entries indexed (u, v, x, y) with
// binary outputs.
struct RawBoxTable {
    int nu = 0;
    int nv = 0;
    std::vector<Rat> w;  // size nu*nv*4, index ((u*nv+v)*2+x)*2+y

    Rat& at(int u, int v, int x, int y) { return w[((u * nv + v) * 2 + x) * 2 + y]; }
    const Rat& at(int u, int v, int x, int y) const { return w[((u * nv + v) * 2 + x) * 2 + y]; }
};

struct ValidationError : std::runtime_error {
    enum class Kind { NotNormalized, SignalingToAlice, SignalingToBob, NonBinaryOutput, BadShape };
    Kind kind;
    int u = -1, v = -1, v2 = -1, u2 = -1, x = -1, y = -1;
    ValidationError(Kind k, std::string msg) : std::runtime_error(std::move(msg)), kind(k) {}
};

// A validated non-signaling box W(xy|uv) with binary outputs. Immutable.
class Box {
  public:
    int nu() const { return t_.nu; }
    int nv() const { return t_.nv; }
    const Rat& at(int u, int v, int x, int y) const { return t_.at(u, v, x, y); }

    // W^A(x|u); well-defined independently of v by validation.
    std::vector<Rat> marginal_alice(int u) const;
    // W^B(y|v).
    std::vector<Rat> marginal_bob(int v) const;

    bool operator==(const Box& o) const { return t_.nu == o.t_.nu && t_.nv == o.t_.nv && t_.w == o.t_.w; }

    friend Box validate_box(const RawBoxTable& t);

  private:
    explicit Box(RawBoxTable t) : t_(std::move(t)) {}
    RawBoxTable t_;
};

// Checks normalization and both non-signaling families exactly; throws
// ValidationError naming the violated equation and indices.
Box validate_box(const RawBoxTable& t);

// Hat matrix: the distribution of Bob's (y, v) conditioned on Alice's (x, u),
// under Bob's uniform honest input. Rows with W^A(x|u) = 0 are kept explicit
// as undefined rather than patched.
struct HatMatrix {
    int nu = 0;
    int nv = 0;
    // Row id r = x * nu + u; coordinate id = v * 2 + y (dimension 2*nv).
    std::vector<std::vector<Rat>> rows;
    std::vector<bool> defined;

    int row_id(int x, int u) const { return x * nu + u; }
    int coord_id(int y, int v) const { return v * 2 + y; }
    int dim() const { return 2 * nv; }
    std::pair<int, int> row_xu(int r) const { return {r / nu, r % nu}; }
};

HatMatrix hat_matrix(const Box& box);

enum class CorrelationKind { PerfectlyCorrelated, PerfectlyAntiCorrelated, Neither };
CorrelationKind correlation_kind(const Box& box, int u, int v);

// Alice inputs u with some other input behaving identically on all (x, y, v).
std::vector<int> redundant_inputs(const Box& box);

// Stochastic matrix input -> {0,1}; p[in*2+out].
struct StochMatrix {
    int nin = 0;
    std::vector<Rat> p;
    Rat at(int in, int out) const { return p[in * 2 + out]; }
    static StochMatrix deterministic(int nin, const std::vector<int>& out_for_in);
};

struct LocalDecomposition {
    struct Term {
        Rat weight;
        StochMatrix va;  // Alice strategy, nin = nu
        StochMatrix vb;  // Bob strategy, nin = nv
    };
    std::vector<Term> terms;
};

// The distribution induced by sampling the shared index and playing the local
// strategies; exact. Throws on shape mismatch.
RawBoxTable induced_table(const LocalDecomposition& d, int nu, int nv);

// Checks sum(weights)=1, stochasticity, and exact reconstruction of `box`.
bool decomposition_reproduces(const LocalDecomposition& d, const Box& box);

// One box shared by two parties; each side usable exactly once. The usage log
// keeps arrival order (ties between "simultaneous" inputs are resolved by
// arrival, which is distributionally irrelevant by non-signaling).
class BoxInstance {
  public:
    enum class Side { Alice, Bob };
    struct Usage {
        Side side;
        int input;
        int output;
        std::string phase;
    };

    explicit BoxInstance(const Box& box) : box_(&box) {}

    int use(Side side, int input, SplitRng& rng, const std::string& phase = "");
    bool used(Side side) const;
    std::optional<std::pair<int, int>> state(Side side) const;  // (input, output)
    const std::vector<Usage>& log() const { return log_; }
    const Box& box() const { return *box_; }

  private:
    const Box* box_;
    std::optional<std::pair<int, int>> alice_;
    std::optional<std::pair<int, int>> bob_;
    std::vector<Usage> log_;
};

struct BoxUseError : std::runtime_error {
    enum class Kind { DoubleUse, InvalidInput };
    Kind kind;
    BoxUseError(Kind k, std::string msg) : std::runtime_error(std::move(msg)), kind(k) {}
};

// Presets.
Box preset_pr_box();
Box preset_shared_bit();
Box preset_anti_shared_bit();
Box preset_correlated_bit(const Rat& p);  // x uniform, y = x + e, Pr[e] = p; single inputs
Box preset_product(const StochMatrix& va, const StochMatrix& vb);
Box preset_mixture(const LocalDecomposition& d, int nu, int nv);
// Named lookup used by the CLI: pr_box | shared_bit | anti_shared_bit |
// correlated_bit:p | product | random:NUxNV (seeded).
Box preset_by_name(const std::string& name, SplitRng& rng);

// Uniform random non-signaling box with all entries of denominator `den`:
// Alice/Bob marginals drawn first, then a coupling per input pair inside the
// exact Frechet bounds. Covers exactly the non-signaling polytope.
Box random_box(int nu, int nv, int den, SplitRng& rng);

// Line-oriented text format:
//   box |U| |V|
//   u v : w00 w01 w10 w11
// Entries "a/b" or decimals; '#' starts a comment.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int ln, std::string msg) : std::runtime_error(std::move(msg)), line(ln) {}
};

Box parse_box(const std::string& text);
std::string serialize_box(const Box& box);

}  // namespace nsbox

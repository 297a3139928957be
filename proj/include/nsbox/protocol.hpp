#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsbox/box.hpp"
#include "nsbox/classify.hpp"
#include "nsbox/coding.hpp"
#include "nsbox/rational.hpp"
#include "nsbox/rng.hpp"

namespace nsbox {

struct InfeasibleAtThisN : std::runtime_error {
    int k = 0;
    Rat lambda, eps;
    double l_value = 0.0;
    InfeasibleAtThisN(std::string msg, int k_, Rat lam, Rat ep, double l)
        : std::runtime_error(std::move(msg)), k(k_), lambda(std::move(lam)), eps(std::move(ep)), l_value(l) {}
};

// Explicit desk-scale parameter choices; anything set here overrides the
// asymptotic schedule and gets re-validated into warnings instead of errors.
struct ScheduleOverrides {
    std::optional<int> k;
    std::optional<int> k2;
    std::optional<int> d;
    std::optional<int> l;
    std::optional<Rat> rate;
    std::optional<Rat> eps;
    std::optional<LinearCode> code;
};

struct Protocol1Params {
    int n = 0;
    int k = 0;
    int l = 0;
    int xa = 0, ua = 0;
    Rat lambda, delta, eps;
    double gamma = 0.0;
    LinearCode code;
    std::vector<std::string> warnings;
};

// Auto mode follows the paper's schedule (k = ceil(n^(2/3)), eps =
// lambda*delta*k/(4n), l = gamma n - n(1-R) - 4 sqrt(nk) - 3k, code rate
// above 1-gamma with exact distance > 2k); desk overrides are re-validated
// with violations reported as warnings on the params.
Protocol1Params schedule_protocol1(const Box& box, const Condition1& cert, int n,
                                   const ScheduleOverrides& ov, SplitRng& rng);

struct Protocol2Params {
    int n = 0;
    int k1 = 0;
    int k2 = 0;    // operational (ceiling of the exact value)
    Rat k2_exact;  // k1 (4 p0 + 1) / (2 p0^2)
    int l = 0;
    int u0 = 0, u1 = 1;
    Rat lambda, delta, eps, p0;
    LinearCode code;
    std::vector<std::string> warnings;
};

Protocol2Params schedule_protocol2(const Box& box, int u0, int u1, const Rat& delta, int n,
                                   const ScheduleOverrides& ov, SplitRng& rng);

// Transcript of one session: phase-tagged box usages plus the two messages
// and the verdict, replayable by verifiers and attackers.
struct Transcript {
    struct Event {
        enum class Kind { BoxUseAlice, BoxUseBob, CommitMessage, OpenMessage, Verdict };
        Kind kind;
        int index = -1;   // box index for usages
        int input = -1;
        int output = -1;
        std::string phase;
    };
    std::vector<Event> events;

    // Open-phase box usages by Alice (honest Alice has none in either
    // protocol). Bob's verdict cannot see this; the audit can.
    int alice_open_phase_uses() const;
};

struct Verdict {
    bool accepted = false;
    std::string failed_check;  // empty when accepted
    uint64_t b_out = 0;
};

struct BobValues {
    std::vector<int> v;  // one input per box
    uint64_t y = 0;      // output bits
};

struct Commit1 {
    uint64_t syn_x = 0;
    ToeplitzSeed seed;
    uint64_t c = 0;  // b ^ ext(seed, x)
};
struct Open1 {
    uint64_t x = 0;
    uint64_t b = 0;
};

struct Session1 {
    const Box* box = nullptr;
    Protocol1Params params;
    uint64_t b = 0;
    uint64_t alice_x = 0;
    BobValues bob;
    Commit1 msg;
    Transcript transcript;
};

Session1 run_commit_1(const Box& box, const Protocol1Params& params, uint64_t b, SplitRng& rng);
Verdict verify_open_1(const Box& box, const Protocol1Params& params, const Commit1& msg,
                      const BobValues& bob, const Open1& open);
// Honest opening of a committed session (also appends verdict to the transcript).
Verdict run_open_1(Session1& s);

struct Commit2 {
    uint64_t syn_u = 0;
    uint64_t syn_x = 0;
    ToeplitzSeed seed;
    uint64_t c = 0;  // b ^ ext(seed, u); the input string is the extractor source
};
struct Open2 {
    uint64_t u = 0;  // bit i: Alice's input was u1 (else u0)
    uint64_t x = 0;
    uint64_t b = 0;
};

struct Session2 {
    const Box* box = nullptr;
    Protocol2Params params;
    uint64_t b = 0;
    uint64_t alice_u = 0;
    uint64_t alice_x = 0;
    BobValues bob;
    Commit2 msg;
    Transcript transcript;
};

Session2 run_commit_2(const Box& box, const Protocol2Params& params, uint64_t b, SplitRng& rng);
Verdict verify_open_2(const Box& box, const Protocol2Params& params, const Commit2& msg,
                      const BobValues& bob, const Open2& open);
Verdict run_open_2(Session2& s);

// Check helpers shared with the adversary lab.
bool protocol1_typicality(const Box& box, const Protocol1Params& params, const BobValues& bob,
                          uint64_t x_claim, std::string* failed);
bool protocol2_typicality(const Box& box, const Protocol2Params& params, const BobValues& bob,
                          uint64_t u_claim, uint64_t x_claim, std::string* failed);

}  // namespace nsbox

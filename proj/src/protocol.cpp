#include "nsbox/protocol.hpp"

#include <cmath>

#include "nsbox/stats.hpp"

namespace nsbox {

namespace {

int ceil_n_two_thirds(int n) {
    // Smallest k with k^3 >= n^2.
    int k = 1;
    while (static_cast<long>(k) * k * k < static_cast<long>(n) * n) ++k;
    return k;
}

LinearCode pick_code(int n, std::optional<Rat> rate, int d_min, SplitRng& rng,
                     std::optional<Rat> rate_floor, std::vector<std::string>* warnings) {
    if (rate) {
        return sample_code(n, *rate, d_min, rng);
    }
    // Prefer the highest rate that still meets the distance requirement.
    for (int kc = n - 1; kc >= 1; --kc) {
        if (d_min > n - kc + 1) continue;  // Singleton
        try {
            LinearCode c = sample_code(n, Rat(kc, n), d_min, rng, 200);
            if (rate_floor && c.rate() <= *rate_floor && warnings) {
                warnings->push_back("code rate " + rat_to_string(c.rate()) +
                                    " does not exceed the required floor " + rat_to_string(*rate_floor));
            }
            return c;
        } catch (const RetriesExhausted&) {
            continue;
        }
    }
    throw InfeasibleAtThisN("no code of any rate reaches the required distance", 0, Rat(0), Rat(0), 0.0);
}

}  // namespace

int Transcript::alice_open_phase_uses() const {
    int c = 0;
    for (const auto& e : events) {
        if (e.kind == Event::Kind::BoxUseAlice && e.phase == "open") ++c;
    }
    return c;
}

Protocol1Params schedule_protocol1(const Box& box, const Condition1& cert, int n,
                                   const ScheduleOverrides& ov, SplitRng& rng) {
    Protocol1Params p;
    p.n = n;
    p.xa = cert.xa;
    p.ua = cert.ua;
    p.delta = cert.delta;
    p.gamma = cert.gamma;
    auto wa = box.marginal_alice(cert.ua);
    Rat minp = std::min(wa[0], wa[1]);
    p.lambda = minp / 2;
    p.k = ov.k.value_or(ceil_n_two_thirds(n));
    p.eps = ov.eps.value_or(p.lambda * p.delta * p.k / (4 * n));

    const bool desk = ov.k || ov.d || ov.l || ov.rate || ov.eps || ov.code;
    int d_req = ov.d.value_or(2 * p.k + 1);
    Rat rate_floor = Rat(0);
    {
        // R > 1 - gamma, as a rational floor from the double gamma.
        double f = 1.0 - p.gamma;
        rate_floor = Rat(static_cast<long>(std::floor(f * 4096.0)), 4096);
    }
    if (ov.code) {
        p.code = *ov.code;
    } else {
        p.code = pick_code(n, ov.rate, d_req, rng, desk ? std::optional<Rat>() : std::optional<Rat>(rate_floor),
                           &p.warnings);
    }
    double one_minus_r = static_cast<double>(n - p.code.k);
    double l_formula = p.gamma * n - one_minus_r - 4.0 * std::sqrt(static_cast<double>(n) * p.k) - 3.0 * p.k;
    p.l = ov.l.value_or(static_cast<int>(std::floor(l_formula)));
    if (!desk && p.l <= 0) {
        throw InfeasibleAtThisN("extractable length is not positive at this n", p.k, p.lambda, p.eps, l_formula);
    }

    // Re-validate the asymptotic requirements; desk settings demote
    // violations to warnings.
    if (p.l <= 0) p.warnings.push_back("l <= 0");
    if (rat_to_double(p.code.rate()) <= 1.0 - p.gamma)
        p.warnings.push_back("code rate does not exceed 1 - gamma; the privacy argument is void");
    if (p.code.distance <= 2 * p.k)
        p.warnings.push_back("code distance does not exceed 2k; the binding argument is void");
    if (ov.l && static_cast<double>(*ov.l) > l_formula)
        p.warnings.push_back("l exceeds the schedule formula value");
    if (ov.eps && *ov.eps != p.lambda * p.delta * p.k / (4 * n))
        p.warnings.push_back("eps overrides the schedule formula");
    if (p.l > 0 && p.l > 62) throw InfeasibleAtThisN("l too large for the desk engine", p.k, p.lambda, p.eps, l_formula);
    return p;
}

Protocol2Params schedule_protocol2(const Box& box, int u0, int u1, const Rat& delta, int n,
                                   const ScheduleOverrides& ov, SplitRng& rng) {
    Protocol2Params p;
    p.n = n;
    p.u0 = u0;
    p.u1 = u1;
    p.delta = delta;
    auto wa0 = box.marginal_alice(u0);
    auto wa1 = box.marginal_alice(u1);
    p.p0 = std::min(std::min(wa0[0], wa0[1]), std::min(wa1[0], wa1[1]));
    if (p.p0 == 0) throw InfeasibleAtThisN("p0 = 0: some output never occurs on the protocol inputs", 0, Rat(0), Rat(0), 0.0);
    p.lambda = p.p0 / 8;  // (1/4) min Q(x,u) with Q = W^A/2
    p.k1 = ov.k.value_or(ceil_n_two_thirds(n));
    p.k2_exact = Rat(p.k1) * (4 * p.p0 + 1) / (2 * p.p0 * p.p0);
    if (ov.k2) {
        p.k2 = *ov.k2;
        p.warnings.push_back("k2 overrides the schedule formula value " + rat_to_string(p.k2_exact));
    } else {
        Rat ce = p.k2_exact;
        Int num = ce.get_num(), den = ce.get_den();
        Int q;
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        p.k2 = static_cast<int>(q.get_si());
    }
    p.eps = ov.eps.value_or(p.lambda * p.delta * p.k1 / (4 * n));

    const bool desk = ov.k || ov.k2 || ov.d || ov.l || ov.rate || ov.eps || ov.code;
    int d_req = ov.d.value_or(p.k1 + 2 * p.k2 + 1);
    if (ov.code) {
        p.code = *ov.code;
    } else {
        p.code = pick_code(n, ov.rate, d_req, rng, std::nullopt, &p.warnings);
    }
    int l_formula = n - 2 * (n - p.code.k) - 3 * p.k1;
    p.l = ov.l.value_or(l_formula);
    if (!desk && p.l <= 0)
        throw InfeasibleAtThisN("extractable length is not positive at this n", p.k1, p.lambda, p.eps,
                                static_cast<double>(l_formula));

    if (p.l <= 0) p.warnings.push_back("l <= 0");
    if (p.code.distance < p.k1 + 2 * p.k2 + 1)
        p.warnings.push_back("code distance below k1 + 2 k2 + 1; the delayed-input argument is void");
    if (Rat(p.code.k) < Rat(n, 2) + Rat(3 * p.k1, 2) + Rat(p.l, 2))
        p.warnings.push_back("Rn below n/2 + (3/2)k1 + l/2; the privacy argument is void");
    if (ov.eps && *ov.eps != p.lambda * p.delta * p.k1 / (4 * n))
        p.warnings.push_back("eps overrides the schedule formula");
    if (p.l > 0 && p.l > 62)
        throw InfeasibleAtThisN("l too large for the desk engine", p.k1, p.lambda, p.eps, static_cast<double>(l_formula));
    return p;
}

namespace {

std::vector<std::vector<Rat>> protocol1_channel(const Box& box, int ua, bool* undefined_row) {
    HatMatrix hat = hat_matrix(box);
    std::vector<std::vector<Rat>> w(2);
    *undefined_row = false;
    for (int x = 0; x < 2; ++x) {
        int r = hat.row_id(x, ua);
        if (!hat.defined[static_cast<size_t>(r)]) {
            *undefined_row = true;
            w[static_cast<size_t>(x)].assign(static_cast<size_t>(hat.dim()), Rat(0));
        } else {
            w[static_cast<size_t>(x)] = hat.rows[static_cast<size_t>(r)];
        }
    }
    return w;
}

}  // namespace

bool protocol1_typicality(const Box& box, const Protocol1Params& params, const BobValues& bob,
                          uint64_t x_claim, std::string* failed) {
    const int n = params.n;
    bool undefined_row = false;
    auto w = protocol1_channel(box, params.ua, &undefined_row);
    auto wa = box.marginal_alice(params.ua);
    std::vector<int> in_seq(static_cast<size_t>(n)), out_seq(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int xi = static_cast<int>((x_claim >> i) & 1);
        if (undefined_row && wa[static_cast<size_t>(xi)] == 0) {
            if (failed) *failed = "cond_typicality";
            return false;
        }
        in_seq[static_cast<size_t>(i)] = xi;
        out_seq[static_cast<size_t>(i)] = bob.v[static_cast<size_t>(i)] * 2 + static_cast<int>((bob.y >> i) & 1);
    }
    if (!is_cond_typical(out_seq, in_seq, w, params.eps)) {
        if (failed) *failed = "cond_typicality";
        return false;
    }
    if (!is_typical(in_seq, wa, params.eps)) {
        if (failed) *failed = "p_typicality";
        return false;
    }
    return true;
}

Session1 run_commit_1(const Box& box, const Protocol1Params& params, uint64_t b, SplitRng& rng) {
    const int n = params.n;
    if (n < 1 || n > 62) throw std::invalid_argument("protocol engine handles n <= 62");
    if (params.l < 1) throw std::invalid_argument("cannot run with l < 1");
    Session1 s;
    s.box = &box;
    s.params = params;
    s.b = b & ((1ULL << params.l) - 1);
    SplitRng alice = rng.split(1);
    SplitRng bobr = rng.split(2);
    s.bob.v.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        BoxInstance inst(box);
        SplitRng ir = rng.split(0x1000 + static_cast<uint64_t>(i));
        int v = static_cast<int>(bobr.below(static_cast<uint64_t>(box.nv())));
        int y = inst.use(BoxInstance::Side::Bob, v, ir, "commit");
        int x = inst.use(BoxInstance::Side::Alice, params.ua, ir, "commit");
        s.bob.v[static_cast<size_t>(i)] = v;
        s.bob.y |= static_cast<uint64_t>(y) << i;
        s.alice_x |= static_cast<uint64_t>(x) << i;
        s.transcript.events.push_back({Transcript::Event::Kind::BoxUseBob, i, v, y, "commit"});
        s.transcript.events.push_back({Transcript::Event::Kind::BoxUseAlice, i, params.ua, x, "commit"});
    }
    s.msg.syn_x = syndrome(params.code, s.alice_x);
    s.msg.seed = ToeplitzSeed::random(n, params.l, alice);
    s.msg.c = s.b ^ toeplitz_ext(s.msg.seed, s.alice_x);
    s.transcript.events.push_back({Transcript::Event::Kind::CommitMessage, -1, -1, -1, "commit"});
    return s;
}

Verdict verify_open_1(const Box& box, const Protocol1Params& params, const Commit1& msg,
                      const BobValues& bob, const Open1& open) {
    Verdict v;
    if (syndrome(params.code, open.x) != msg.syn_x) {
        v.failed_check = "syndrome";
        return v;
    }
    if ((msg.c ^ toeplitz_ext(msg.seed, open.x)) != open.b) {
        v.failed_check = "hash";
        return v;
    }
    std::string failed;
    if (!protocol1_typicality(box, params, bob, open.x, &failed)) {
        v.failed_check = failed;
        return v;
    }
    v.accepted = true;
    v.b_out = open.b;
    return v;
}

Verdict run_open_1(Session1& s) {
    s.transcript.events.push_back({Transcript::Event::Kind::OpenMessage, -1, -1, -1, "open"});
    Verdict v = verify_open_1(*s.box, s.params, s.msg, s.bob, Open1{s.alice_x, s.b});
    s.transcript.events.push_back({Transcript::Event::Kind::Verdict, -1, -1, v.accepted ? 1 : 0, "open"});
    return v;
}

bool protocol2_typicality(const Box& box, const Protocol2Params& params, const BobValues& bob,
                          uint64_t u_claim, uint64_t x_claim, std::string* failed) {
    const int n = params.n;
    HatMatrix hat = hat_matrix(box);
    // Letter alphabet (x, ubit): index x*2 + ubit; channel rows from the hat
    // matrix of the protocol inputs.
    std::vector<std::vector<Rat>> w(4);
    std::vector<Rat> q(4);
    for (int x = 0; x < 2; ++x) {
        for (int ubit = 0; ubit < 2; ++ubit) {
            int u = ubit == 0 ? params.u0 : params.u1;
            int r = hat.row_id(x, u);
            if (!hat.defined[static_cast<size_t>(r)]) {
                w[static_cast<size_t>(x * 2 + ubit)].assign(static_cast<size_t>(hat.dim()), Rat(0));
            } else {
                w[static_cast<size_t>(x * 2 + ubit)] = hat.rows[static_cast<size_t>(r)];
            }
            q[static_cast<size_t>(x * 2 + ubit)] = box.marginal_alice(u)[static_cast<size_t>(x)] / 2;
        }
    }
    std::vector<int> in_seq(static_cast<size_t>(n)), out_seq(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int xi = static_cast<int>((x_claim >> i) & 1);
        int ubit = static_cast<int>((u_claim >> i) & 1);
        in_seq[static_cast<size_t>(i)] = xi * 2 + ubit;
        out_seq[static_cast<size_t>(i)] = bob.v[static_cast<size_t>(i)] * 2 + static_cast<int>((bob.y >> i) & 1);
    }
    if (!is_cond_typical(out_seq, in_seq, w, params.eps)) {
        if (failed) *failed = "cond_typicality";
        return false;
    }
    if (!is_typical(in_seq, q, params.eps)) {
        if (failed) *failed = "q_typicality";
        return false;
    }
    return true;
}

Session2 run_commit_2(const Box& box, const Protocol2Params& params, uint64_t b, SplitRng& rng) {
    const int n = params.n;
    if (n < 1 || n > 62) throw std::invalid_argument("protocol engine handles n <= 62");
    if (params.l < 1) throw std::invalid_argument("cannot run with l < 1");
    Session2 s;
    s.box = &box;
    s.params = params;
    s.b = b & ((1ULL << params.l) - 1);
    SplitRng alice = rng.split(1);
    SplitRng bobr = rng.split(2);
    s.bob.v.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        BoxInstance inst(box);
        SplitRng ir = rng.split(0x1000 + static_cast<uint64_t>(i));
        int ubit = alice.bit() ? 1 : 0;
        int v = static_cast<int>(bobr.below(static_cast<uint64_t>(box.nv())));
        int y = inst.use(BoxInstance::Side::Bob, v, ir, "commit");
        int x = inst.use(BoxInstance::Side::Alice, ubit == 0 ? params.u0 : params.u1, ir, "commit");
        s.bob.v[static_cast<size_t>(i)] = v;
        s.bob.y |= static_cast<uint64_t>(y) << i;
        s.alice_u |= static_cast<uint64_t>(ubit) << i;
        s.alice_x |= static_cast<uint64_t>(x) << i;
        s.transcript.events.push_back({Transcript::Event::Kind::BoxUseBob, i, v, y, "commit"});
        s.transcript.events.push_back(
            {Transcript::Event::Kind::BoxUseAlice, i, ubit == 0 ? params.u0 : params.u1, x, "commit"});
    }
    s.msg.syn_u = syndrome(params.code, s.alice_u);
    s.msg.syn_x = syndrome(params.code, s.alice_x);
    s.msg.seed = ToeplitzSeed::random(n, params.l, alice);
    s.msg.c = s.b ^ toeplitz_ext(s.msg.seed, s.alice_u);
    s.transcript.events.push_back({Transcript::Event::Kind::CommitMessage, -1, -1, -1, "commit"});
    return s;
}

Verdict verify_open_2(const Box& box, const Protocol2Params& params, const Commit2& msg,
                      const BobValues& bob, const Open2& open) {
    Verdict v;
    if (syndrome(params.code, open.u) != msg.syn_u || syndrome(params.code, open.x) != msg.syn_x) {
        v.failed_check = "syndrome";
        return v;
    }
    if ((msg.c ^ toeplitz_ext(msg.seed, open.u)) != open.b) {
        v.failed_check = "hash";
        return v;
    }
    std::string failed;
    if (!protocol2_typicality(box, params, bob, open.u, open.x, &failed)) {
        v.failed_check = failed;
        return v;
    }
    v.accepted = true;
    v.b_out = open.b;
    return v;
}

Verdict run_open_2(Session2& s) {
    s.transcript.events.push_back({Transcript::Event::Kind::OpenMessage, -1, -1, -1, "open"});
    Verdict v = verify_open_2(*s.box, s.params, s.msg, s.bob, Open2{s.alice_u, s.alice_x, s.b});
    s.transcript.events.push_back({Transcript::Event::Kind::Verdict, -1, -1, v.accepted ? 1 : 0, "open"});
    return v;
}

}  // namespace nsbox

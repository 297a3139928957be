#include "nsbox/lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace nsbox {

namespace {

std::vector<uint64_t> all_codewords(const LinearCode& code) {
    auto gen = code_generator(code);
    if (gen.size() > 20) throw TooLargeForExhaustive("coset enumeration needs dimension <= 20");
    std::vector<uint64_t> words(1ULL << gen.size());
    for (uint64_t m = 0; m < words.size(); ++m) {
        uint64_t w = 0;
        uint64_t mm = m;
        while (mm) {
            w ^= gen[static_cast<size_t>(std::countr_zero(mm))];
            mm &= mm - 1;
        }
        words[m] = w;
    }
    std::sort(words.begin(), words.end());
    return words;
}

}  // namespace

AttackOutcome attack_flip(Session1& s, int t, SplitRng& rng) {
    AttackOutcome out;
    uint64_t mask = 0;
    const int n = s.params.n;
    if (t == 0) {
        mask = 0;
        out.diagnostics["mode"] = "honest";
    } else if (s.params.code.distance > 0 && t >= s.params.code.distance) {
        // Stay in the coset: lightest codeword of weight >= t (smallest value
        // on ties). The coset guarantees the syndrome check cannot fire.
        std::optional<uint64_t> best;
        for (uint64_t w : all_codewords(s.params.code)) {
            if (w == 0 || std::popcount(w) < t) continue;
            if (!best || std::popcount(w) < std::popcount(*best) ||
                (std::popcount(w) == std::popcount(*best) && w < *best))
                best = w;
        }
        if (!best) {
            out.diagnostics["mode"] = "no coset member at distance >= t";
            out.verdict.failed_check = "no_candidate";
            return out;
        }
        mask = *best;
        out.diagnostics["mode"] = "in-coset";
    } else {
        // Off-coset: flip t arbitrary positions.
        while (std::popcount(mask) < t) mask |= 1ULL << rng.below(static_cast<uint64_t>(n));
        out.diagnostics["mode"] = "off-coset";
    }
    uint64_t x_tilde = s.alice_x ^ mask;
    uint64_t b_tilde = s.msg.c ^ toeplitz_ext(s.msg.seed, x_tilde);
    s.transcript.events.push_back({Transcript::Event::Kind::OpenMessage, -1, -1, -1, "open"});
    out.verdict = verify_open_1(*s.box, s.params, s.msg, s.bob, Open1{x_tilde, b_tilde});
    s.transcript.events.push_back(
        {Transcript::Event::Kind::Verdict, -1, -1, out.verdict.accepted ? 1 : 0, "open"});
    out.diagnostics["flip_weight"] = std::to_string(std::popcount(mask));
    out.diagnostics["value_changed"] = b_tilde == s.b ? "no" : "yes";
    if (!out.verdict.accepted) out.diagnostics["caught_by"] = out.verdict.failed_check;
    return out;
}

AttackOutcome attack_delay(const Box& box, const Protocol2Params& params, int m, uint64_t b,
                           SplitRng& rng, Transcript* transcript) {
    const int n = params.n;
    if (m < 0 || m > n) throw std::invalid_argument("attack_delay: m out of range");
    AttackOutcome out;
    Transcript local;
    Transcript& tr = transcript ? *transcript : local;
    SplitRng alice = rng.split(1);
    SplitRng bobr = rng.split(2);
    BobValues bob;
    bob.v.resize(static_cast<size_t>(n));
    std::vector<BoxInstance> inst;
    inst.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) inst.emplace_back(box);
    std::vector<SplitRng> irngs;
    for (int i = 0; i < n; ++i) irngs.push_back(rng.split(0x1000 + static_cast<uint64_t>(i)));

    // Commit phase: Bob plays honestly on every box, Alice only on i >= m.
    uint64_t u_bits = 0, x_committed = 0;
    for (int i = 0; i < n; ++i) {
        int v = static_cast<int>(bobr.below(static_cast<uint64_t>(box.nv())));
        bob.v[static_cast<size_t>(i)] = v;
        int y = inst[static_cast<size_t>(i)].use(BoxInstance::Side::Bob, v, irngs[static_cast<size_t>(i)], "commit");
        bob.y |= static_cast<uint64_t>(y) << i;
        tr.events.push_back({Transcript::Event::Kind::BoxUseBob, i, v, y, "commit"});
    }
    for (int i = 0; i < n; ++i) {
        int ubit = alice.bit() ? 1 : 0;
        u_bits |= static_cast<uint64_t>(ubit) << i;
        int u_phys = ubit == 0 ? params.u0 : params.u1;
        if (i >= m) {
            int x = inst[static_cast<size_t>(i)].use(BoxInstance::Side::Alice, u_phys,
                                                     irngs[static_cast<size_t>(i)], "commit");
            x_committed |= static_cast<uint64_t>(x) << i;
            tr.events.push_back({Transcript::Event::Kind::BoxUseAlice, i, u_phys, x, "commit"});
        } else {
            // Marginal-sampling guess for the withheld position.
            auto wa = box.marginal_alice(u_phys);
            int xg = static_cast<int>(alice.sample_discrete(wa));
            x_committed |= static_cast<uint64_t>(xg) << i;
        }
    }
    Commit2 msg;
    msg.syn_u = syndrome(params.code, u_bits);
    msg.syn_x = syndrome(params.code, x_committed);
    msg.seed = ToeplitzSeed::random(n, params.l, alice);
    msg.c = (b & ((1ULL << params.l) - 1)) ^ toeplitz_ext(msg.seed, u_bits);
    tr.events.push_back({Transcript::Event::Kind::CommitMessage, -1, -1, -1, "commit"});

    // Open phase: input the committed guesses, then claim the coset member
    // nearest to what the boxes actually produced.
    uint64_t x_actual = x_committed;
    for (int i = 0; i < m; ++i) {
        int ubit = static_cast<int>((u_bits >> i) & 1);
        int u_phys = ubit == 0 ? params.u0 : params.u1;
        int x = inst[static_cast<size_t>(i)].use(BoxInstance::Side::Alice, u_phys,
                                                 irngs[static_cast<size_t>(i)], "open");
        x_actual = (x_actual & ~(1ULL << i)) | (static_cast<uint64_t>(x) << i);
        tr.events.push_back({Transcript::Event::Kind::BoxUseAlice, i, u_phys, x, "open"});
    }
    uint64_t best_claim = x_committed;
    int best_dist = std::popcount(x_committed ^ x_actual);
    for (uint64_t w : all_codewords(params.code)) {
        uint64_t cand = x_committed ^ w;
        int d = std::popcount(cand ^ x_actual);
        if (d < best_dist || (d == best_dist && cand < best_claim)) {
            best_claim = cand;
            best_dist = d;
        }
    }
    tr.events.push_back({Transcript::Event::Kind::OpenMessage, -1, -1, -1, "open"});
    out.verdict = verify_open_2(box, params, msg, bob, Open2{u_bits, best_claim, b & ((1ULL << params.l) - 1)});
    tr.events.push_back({Transcript::Event::Kind::Verdict, -1, -1, out.verdict.accepted ? 1 : 0, "open"});
    out.diagnostics["delayed"] = std::to_string(m);
    out.diagnostics["claim_distance"] = std::to_string(best_dist);
    if (!out.verdict.accepted) out.diagnostics["caught_by"] = out.verdict.failed_check;
    return out;
}

Rat delay_ball_mass_exact(const Box& box, const Protocol2Params& params) {
    const int n = params.n;
    if (n > 16) throw TooLargeForExhaustive("delay_ball_mass_exact: n <= 16 required");
    HatMatrix hat = hat_matrix(box);
    // Worst-case survival probability of one wrongly claimed position: the
    // chance that Bob's (y, v), drawn from the actual letter's row, lands
    // where the claimed letter's row is positive.
    Rat q(0);
    for (int r_act = 0; r_act < 2 * hat.nu; ++r_act) {
        if (!hat.defined[static_cast<size_t>(r_act)]) continue;
        for (int r_cl = 0; r_cl < 2 * hat.nu; ++r_cl) {
            if (r_cl == r_act || !hat.defined[static_cast<size_t>(r_cl)]) continue;
            Rat s(0);
            for (int i = 0; i < hat.dim(); ++i) {
                if (hat.rows[static_cast<size_t>(r_cl)][static_cast<size_t>(i)] > 0)
                    s += hat.rows[static_cast<size_t>(r_act)][static_cast<size_t>(i)];
            }
            q = std::max(q, s);
        }
    }
    // Delayed outputs are independent across boxes with per-position marginal
    // W^A(.|u_i); average over Alice's uniform input bits as well.
    // Position-symmetric, so work with the mixture marginal.
    auto wa0 = box.marginal_alice(params.u0);
    auto wa1 = box.marginal_alice(params.u1);
    std::vector<Rat> px = {(wa0[0] + wa1[0]) / 2, (wa0[1] + wa1[1]) / 2};
    auto words = all_codewords(params.code);
    Rat total(0);
    for (uint64_t x = 0; x < (1ULL << n); ++x) {
        Rat w(1);
        for (int i = 0; i < n; ++i) w *= px[static_cast<size_t>((x >> i) & 1)];
        int dmin = n + 1;
        for (uint64_t cw : words) dmin = std::min(dmin, std::popcount(x ^ cw));
        Rat qq(1);
        for (int i = 0; i < dmin; ++i) qq *= q;
        total += w * qq;
    }
    return total;
}

std::optional<DoubleOpening1> equivocation_search(const Session1& s, uint64_t b0, uint64_t b1) {
    if (s.params.code.k > 16) throw TooLargeForExhaustive("coset of dimension > 16");
    std::optional<Open1> first, second;
    for (uint64_t w : all_codewords(s.params.code)) {
        uint64_t cand = s.alice_x ^ w;
        uint64_t key = s.msg.c ^ toeplitz_ext(s.msg.seed, cand);
        if (key != b0 && key != b1) continue;
        if (!protocol1_typicality(*s.box, s.params, s.bob, cand, nullptr)) continue;
        if (key == b0 && !first) first = Open1{cand, key};
        if (key == b1 && !second) second = Open1{cand, key};
        if (first && second) return DoubleOpening1{*first, *second};
    }
    return std::nullopt;
}

std::optional<DoubleOpening2> equivocation_search(const Session2& s, uint64_t b0, uint64_t b1) {
    if (2 * s.params.code.k > 20) throw TooLargeForExhaustive("coset pair too large");
    auto words = all_codewords(s.params.code);
    std::optional<Open2> first, second;
    for (uint64_t wu : words) {
        uint64_t ucand = s.alice_u ^ wu;
        uint64_t key = s.msg.c ^ toeplitz_ext(s.msg.seed, ucand);
        if (key != b0 && key != b1) continue;
        for (uint64_t wx : words) {
            uint64_t xcand = s.alice_x ^ wx;
            if (!protocol2_typicality(*s.box, s.params, s.bob, ucand, xcand, nullptr)) continue;
            if (key == b0 && !first) first = Open2{ucand, xcand, key};
            if (key == b1 && !second) second = Open2{ucand, xcand, key};
            if (first && second) return DoubleOpening2{*first, *second};
            break;  // one x per u suffices
        }
    }
    return std::nullopt;
}

namespace {

// One sampled Bob view for Protocol I: inputs per the attack, outputs from
// Alice's honest marginal behaviour.
BobValues sample_view_p1(const Box& box, const Protocol1Params& params, const BobAttack& attack,
                         SplitRng& rng) {
    BobValues bob;
    bob.v.resize(static_cast<size_t>(params.n));
    for (int i = 0; i < params.n; ++i) {
        int v = attack.kind == BobAttack::Kind::FixedInput
                    ? attack.fixed_v
                    : static_cast<int>(rng.below(static_cast<uint64_t>(box.nv())));
        std::vector<Rat> py(2);
        for (int y = 0; y < 2; ++y) py[static_cast<size_t>(y)] =
            box.at(params.ua, v, 0, y) + box.at(params.ua, v, 1, y);
        int y = static_cast<int>(rng.sample_discrete(py));
        bob.v[static_cast<size_t>(i)] = v;
        bob.y |= static_cast<uint64_t>(y) << i;
    }
    return bob;
}

double view_tv_p1(const Box& box, const Protocol1Params& params, const BobValues& bob,
                  uint64_t b0, uint64_t b1, bool oracle_pad) {
    const int n = params.n;
    const int lbits = params.l;
    const int synbits = params.code.parity_bits();
    if (n > 20 || synbits > 16 || lbits > 8) throw TooLargeForExhaustive("hiding enumeration too large");
    // Posterior over Alice's string factorizes per position.
    std::vector<std::array<double, 2>> post(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int v = bob.v[static_cast<size_t>(i)];
        int y = static_cast<int>((bob.y >> i) & 1);
        double w0 = rat_to_double(box.at(params.ua, v, 0, y));
        double w1 = rat_to_double(box.at(params.ua, v, 1, y));
        double tot = w0 + w1;
        post[static_cast<size_t>(i)] = {w0 / tot, w1 / tot};
    }
    const uint64_t nx = 1ULL << n;
    std::vector<double> px(nx);
    std::vector<uint32_t> synx(nx);
    for (uint64_t x = 0; x < nx; ++x) {
        double p = 1.0;
        for (int i = 0; i < n; ++i) p *= post[static_cast<size_t>(i)][(x >> i) & 1];
        px[x] = p;
        synx[x] = static_cast<uint32_t>(syndrome(params.code, x));
    }
    if (oracle_pad) return 0.0;  // fresh uniform key: the two distributions coincide
    const int seed_bits = n + lbits - 1;
    if (seed_bits > 16) throw TooLargeForExhaustive("seed enumeration too large");
    const uint64_t nseeds = 1ULL << seed_bits;
    const size_t nsyn = 1ULL << synbits;
    const size_t nkey = 1ULL << lbits;
    std::vector<double> table(nsyn * nkey);
    double tv_sum = 0.0;
    uint64_t diff = (b0 ^ b1) & ((1ULL << lbits) - 1);
    std::vector<uint64_t> rows(static_cast<size_t>(lbits));
    for (uint64_t sd = 0; sd < nseeds; ++sd) {
        for (int j = 0; j < lbits; ++j) {
            uint64_t row = 0;
            for (int i = 0; i < n; ++i) {
                if ((sd >> (lbits - 1 - j + i)) & 1) row |= 1ULL << i;
            }
            rows[static_cast<size_t>(j)] = row;
        }
        std::fill(table.begin(), table.end(), 0.0);
        for (uint64_t x = 0; x < nx; ++x) {
            if (px[x] == 0.0) continue;
            uint64_t key = 0;
            for (int j = 0; j < lbits; ++j)
                key |= static_cast<uint64_t>(std::popcount(rows[static_cast<size_t>(j)] & x) & 1) << j;
            table[static_cast<size_t>(synx[x]) * nkey + static_cast<size_t>(key)] += px[x];
        }
        double acc = 0.0;
        for (size_t si = 0; si < nsyn; ++si) {
            for (size_t key = 0; key < nkey; ++key) {
                double pb0 = table[si * nkey + key];
                double pb1 = table[si * nkey + (key ^ diff)];
                acc += std::abs(pb0 - pb1);
            }
        }
        tv_sum += acc / 2.0;
    }
    return tv_sum / static_cast<double>(nseeds);
}

}  // namespace

HidingResult hiding_advantage_exact_p1(const Box& box, const Protocol1Params& params,
                                       const BobAttack& attack, uint64_t b0, uint64_t b1,
                                       int views, SplitRng& rng, bool oracle_pad) {
    HidingResult res;
    res.views = views;
    res.oracle_pad = oracle_pad;
    std::vector<int> vcands;
    if (attack.kind == BobAttack::Kind::MaxLikelihood) {
        for (int v = 0; v < box.nv(); ++v) vcands.push_back(v);
    } else {
        vcands.push_back(attack.fixed_v);
    }
    double best_mean = -1.0, best_max = 0.0;
    for (int vfix : vcands) {
        BobAttack a = attack;
        if (attack.kind == BobAttack::Kind::MaxLikelihood) {
            a.kind = BobAttack::Kind::FixedInput;
            a.fixed_v = vfix;
        }
        double sum = 0.0, mx = 0.0;
        SplitRng local = rng.split(static_cast<uint64_t>(vfix) + 0x77);
        for (int t = 0; t < views; ++t) {
            SplitRng vr = local.split(static_cast<uint64_t>(t));
            BobValues bob = sample_view_p1(box, params, a, vr);
            double tv = view_tv_p1(box, params, bob, b0, b1, oracle_pad);
            sum += tv;
            mx = std::max(mx, tv);
        }
        double mean = sum / views;
        if (mean > best_mean) {
            best_mean = mean;
            best_max = mx;
        }
        if (attack.kind != BobAttack::Kind::MaxLikelihood) break;
    }
    res.advantage = best_mean;
    res.max_view = best_max;
    return res;
}

namespace {

double view_tv_p2(const Box& box, const Protocol2Params& params, const BobValues& bob,
                  uint64_t b0, uint64_t b1, bool oracle_pad) {
    const int n = params.n;
    const int lbits = params.l;
    const int synbits = params.code.parity_bits();
    if (n > 16 || synbits > 12 || lbits > 8) throw TooLargeForExhaustive("hiding enumeration too large");
    if (oracle_pad) return 0.0;
    // Per-position posterior over (ubit, x) given Bob's (y, v).
    std::vector<std::array<double, 4>> post(static_cast<size_t>(n));  // idx ubit*2+x
    for (int i = 0; i < n; ++i) {
        int v = bob.v[static_cast<size_t>(i)];
        int y = static_cast<int>((bob.y >> i) & 1);
        double tot = 0.0;
        std::array<double, 4> w{};
        for (int ubit = 0; ubit < 2; ++ubit) {
            int u = ubit == 0 ? params.u0 : params.u1;
            for (int x = 0; x < 2; ++x) {
                double val = 0.5 * rat_to_double(box.at(u, v, x, y));
                w[static_cast<size_t>(ubit * 2 + x)] = val;
                tot += val;
            }
        }
        for (auto& val : w) val /= tot;
        post[static_cast<size_t>(i)] = w;
    }
    // Syndrome columns for the x-side dynamic programming.
    std::vector<uint32_t> col(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < synbits; ++j) {
            if ((params.code.h[static_cast<size_t>(j)] >> i) & 1) col[static_cast<size_t>(i)] |= 1u << j;
        }
    }
    const uint64_t nu_words = 1ULL << n;
    const size_t nsyn = 1ULL << synbits;
    const size_t nkey = 1ULL << lbits;
    // For each u: probability, syn(u), and the distribution of syn(x) given u.
    std::vector<double> pu(nu_words);
    std::vector<uint32_t> synu(nu_words);
    std::vector<std::vector<double>> qsyn(nu_words, std::vector<double>(nsyn, 0.0));
    std::vector<double> cur(nsyn), nxt(nsyn);
    for (uint64_t u = 0; u < nu_words; ++u) {
        double p = 1.0;
        std::fill(cur.begin(), cur.end(), 0.0);
        cur[0] = 1.0;
        for (int i = 0; i < n; ++i) {
            int ubit = static_cast<int>((u >> i) & 1);
            double pu0 = post[static_cast<size_t>(i)][static_cast<size_t>(ubit * 2 + 0)];
            double pu1 = post[static_cast<size_t>(i)][static_cast<size_t>(ubit * 2 + 1)];
            double pmarg = pu0 + pu1;
            p *= pmarg;
            if (pmarg <= 0.0) break;
            double c0 = pu0 / pmarg, c1 = pu1 / pmarg;
            std::fill(nxt.begin(), nxt.end(), 0.0);
            for (size_t sv = 0; sv < nsyn; ++sv) {
                double val = cur[sv];
                if (val == 0.0) continue;
                nxt[sv] += val * c0;
                nxt[sv ^ col[static_cast<size_t>(i)]] += val * c1;
            }
            std::swap(cur, nxt);
        }
        pu[u] = p;
        synu[u] = static_cast<uint32_t>(syndrome(params.code, u));
        if (p > 0.0) qsyn[u] = cur;
    }
    const int seed_bits = n + lbits - 1;
    if (seed_bits > 16) throw TooLargeForExhaustive("seed enumeration too large");
    const uint64_t nseeds = 1ULL << seed_bits;
    uint64_t diff = (b0 ^ b1) & ((1ULL << lbits) - 1);
    std::vector<double> table(nsyn * nsyn * nkey);
    std::vector<uint64_t> rows(static_cast<size_t>(lbits));
    double tv_sum = 0.0;
    for (uint64_t sd = 0; sd < nseeds; ++sd) {
        for (int j = 0; j < lbits; ++j) {
            uint64_t row = 0;
            for (int i = 0; i < n; ++i) {
                if ((sd >> (lbits - 1 - j + i)) & 1) row |= 1ULL << i;
            }
            rows[static_cast<size_t>(j)] = row;
        }
        std::fill(table.begin(), table.end(), 0.0);
        for (uint64_t u = 0; u < nu_words; ++u) {
            if (pu[u] == 0.0) continue;
            uint64_t key = 0;
            for (int j = 0; j < lbits; ++j)
                key |= static_cast<uint64_t>(std::popcount(rows[static_cast<size_t>(j)] & u) & 1) << j;
            for (size_t sx = 0; sx < nsyn; ++sx) {
                double val = pu[u] * qsyn[u][sx];
                if (val == 0.0) continue;
                table[(static_cast<size_t>(synu[u]) * nsyn + sx) * nkey + static_cast<size_t>(key)] += val;
            }
        }
        double acc = 0.0;
        for (size_t cell = 0; cell < nsyn * nsyn; ++cell) {
            for (size_t key = 0; key < nkey; ++key) {
                acc += std::abs(table[cell * nkey + key] - table[cell * nkey + (key ^ diff)]);
            }
        }
        tv_sum += acc / 2.0;
    }
    return tv_sum / static_cast<double>(nseeds);
}

BobValues sample_view_p2(const Box& box, const Protocol2Params& params, const BobAttack& attack,
                         SplitRng& rng) {
    BobValues bob;
    bob.v.resize(static_cast<size_t>(params.n));
    for (int i = 0; i < params.n; ++i) {
        int v = attack.kind == BobAttack::Kind::FixedInput
                    ? attack.fixed_v
                    : static_cast<int>(rng.below(static_cast<uint64_t>(box.nv())));
        // Honest Alice input is uniform over {u0, u1}; Bob's output marginal
        // does not depend on it (non-signaling), so sample from W^B.
        auto wb = box.marginal_bob(v);
        int y = static_cast<int>(rng.sample_discrete(wb));
        bob.v[static_cast<size_t>(i)] = v;
        bob.y |= static_cast<uint64_t>(y) << i;
    }
    return bob;
}

}  // namespace

HidingResult hiding_advantage_exact_p2(const Box& box, const Protocol2Params& params,
                                       const BobAttack& attack, uint64_t b0, uint64_t b1,
                                       int views, SplitRng& rng, bool oracle_pad) {
    HidingResult res;
    res.views = views;
    res.oracle_pad = oracle_pad;
    std::vector<int> vcands;
    if (attack.kind == BobAttack::Kind::MaxLikelihood) {
        for (int v = 0; v < box.nv(); ++v) vcands.push_back(v);
    } else {
        vcands.push_back(attack.fixed_v);
    }
    double best_mean = -1.0, best_max = 0.0;
    for (int vfix : vcands) {
        BobAttack a = attack;
        if (attack.kind == BobAttack::Kind::MaxLikelihood) {
            a.kind = BobAttack::Kind::FixedInput;
            a.fixed_v = vfix;
        }
        double sum = 0.0, mx = 0.0;
        SplitRng local = rng.split(static_cast<uint64_t>(vfix) + 0x99);
        for (int t = 0; t < views; ++t) {
            SplitRng vr = local.split(static_cast<uint64_t>(t));
            BobValues bob = sample_view_p2(box, params, a, vr);
            double tv = view_tv_p2(box, params, bob, b0, b1, oracle_pad);
            sum += tv;
            mx = std::max(mx, tv);
        }
        double mean = sum / views;
        if (mean > best_mean) {
            best_mean = mean;
            best_max = mx;
        }
        if (attack.kind != BobAttack::Kind::MaxLikelihood) break;
    }
    res.advantage = best_mean;
    res.max_view = best_max;
    return res;
}

RateEstimate binding_rate_p1(const Box& box, const Protocol1Params& params, const AliceAttack& attack,
                             int trials, SplitRng& rng) {
    int acc = 0;
    for (int t = 0; t < trials; ++t) {
        SplitRng tr = rng.split(static_cast<uint64_t>(t));
        uint64_t b = tr.next_u64() & ((1ULL << params.l) - 1);
        Session1 s = run_commit_1(box, params, b, tr);
        if (attack.kind == AliceAttack::Kind::Identity) {
            if (run_open_1(s).accepted) ++acc;
        } else {
            SplitRng ar = tr.split(0xA77);
            if (attack_flip(s, attack.t, ar).verdict.accepted) ++acc;
        }
    }
    return wilson_interval(acc, trials);
}

RateEstimate binding_rate_p2(const Box& box, const Protocol2Params& params, const AliceAttack& attack,
                             int trials, SplitRng& rng) {
    int acc = 0;
    for (int t = 0; t < trials; ++t) {
        SplitRng tr = rng.split(static_cast<uint64_t>(t));
        uint64_t b = tr.next_u64() & ((1ULL << params.l) - 1);
        if (attack.kind == AliceAttack::Kind::Identity) {
            Session2 s = run_commit_2(box, params, b, tr);
            if (run_open_2(s).accepted) ++acc;
        } else if (attack.kind == AliceAttack::Kind::Delay) {
            if (attack_delay(box, params, attack.m, b, tr).verdict.accepted) ++acc;
        } else {
            throw std::invalid_argument("flip attack applies to protocol 1 sessions");
        }
    }
    return wilson_interval(acc, trials);
}

}  // namespace nsbox

#include "nsbox/classify.hpp"

#include <algorithm>
#include <cassert>

#include "nsbox/lp.hpp"
#include "nsbox/stats.hpp"

namespace nsbox {

namespace {

std::vector<std::vector<Rat>> defined_rows_except(const HatMatrix& hat, int skip) {
    std::vector<std::vector<Rat>> out;
    for (int r = 0; r < 2 * hat.nu; ++r) {
        if (r != skip && hat.defined[static_cast<size_t>(r)]) out.push_back(hat.rows[static_cast<size_t>(r)]);
    }
    return out;
}

}  // namespace

HullDistance min_l1_to_hull(const std::vector<Rat>& target,
                            const std::vector<std::vector<Rat>>& others) {
    if (others.empty()) throw EmptyHull("min_l1_to_hull: no rows to form a hull");
    const size_t dim = target.size();
    const size_t m = others.size();
    // Variables: w_0..w_{m-1}, s_0..s_{dim-1}, t_0..t_{dim-1}.
    const size_t nvars = m + 2 * dim;
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    for (size_t i = 0; i < dim; ++i) {
        std::vector<Rat> row(nvars, Rat(0));
        for (size_t j = 0; j < m; ++j) row[j] = others[j][i];
        row[m + i] = 1;
        row[m + dim + i] = -1;
        a.push_back(std::move(row));
        b.push_back(target[i]);
    }
    std::vector<Rat> norm(nvars, Rat(0));
    for (size_t j = 0; j < m; ++j) norm[j] = 1;
    a.push_back(std::move(norm));
    b.push_back(Rat(1));
    std::vector<Rat> c(nvars, Rat(0));
    for (size_t i = 0; i < 2 * dim; ++i) c[m + i] = 1;
    LpResult res = solve_lp(a, b, c);
    if (res.status != LpResult::Status::Optimal)
        throw std::logic_error("min_l1_to_hull: LP not optimal");
    HullDistance hd;
    hd.distance = res.objective;
    hd.weights.assign(res.x.begin(), res.x.begin() + static_cast<long>(m));
    return hd;
}

ExtremalityReport extremality(const HatMatrix& hat) {
    ExtremalityReport rep;
    rep.rows.resize(static_cast<size_t>(2 * hat.nu));
    rep.min_positive_margin = 0;
    int defined_count = 0;
    for (int r = 0; r < 2 * hat.nu; ++r) {
        if (hat.defined[static_cast<size_t>(r)]) ++defined_count;
    }
    for (int x = 0; x < 2; ++x) {
        for (int u = 0; u < hat.nu; ++u) {
            int r = hat.row_id(x, u);
            auto& e = rep.rows[static_cast<size_t>(r)];
            e.x = x;
            e.u = u;
            e.defined = hat.defined[static_cast<size_t>(r)];
            if (!e.defined) continue;
            if (defined_count == 1) {
                // No competitors; the lone row is extreme by convention.
                e.extreme = true;
                e.margin = 2;
            } else {
                HullDistance hd = min_l1_to_hull(hat.rows[static_cast<size_t>(r)],
                                                 defined_rows_except(hat, r));
                e.margin = hd.distance;
                e.extreme = hd.distance > 0;
                if (!e.extreme) e.witness = hd.weights;
            }
            if (e.extreme) {
                ++rep.extreme_count;
                if (rep.min_positive_margin == 0 || e.margin < rep.min_positive_margin)
                    rep.min_positive_margin = e.margin;
            }
        }
    }
    return rep;
}

std::optional<Condition1> check_condition1(const Box& box) {
    HatMatrix hat = hat_matrix(box);
    ExtremalityReport ext = extremality(hat);
    std::optional<Condition1> best;
    for (int x = 0; x < 2; ++x) {
        for (int u = 0; u < box.nu(); ++u) {
            const auto& e = ext.rows[static_cast<size_t>(hat.row_id(x, u))];
            if (!e.defined || !e.extreme) continue;
            if (!gamma_positive_exact(box, u)) continue;
            double g = gamma_of_box(box, u);
            if (!best || e.margin > best->delta ||
                (e.margin == best->delta && g > best->gamma)) {
                best = Condition1{x, u, e.margin, g};
            }
        }
    }
    return best;
}

std::optional<Condition3> check_condition3(const Box& box) {
    if (box.nu() < 2) return std::nullopt;
    HatMatrix hat = hat_matrix(box);
    ExtremalityReport ext = extremality(hat);
    std::optional<Condition3> best;
    for (int u0 = 0; u0 < box.nu(); ++u0) {
        for (int u1 = u0 + 1; u1 < box.nu(); ++u1) {
            bool all_defined = true;
            int non_extreme = 0;
            std::optional<std::pair<int, int>> exempt;
            Rat delta = 0;
            bool first = true;
            for (int x = 0; x < 2; ++x) {
                for (int u : {u0, u1}) {
                    const auto& e = ext.rows[static_cast<size_t>(hat.row_id(x, u))];
                    if (!e.defined) { all_defined = false; break; }
                    if (!e.extreme) {
                        ++non_extreme;
                        exempt = {x, u};
                    } else if (first || e.margin < delta) {
                        delta = e.margin;
                        first = false;
                    }
                }
                if (!all_defined) break;
            }
            if (!all_defined || non_extreme > 1) continue;
            if (non_extreme == 0) exempt.reset();
            if (!best || delta > best->delta) best = Condition3{u0, u1, exempt, delta};
        }
    }
    return best;
}

namespace {

// Scaled complementary-row margin for the alternative Protocol II condition:
//   min || sum_z mu_z (hat_c - hat_z) ||_1  over mu >= 0, mu_c = 0, mu_{c'} = 1.
// Positive iff no mixture avoiding c but touching c' reproduces row c; the
// value is the infimum of distance/P(c') over such mixtures.
Rat scaled_complement_margin(const HatMatrix& hat, int row_c, int row_cp) {
    const size_t dim = static_cast<size_t>(hat.dim());
    std::vector<int> free_rows;
    for (int r = 0; r < 2 * hat.nu; ++r) {
        if (r != row_c && r != row_cp && hat.defined[static_cast<size_t>(r)]) free_rows.push_back(r);
    }
    const size_t m = free_rows.size();
    const size_t nvars = m + 2 * dim;
    const auto& wc = hat.rows[static_cast<size_t>(row_c)];
    const auto& wcp = hat.rows[static_cast<size_t>(row_cp)];
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    for (size_t i = 0; i < dim; ++i) {
        std::vector<Rat> row(nvars, Rat(0));
        for (size_t j = 0; j < m; ++j) {
            row[j] = wc[i] - hat.rows[static_cast<size_t>(free_rows[j])][i];
        }
        row[m + i] = 1;
        row[m + dim + i] = -1;
        a.push_back(std::move(row));
        b.push_back(wcp[i] - wc[i]);
    }
    std::vector<Rat> c(nvars, Rat(0));
    for (size_t i = 0; i < 2 * dim; ++i) c[m + i] = 1;
    LpResult res = solve_lp(a, b, c);
    if (res.status != LpResult::Status::Optimal)
        throw std::logic_error("scaled_complement_margin: LP not optimal");
    return res.objective;
}

}  // namespace

std::optional<Condition4> check_condition4(const Box& box) {
    if (box.nu() < 2) return std::nullopt;
    HatMatrix hat = hat_matrix(box);
    ExtremalityReport ext = extremality(hat);
    std::optional<Condition4> best;
    for (int u0 = 0; u0 < box.nu(); ++u0) {
        for (int u1 = u0 + 1; u1 < box.nu(); ++u1) {
            bool all_defined = true;
            for (int x = 0; x < 2; ++x)
                for (int u : {u0, u1})
                    if (!hat.defined[static_cast<size_t>(hat.row_id(x, u))]) all_defined = false;
            if (!all_defined) continue;
            for (int x0 = 0; x0 < 2; ++x0) {
                for (int x1 = 0; x1 < 2; ++x1) {
                    const auto& e0 = ext.rows[static_cast<size_t>(hat.row_id(x0, u0))];
                    const auto& e1 = ext.rows[static_cast<size_t>(hat.row_id(x1, u1))];
                    if (!e0.extreme || !e1.extreme) continue;
                    int c = hat.row_id(1 - x0, u0);
                    int cp = hat.row_id(1 - x1, u1);
                    Rat m1 = scaled_complement_margin(hat, c, cp);
                    if (m1 == 0) continue;
                    Rat m2 = scaled_complement_margin(hat, cp, c);
                    if (m2 == 0) continue;
                    Rat delta = std::min({e0.margin, e1.margin, m1, m2});
                    if (!best || delta > best->delta) best = Condition4{u0, u1, x0, x1, delta};
                }
            }
        }
    }
    return best;
}

namespace {

Box remove_alice_input(const Box& box, int u_remove) {
    RawBoxTable t;
    t.nu = box.nu() - 1;
    t.nv = box.nv();
    t.w.assign(static_cast<size_t>(t.nu * t.nv * 4), Rat(0));
    for (int u = 0, src = 0; src < box.nu(); ++src) {
        if (src == u_remove) continue;
        for (int v = 0; v < t.nv; ++v)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) t.at(u, v, x, y) = box.at(src, v, x, y);
        ++u;
    }
    return validate_box(t);
}

}  // namespace

ReduceResult reduce_box(const Box& box) {
    Box cur = box;
    std::vector<int> kept(static_cast<size_t>(box.nu()));
    for (int u = 0; u < box.nu(); ++u) kept[static_cast<size_t>(u)] = u;
    std::vector<ReduceStep> steps;

    for (;;) {
        if (cur.nu() < 2) break;
        std::optional<ReduceStep> step;
        // Zero-marginal rule, smallest (x0, u0) first.
        for (int x0 = 0; x0 < 2 && !step; ++x0) {
            for (int u0 = 0; u0 < cur.nu() && !step; ++u0) {
                auto wa = cur.marginal_alice(u0);
                if (wa[static_cast<size_t>(x0)] == 0) {
                    ReduceStep s{ReduceStep::Rule::ZeroMarginal, u0, kept[static_cast<size_t>(u0)], x0, 0, 0, Rat(0), wa[0]};
                    step = s;
                }
            }
        }
        if (!step) {
            HatMatrix hat = hat_matrix(cur);
            for (int x0 = 0; x0 < 2 && !step; ++x0) {
                for (int u0 = 0; u0 < cur.nu() && !step; ++u0) {
                    if (!hat.defined[static_cast<size_t>(hat.row_id(x0, u0))]) continue;
                    auto wa0 = cur.marginal_alice(u0);
                    for (int x1 = 0; x1 < 2 && !step; ++x1) {
                        for (int u1 = 0; u1 < cur.nu() && !step; ++u1) {
                            if (x1 == x0 && u1 == u0) continue;
                            if (!hat.defined[static_cast<size_t>(hat.row_id(x1, u1))]) continue;
                            if (hat.rows[static_cast<size_t>(hat.row_id(x0, u0))] !=
                                hat.rows[static_cast<size_t>(hat.row_id(x1, u1))])
                                continue;
                            auto wa1 = cur.marginal_alice(u1);
                            if (wa0[static_cast<size_t>(x0)] > wa1[static_cast<size_t>(x1)]) continue;
                            if (u1 == u0) {
                                ReduceStep s{ReduceStep::Rule::SameInputRows, u0, kept[static_cast<size_t>(u0)],
                                             x0, x1, u1, Rat(0), wa0[0]};
                                step = s;
                            } else {
                                ReduceStep s{ReduceStep::Rule::DuplicateRow, u0, kept[static_cast<size_t>(u0)],
                                             x0, x1, u1,
                                             wa0[static_cast<size_t>(x0)] / wa1[static_cast<size_t>(x1)],
                                             wa0[0]};
                                step = s;
                            }
                        }
                    }
                }
            }
        }
        if (!step) break;
        cur = remove_alice_input(cur, step->removed_u);
        kept.erase(kept.begin() + step->removed_u);
        steps.push_back(*step);
    }
    return ReduceResult{cur, std::move(steps), std::move(kept)};
}

LocalDecomposition lift_decomposition(const LocalDecomposition& d, const ReduceResult& red) {
    LocalDecomposition cur = d;
    // Undo removals from the last step back to the first.
    for (auto it = red.steps.rbegin(); it != red.steps.rend(); ++it) {
        const ReduceStep& s = *it;
        LocalDecomposition next;
        for (const auto& term : cur.terms) {
            StochMatrix va;
            va.nin = term.va.nin + 1;
            va.p.assign(static_cast<size_t>(va.nin) * 2, Rat(0));
            auto post_index = [&](int pre) { return pre < s.removed_u ? pre : pre - 1; };
            for (int u = 0; u < va.nin; ++u) {
                if (u == s.removed_u) continue;
                int src = post_index(u);
                va.p[static_cast<size_t>(u) * 2 + 0] = term.va.at(src, 0);
                va.p[static_cast<size_t>(u) * 2 + 1] = term.va.at(src, 1);
            }
            if (s.rule == ReduceStep::Rule::DuplicateRow) {
                int u1_post = post_index(s.u1);
                Rat vx1 = term.va.at(u1_post, s.x1);
                Rat vother = term.va.at(u1_post, 1 - s.x1);
                va.p[static_cast<size_t>(s.removed_u) * 2 + s.x0] = s.p * vx1;
                va.p[static_cast<size_t>(s.removed_u) * 2 + (1 - s.x0)] = (1 - s.p) * vx1 + vother;
            } else {
                va.p[static_cast<size_t>(s.removed_u) * 2 + 0] = s.marginal0;
                va.p[static_cast<size_t>(s.removed_u) * 2 + 1] = 1 - s.marginal0;
            }
            next.terms.push_back({term.weight, std::move(va), term.vb});
        }
        cur = std::move(next);
    }
    return cur;
}

std::optional<LocalDecomposition> is_local(const Box& box) {
    if (box.nu() > 4 || box.nv() > 4)
        throw AlphabetTooLarge("is_local: vertex enumeration limited to |U|,|V| <= 4");
    const int nu = box.nu(), nv = box.nv();
    const int na = 1 << nu;  // Alice's deterministic strategies, bit u = output on u
    const int nb = 1 << nv;
    const size_t nvars = static_cast<size_t>(na) * static_cast<size_t>(nb);
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    for (int u = 0; u < nu; ++u) {
        for (int v = 0; v < nv; ++v) {
            for (int x = 0; x < 2; ++x) {
                for (int y = 0; y < 2; ++y) {
                    std::vector<Rat> row(nvars, Rat(0));
                    for (int sa = 0; sa < na; ++sa) {
                        if (((sa >> u) & 1) != x) continue;
                        for (int sb = 0; sb < nb; ++sb) {
                            if (((sb >> v) & 1) != y) continue;
                            row[static_cast<size_t>(sa) * static_cast<size_t>(nb) + static_cast<size_t>(sb)] = 1;
                        }
                    }
                    a.push_back(std::move(row));
                    b.push_back(box.at(u, v, x, y));
                }
            }
        }
    }
    std::vector<Rat> c(nvars, Rat(0));
    LpResult res = solve_lp(a, b, c);
    if (res.status != LpResult::Status::Optimal) return std::nullopt;
    LocalDecomposition d;
    for (int sa = 0; sa < na; ++sa) {
        for (int sb = 0; sb < nb; ++sb) {
            Rat w = res.x[static_cast<size_t>(sa) * static_cast<size_t>(nb) + static_cast<size_t>(sb)];
            if (w == 0) continue;
            std::vector<int> oa(static_cast<size_t>(nu)), ob(static_cast<size_t>(nv));
            for (int u = 0; u < nu; ++u) oa[static_cast<size_t>(u)] = (sa >> u) & 1;
            for (int v = 0; v < nv; ++v) ob[static_cast<size_t>(v)] = (sb >> v) & 1;
            d.terms.push_back({w, StochMatrix::deterministic(nu, oa), StochMatrix::deterministic(nv, ob)});
        }
    }
    return d;
}

namespace {

// Two-term decomposition of a single-Alice-input box by conditioning Bob's
// side on Alice's output.
LocalDecomposition conditional_decomposition(const Box& box) {
    assert(box.nu() == 1);
    auto wa = box.marginal_alice(0);
    LocalDecomposition d;
    for (int x = 0; x < 2; ++x) {
        if (wa[static_cast<size_t>(x)] == 0) continue;
        StochMatrix va = StochMatrix::deterministic(1, {x});
        StochMatrix vb;
        vb.nin = box.nv();
        vb.p.assign(static_cast<size_t>(box.nv()) * 2, Rat(0));
        for (int v = 0; v < box.nv(); ++v)
            for (int y = 0; y < 2; ++y)
                vb.p[static_cast<size_t>(v) * 2 + y] = box.at(0, v, x, y) / wa[static_cast<size_t>(x)];
        d.terms.push_back({wa[static_cast<size_t>(x)], std::move(va), std::move(vb)});
    }
    return d;
}

// The explicit two-term decomposition when both extreme rows sit on one input
// u*: every other row lies on the segment between them, and the segment
// coefficients turn into local strategies for the remaining inputs.
LocalDecomposition same_input_decomposition(const Box& box, const HatMatrix& hat, int ustar) {
    auto wstar = box.marginal_alice(ustar);
    const auto& rows0 = hat.rows[static_cast<size_t>(hat.row_id(0, ustar))];
    const auto& rows1 = hat.rows[static_cast<size_t>(hat.row_id(1, ustar))];
    // theta(x,u): weight of row (0,u*) in the segment expansion of row (x,u).
    auto theta_of = [&](int x, int u) -> Rat {
        const auto& r = hat.rows[static_cast<size_t>(hat.row_id(x, u))];
        for (size_t i = 0; i < rows0.size(); ++i) {
            if (rows0[i] != rows1[i]) {
                Rat th = (r[i] - rows1[i]) / (rows0[i] - rows1[i]);
                // Verify the full row; anything else is a case-analysis bug.
                for (size_t j = 0; j < rows0.size(); ++j) {
                    Rat lhs = th * rows0[j] + (1 - th) * rows1[j];
                    if (lhs != r[j])
                        throw Unclassifiable("row not on the extreme segment");
                }
                if (th < 0 || th > 1) throw Unclassifiable("segment coefficient outside [0,1]");
                return th;
            }
        }
        throw Unclassifiable("extreme rows coincide");
    };
    LocalDecomposition d;
    for (int c = 0; c < 2; ++c) {
        StochMatrix va;
        va.nin = box.nu();
        va.p.assign(static_cast<size_t>(box.nu()) * 2, Rat(0));
        va.p[static_cast<size_t>(ustar) * 2 + c] = 1;
        for (int u = 0; u < box.nu(); ++u) {
            if (u == ustar) continue;
            for (int x = 0; x < 2; ++x) {
                Rat th = theta_of(x, u);
                Rat coeff = c == 0 ? th : Rat(1 - th);
                va.p[static_cast<size_t>(u) * 2 + x] =
                    coeff * box.marginal_alice(u)[static_cast<size_t>(x)] / wstar[static_cast<size_t>(c)];
            }
        }
        StochMatrix vb;
        vb.nin = box.nv();
        vb.p.assign(static_cast<size_t>(box.nv()) * 2, Rat(0));
        for (int v = 0; v < box.nv(); ++v)
            for (int y = 0; y < 2; ++y)
                vb.p[static_cast<size_t>(v) * 2 + y] = box.at(ustar, v, c, y) / wstar[static_cast<size_t>(c)];
        d.terms.push_back({wstar[static_cast<size_t>(c)], std::move(va), std::move(vb)});
    }
    return d;
}

struct RevealingPair {
    int u, v;
    bool anti;
};

// First input pair (lexicographic) that is perfectly (anti-)correlated with
// non-deterministic outputs.
std::optional<RevealingPair> find_revealing_pair(const Box& box) {
    for (int u = 0; u < box.nu(); ++u) {
        auto wa = box.marginal_alice(u);
        if (wa[0] == 0 || wa[1] == 0) continue;
        for (int v = 0; v < box.nv(); ++v) {
            CorrelationKind k = correlation_kind(box, u, v);
            if (k == CorrelationKind::PerfectlyCorrelated) return RevealingPair{u, v, false};
            if (k == CorrelationKind::PerfectlyAntiCorrelated) return RevealingPair{u, v, true};
        }
    }
    return std::nullopt;
}

// Splits every term at (u0, v0) into deterministic-output subterms and groups
// them by Alice's bit there. Perfect (anti-)correlation at (u0, v0) kills all
// off-pattern subterms, so the grouped decomposition reveals the shared index
// to both parties.
TrivialCertificate regroup_for_pair(const LocalDecomposition& d, const Box& box,
                                    const RevealingPair& pair) {
    struct Group {
        Rat weight;
        std::vector<Rat> va, vb;  // weighted sums, normalized at the end
    };
    const int nu = box.nu(), nv = box.nv();
    std::vector<Group> groups(2);
    for (auto& g : groups) {
        g.weight = 0;
        g.va.assign(static_cast<size_t>(nu) * 2, Rat(0));
        g.vb.assign(static_cast<size_t>(nv) * 2, Rat(0));
    }
    for (const auto& term : d.terms) {
        for (int aout = 0; aout < 2; ++aout) {
            for (int bout = 0; bout < 2; ++bout) {
                Rat w = term.weight * term.va.at(pair.u, aout) * term.vb.at(pair.v, bout);
                if (w == 0) continue;
                int expected_b = pair.anti ? 1 - aout : aout;
                if (bout != expected_b)
                    throw Unclassifiable("off-pattern mass at a perfectly correlated pair");
                Group& g = groups[static_cast<size_t>(aout)];
                g.weight += w;
                for (int u = 0; u < nu; ++u) {
                    for (int x = 0; x < 2; ++x) {
                        Rat val = u == pair.u ? Rat(x == aout ? 1 : 0) : term.va.at(u, x);
                        g.va[static_cast<size_t>(u) * 2 + x] += w * val;
                    }
                }
                for (int v = 0; v < nv; ++v) {
                    for (int y = 0; y < 2; ++y) {
                        Rat val = v == pair.v ? Rat(y == bout ? 1 : 0) : term.vb.at(v, y);
                        g.vb[static_cast<size_t>(v) * 2 + y] += w * val;
                    }
                }
            }
        }
    }
    TrivialCertificate cert;
    for (int c = 0; c < 2; ++c) {
        Group& g = groups[static_cast<size_t>(c)];
        if (g.weight == 0) throw Unclassifiable("degenerate output at a revealing pair");
        StochMatrix va, vb;
        va.nin = nu;
        vb.nin = nv;
        va.p.resize(static_cast<size_t>(nu) * 2);
        vb.p.resize(static_cast<size_t>(nv) * 2);
        for (size_t i = 0; i < va.p.size(); ++i) va.p[i] = g.va[i] / g.weight;
        for (size_t i = 0; i < vb.p.size(); ++i) vb.p[i] = g.vb[i] / g.weight;
        cert.decomposition.terms.push_back({g.weight, std::move(va), std::move(vb)});
    }
    cert.revealing = {pair.u, pair.v};
    cert.anti = pair.anti;
    return cert;
}

LocalDecomposition product_decomposition(const Box& box) {
    StochMatrix va, vb;
    va.nin = box.nu();
    va.p.resize(static_cast<size_t>(box.nu()) * 2);
    for (int u = 0; u < box.nu(); ++u) {
        auto wa = box.marginal_alice(u);
        va.p[static_cast<size_t>(u) * 2 + 0] = wa[0];
        va.p[static_cast<size_t>(u) * 2 + 1] = wa[1];
    }
    vb.nin = box.nv();
    vb.p.resize(static_cast<size_t>(box.nv()) * 2);
    for (int v = 0; v < box.nv(); ++v) {
        auto wb = box.marginal_bob(v);
        vb.p[static_cast<size_t>(v) * 2 + 0] = wb[0];
        vb.p[static_cast<size_t>(v) * 2 + 1] = wb[1];
    }
    LocalDecomposition d;
    d.terms.push_back({Rat(1), std::move(va), std::move(vb)});
    return d;
}

}  // namespace

ClassificationResult classify(const Box& box) {
    ClassificationResult res{ClassificationResult::Verdict::Trivial, {}, {}, {}, {}, {}, reduce_box(box), ""};
    const Box& b = res.reduction.reduced;
    HatMatrix hat = hat_matrix(b);
    ExtremalityReport ext = extremality(hat);
    std::optional<LocalDecomposition> path_decomp;  // locality certificate for the reduced box

    if (b.nu() == 1) {
        auto wa = b.marginal_alice(0);
        bool deterministic = wa[0] == 0 || wa[1] == 0;
        bool rows_equal = !deterministic &&
                          hat.rows[static_cast<size_t>(hat.row_id(0, 0))] ==
                              hat.rows[static_cast<size_t>(hat.row_id(1, 0))];
        if (deterministic || rows_equal) {
            res.verdict = ClassificationResult::Verdict::Trivial;
            res.trivial = TrivialCertificate{product_decomposition(b), std::nullopt, false};
            res.case_path = "independent";
        } else {
            LocalDecomposition cond = conditional_decomposition(b);
            if (auto pair = find_revealing_pair(b)) {
                res.verdict = ClassificationResult::Verdict::Trivial;
                res.trivial = regroup_for_pair(cond, b, *pair);
                res.case_path = "single input, revealing pair";
            } else {
                res.cond1 = check_condition1(b);
                if (!res.cond1) throw Unclassifiable("single-input box with no revealing pair must satisfy the Protocol I condition");
                res.verdict = ClassificationResult::Verdict::ProtocolI;
                res.case_path = "single input";
                path_decomp = std::move(cond);
            }
        }
    } else {
        const int e = ext.extreme_count;
        if (e >= 3) {
            if ((res.cond3 = check_condition3(b))) {
                res.verdict = ClassificationResult::Verdict::ProtocolII;
                res.case_path = "three or more extreme rows, paired input";
            } else if ((res.cond1 = check_condition1(b))) {
                res.verdict = ClassificationResult::Verdict::ProtocolI;
                res.case_path = "three or more extreme rows, entropic input";
            } else if ((res.cond4 = check_condition4(b))) {
                res.verdict = ClassificationResult::Verdict::ProtocolII;
                res.case_path = "three or more extreme rows, correlated extremes";
            } else {
                throw Unclassifiable("exhausted the case analysis with >=3 extreme rows");
            }
        } else if (e == 2) {
            int r_first = -1, r_second = -1;
            for (int r = 0; r < 2 * b.nu(); ++r) {
                if (ext.rows[static_cast<size_t>(r)].defined && ext.rows[static_cast<size_t>(r)].extreme) {
                    (r_first < 0 ? r_first : r_second) = r;
                }
            }
            auto [x_f, u_f] = hat.row_xu(r_first);
            auto [x_s, u_s] = hat.row_xu(r_second);
            if (u_f == u_s) {
                LocalDecomposition d2 = same_input_decomposition(b, hat, u_f);
                if (auto pair = find_revealing_pair(b)) {
                    res.verdict = ClassificationResult::Verdict::Trivial;
                    res.trivial = regroup_for_pair(d2, b, *pair);
                    res.case_path = "two extreme rows on one input, revealing pair";
                } else {
                    res.cond1 = check_condition1(b);
                    if (!res.cond1) throw Unclassifiable("segment case without revealing pair must satisfy the Protocol I condition");
                    res.verdict = ClassificationResult::Verdict::ProtocolI;
                    res.case_path = "two extreme rows on one input";
                    path_decomp = std::move(d2);
                }
            } else {
                res.cond1 = check_condition1(b);
                if (!res.cond1) throw Unclassifiable("split-extreme case must satisfy the Protocol I condition");
                res.verdict = ClassificationResult::Verdict::ProtocolI;
                res.case_path = "two extreme rows across inputs";
            }
        } else {
            throw Unclassifiable("fewer than two extreme rows on a reduced multi-input box");
        }
    }

    // Locality certificate for the original box.
    if (res.trivial) {
        res.trivial->decomposition = lift_decomposition(res.trivial->decomposition, res.reduction);
        if (res.trivial->revealing) {
            res.trivial->revealing->first =
                res.reduction.kept_original[static_cast<size_t>(res.trivial->revealing->first)];
        }
        res.local_decomposition = res.trivial->decomposition;
    } else if (path_decomp) {
        res.local_decomposition = lift_decomposition(*path_decomp, res.reduction);
    } else if (b.nu() <= 4 && b.nv() <= 4) {
        if (auto loc = is_local(b)) res.local_decomposition = lift_decomposition(*loc, res.reduction);
    }
    return res;
}

std::optional<TrivialCertificate> theorem1_trivial(const Box& box) {
    ClassificationResult res = classify(box);
    if (res.verdict != ClassificationResult::Verdict::Trivial) return std::nullopt;
    return res.trivial;
}

}  // namespace nsbox

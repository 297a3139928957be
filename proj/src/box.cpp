#include "nsbox/box.hpp"

#include <algorithm>
#include <sstream>

namespace nsbox {

std::vector<Rat> Box::marginal_alice(int u) const {
    std::vector<Rat> m(2, Rat(0));
    for (int x = 0; x < 2; ++x) {
        Rat s = 0;
        for (int y = 0; y < 2; ++y) s += at(u, 0, x, y);
        m[x] = s;
    }
    return m;
}

std::vector<Rat> Box::marginal_bob(int v) const {
    std::vector<Rat> m(2, Rat(0));
    for (int y = 0; y < 2; ++y) {
        Rat s = 0;
        for (int x = 0; x < 2; ++x) s += at(0, v, x, y);
        m[y] = s;
    }
    return m;
}

Box validate_box(const RawBoxTable& t) {
    if (t.nu < 1 || t.nv < 1 || t.w.size() != static_cast<size_t>(t.nu * t.nv * 4))
        throw ValidationError(ValidationError::Kind::BadShape, "box table has wrong shape");
    for (const Rat& q : t.w) {
        if (q < 0 || q > 1)
            throw ValidationError(ValidationError::Kind::NotNormalized, "entry outside [0,1]");
    }
    for (int u = 0; u < t.nu; ++u) {
        for (int v = 0; v < t.nv; ++v) {
            Rat s = 0;
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) s += t.at(u, v, x, y);
            if (s != 1) {
                ValidationError e(ValidationError::Kind::NotNormalized,
                                  "sum_{x,y} W(xy|" + std::to_string(u) + "," + std::to_string(v) +
                                      ") = " + rat_to_string(s) + " != 1");
                e.u = u; e.v = v;
                throw e;
            }
        }
    }
    // Alice's marginal must not depend on v.
    for (int u = 0; u < t.nu; ++u) {
        for (int x = 0; x < 2; ++x) {
            Rat ref = t.at(u, 0, x, 0) + t.at(u, 0, x, 1);
            for (int v = 1; v < t.nv; ++v) {
                Rat s = t.at(u, v, x, 0) + t.at(u, v, x, 1);
                if (s != ref) {
                    ValidationError e(ValidationError::Kind::SignalingToAlice,
                                      "sum_y W(" + std::to_string(x) + "y|" + std::to_string(u) +
                                          ",v) differs between v=0 and v=" + std::to_string(v));
                    e.u = u; e.v = 0; e.v2 = v; e.x = x;
                    throw e;
                }
            }
        }
    }
    // Bob's marginal must not depend on u.
    for (int v = 0; v < t.nv; ++v) {
        for (int y = 0; y < 2; ++y) {
            Rat ref = t.at(0, v, 0, y) + t.at(0, v, 1, y);
            for (int u = 1; u < t.nu; ++u) {
                Rat s = t.at(u, v, 0, y) + t.at(u, v, 1, y);
                if (s != ref) {
                    ValidationError e(ValidationError::Kind::SignalingToBob,
                                      "sum_x W(x" + std::to_string(y) + "|u," + std::to_string(v) +
                                          ") differs between u=0 and u=" + std::to_string(u));
                    e.v = v; e.u = 0; e.u2 = u; e.y = y;
                    throw e;
                }
            }
        }
    }
    return Box(t);
}

HatMatrix hat_matrix(const Box& box) {
    HatMatrix h;
    h.nu = box.nu();
    h.nv = box.nv();
    h.rows.assign(static_cast<size_t>(2 * h.nu), std::vector<Rat>(h.dim(), Rat(0)));
    h.defined.assign(static_cast<size_t>(2 * h.nu), false);
    for (int u = 0; u < h.nu; ++u) {
        auto wa = box.marginal_alice(u);
        for (int x = 0; x < 2; ++x) {
            int r = h.row_id(x, u);
            if (wa[x] == 0) continue;
            h.defined[r] = true;
            for (int v = 0; v < h.nv; ++v) {
                for (int y = 0; y < 2; ++y) {
                    h.rows[r][h.coord_id(y, v)] = box.at(u, v, x, y) / (Rat(h.nv) * wa[x]);
                }
            }
        }
    }
    return h;
}

CorrelationKind correlation_kind(const Box& box, int u, int v) {
    bool corr = box.at(u, v, 0, 1) == 0 && box.at(u, v, 1, 0) == 0;
    bool anti = box.at(u, v, 0, 0) == 0 && box.at(u, v, 1, 1) == 0;
    if (corr) return CorrelationKind::PerfectlyCorrelated;
    if (anti) return CorrelationKind::PerfectlyAntiCorrelated;
    return CorrelationKind::Neither;
}

std::vector<int> redundant_inputs(const Box& box) {
    std::vector<int> out;
    for (int u = 0; u < box.nu(); ++u) {
        bool red = false;
        for (int u2 = 0; u2 < box.nu() && !red; ++u2) {
            if (u2 == u) continue;
            bool same = true;
            for (int v = 0; v < box.nv() && same; ++v)
                for (int x = 0; x < 2 && same; ++x)
                    for (int y = 0; y < 2; ++y)
                        if (box.at(u, v, x, y) != box.at(u2, v, x, y)) { same = false; break; }
            red = same;
        }
        if (red) out.push_back(u);
    }
    return out;
}

StochMatrix StochMatrix::deterministic(int nin, const std::vector<int>& out_for_in) {
    StochMatrix m;
    m.nin = nin;
    m.p.assign(static_cast<size_t>(nin * 2), Rat(0));
    for (int i = 0; i < nin; ++i) m.p[i * 2 + out_for_in[i]] = 1;
    return m;
}

RawBoxTable induced_table(const LocalDecomposition& d, int nu, int nv) {
    RawBoxTable t;
    t.nu = nu;
    t.nv = nv;
    t.w.assign(static_cast<size_t>(nu * nv * 4), Rat(0));
    for (const auto& term : d.terms) {
        if (term.va.nin != nu || term.vb.nin != nv)
            throw std::invalid_argument("decomposition term has wrong input alphabet");
        for (int u = 0; u < nu; ++u)
            for (int v = 0; v < nv; ++v)
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y)
                        t.at(u, v, x, y) += term.weight * term.va.at(u, x) * term.vb.at(v, y);
    }
    return t;
}

bool decomposition_reproduces(const LocalDecomposition& d, const Box& box) {
    Rat total = 0;
    for (const auto& term : d.terms) {
        if (term.weight < 0) return false;
        total += term.weight;
        for (int u = 0; u < term.va.nin; ++u) {
            Rat s = term.va.at(u, 0) + term.va.at(u, 1);
            if (s != 1 || term.va.at(u, 0) < 0 || term.va.at(u, 1) < 0) return false;
        }
        for (int v = 0; v < term.vb.nin; ++v) {
            Rat s = term.vb.at(v, 0) + term.vb.at(v, 1);
            if (s != 1 || term.vb.at(v, 0) < 0 || term.vb.at(v, 1) < 0) return false;
        }
    }
    if (total != 1) return false;
    RawBoxTable t = induced_table(d, box.nu(), box.nv());
    for (int u = 0; u < box.nu(); ++u)
        for (int v = 0; v < box.nv(); ++v)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    if (t.at(u, v, x, y) != box.at(u, v, x, y)) return false;
    return true;
}

bool BoxInstance::used(Side side) const {
    return side == Side::Alice ? alice_.has_value() : bob_.has_value();
}

std::optional<std::pair<int, int>> BoxInstance::state(Side side) const {
    return side == Side::Alice ? alice_ : bob_;
}

int BoxInstance::use(Side side, int input, SplitRng& rng, const std::string& phase) {
    const int nin = side == Side::Alice ? box_->nu() : box_->nv();
    if (input < 0 || input >= nin)
        throw BoxUseError(BoxUseError::Kind::InvalidInput, "input out of range");
    if (used(side))
        throw BoxUseError(BoxUseError::Kind::DoubleUse, "side already used; box instances are single-use");

    const auto& other = side == Side::Alice ? bob_ : alice_;
    int output;
    if (!other.has_value()) {
        // First mover: sample from this side's marginal.
        std::vector<Rat> m = side == Side::Alice ? box_->marginal_alice(input) : box_->marginal_bob(input);
        output = static_cast<int>(rng.sample_discrete(m));
    } else {
        // Second mover: exact conditional given the other side's (input, output).
        auto [oin, oout] = *other;
        std::vector<Rat> cond(2, Rat(0));
        for (int z = 0; z < 2; ++z) {
            cond[z] = side == Side::Alice ? box_->at(input, oin, z, oout) : box_->at(oin, input, oout, z);
        }
        // Total mass equals the other side's marginal; if it is zero the
        // recorded outcome was impossible, which cannot happen for samples
        // drawn from the box itself.
        output = static_cast<int>(rng.sample_discrete(cond));
    }
    if (side == Side::Alice) alice_ = {input, output};
    else bob_ = {input, output};
    log_.push_back({side, input, output, phase});
    return output;
}

Box preset_pr_box() {
    RawBoxTable t;
    t.nu = t.nv = 2;
    t.w.assign(16, Rat(0));
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    if ((x ^ y) == (u & v)) t.at(u, v, x, y) = Rat(1, 2);
    return validate_box(t);
}

Box preset_shared_bit() {
    RawBoxTable t;
    t.nu = t.nv = 1;
    t.w.assign(4, Rat(0));
    t.at(0, 0, 0, 0) = Rat(1, 2);
    t.at(0, 0, 1, 1) = Rat(1, 2);
    return validate_box(t);
}

Box preset_anti_shared_bit() {
    RawBoxTable t;
    t.nu = t.nv = 1;
    t.w.assign(4, Rat(0));
    t.at(0, 0, 0, 1) = Rat(1, 2);
    t.at(0, 0, 1, 0) = Rat(1, 2);
    return validate_box(t);
}

Box preset_correlated_bit(const Rat& p) {
    if (p < 0 || p > 1) throw std::invalid_argument("correlated_bit: p outside [0,1]");
    RawBoxTable t;
    t.nu = t.nv = 1;
    t.w.assign(4, Rat(0));
    t.at(0, 0, 0, 0) = (1 - p) / 2;
    t.at(0, 0, 0, 1) = p / 2;
    t.at(0, 0, 1, 0) = p / 2;
    t.at(0, 0, 1, 1) = (1 - p) / 2;
    return validate_box(t);
}

Box preset_product(const StochMatrix& va, const StochMatrix& vb) {
    LocalDecomposition d;
    d.terms.push_back({Rat(1), va, vb});
    return preset_mixture(d, va.nin, vb.nin);
}

Box preset_mixture(const LocalDecomposition& d, int nu, int nv) {
    return validate_box(induced_table(d, nu, nv));
}

Box random_box(int nu, int nv, int den, SplitRng& rng) {
    if (den < 1) throw std::invalid_argument("random_box: denominator < 1");
    // Marginals first (non-signaling is exactly: fixed per-side marginals plus
    // an arbitrary coupling per input pair inside the Frechet bounds).
    std::vector<Rat> pa(nu), pb(nv);
    for (int u = 0; u < nu; ++u) pa[u] = Rat(rng.below(static_cast<uint64_t>(den) + 1), den);
    for (int v = 0; v < nv; ++v) pb[v] = Rat(rng.below(static_cast<uint64_t>(den) + 1), den);
    RawBoxTable t;
    t.nu = nu;
    t.nv = nv;
    t.w.assign(static_cast<size_t>(nu * nv * 4), Rat(0));
    for (int u = 0; u < nu; ++u) {
        for (int v = 0; v < nv; ++v) {
            Rat lo = std::max(Rat(0), pa[u] + pb[v] - 1);
            Rat hi = std::min(pa[u], pb[v]);
            // lo and hi have denominator dividing den; sample w00 on that grid.
            Rat lo_s = lo * den, hi_s = hi * den;
            long lo_i = static_cast<long>(lo_s.get_num().get_si());
            long hi_i = static_cast<long>(hi_s.get_num().get_si());
            long pick = lo_i + static_cast<long>(rng.below(static_cast<uint64_t>(hi_i - lo_i + 1)));
            Rat w00(pick, den);
            t.at(u, v, 0, 0) = w00;
            t.at(u, v, 0, 1) = pa[u] - w00;
            t.at(u, v, 1, 0) = pb[v] - w00;
            t.at(u, v, 1, 1) = 1 - pa[u] - pb[v] + w00;
        }
    }
    return validate_box(t);
}

Box preset_by_name(const std::string& name, SplitRng& rng) {
    if (name == "pr_box" || name == "pr") return preset_pr_box();
    if (name == "shared_bit") return preset_shared_bit();
    if (name == "anti_shared_bit") return preset_anti_shared_bit();
    auto colon = name.find(':');
    std::string head = colon == std::string::npos ? name : name.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
    if (head == "correlated_bit") {
        if (arg.empty()) throw std::invalid_argument("correlated_bit needs a parameter, e.g. correlated_bit:0.1");
        return preset_correlated_bit(rat_from_string(arg));
    }
    if (head == "random") {
        int nu = 2, nv = 2;
        if (!arg.empty()) {
            auto xpos = arg.find('x');
            if (xpos == std::string::npos) throw std::invalid_argument("random:NUxNV expected");
            nu = std::stoi(arg.substr(0, xpos));
            nv = std::stoi(arg.substr(xpos + 1));
        }
        return random_box(nu, nv, 16, rng);
    }
    throw std::invalid_argument("unknown preset: " + name);
}

Box parse_box(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int nu = -1, nv = -1;
    RawBoxTable t;
    std::vector<bool> seen;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (nu < 0) {
            if (tok != "box") throw ParseError(lineno, "expected 'box |U| |V|' header");
            if (!(ls >> nu >> nv) || nu < 1 || nv < 1)
                throw ParseError(lineno, "bad box header");
            t.nu = nu;
            t.nv = nv;
            t.w.assign(static_cast<size_t>(nu * nv * 4), Rat(0));
            seen.assign(static_cast<size_t>(nu * nv), false);
            continue;
        }
        int u, v;
        std::string colon;
        std::istringstream rs(line);
        if (!(rs >> u >> v >> colon) || colon != ":")
            throw ParseError(lineno, "expected 'u v : w00 w01 w10 w11'");
        if (u < 0 || u >= nu || v < 0 || v >= nv)
            throw ParseError(lineno, "input indices out of range");
        std::string w00, w01, w10, w11, extra;
        if (!(rs >> w00 >> w01 >> w10 >> w11))
            throw ParseError(lineno, "expected four probabilities (binary outputs only)");
        if (rs >> extra) {
            ValidationError e(ValidationError::Kind::NonBinaryOutput,
                              "more than four output entries on one line");
            throw ParseError(lineno, e.what());
        }
        try {
            t.at(u, v, 0, 0) = rat_from_string(w00);
            t.at(u, v, 0, 1) = rat_from_string(w01);
            t.at(u, v, 1, 0) = rat_from_string(w10);
            t.at(u, v, 1, 1) = rat_from_string(w11);
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, e.what());
        }
        seen[static_cast<size_t>(u * nv + v)] = true;
    }
    if (nu < 0) throw ParseError(lineno, "missing 'box' header");
    for (int u = 0; u < nu; ++u)
        for (int v = 0; v < nv; ++v)
            if (!seen[static_cast<size_t>(u * nv + v)])
                throw ParseError(lineno, "missing row for inputs (" + std::to_string(u) + "," +
                                             std::to_string(v) + ")");
    return validate_box(t);  // ValidationError propagates
}

std::string serialize_box(const Box& box) {
    std::ostringstream out;
    out << "box " << box.nu() << " " << box.nv() << "\n";
    for (int u = 0; u < box.nu(); ++u) {
        for (int v = 0; v < box.nv(); ++v) {
            out << u << " " << v << " :";
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) out << " " << rat_to_string(box.at(u, v, x, y));
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace nsbox

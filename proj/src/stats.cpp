#include "nsbox/stats.hpp"

#include <cmath>

namespace nsbox {

double shannon_conditional_entropy(const std::vector<double>& joint, int nx, int ny) {
    double h = 0.0;
    for (int y = 0; y < ny; ++y) {
        double py = 0.0;
        for (int x = 0; x < nx; ++x) py += joint[static_cast<size_t>(x * ny + y)];
        if (py <= 0.0) continue;
        for (int x = 0; x < nx; ++x) {
            double pxy = joint[static_cast<size_t>(x * ny + y)];
            if (pxy <= 0.0) continue;
            h -= pxy * std::log2(pxy / py);
        }
    }
    return h;
}

double shannon_conditional_entropy(const std::vector<Rat>& joint, int nx, int ny) {
    std::vector<double> j(joint.size());
    for (size_t i = 0; i < joint.size(); ++i) j[i] = rat_to_double(joint[i]);
    return shannon_conditional_entropy(j, nx, ny);
}

double gamma_of_box(const Box& box, int ua) {
    double best = -1.0;
    for (int v = 0; v < box.nv(); ++v) {
        std::vector<Rat> joint(4);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) joint[static_cast<size_t>(x * 2 + y)] = box.at(ua, v, x, y);
        double h = shannon_conditional_entropy(joint, 2, 2);
        if (best < 0 || h < best) best = h;
    }
    return best;
}

bool gamma_positive_exact(const Box& box, int ua) {
    // H(X_v|Y_v) = 0 iff every Bob outcome with positive mass pins Alice's
    // output; gamma > 0 needs the opposite for every v.
    for (int v = 0; v < box.nv(); ++v) {
        bool some_y_mixed = false;
        for (int y = 0; y < 2 && !some_y_mixed; ++y) {
            if (box.at(ua, v, 0, y) > 0 && box.at(ua, v, 1, y) > 0) some_y_mixed = true;
        }
        if (!some_y_mixed) return false;
    }
    return true;
}

double min_entropy_bits(const std::vector<double>& dist) {
    double mx = 0.0;
    for (double p : dist) mx = std::max(mx, p);
    if (mx <= 0.0) throw ParameterOutOfRange("min_entropy of empty distribution");
    return -std::log2(mx);
}

bool is_typical(const std::vector<int>& seq, const std::vector<Rat>& p, const Rat& eps) {
    const long n = static_cast<long>(seq.size());
    std::vector<long> counts(p.size(), 0);
    for (int s : seq) {
        if (s < 0 || static_cast<size_t>(s) >= p.size())
            throw ParameterOutOfRange("sequence letter outside the alphabet");
        counts[static_cast<size_t>(s)]++;
    }
    Rat slack = eps * n;
    for (size_t a = 0; a < p.size(); ++a) {
        if (p[a] == 0 && counts[a] != 0) return false;
        Rat dev = rat_abs(Rat(counts[a]) - p[a] * n);
        if (dev > slack) return false;
    }
    return true;
}

bool is_cond_typical(const std::vector<int>& out_seq, const std::vector<int>& in_seq,
                     const std::vector<std::vector<Rat>>& w, const Rat& eps) {
    if (out_seq.size() != in_seq.size()) throw LengthMismatch("sequence lengths differ");
    const long n = static_cast<long>(in_seq.size());
    const size_t na = w.size();
    if (na == 0) throw ParameterOutOfRange("empty channel");
    const size_t nb = w[0].size();
    std::vector<long> nin(na, 0);
    std::vector<long> joint(na * nb, 0);
    for (long i = 0; i < n; ++i) {
        int a = in_seq[static_cast<size_t>(i)];
        int b = out_seq[static_cast<size_t>(i)];
        if (a < 0 || static_cast<size_t>(a) >= na || b < 0 || static_cast<size_t>(b) >= nb)
            throw ParameterOutOfRange("letter outside the channel alphabets");
        nin[static_cast<size_t>(a)]++;
        joint[static_cast<size_t>(a) * nb + static_cast<size_t>(b)]++;
    }
    Rat slack = eps * n;
    for (size_t a = 0; a < na; ++a) {
        for (size_t b = 0; b < nb; ++b) {
            long cnt = joint[a * nb + b];
            if (w[a][b] == 0 && cnt != 0) return false;
            Rat dev = rat_abs(Rat(cnt) - w[a][b] * Rat(nin[a]));
            if (dev > slack) return false;
        }
    }
    return true;
}

Rat exact_binomial_tail(int n, const Rat& p, int k) {
    if (n < 0 || k < 0) throw ParameterOutOfRange("binomial tail needs n,k >= 0");
    if (p < 0 || p > 1) throw ParameterOutOfRange("binomial tail needs p in [0,1]");
    Rat q = 1 - p;
    Rat sum = 0;
    Int binom = 1;  // C(n, i)
    Rat pi = 1;     // p^i
    // q^(n-i) built from q^n by dividing; handle q == 0 separately.
    if (q == 0) return k >= n ? Rat(1) : Rat(0);
    Rat qpow = 1;
    for (int i = 0; i < n; ++i) qpow *= q;
    for (int i = 0; i <= std::min(k, n); ++i) {
        sum += Rat(binom) * pi * qpow;
        binom = binom * (n - i) / (i + 1);
        pi *= p;
        qpow /= q;
    }
    return sum;
}

bool binomial_tail_bound_holds(int n, const Rat& p, int k) {
    if (Rat(k) > p * n) throw ParameterOutOfRange("binomial tail bound needs k <= np");
    Rat tail = exact_binomial_tail(n, p, k);
    // Bound is 2^e with e = -2np^2 + 4pk, a rational. Compare tail <= 2^e by
    // raising both sides to the power den(e): tail^den <= 2^num.
    Rat e = Rat(-2 * n) * p * p + Rat(4 * k) * p;
    Int den = e.get_den();
    Int num = e.get_num();  // sign carried here after canonicalization
    unsigned long d = den.get_ui();
    Rat lhs = 1;
    for (unsigned long i = 0; i < d; ++i) lhs *= tail;
    // rhs = 2^num as a rational.
    Rat rhs;
    if (num >= 0) {
        Int two_pow;
        mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, num.get_ui());
        rhs = Rat(two_pow);
    } else {
        Int mag = -num;
        Int two_pow;
        mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, mag.get_ui());
        rhs = Rat(1) / Rat(two_pow);
    }
    return lhs <= rhs;
}

namespace {

double need(const BoundQuery& q, const std::string& key) {
    auto it = q.params.find(key);
    if (it == q.params.end()) throw ParameterOutOfRange("bound '" + q.id + "' needs parameter " + key);
    return it->second;
}

}  // namespace

BoundResult evaluate_bound(const BoundQuery& q) {
    BoundResult r;
    if (q.id == "chernoff_upper" || q.id == "chernoff_lower") {
        double mu = need(q, "mu"), delta = need(q, "delta");
        if (!(delta > 0 && delta < 1)) throw ParameterOutOfRange("chernoff needs 0 < delta < 1");
        if (mu < 0) throw ParameterOutOfRange("chernoff needs mu >= 0");
        double div = q.id == "chernoff_upper" ? 3.0 : 2.0;
        r.value = std::exp(-delta * delta * mu / div);
        r.vacuous = r.value >= 1.0;
    } else if (q.id == "hoeffding") {
        double n = need(q, "n"), delta = need(q, "delta");
        if (n <= 0) throw ParameterOutOfRange("hoeffding needs n > 0");
        r.value = std::exp(-2.0 * delta * delta / n);
        r.vacuous = r.value >= 1.0;
    } else if (q.id == "typical1" || q.id == "typical2") {
        double n = need(q, "n"), eps = need(q, "eps"), ax = need(q, "X");
        if (n <= 0 || eps <= 0 || ax < 1) throw ParameterOutOfRange("typicality bound parameters out of range");
        double mult = 2.0 * ax;
        if (q.id == "typical2") {
            double az = need(q, "Z");
            if (az < 1) throw ParameterOutOfRange("typical2 needs |Z| >= 1");
            mult *= az;
        }
        r.value = 1.0 - mult * std::exp(-n * eps * eps / 3.0);
        r.vacuous = r.value <= 0.0;
    } else if (q.id == "statlemma") {
        double n = need(q, "n"), lam = need(q, "lambda"), del = need(q, "delta"),
               kap = need(q, "kappa"), az = need(q, "Z");
        if (n <= 0 || lam <= 0 || del <= 0 || kap <= 0 || az < 1)
            throw ParameterOutOfRange("statlemma parameters out of range");
        double eps = lam * del * kap / (2.0 * az);
        r.derived["eps"] = eps;
        r.value = 2.0 * std::exp(-n * eps * eps / 3.0);
        r.vacuous = r.value >= 1.0;
    } else if (q.id == "binom_tail") {
        double n = need(q, "n"), k = need(q, "k");
        Rat p;
        if (auto it = q.exact_params.find("p"); it != q.exact_params.end()) p = it->second;
        else { p = Rat(need(q, "p")); p.canonicalize(); }
        int ni = static_cast<int>(n), ki = static_cast<int>(k);
        if (ni < 0 || ki < 0 || p <= 0 || p >= 1) throw ParameterOutOfRange("binom_tail needs n,k >= 0 and 0 < p < 1");
        if (Rat(ki) > p * ni) throw ParameterOutOfRange("binom_tail needs k <= np");
        double pd = rat_to_double(p);
        r.value = std::pow(2.0, -2.0 * ni * pd * pd + 4.0 * pd * ki);
        r.vacuous = r.value >= 1.0;
        r.exact = exact_binomial_tail(ni, p, ki);
        r.derived["exact_tail"] = rat_to_double(*r.exact);
    } else if (q.id == "chain_rule") {
        double h = need(q, "H"), ybits = need(q, "Y_bits"), epsp = need(q, "eps_prime");
        if (!(epsp > 0 && epsp < 1)) throw ParameterOutOfRange("chain_rule needs eps' in (0,1)");
        r.value = h - ybits - std::log2(1.0 / epsp);
        r.vacuous = r.value <= 0.0;
    } else if (q.id == "smooth_product") {
        double h = need(q, "H"), n = need(q, "n"), eps = need(q, "eps"), ax = need(q, "X");
        if (!(eps > 0 && eps < 1) || n <= 0 || ax < 2)
            throw ParameterOutOfRange("smooth_product parameters out of range");
        r.value = h - 4.0 * std::sqrt(n * std::log2(1.0 / eps)) * std::log2(ax);
        r.vacuous = r.value <= 0.0;
    } else if (q.id == "leftover_threshold") {
        double hmin = need(q, "h_min"), eps = need(q, "eps");
        if (!(eps > 0 && eps < 1)) throw ParameterOutOfRange("leftover_threshold needs eps in (0,1)");
        r.value = hmin - 2.0 * std::log2(1.0 / eps);
        r.vacuous = r.value <= 0.0;
    } else {
        throw ParameterOutOfRange("unknown bound id: " + q.id);
    }
    return r;
}

RateEstimate wilson_interval(int successes, int trials) {
    RateEstimate e;
    e.successes = successes;
    e.trials = trials;
    if (trials == 0) return e;
    double z = 1.959963984540054;
    double n = trials, ph = static_cast<double>(successes) / n;
    e.rate = ph;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (ph + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
    e.lo = std::max(0.0, center - half);
    e.hi = std::min(1.0, center + half);
    return e;
}

}  // namespace nsbox

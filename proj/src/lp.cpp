#include "nsbox/lp.hpp"

#include <cassert>
#include <stdexcept>

namespace nsbox {

namespace {

// Dense tableau simplex. Rows 0..m-1 hold the constraints, row m the reduced
// costs, entry [i][n] the right-hand side / negated objective.
class Tableau {
  public:
    Tableau(const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b, size_t nvars)
        : m_(a.size()), n_(nvars) {
        t_.assign(m_ + 1, std::vector<Rat>(n_ + 1, Rat(0)));
        for (size_t i = 0; i < m_; ++i) {
            for (size_t j = 0; j < a[i].size(); ++j) t_[i][j] = a[i][j];
            t_[i][n_] = b[i];
            if (t_[i][n_] < 0) {
                for (size_t j = 0; j <= n_; ++j) t_[i][j] = -t_[i][j];
            }
        }
        basis_.assign(m_, SIZE_MAX);
    }

    void set_costs(const std::vector<Rat>& c) {
        for (size_t j = 0; j < n_; ++j) t_[m_][j] = (j < c.size()) ? c[j] : Rat(0);
        t_[m_][n_] = 0;
        // Price out the current basis.
        for (size_t i = 0; i < m_; ++i) {
            size_t bj = basis_[i];
            if (bj == SIZE_MAX) continue;
            Rat f = t_[m_][bj];
            if (f != 0) {
                for (size_t j = 0; j <= n_; ++j) t_[m_][j] -= f * t_[i][j];
            }
        }
    }

    void set_basis(size_t row, size_t col) { basis_[row] = col; }

    // Bland's rule: entering = smallest index with negative reduced cost;
    // leaving = smallest basis index among min-ratio rows.
    // Returns false if unbounded.
    bool run() {
        for (;;) {
            size_t enter = SIZE_MAX;
            for (size_t j = 0; j < n_; ++j) {
                if (t_[m_][j] < 0) { enter = j; break; }
            }
            if (enter == SIZE_MAX) return true;
            size_t leave = SIZE_MAX;
            Rat best;
            for (size_t i = 0; i < m_; ++i) {
                if (t_[i][enter] > 0) {
                    Rat ratio = t_[i][n_] / t_[i][enter];
                    if (leave == SIZE_MAX || ratio < best ||
                        (ratio == best && basis_[i] < basis_[leave])) {
                        leave = i;
                        best = ratio;
                    }
                }
            }
            if (leave == SIZE_MAX) return false;
            pivot(leave, enter);
        }
    }

    void pivot(size_t row, size_t col) {
        Rat p = t_[row][col];
        assert(p != 0);
        for (size_t j = 0; j <= n_; ++j) t_[row][j] /= p;
        for (size_t i = 0; i <= m_; ++i) {
            if (i == row) continue;
            Rat f = t_[i][col];
            if (f != 0) {
                for (size_t j = 0; j <= n_; ++j) t_[i][j] -= f * t_[row][j];
            }
        }
        basis_[row] = col;
    }

    Rat rhs(size_t row) const { return t_[row][n_]; }
    Rat cost_entry(size_t col) const { return t_[m_][col]; }
    Rat objective() const { return -t_[m_][n_]; }
    size_t basis(size_t row) const { return basis_[row]; }
    const Rat& at(size_t i, size_t j) const { return t_[i][j]; }
    size_t rows() const { return m_; }

  private:
    size_t m_, n_;
    std::vector<std::vector<Rat>> t_;
    std::vector<size_t> basis_;
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<Rat>>& a,
                  const std::vector<Rat>& b,
                  const std::vector<Rat>& c) {
    size_t m = a.size();
    size_t n = c.size();
    if (b.size() != m) throw std::invalid_argument("solve_lp: |b| != rows(A)");
    for (const auto& row : a) {
        if (row.size() != n) throw std::invalid_argument("solve_lp: ragged A");
    }

    // Phase 1: minimize the sum of artificial variables x_{n..n+m-1}.
    // Rows with negative rhs are negated up front so the artificial basis is
    // feasible.
    std::vector<std::vector<Rat>> a_ext(m, std::vector<Rat>(n + m, Rat(0)));
    std::vector<Rat> b_ext = b;
    for (size_t i = 0; i < m; ++i) {
        bool neg = b[i] < 0;
        for (size_t j = 0; j < n; ++j) a_ext[i][j] = neg ? Rat(-a[i][j]) : a[i][j];
        if (neg) b_ext[i] = -b[i];
        a_ext[i][n + i] = 1;
    }
    Tableau t1(a_ext, b_ext, n + m);
    for (size_t i = 0; i < m; ++i) t1.set_basis(i, n + i);
    std::vector<Rat> phase1_cost(n + m, Rat(0));
    for (size_t i = 0; i < m; ++i) phase1_cost[n + i] = 1;
    t1.set_costs(phase1_cost);
    if (!t1.run()) throw std::logic_error("phase-1 unbounded");
    if (t1.objective() != 0) {
        return {LpResult::Status::Infeasible, Rat(0), {}};
    }
    // Drive artificials out of the basis where possible (redundant rows stay
    // with a zero artificial and never pivot again).
    for (size_t i = 0; i < m; ++i) {
        if (t1.basis(i) >= n) {
            for (size_t j = 0; j < n; ++j) {
                if (t1.at(i, j) != 0) {
                    t1.pivot(i, j);
                    break;
                }
            }
        }
    }

    // Phase 2 on the same tableau. Artificial columns never enter (the loop
    // below only scans real columns); rows where an artificial is still basic
    // are all-zero on real columns after the drive-out, so they stay put.
    std::vector<Rat> phase2_cost(n + m, Rat(0));
    for (size_t j = 0; j < n; ++j) phase2_cost[j] = c[j];
    t1.set_costs(phase2_cost);

    for (;;) {
        size_t enter = SIZE_MAX;
        for (size_t j = 0; j < n; ++j) {
            if (t1.cost_entry(j) < 0) { enter = j; break; }
        }
        if (enter == SIZE_MAX) break;
        size_t leave = SIZE_MAX;
        Rat best;
        for (size_t i = 0; i < m; ++i) {
            if (t1.at(i, enter) > 0) {
                Rat ratio = t1.rhs(i) / t1.at(i, enter);
                if (leave == SIZE_MAX || ratio < best ||
                    (ratio == best && t1.basis(i) < t1.basis(leave))) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave == SIZE_MAX) {
            return {LpResult::Status::Unbounded, Rat(0), {}};
        }
        t1.pivot(leave, enter);
    }

    std::vector<Rat> x(n, Rat(0));
    for (size_t i = 0; i < m; ++i) {
        size_t bj = t1.basis(i);
        if (bj < n) x[bj] = t1.rhs(i);
    }
    Rat obj = 0;
    for (size_t j = 0; j < n; ++j) obj += c[j] * x[j];
    return {LpResult::Status::Optimal, obj, x};
}

}  // namespace nsbox

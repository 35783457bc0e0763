#include "truncpol/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace truncpol::lp {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr int kMaxIterations = 100000;

struct Tableau {
    Mat t;                   // rows x (cols + 1); last column is rhs
    std::vector<int> basis;  // basic column per row
    int cols = 0;

    double& rhs(int r) { return t(r, cols); }

    void pivot(int row, int col) {
        t.row(row) /= t(row, col);
        for (int r = 0; r < t.rows(); ++r) {
            if (r == row) continue;
            double const f = t(r, col);
            if (f != 0.0) t.row(r) -= f * t.row(row);
        }
        basis[row] = col;
    }
};

// Runs Bland's rule on `tab` against objective row `cost` (length cols).
// Columns with allowed[j] == false never enter.
Status optimize(Tableau& tab, Vec const& cost, std::vector<bool> const& allowed,
                int& iterations) {
    int const rows = static_cast<int>(tab.t.rows());
    for (; iterations < kMaxIterations; ++iterations) {
        int enter = -1;
        for (int j = 0; j < tab.cols && enter < 0; ++j) {
            if (!allowed[j]) continue;
            double reduced = cost[j];
            for (int r = 0; r < rows; ++r) reduced -= cost[tab.basis[r]] * tab.t(r, j);
            if (reduced < -kCostTol) enter = j;
        }
        if (enter < 0) return Status::Optimal;

        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < rows; ++r) {
            double const a = tab.t(r, enter);
            if (a <= kPivotTol) continue;
            double const ratio = std::max(tab.rhs(r), 0.0) / a;
            if (ratio < best - 1e-14 ||
                (std::abs(ratio - best) <= 1e-14 && tab.basis[r] < tab.basis[leave])) {
                best = ratio;
                leave = r;
            }
        }
        if (leave < 0) return Status::Unbounded;
        tab.pivot(leave, enter);
    }
    return Status::IterationLimit;
}

}  // namespace

Solution solve(Problem const& p) {
    int const n0 = static_cast<int>(p.cost.size());
    int const m_ub = static_cast<int>(p.A_ub.rows());
    int const m_eq = static_cast<int>(p.A_eq.rows());
    if ((m_ub > 0 && (p.A_ub.cols() != n0 || p.b_ub.size() != m_ub)) ||
        (m_eq > 0 && (p.A_eq.cols() != n0 || p.b_eq.size() != m_eq)) ||
        (!p.free.empty() && static_cast<int>(p.free.size()) != n0)) {
        throw ArgumentError("lp::solve: inconsistent problem dimensions");
    }

    // Split free variables x = x+ - x-.
    std::vector<int> pos(n0), neg(n0, -1);
    int n = 0;
    for (int i = 0; i < n0; ++i) {
        pos[i] = n++;
        if (!p.free.empty() && p.free[i]) neg[i] = n++;
    }
    auto expand = [&](Mat const& a) {
        Mat out = Mat::Zero(a.rows(), n);
        for (int i = 0; i < n0; ++i) {
            out.col(pos[i]) = a.col(i);
            if (neg[i] >= 0) out.col(neg[i]) = -a.col(i);
        }
        return out;
    };
    Mat const a_ub = m_ub > 0 ? expand(p.A_ub) : Mat(0, n);
    Mat const a_eq = m_eq > 0 ? expand(p.A_eq) : Mat(0, n);

    int const rows = m_ub + m_eq;
    // Count artificials: ub rows with negative rhs and all eq rows.
    int n_art = m_eq;
    for (int r = 0; r < m_ub; ++r) n_art += p.b_ub[r] < 0.0 ? 1 : 0;
    int const slack0 = n;
    int const art0 = n + m_ub;
    int const cols = n + m_ub + n_art;

    Mat standard = Mat::Zero(rows, cols);  // original data, sign-normalized
    Vec rhs(rows);
    Tableau tab;
    tab.cols = cols;
    tab.t = Mat::Zero(rows, cols + 1);
    tab.basis.assign(rows, -1);
    int art = art0;
    for (int r = 0; r < m_ub; ++r) {
        double const sign = p.b_ub[r] < 0.0 ? -1.0 : 1.0;
        standard.row(r).head(n) = sign * a_ub.row(r);
        standard(r, slack0 + r) = sign;
        rhs[r] = sign * p.b_ub[r];
        if (sign < 0.0) {
            standard(r, art) = 1.0;
            tab.basis[r] = art++;
        } else {
            tab.basis[r] = slack0 + r;
        }
    }
    for (int e = 0; e < m_eq; ++e) {
        int const r = m_ub + e;
        double const sign = p.b_eq[e] < 0.0 ? -1.0 : 1.0;
        standard.row(r).head(n) = sign * a_eq.row(e);
        rhs[r] = sign * p.b_eq[e];
        standard(r, art) = 1.0;
        tab.basis[r] = art++;
    }
    tab.t.leftCols(cols) = standard;
    tab.t.col(cols) = rhs;

    Solution sol;
    std::vector<bool> allowed(cols, true);

    if (n_art > 0) {
        Vec phase1 = Vec::Zero(cols);
        phase1.tail(n_art).setOnes();
        Status const s = optimize(tab, phase1, allowed, sol.iterations);
        if (s == Status::IterationLimit) {
            sol.status = s;
            return sol;
        }
        double infeas = 0.0;
        for (int r = 0; r < rows; ++r) {
            if (tab.basis[r] >= art0) infeas += tab.rhs(r);
        }
        double const scale = 1.0 + rhs.cwiseAbs().maxCoeff();
        if (infeas > 1e-9 * scale) {
            sol.status = Status::Infeasible;
            return sol;
        }
        // Drive remaining artificials out of the basis.
        for (int r = 0; r < rows; ++r) {
            if (tab.basis[r] < art0) continue;
            for (int j = 0; j < art0; ++j) {
                if (std::abs(tab.t(r, j)) > 1e-9) {
                    tab.pivot(r, j);
                    break;
                }
            }
        }
        for (int j = art0; j < cols; ++j) allowed[j] = false;
    }

    Vec cost = Vec::Zero(cols);
    for (int i = 0; i < n0; ++i) {
        cost[pos[i]] = p.cost[i];
        if (neg[i] >= 0) cost[neg[i]] = -p.cost[i];
    }
    Status const s = optimize(tab, cost, allowed, sol.iterations);
    sol.status = s;
    if (s != Status::Optimal) return sol;

    // Recover the vertex from the basis using the original data. Redundant
    // rows may keep an artificial basic at zero; those columns are dropped.
    std::vector<int> basic_rows, basic_cols;
    for (int r = 0; r < rows; ++r) {
        if (tab.basis[r] < art0) {
            basic_rows.push_back(r);
            basic_cols.push_back(tab.basis[r]);
        }
    }
    Vec xs = Vec::Zero(cols);
    for (int r = 0; r < rows; ++r) xs[tab.basis[r]] = std::max(tab.rhs(r), 0.0);
    if (!basic_cols.empty()) {
        int const k = static_cast<int>(basic_cols.size());
        Mat bmat(k, k);
        Vec brhs(k);
        for (int i = 0; i < k; ++i) {
            brhs[i] = rhs[basic_rows[i]];
            for (int j = 0; j < k; ++j) bmat(i, j) = standard(basic_rows[i], basic_cols[j]);
        }
        Eigen::FullPivLU<Mat> lu(bmat);
        if (lu.isInvertible()) {
            Vec xb = lu.solve(brhs);
            if ((bmat * xb - brhs).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + brhs.cwiseAbs().maxCoeff())) {
                for (int i = 0; i < k; ++i) xs[basic_cols[i]] = std::max(xb[i], 0.0);
            }
        }
    }

    sol.x.resize(n0);
    for (int i = 0; i < n0; ++i) {
        sol.x[i] = xs[pos[i]] - (neg[i] >= 0 ? xs[neg[i]] : 0.0);
    }
    sol.objective = p.cost.dot(sol.x);
    return sol;
}

}  // namespace truncpol::lp

#include "truncpol/solvers.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace truncpol {

Vec clamp_to(Interval const& box, Vec const& x) {
    if (box.dim() != x.size()) throw ArgumentError("clamp_to: dimension mismatch");
    return x.cwiseMax(box.lower()).cwiseMin(box.upper());
}

namespace {

Mat rows_of(HPolytope const& poly, std::vector<int> const& idx) {
    Mat out(idx.size(), poly.dim());
    for (std::size_t k = 0; k < idx.size(); ++k) out.row(k) = poly.normals().row(idx[k]);
    return out;
}

// Multipliers of the equality-constrained step on the working set.
Vec working_multipliers(Mat const& aw, Vec const& inv_w, Vec const& g) {
    Mat const m = aw * inv_w.asDiagonal() * aw.transpose();
    Vec const rhs = -(aw * inv_w.asDiagonal() * g);
    return m.colPivHouseholderQr().solve(rhs);
}

}  // namespace

Vec solve_mode_qp(QpProblem const& p) {
    HPolytope const& poly = p.constraints;
    Eigen::Index const d = poly.dim();
    if (p.weights.size() != d || p.target.size() != d) {
        throw ArgumentError("solve_mode_qp: dimension mismatch");
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!(p.weights[i] > 0.0)) throw ArgumentError("solve_mode_qp: weights must be positive");
    }
    if (contains(poly, p.target)) return p.target;

    Vec const inv_w = p.weights.cwiseInverse();
    Vec x = capped_interior_point(poly, 1.0).center;
    std::vector<int> working;
    Vec lambda;
    int const m = static_cast<int>(poly.rows());
    int const max_iter = 50 * m;
    double const scale = 1.0 + p.target.cwiseAbs().maxCoeff() + x.cwiseAbs().maxCoeff();

    bool converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        Vec const g = p.weights.cwiseProduct(x - p.target);
        Vec step;
        if (working.empty()) {
            lambda.resize(0);
            step = p.target - x;
        } else {
            Mat const aw = rows_of(poly, working);
            lambda = working_multipliers(aw, inv_w, g);
            step = -inv_w.cwiseProduct(g + aw.transpose() * lambda);
        }

        if (step.cwiseAbs().maxCoeff() <= 1e-13 * scale) {
            if (working.empty()) {
                converged = true;
                break;
            }
            Eigen::Index worst = -1;
            double most_negative = -1e-12;
            for (Eigen::Index k = 0; k < lambda.size(); ++k) {
                if (lambda[k] < most_negative ||
                    (worst >= 0 && lambda[k] == most_negative && working[k] < working[worst])) {
                    most_negative = lambda[k];
                    worst = k;
                }
            }
            if (worst < 0) {
                converged = true;
                break;
            }
            working.erase(working.begin() + worst);
            continue;
        }

        double alpha = 1.0;
        int blocking = -1;
        for (int j = 0; j < m; ++j) {
            if (std::find(working.begin(), working.end(), j) != working.end()) continue;
            double const rate = poly.normals().row(j).dot(step);
            if (rate <= 1e-14 * step.norm()) continue;
            double const room = std::max(poly.offsets()[j] - poly.normals().row(j).dot(x), 0.0);
            double const t = room / rate;
            if (t < alpha) {
                alpha = t;
                blocking = j;
            }
        }
        x += alpha * step;
        if (blocking >= 0) working.push_back(blocking);
    }
    if (!converged) {
        throw NumericError("solve_mode_qp: active-set iteration limit", std::nan(""));
    }

    // Re-project exactly onto the active face.
    if (!working.empty()) {
        Mat const aw = rows_of(poly, working);
        Vec bw(working.size());
        for (std::size_t k = 0; k < working.size(); ++k) bw[k] = poly.offsets()[working[k]];
        Mat const mm = aw * inv_w.asDiagonal() * aw.transpose();
        Vec const mult = mm.colPivHouseholderQr().solve(aw * p.target - bw);
        Vec const polished = p.target - inv_w.cwiseProduct(aw.transpose() * mult);
        if (contains(poly, polished, 1e-12 * scale) && (mult.array() >= -1e-10).all()) {
            x = polished;
            lambda = mult;
        }
    }

    Vec const g = p.weights.cwiseProduct(x - p.target);
    Vec stat = g;
    if (!working.empty()) stat += rows_of(poly, working).transpose() * lambda;
    double const residual = stat.cwiseAbs().maxCoeff() / (1.0 + g.cwiseAbs().maxCoeff());
    double violation = 0.0;
    for (int j = 0; j < m; ++j) {
        violation = std::max(violation, poly.normals().row(j).dot(x) - poly.offsets()[j]);
    }
    if (residual > 1e-8 || violation > 1e-9 * scale) {
        throw NumericError("solve_mode_qp: KKT conditions not met", std::max(residual, violation));
    }
    return x;
}

namespace {

struct BoxKkt {
    Vec x;  // (c, r)
    Vec lambda;
    double residual = std::numeric_limits<double>::infinity();
};

// Residual of the optimality conditions of  min -sum log r  s.t.  Q x <= b:
// stationarity, dual feasibility, complementarity and primal feasibility.
double box_kkt_residual(Mat const& Q, Vec const& b, Vec const& x, Vec const& lambda, Eigen::Index d) {
    Vec grad = Vec::Zero(2 * d);
    grad.tail(d) = -x.tail(d).cwiseInverse();
    Vec const s = b - Q * x;
    double res = (grad + Q.transpose() * lambda).cwiseAbs().maxCoeff();
    res = std::max(res, std::max(0.0, -lambda.minCoeff()));
    res = std::max(res, lambda.cwiseProduct(s).cwiseAbs().maxCoeff());
    res = std::max(res, std::max(0.0, -s.minCoeff()));
    return res;
}

// Newton on the equality-constrained problem over a guessed active set,
// dropping constraints whose multipliers come out negative.
std::optional<BoxKkt> polish_box(Mat const& Q, Vec const& b, Vec x, std::vector<int> active, Eigen::Index d) {
    Eigen::Index const m = Q.rows();
    for (int round = 0; round < 2 * static_cast<int>(m) && !active.empty(); ++round) {
        auto const k = static_cast<Eigen::Index>(active.size());
        Mat G(k, 2 * d);
        Vec h(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            G.row(i) = Q.row(active[static_cast<std::size_t>(i)]);
            h[i] = b[active[static_cast<std::size_t>(i)]];
        }
        Vec nu = Vec::Zero(k);
        bool moved_ok = true;
        for (int it = 0; it < 50; ++it) {
            Vec grad = Vec::Zero(2 * d);
            grad.tail(d) = -x.tail(d).cwiseInverse();
            Mat K = Mat::Zero(2 * d + k, 2 * d + k);
            K.topLeftCorner(2 * d, 2 * d).diagonal().tail(d) = x.tail(d).cwiseAbs2().cwiseInverse();
            K.topRightCorner(2 * d, k) = G.transpose();
            K.bottomLeftCorner(k, 2 * d) = G;
            Vec rhs(2 * d + k);
            rhs << -grad, h - G * x;
            Vec const sol = K.completeOrthogonalDecomposition().solve(rhs);
            Vec const step = sol.head(2 * d);
            nu = sol.tail(k);
            // Stay in r > 0 and inside the constraints that are not active.
            double alpha = 1.0;
            for (Eigen::Index i = 0; i < d; ++i)
                if (step[d + i] < 0) alpha = std::min(alpha, 0.9 * x[d + i] / -step[d + i]);
            Vec const xn = x + alpha * step;
            Vec const sn = b - Q * xn;
            for (Eigen::Index j = 0; j < m; ++j) {
                if (std::find(active.begin(), active.end(), static_cast<int>(j)) != active.end()) continue;
                if (sn[j] < 0) moved_ok = false;
            }
            if (!moved_ok) break;
            x = xn;
            if (step.norm() <= 1e-15 * (1.0 + x.norm())) break;
        }
        if (!moved_ok) return std::nullopt;
        Eigen::Index worst = 0;
        if (nu.minCoeff(&worst) < -1e-12) {
            active.erase(active.begin() + worst);
            continue;
        }
        BoxKkt out;
        out.x = x;
        out.lambda = Vec::Zero(m);
        for (Eigen::Index i = 0; i < k; ++i) out.lambda[active[static_cast<std::size_t>(i)]] = std::max(0.0, nu[i]);
        out.residual = box_kkt_residual(Q, b, x, out.lambda, d);
        return out;
    }
    return std::nullopt;
}

}  // namespace

InscribedBoxResult solve_inscribed_box(HPolytope const& poly, BarrierOptions const& opts) {
    Eigen::Index const d = poly.dim();
    Eigen::Index const m = poly.rows();
    Mat Q(m, 2 * d);
    Q << poly.normals(), poly.normals().cwiseAbs();
    Vec const& b = poly.offsets();

    ChebyshevBall const ball = chebyshev_center(poly);
    Vec x(2 * d);
    x << ball.center, Vec::Constant(d, 0.5 * ball.radius / std::sqrt(static_cast<double>(d)));

    // Barrier objective scaled by 1/t so its magnitude stays O(1).
    auto objective = [&](double t, Vec const& xx) {
        Vec const s = b - Q * xx;
        if ((s.array() <= 0.0).any() || (xx.tail(d).array() <= 0.0).any())
            return std::numeric_limits<double>::infinity();
        return -xx.tail(d).array().log().sum() - s.array().log().sum() / t;
    };

    InscribedBoxResult out;
    double t = 1.0;
    BoxKkt barrier_point;
    // Past t ~ 1e7 the slacks of near-active rows lose relative precision;
    // the active-set polish takes over from there.
    constexpr double kFinalT = 1e6;
    for (;;) {
        int it = 0;
        for (; it < opts.max_newton_per_stage; ++it) {
            Vec const inv_s = (b - Q * x).cwiseInverse();
            Vec grad = Q.transpose() * inv_s / t;
            grad.tail(d) -= x.tail(d).cwiseInverse();
            Mat const Qs = inv_s.asDiagonal() * Q;
            Mat H = Qs.transpose() * Qs / t;
            H.diagonal().tail(d) += x.tail(d).cwiseInverse().cwiseAbs2();
            Vec const step = -H.ldlt().solve(grad);
            double const decrement = -grad.dot(step);
            if (!std::isfinite(decrement))
                throw NumericError("solve_inscribed_box: singular Newton system", barrier_point.residual);
            if (decrement <= 1e-13) break;
            double alpha = 1.0;
            double const f0 = objective(t, x);
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls) {
                if (objective(t, x + alpha * step) <= f0 - 0.25 * alpha * decrement) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            ++out.newton_iterations;
            if (!accepted) break;  // no further decrease representable
            x += alpha * step;
        }
        if (it >= opts.max_newton_per_stage)
            throw NumericError("solve_inscribed_box: centering did not converge", barrier_point.residual);
        Vec const s = b - Q * x;
        barrier_point.x = x;
        barrier_point.lambda = s.cwiseInverse() / t;
        barrier_point.residual = box_kkt_residual(Q, b, x, barrier_point.lambda, d);
        if (barrier_point.residual <= opts.tolerance || t >= kFinalT) break;
        t *= opts.reduction;
    }

    BoxKkt best = barrier_point;
    if (best.residual > opts.tolerance) {
        double const lam_max = barrier_point.lambda.maxCoeff();
        // Try a strict multiplier cut first, then a looser one that also
        // keeps weakly active rows.
        for (double cut : {1e-3, 1e-5}) {
            std::vector<int> active;
            for (Eigen::Index j = 0; j < m; ++j)
                if (barrier_point.lambda[j] >= cut * lam_max) active.push_back(static_cast<int>(j));
            auto polished = polish_box(Q, b, barrier_point.x, active, d);
            if (polished && polished->residual < best.residual && (polished->x.tail(d).array() > 0).all())
                best = *polished;
            if (best.residual <= opts.tolerance) break;
        }
        // A nearly active row can clear both cuts and make the guessed set
        // inconsistent; fall back to the k largest multipliers.
        if (best.residual > opts.tolerance) {
            std::vector<int> order(static_cast<std::size_t>(m));
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](int i, int j) { return barrier_point.lambda[i] > barrier_point.lambda[j]; });
            for (std::size_t k = 1; k <= order.size() && best.residual > opts.tolerance; ++k) {
                std::vector<int> active(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
                auto polished = polish_box(Q, b, barrier_point.x, active, d);
                if (polished && polished->residual < best.residual && (polished->x.tail(d).array() > 0).all())
                    best = *polished;
            }
        }
    }
    if (best.residual > opts.tolerance)
        throw NumericError("solve_inscribed_box: KKT residual above tolerance", best.residual);
    out.center = best.x.head(d);
    out.half_widths = best.x.tail(d);
    out.kkt_residual = best.residual;
    return out;
}

}  // namespace truncpol

#include "truncpol/truncmvn.hpp"

#include <algorithm>
#include <cmath>

#include "truncpol/solvers.hpp"

namespace truncpol {
namespace {

double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double const m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

char const* to_string(ApproxMode mode) {
    switch (mode) {
        case ApproxMode::Inner: return "inner";
        case ApproxMode::Outer: return "outer";
        case ApproxMode::Combined: return "combined";
        case ApproxMode::Original: return "original";
    }
    return "?";
}

double outer_weight(Eigen::Index d) { return std::ldexp(1.0, -static_cast<int>(d)); }

PolytopeTrunc::PolytopeTrunc(DiagGaussian base, HPolytope set, ApproxMode mode)
    : base_(std::move(base)), set_(std::move(set)), mode_(mode) {
    if (base_.dim() != set_.dim()) throw ArgumentError("PolytopeTrunc: dimension mismatch");
    outer_ = outer_interval(set_);
    inner_ = box_inside(outer_, set_) ? outer_ : inner_interval(set_);
    build();
}

PolytopeTrunc::PolytopeTrunc(DiagGaussian base, HPolytope set, Interval inner, Interval outer,
                             ApproxMode mode)
    : base_(std::move(base)), set_(std::move(set)), inner_(std::move(inner)),
      outer_(std::move(outer)), mode_(mode) {
    if (base_.dim() != set_.dim() || inner_.dim() != set_.dim() || outer_.dim() != set_.dim()) {
        throw ArgumentError("PolytopeTrunc: dimension mismatch");
    }
    build();
}

void PolytopeTrunc::build() {
    double const tol = 1e-9 * (1.0 + set_.offsets().cwiseAbs().maxCoeff());
    if (!box_inside(inner_, set_, tol)) {
        throw ArgumentError("PolytopeTrunc: inner box not contained in the set");
    }
    for (Eigen::Index i = 0; i < dim(); ++i) {
        if (outer_.lower()[i] > inner_.lower()[i] + tol || outer_.upper()[i] < inner_.upper()[i] - tol) {
            throw ArgumentError("PolytopeTrunc: outer box does not enclose inner box");
        }
    }
    boxes_coincide_ = inner_ == outer_;
    if (mode_ == ApproxMode::Original) return;
    try {
        outer_trunc_.emplace(base_, outer_);
    } catch (UnderflowError const& e) {
        throw LowMassError("PolytopeTrunc: outer box carries no representable mass",
                           e.log_mass());
    }
    if (boxes_coincide_) {
        inner_trunc_ = outer_trunc_;
        return;
    }
    try {
        inner_trunc_.emplace(base_, inner_);
    } catch (UnderflowError const&) {
        inner_trunc_.reset();
    } catch (ArgumentError const&) {
        inner_trunc_.reset();  // zero-width inner box
    }
}

double PolytopeTrunc::approx_log_z() const {
    if (mode_ == ApproxMode::Original) {
        throw PreconditionError("approx_log_z: undefined for the original-metrics mode");
    }
    double const lz_out = outer_trunc_->log_z();
    if (mode_ == ApproxMode::Outer || !inner_trunc_) return lz_out;
    double const lz_in = inner_trunc_->log_z();
    if (mode_ == ApproxMode::Inner || boxes_coincide_) return lz_in;
    double const w = outer_weight(dim());
    return log_sum_exp(std::log1p(-w) + lz_in, std::log(w) + lz_out);
}

double PolytopeTrunc::approx_entropy() const {
    if (mode_ == ApproxMode::Original) {
        throw PreconditionError("approx_entropy: undefined for the original-metrics mode");
    }
    double const h_out = outer_trunc_->entropy();
    if (mode_ == ApproxMode::Outer || !inner_trunc_) return h_out;
    double const h_in = inner_trunc_->entropy();
    if (mode_ == ApproxMode::Inner || boxes_coincide_) return h_in;
    double const w = outer_weight(dim());
    return (1.0 - w) * h_in + w * h_out;
}

double PolytopeTrunc::log_prob(Vec const& a) const {
    if (a.size() != dim()) throw ArgumentError("PolytopeTrunc::log_prob: dimension mismatch");
    if (!contains(set_, a)) return kNegInf;
    double const base_lp = base_.log_pdf(a);
    if (mode_ == ApproxMode::Original) return base_lp;
    return base_lp - approx_log_z();
}

double PolytopeTrunc::combined_inner_share() const {
    double const w = outer_weight(dim());
    double const lz_c = approx_log_z();
    return std::exp(std::log1p(-w) + inner_trunc_->log_z() - lz_c);
}

PolytopeTrunc::Gradient PolytopeTrunc::grad_log_prob(Vec const& a) const {
    if (a.size() != dim()) throw ArgumentError("PolytopeTrunc::grad_log_prob: dimension mismatch");
    if (!contains(set_, a, 1e-9)) {
        throw ArgumentError("PolytopeTrunc::grad_log_prob: action outside the set");
    }
    Gradient g;
    base_.score(a, g.d_mu, g.d_sigma);
    if (mode_ == ApproxMode::Original) return g;

    FactorizedTrunc::Gradient lz;
    bool const use_outer_only = mode_ == ApproxMode::Outer || !inner_trunc_;
    if (use_outer_only) {
        lz = outer_trunc_->grad_log_z();
    } else if (mode_ == ApproxMode::Inner || boxes_coincide_) {
        lz = inner_trunc_->grad_log_z();
    } else {
        auto const gi = inner_trunc_->grad_log_z();
        auto const go = outer_trunc_->grad_log_z();
        double const share = combined_inner_share();
        lz.d_mu = share * gi.d_mu + (1.0 - share) * go.d_mu;
        lz.d_sigma = share * gi.d_sigma + (1.0 - share) * go.d_sigma;
    }
    g.d_mu -= lz.d_mu;
    g.d_sigma -= lz.d_sigma;
    return g;
}

Vec PolytopeTrunc::mode_point() const {
    return solve_mode_qp(
        QpProblem{base_.stddev.cwiseAbs2().cwiseInverse(), base_.mean, set_});
}

UnionTrunc::UnionTrunc(DiagGaussian base, IntervalUnion set)
    : base_(std::move(base)), set_(std::move(set)) {
    if (base_.dim() != set_.dim()) throw ArgumentError("UnionTrunc: dimension mismatch");
    std::vector<double> log_masses;
    for (auto const& member : set_.members()) {
        components_.emplace_back(base_, member);
        log_masses.push_back(components_.back().log_z());
    }
    double const top = *std::max_element(log_masses.begin(), log_masses.end());
    double acc = 0.0;
    for (double lm : log_masses) acc += std::exp(lm - top);
    log_z_ = top + std::log(acc);
    std::size_t const k = log_masses.size();
    weights_.resize(k);
    log_weights_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        log_weights_[i] = log_masses[i] - log_z_;
        weights_[i] = std::exp(log_weights_[i]);
    }
}

double UnionTrunc::pdf(Vec const& x) const {
    // w_i f_i(x) with f_i = base(x) 1[x in I_i] / Z_i.
    double const base_lp = base_.log_pdf(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (!contains(set_.members()[i], x)) continue;
        acc += std::exp(base_lp + (log_weights_[i] - components_[i].log_z()));
    }
    return acc;
}

double UnionTrunc::log_pdf(Vec const& x) const {
    if (!contains(set_, x)) return kNegInf;
    // Boundary points shared by two members are counted once.
    return base_.log_pdf(x) - log_z_;
}

double UnionTrunc::entropy() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        double const w = weights_[i];
        if (w > 0.0) acc -= w * log_weights_[i];
        acc += w * components_[i].entropy();
    }
    return acc;
}

double UnionTrunc::entropy_unweighted_components() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        double const w = weights_[i];
        if (w > 0.0) acc -= w * log_weights_[i];
        acc += components_[i].entropy();
    }
    return acc;
}

Vec UnionTrunc::mode() const {
    Vec best;
    double best_lp = kNegInf;
    for (auto const& member : set_.members()) {
        Vec const candidate = clamp_to(member, base_.mean);
        double const lp = base_.log_pdf(candidate);
        if (best.size() == 0 || lp > best_lp) {
            best = candidate;
            best_lp = lp;
        }
    }
    return best;
}

}  // namespace truncpol

#pragma once

#include <optional>
#include <vector>

#include "truncpol/geometry.hpp"
#include "truncpol/truncnorm.hpp"

namespace truncpol {

enum class ApproxMode { Inner, Outer, Combined, Original };

char const* to_string(ApproxMode mode);

/// Weight 2^-d given to the outer box in the combined interpolation.
double outer_weight(Eigen::Index d);

/// Diagonal Gaussian truncated to a polytope, with metrics approximated
/// through the inscribed and bounding boxes of the polytope.
class PolytopeTrunc {
  public:
    PolytopeTrunc(DiagGaussian base, HPolytope set, ApproxMode mode);
    /// Reuse precomputed boxes (they depend on the set only).
    PolytopeTrunc(DiagGaussian base, HPolytope set, Interval inner, Interval outer,
                  ApproxMode mode);

    DiagGaussian const& base() const { return base_; }
    HPolytope const& set() const { return set_; }
    Interval const& inner() const { return inner_; }
    Interval const& outer() const { return outer_; }
    ApproxMode mode() const { return mode_; }
    Eigen::Index dim() const { return base_.dim(); }

    /// True when the inner box carried too little mass and the outer box
    /// was substituted.
    bool low_mass_fallback() const { return !inner_trunc_.has_value(); }

    double approx_log_z() const;
    double approx_entropy() const;
    double log_prob(Vec const& a) const;

    struct Gradient {
        Vec d_mu;
        Vec d_sigma;
    };
    /// Gradient of log_prob w.r.t. (mu, sigma), boxes held fixed.
    Gradient grad_log_prob(Vec const& a) const;

    Vec mode_point() const;

  private:
    void build();
    // Inner-box weight of the combined log Z gradient.
    double combined_inner_share() const;

    DiagGaussian base_;
    HPolytope set_;
    Interval inner_;
    Interval outer_;
    ApproxMode mode_;
    bool boxes_coincide_ = false;
    std::optional<FactorizedTrunc> inner_trunc_;
    std::optional<FactorizedTrunc> outer_trunc_;
};

/// Diagonal Gaussian truncated to a union of disjoint boxes, written as
/// the mixture sum_i w_i f(x; I_i) with w_i = Z_i / Z_U.
class UnionTrunc {
  public:
    UnionTrunc(DiagGaussian base, IntervalUnion set);

    DiagGaussian const& base() const { return base_; }
    IntervalUnion const& set() const { return set_; }
    Vec const& weights() const { return weights_; }
    std::vector<FactorizedTrunc> const& components() const { return components_; }
    Eigen::Index dim() const { return base_.dim(); }

    double pdf(Vec const& x) const;
    double log_pdf(Vec const& x) const;
    double log_z() const { return log_z_; }

    /// -sum w_i log w_i + sum w_i H_i.
    double entropy() const;
    /// The printed variant without w_i on the component entropies; kept
    /// so tests can show it disagrees with Monte Carlo.
    double entropy_unweighted_components() const;

    Vec mode() const;

  private:
    DiagGaussian base_;
    IntervalUnion set_;
    std::vector<FactorizedTrunc> components_;
    Vec weights_;
    Vec log_weights_;
    double log_z_ = 0.0;
};

}  // namespace truncpol

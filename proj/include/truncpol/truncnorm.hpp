#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "truncpol/geometry.hpp"
#include "truncpol/rng.hpp"
#include "truncpol/types.hpp"

namespace truncpol {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Smallest normalizing constant accepted before raising UnderflowError.
inline constexpr double kMinLogMass = -690.77552789821368;  // log(1e-300)

/// Standard normal density, CDF, and upper-tail CDF.
double phi_pdf(double x);
double phi_cdf(double x);
double phi_ccdf(double x);
/// log(1 - Phi(x)), accurate far into the upper tail.
double log_phi_ccdf(double x);
/// Inverse CDF on (0, 1); accurate to ~1e-12 in probability.
double phi_inv(double p);

/// log(Phi(hi) - Phi(lo)) for standardized bounds lo < hi (either may be
/// infinite). Stays finite where the direct difference underflows.
double log_std_mass(double lo, double hi);

struct Normal1d {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Normal(mu, sigma) restricted to [lower, upper] and renormalized.
class TruncNormal1d {
  public:
    TruncNormal1d(Normal1d base, double lower, double upper);

    Normal1d const& base() const { return base_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    double log_z() const { return log_z_; }
    /// Standardized bounds (lower - mu)/sigma, (upper - mu)/sigma.
    double std_lower() const { return std_lower_; }
    double std_upper() const { return std_upper_; }

    double log_pdf(double x) const;
    double cdf(double x) const;
    double entropy() const;
    double mode() const;
    double mean() const;

    /// Inverse-transform draw from a uniform variate y in [0, 1].
    double quantile(double y) const;
    double sample(Rng& rng) const { return quantile(rng.uniform()); }
    /// Standardized quantile in [std_lower, std_upper].
    double std_quantile(double y) const;

    /// d log_pdf(x) / d(mu, sigma) including the normalizer terms.
    std::pair<double, double> grad_log_pdf(double x) const;
    /// d log Z / d(mu, sigma).
    std::pair<double, double> grad_log_z() const;

  private:
    // phi(bound)/Z and bound*phi(bound)/Z, zero for infinite bounds.
    double density_ratio(double std_bound) const;
    double moment_ratio(double std_bound) const;

    Normal1d base_;
    double lower_;
    double upper_;
    double std_lower_;
    double std_upper_;
    double log_z_;
};

/// Product of independent truncated marginals: a diagonal Gaussian
/// truncated to a box.
class FactorizedTrunc {
  public:
    explicit FactorizedTrunc(std::vector<TruncNormal1d> marginals);
    FactorizedTrunc(DiagGaussian const& base, Interval const& box);

    std::vector<TruncNormal1d> const& marginals() const { return marginals_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(marginals_.size()); }

    double log_z() const;
    double log_prob(Vec const& a) const;
    double entropy() const;
    Vec mode() const;
    Vec mean() const;
    Vec sample(Rng& rng) const;

    struct Gradient {
        Vec d_mu;
        Vec d_sigma;
    };
    Gradient grad_log_prob(Vec const& a) const;
    Gradient grad_log_z() const;

  private:
    std::vector<TruncNormal1d> marginals_;
};

}  // namespace truncpol

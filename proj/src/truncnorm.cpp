#include "truncpol/truncnorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace truncpol {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

double log_phi_pdf(double x) { return -0.5 * x * x - kHalfLog2Pi; }

// Rational initial guess for the lower half (p <= 0.5), Acklam's coefficients.
double inverse_guess_lower(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00, 2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    if (p < 0.02425) {
        double const q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double const q = p - 0.5;
    double const r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Phi^{-1}(p) for p in [0, 0.5], refined by Newton steps on Phi.
double inverse_lower(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    double x = inverse_guess_lower(p);
    for (int k = 0; k < 3; ++k) {
        double const dens = phi_pdf(x);
        if (dens <= 0.0) break;
        double const step = (phi_cdf(x) - p) / dens;
        x -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

// Phi^{-1} extended to the closed unit interval.
double inverse_closed(double p) {
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    if (p > 0.5) return -inverse_lower(1.0 - p);
    return inverse_lower(p);
}

// Upper-tail inverse: x with Phi_c(x) = q.
double inverse_upper_tail(double q) { return -inverse_closed(q); }

}  // namespace

double phi_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double phi_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double phi_ccdf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double log_phi_ccdf(double x) {
    if (x < 30.0) return std::log(phi_ccdf(x));
    // Asymptotic expansion of the Mills ratio.
    double const inv2 = 1.0 / (x * x);
    double const series = 1.0 - inv2 * (1.0 - 3.0 * inv2 * (1.0 - 5.0 * inv2));
    return -0.5 * x * x - std::log(x) - kHalfLog2Pi + std::log(series);
}

double phi_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("phi_inv: probability must lie in (0, 1)");
    }
    return inverse_closed(p);
}

double log_std_mass(double lo, double hi) {
    if (!(lo < hi)) throw ArgumentError("log_std_mass: need lo < hi");
    if (lo >= 0.0) {
        double const la = log_phi_ccdf(lo);
        double const lb = std::isinf(hi) ? kNegInf : log_phi_ccdf(hi);
        return la + std::log1p(-std::exp(lb - la));
    }
    if (hi <= 0.0) return log_std_mass(-hi, -lo);
    // Straddles zero: erf halves add without cancellation.
    double const right = std::isinf(hi) ? 1.0 : std::erf(hi * kInvSqrt2);
    double const left = std::isinf(lo) ? 1.0 : std::erf(-lo * kInvSqrt2);
    return std::log(0.5 * (right + left));
}

TruncNormal1d::TruncNormal1d(Normal1d base, double lower, double upper)
    : base_(base), lower_(lower), upper_(upper) {
    if (!(base.sigma > 0.0) || !std::isfinite(base.sigma) || !std::isfinite(base.mu)) {
        throw ArgumentError("TruncNormal1d: sigma must be positive and finite");
    }
    if (!(lower < upper)) throw ArgumentError("TruncNormal1d: need lower < upper");
    std_lower_ = (lower - base.mu) / base.sigma;
    std_upper_ = (upper - base.mu) / base.sigma;
    log_z_ = log_std_mass(std_lower_, std_upper_);
    if (!(log_z_ >= kMinLogMass)) {
        throw UnderflowError("TruncNormal1d: normalizing constant underflows", log_z_);
    }
}

double TruncNormal1d::density_ratio(double s) const {
    if (std::isinf(s)) return 0.0;
    return std::exp(log_phi_pdf(s) - log_z_);
}

double TruncNormal1d::moment_ratio(double s) const {
    if (std::isinf(s)) return 0.0;
    return s * density_ratio(s);
}

double TruncNormal1d::log_pdf(double x) const {
    if (!(x >= lower_ && x <= upper_)) return kNegInf;
    double const z = (x - base_.mu) / base_.sigma;
    return log_phi_pdf(z) - std::log(base_.sigma) - log_z_;
}

double TruncNormal1d::cdf(double x) const {
    if (x <= lower_) return 0.0;
    if (x >= upper_) return 1.0;
    double const z = (x - base_.mu) / base_.sigma;
    return std::min(1.0, std::exp(log_std_mass(std_lower_, z) - log_z_));
}

double TruncNormal1d::entropy() const {
    constexpr double half_log_2pi_e = 1.4189385332046727418;
    return half_log_2pi_e + std::log(base_.sigma) + log_z_ -
           0.5 * (moment_ratio(std_upper_) - moment_ratio(std_lower_));
}

double TruncNormal1d::mode() const {
    if (base_.mu <= lower_) return lower_;
    if (base_.mu >= upper_) return upper_;
    return base_.mu;
}

double TruncNormal1d::mean() const {
    return base_.mu + base_.sigma * (density_ratio(std_lower_) - density_ratio(std_upper_));
}

double TruncNormal1d::std_quantile(double y) const {
    y = std::clamp(y, 0.0, 1.0);
    double x;
    if (std_lower_ >= 0.0) {
        // Upper tail: walk down from Phi_c(l').
        double const top = phi_ccdf(std_lower_);
        x = inverse_upper_tail(top - y * std::exp(log_z_));
    } else if (std_upper_ <= 0.0) {
        double const bottom = phi_cdf(std_lower_);
        x = inverse_closed(bottom + y * std::exp(log_z_));
    } else {
        double const bottom = std::isinf(std_lower_) ? 0.0 : phi_cdf(std_lower_);
        x = inverse_closed(bottom + y * std::exp(log_z_));
    }
    return std::clamp(x, std_lower_, std_upper_);
}

double TruncNormal1d::quantile(double y) const {
    if (y <= 0.0) return lower_;
    if (y >= 1.0) return upper_;
    double const q = base_.mu + base_.sigma * std_quantile(y);
    return std::clamp(q, lower_, upper_);
}

std::pair<double, double> TruncNormal1d::grad_log_z() const {
    double const s = base_.sigma;
    return {-(density_ratio(std_upper_) - density_ratio(std_lower_)) / s,
            -(moment_ratio(std_upper_) - moment_ratio(std_lower_)) / s};
}

std::pair<double, double> TruncNormal1d::grad_log_pdf(double x) const {
    if (!(x >= lower_ && x <= upper_)) {
        throw ArgumentError("grad_log_pdf: point outside the truncation interval");
    }
    double const s = base_.sigma;
    double const z = (x - base_.mu) / s;
    auto const [gz_mu, gz_sigma] = grad_log_z();
    return {z / s - gz_mu, (z * z - 1.0) / s - gz_sigma};
}

FactorizedTrunc::FactorizedTrunc(std::vector<TruncNormal1d> marginals)
    : marginals_(std::move(marginals)) {
    if (marginals_.empty()) throw ArgumentError("FactorizedTrunc: need d >= 1");
}

namespace {

std::vector<TruncNormal1d> build_marginals(DiagGaussian const& base, Interval const& box) {
    if (base.dim() != box.dim()) throw ArgumentError("FactorizedTrunc: dimension mismatch");
    std::vector<TruncNormal1d> out;
    out.reserve(base.dim());
    for (Eigen::Index i = 0; i < base.dim(); ++i) {
        out.emplace_back(Normal1d{base.mean[i], base.stddev[i]}, box.lower()[i], box.upper()[i]);
    }
    return out;
}

}  // namespace

FactorizedTrunc::FactorizedTrunc(DiagGaussian const& base, Interval const& box)
    : FactorizedTrunc(build_marginals(base, box)) {}

double FactorizedTrunc::log_z() const {
    double acc = 0.0;
    for (auto const& m : marginals_) acc += m.log_z();
    return acc;
}

double FactorizedTrunc::log_prob(Vec const& a) const {
    if (a.size() != dim()) throw ArgumentError("FactorizedTrunc::log_prob: dimension mismatch");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < dim(); ++i) {
        double const lp = marginals_[i].log_pdf(a[i]);
        if (lp == kNegInf) return kNegInf;
        acc += lp;
    }
    return acc;
}

double FactorizedTrunc::entropy() const {
    double acc = 0.0;
    for (auto const& m : marginals_) acc += m.entropy();
    return acc;
}

Vec FactorizedTrunc::mode() const {
    Vec out(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) out[i] = marginals_[i].mode();
    return out;
}

Vec FactorizedTrunc::mean() const {
    Vec out(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) out[i] = marginals_[i].mean();
    return out;
}

Vec FactorizedTrunc::sample(Rng& rng) const {
    Vec out(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) out[i] = marginals_[i].sample(rng);
    return out;
}

FactorizedTrunc::Gradient FactorizedTrunc::grad_log_prob(Vec const& a) const {
    if (a.size() != dim()) throw ArgumentError("FactorizedTrunc::grad_log_prob: dimension mismatch");
    Gradient g{Vec(dim()), Vec(dim())};
    for (Eigen::Index i = 0; i < dim(); ++i) {
        auto const [dm, ds] = marginals_[i].grad_log_pdf(a[i]);
        g.d_mu[i] = dm;
        g.d_sigma[i] = ds;
    }
    return g;
}

FactorizedTrunc::Gradient FactorizedTrunc::grad_log_z() const {
    Gradient g{Vec(dim()), Vec(dim())};
    for (Eigen::Index i = 0; i < dim(); ++i) {
        auto const [dm, ds] = marginals_[i].grad_log_z();
        g.d_mu[i] = dm;
        g.d_sigma[i] = ds;
    }
    return g;
}

}  // namespace truncpol

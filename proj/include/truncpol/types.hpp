#pragma once

#include <Eigen/Dense>

#include "truncpol/errors.hpp"

namespace truncpol {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Untruncated factorized Gaussian N(mean, diag(stddev^2)).
struct DiagGaussian {
    Vec mean;
    Vec stddev;

    DiagGaussian() = default;
    DiagGaussian(Vec m, Vec s) : mean(std::move(m)), stddev(std::move(s)) {
        if (mean.size() != stddev.size() || mean.size() < 1) {
            throw ArgumentError("DiagGaussian: mean/stddev size mismatch");
        }
        for (Eigen::Index i = 0; i < stddev.size(); ++i) {
            if (!(stddev[i] > 0.0) || !std::isfinite(stddev[i]) ||
                !std::isfinite(mean[i])) {
                throw ArgumentError("DiagGaussian: stddev must be positive and finite");
            }
        }
    }

    Eigen::Index dim() const { return mean.size(); }

    /// Log density of the untruncated Gaussian.
    double log_pdf(Vec const& x) const;

    /// Score of the untruncated log density w.r.t. mean and stddev.
    void score(Vec const& x, Vec& d_mean, Vec& d_stddev) const;
};

inline double DiagGaussian::log_pdf(Vec const& x) const {
    constexpr double half_log_2pi = 0.91893853320467274178;
    if (x.size() != dim()) {
        throw ArgumentError("DiagGaussian::log_pdf: dimension mismatch");
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < dim(); ++i) {
        double const z = (x[i] - mean[i]) / stddev[i];
        acc += -0.5 * z * z - std::log(stddev[i]) - half_log_2pi;
    }
    return acc;
}

inline void DiagGaussian::score(Vec const& x, Vec& d_mean, Vec& d_stddev) const {
    if (x.size() != dim()) {
        throw ArgumentError("DiagGaussian::score: dimension mismatch");
    }
    d_mean.resize(dim());
    d_stddev.resize(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) {
        double const z = (x[i] - mean[i]) / stddev[i];
        d_mean[i] = z / stddev[i];
        d_stddev[i] = (z * z - 1.0) / stddev[i];
    }
}

}  // namespace truncpol

#pragma once

#include <span>

#include <Eigen/Core>

#include "simsize/records.hpp"

namespace simsize {

/// Fixed-design unknowns: power = Phi(z_target + e^s (sqrt(N) - X0)).
struct FixedDesignParams {
    double log_slope_s = 0.0;   ///< s; the probit slope per sqrt-patient is e^s
    double size_root_x0 = 0.0;  ///< X0, sqrt of the size reaching the target
};

/// Per-record quantities shared by the gradient and Hessian.
struct InnerTerms {
    double inner_i = 0.0;      ///< I = z_target + e^s (sqrt(N) - X0)
    double shift_s = 0.0;      ///< S = e^s (sqrt(N) - X0) = I - z_target
    double hazard = 0.0;       ///< phi(I) / Phi_pm(I)
    double curvature_d = 0.0;  ///< D = d/dI [phi(I) / Phi_pm(I)]
    double slope = 0.0;        ///< e^s (or e^{s(v)} for varying designs)
    int sign = 1;              ///< +1 success, -1 failure
};

/// Fills hazard and curvature for an already-computed inner term.
InnerTerms complete_inner_terms(double inner, double shift, double slope, int sign);

InnerTerms inner_term(const FixedDesignParams& params, const SimRecord& rec,
                      const TargetSpec& target);

/// Sum over records of ln Phi_pm(I).
double loglik_0d(const FixedDesignParams& params, std::span<const SimRecord> records,
                 const TargetSpec& target);

/// Gradient in (s, X0) order.
Eigen::Vector2d grad_0d(const FixedDesignParams& params, std::span<const SimRecord> records,
                        const TargetSpec& target);

/// Hessian in (s, X0) order; exactly symmetric.
Eigen::Matrix2d hessian_0d(const FixedDesignParams& params,
                           std::span<const SimRecord> records, const TargetSpec& target);

}  // namespace simsize

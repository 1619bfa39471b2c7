#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "simsize/probit0d.hpp"
#include "simsize/records.hpp"

namespace simsize {

/// Polynomial coefficients in the scaled design value v in [-1, 1]:
///   s(v)  = s_0 + s_1 v + ... + s_{J-1} v^{J-1}
///   X0(v) = x_0 + x_1 v + ... + x_{K-1} v^{K-1}
struct VaryingDesignParams {
    std::vector<double> slope_coefs{0.0};
    std::vector<double> size_coefs{0.0};

    std::size_t n_params() const { return slope_coefs.size() + size_coefs.size(); }
};

/// Horner evaluation of sum_m coefs[m] v^m.
double eval_poly(std::span<const double> coefs, double scaled_v);

/// Tolerance on |scaled_v| <= 1 accepted by the likelihood functions.
inline constexpr double kScaledVSlack = 1e-9;

/// Throws std::invalid_argument if the record has no scaled_v or it lies
/// outside [-1, 1].
InnerTerms inner_term_1d(const VaryingDesignParams& params, const SimRecord& rec,
                         const TargetSpec& target);

double loglik_1d(const VaryingDesignParams& params, std::span<const SimRecord> records,
                 const TargetSpec& target);

/// Gradient ordered (s_0..s_{J-1}, x_0..x_{K-1}).
Eigen::VectorXd grad_1d(const VaryingDesignParams& params, std::span<const SimRecord> records,
                        const TargetSpec& target);

/// (J+K) x (J+K) Hessian in the same order as grad_1d; symmetric by
/// construction.
Eigen::MatrixXd hessian_1d(const VaryingDesignParams& params,
                           std::span<const SimRecord> records, const TargetSpec& target);

}  // namespace simsize

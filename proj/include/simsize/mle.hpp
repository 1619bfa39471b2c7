#pragma once

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "simsize/poly1d.hpp"
#include "simsize/probit0d.hpp"
#include "simsize/records.hpp"

namespace simsize {

/// Fixed design (2 parameters) or varying design with J slope and K size
/// coefficients.
struct ModelShape {
    bool varying_design = false;
    int n_slope_coefs = 1;
    int n_size_coefs = 1;

    static ModelShape fixed() { return {}; }
    static ModelShape varying(int n_slope, int n_size) { return {true, n_slope, n_size}; }

    int n_params() const { return n_slope_coefs + n_size_coefs; }
};

using ModelParams = std::variant<FixedDesignParams, VaryingDesignParams>;

/// Thrown when every record has the same outcome; the probit MLE does not
/// exist and the caller has to widen sampling.
class SeparationError : public std::runtime_error {
public:
    SeparationError(bool all_success, std::size_t n_records);
    bool all_success() const { return all_success_; }

private:
    bool all_success_;
};

struct FitOptions {
    double log_slope_min = -20.0;
    double log_slope_max = 20.0;
    double size_root_min = 0.0;
    double size_root_max = std::numeric_limits<double>::infinity();
    double gradient_tolerance = 1e-8;
    int max_iterations = 200;
};

struct FitResult {
    ModelShape shape;
    ModelParams params;
    double loglik = 0.0;
    /// Inverse observed information, parameters ordered as in the gradient.
    Eigen::MatrixXd covariance;
    bool converged = false;
    int n_iterations = 0;
    /// Ridge added to the negative Hessian before inversion (0 if none).
    double ridge = 0.0;
    /// Standard error of X0 (fixed design only, NaN otherwise).
    double se_x0 = std::numeric_limits<double>::quiet_NaN();

    const FixedDesignParams& fixed() const { return std::get<FixedDesignParams>(params); }
    const VaryingDesignParams& varying() const { return std::get<VaryingDesignParams>(params); }
};

/// One point of the size curve along the design parameter.
struct CurvePoint {
    double scaled_v = 0.0;
    double natural_v = 0.0;
    double size_root_estimate = 0.0;
    double size_root_se = 0.0;
    double size_estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Smallest reportable sample size.
inline constexpr double kMinSize = 4.0;

/// round(x^2), never below kMinSize.
double size_from_root(double size_root);

/// Starting point derived from the records; see the .cpp for the rule.
/// Requires at least one success and one failure.
ModelParams default_init(std::span<const SimRecord> records, const TargetSpec& target,
                         const ModelShape& shape);

/// Damped Newton maximisation of the log-likelihood with step halving.
/// Throws SeparationError when the outcomes are all equal, and
/// std::invalid_argument for fewer than 2 records or a shape/record mismatch.
FitResult fit(std::span<const SimRecord> records, const TargetSpec& target,
              const ModelShape& shape, const std::optional<ModelParams>& init = std::nullopt,
              const FitOptions& options = {});

/// The 201 scaled design values -1, -0.99, ..., 1.
std::vector<double> default_grid();

/// Pointwise X0(v) with delta-method standard errors and a 95% band on the
/// size scale. `natural_of` maps each scaled value to user units.
template <typename NaturalMap>
std::vector<CurvePoint> curve_with_ci(const FitResult& fit, std::span<const double> grid,
                                      NaturalMap natural_of);

std::vector<CurvePoint> curve_with_ci(const FitResult& fit, std::span<const double> grid);

namespace detail {
CurvePoint curve_point(const FitResult& fit, double scaled_v);
}

template <typename NaturalMap>
std::vector<CurvePoint> curve_with_ci(const FitResult& fit, std::span<const double> grid,
                                      NaturalMap natural_of) {
    std::vector<CurvePoint> out;
    out.reserve(grid.size());
    for (double v : grid) {
        auto point = detail::curve_point(fit, v);
        point.natural_v = natural_of(v);
        out.push_back(point);
    }
    return out;
}

}  // namespace simsize

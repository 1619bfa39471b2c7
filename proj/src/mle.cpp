#include "simsize/mle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "simsize/stats.hpp"

namespace simsize {
namespace {

constexpr double kZ975 = 1.959963984540054;
constexpr int kMaxHalvings = 60;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

ModelParams unpack(const Vector& theta, const ModelShape& shape) {
    if (!shape.varying_design) {
        return FixedDesignParams{theta(0), theta(1)};
    }
    VaryingDesignParams p;
    p.slope_coefs.assign(theta.data(), theta.data() + shape.n_slope_coefs);
    p.size_coefs.assign(theta.data() + shape.n_slope_coefs, theta.data() + theta.size());
    return p;
}

Vector pack(const ModelParams& params) {
    if (const auto* f = std::get_if<FixedDesignParams>(&params)) {
        return Eigen::Vector2d(f->log_slope_s, f->size_root_x0);
    }
    const auto& v = std::get<VaryingDesignParams>(params);
    Vector theta(static_cast<Eigen::Index>(v.n_params()));
    Eigen::Index m = 0;
    for (double c : v.slope_coefs) theta(m++) = c;
    for (double c : v.size_coefs) theta(m++) = c;
    return theta;
}

class Objective {
public:
    Objective(std::span<const SimRecord> records, const TargetSpec& target,
              const ModelShape& shape, const FitOptions& options)
        : records_(records), target_(target), shape_(shape), options_(options),
          grid_(default_grid()) {}

    double loglik(const Vector& theta) const {
        const auto p = unpack(theta, shape_);
        if (shape_.varying_design) {
            return loglik_1d(std::get<VaryingDesignParams>(p), records_, target_);
        }
        return loglik_0d(std::get<FixedDesignParams>(p), records_, target_);
    }

    Vector gradient(const Vector& theta) const {
        const auto p = unpack(theta, shape_);
        if (shape_.varying_design) {
            return grad_1d(std::get<VaryingDesignParams>(p), records_, target_);
        }
        return grad_0d(std::get<FixedDesignParams>(p), records_, target_);
    }

    Matrix hessian(const Vector& theta) const {
        const auto p = unpack(theta, shape_);
        if (shape_.varying_design) {
            return hessian_1d(std::get<VaryingDesignParams>(p), records_, target_);
        }
        return hessian_0d(std::get<FixedDesignParams>(p), records_, target_);
    }

    // Parameter box: log-slope and X0 inside their limits (on the whole v
    // grid for varying designs).
    bool in_box(const Vector& theta) const {
        if (!theta.allFinite()) return false;
        auto ok = [&](double s, double x0) {
            return s >= options_.log_slope_min && s <= options_.log_slope_max &&
                   x0 >= options_.size_root_min && x0 <= options_.size_root_max;
        };
        if (!shape_.varying_design) {
            return ok(theta(0), theta(1));
        }
        const auto p = std::get<VaryingDesignParams>(unpack(theta, shape_));
        return std::all_of(grid_.begin(), grid_.end(), [&](double v) {
            return ok(eval_poly(p.slope_coefs, v), eval_poly(p.size_coefs, v));
        });
    }

    void clamp_constants(Vector& theta) const {
        const Eigen::Index x0_at = shape_.varying_design ? shape_.n_slope_coefs : 1;
        theta(0) = std::clamp(theta(0), options_.log_slope_min, options_.log_slope_max);
        theta(x0_at) = std::clamp(theta(x0_at), options_.size_root_min, options_.size_root_max);
    }

private:
    std::span<const SimRecord> records_;
    TargetSpec target_;
    ModelShape shape_;
    FitOptions options_;
    std::vector<double> grid_;
};

// Solves (A + lambda I) d = rhs, raising lambda until A + lambda I is
// positive definite. Returns the lambda used.
double regularized_solve(const Matrix& a, const Vector& rhs, Vector& out) {
    const auto n = a.rows();
    const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
    double lambda = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
        Eigen::LLT<Matrix> llt(a + lambda * Matrix::Identity(n, n));
        if (llt.info() == Eigen::Success) {
            out = llt.solve(rhs);
            if (out.allFinite()) return lambda;
        }
        lambda = lambda == 0.0 ? 1e-10 * scale : lambda * 10.0;
    }
    out = rhs / scale;
    return lambda;
}

}  // namespace

SeparationError::SeparationError(bool all_success, std::size_t n_records)
    : std::runtime_error("separation: all " + std::to_string(n_records) + " simulations " +
                         (all_success ? "succeeded" : "failed") +
                         "; sampling has to be widened"),
      all_success_(all_success) {}

double size_from_root(double size_root) {
    return std::max(kMinSize, std::round(size_root * size_root));
}

std::vector<double> default_grid() {
    std::vector<double> grid(201);
    for (int g = 0; g <= 200; ++g) {
        grid[static_cast<std::size_t>(g)] = static_cast<double>(g - 100) / 100.0;
    }
    return grid;
}

// X0 starts halfway (in sqrt-size) between the mean failing and the mean
// succeeding simulation; s is set so that the observed sqrt-size range spans
// four probit units. Higher polynomial coefficients start at zero.
ModelParams default_init(std::span<const SimRecord> records, const TargetSpec& /*target*/,
                         const ModelShape& shape) {
    CompensatedSum root_success;
    CompensatedSum root_failure;
    std::size_t n_success = 0;
    std::size_t n_failure = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& rec : records) {
        if (rec.outcome) {
            root_success += rec.sqrt_size_x;
            ++n_success;
        } else {
            root_failure += rec.sqrt_size_x;
            ++n_failure;
        }
        lo = std::min(lo, rec.sqrt_size_x);
        hi = std::max(hi, rec.sqrt_size_x);
    }
    if (n_success == 0 || n_failure == 0) {
        throw SeparationError(n_failure == 0, records.size());
    }
    const double x0 = 0.5 * (root_success.value() / static_cast<double>(n_success) +
                             root_failure.value() / static_cast<double>(n_failure));
    const double range = std::max(hi - lo, 1.0);
    const double s = std::log(4.0 / range);
    if (!shape.varying_design) {
        return FixedDesignParams{s, x0};
    }
    VaryingDesignParams p;
    p.slope_coefs.assign(static_cast<std::size_t>(shape.n_slope_coefs), 0.0);
    p.size_coefs.assign(static_cast<std::size_t>(shape.n_size_coefs), 0.0);
    p.slope_coefs[0] = s;
    p.size_coefs[0] = x0;
    return p;
}

FitResult fit(std::span<const SimRecord> records, const TargetSpec& target,
              const ModelShape& shape, const std::optional<ModelParams>& init,
              const FitOptions& options) {
    if (records.size() < 2) {
        throw std::invalid_argument("fit: at least two simulations are required");
    }
    if (shape.n_slope_coefs < 1 || shape.n_size_coefs < 1 ||
        (!shape.varying_design && (shape.n_slope_coefs != 1 || shape.n_size_coefs != 1))) {
        throw std::invalid_argument("fit: invalid model shape");
    }
    for (const auto& rec : records) {
        if (rec.scaled_v.has_value() != shape.varying_design) {
            throw std::invalid_argument(
                "fit: record dimensionality does not match the model shape");
        }
    }
    const auto n_success = static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const SimRecord& r) { return r.outcome; }));
    if (n_success == 0 || n_success == records.size()) {
        throw SeparationError(n_success == records.size(), records.size());
    }

    const Objective objective(records, target, shape, options);
    Vector theta = pack(init ? *init : default_init(records, target, shape));
    if (theta.size() != shape.n_params()) {
        throw std::invalid_argument("fit: initial parameters do not match the model shape");
    }
    objective.clamp_constants(theta);
    if (!objective.in_box(theta)) {
        theta = pack(default_init(records, target, shape));
        objective.clamp_constants(theta);
    }

    FitResult result;
    result.shape = shape;
    double ll = objective.loglik(theta);
    int iteration = 0;
    bool converged = false;
    for (; iteration < options.max_iterations; ++iteration) {
        const Vector g = objective.gradient(theta);
        if (g.cwiseAbs().maxCoeff() < options.gradient_tolerance) {
            converged = true;
            break;
        }
        const Matrix neg_h = -objective.hessian(theta);
        Vector step;
        regularized_solve(neg_h, g, step);

        bool accepted = false;
        double t = 1.0;
        for (int halving = 0; halving < kMaxHalvings; ++halving, t *= 0.5) {
            const Vector candidate = theta + t * step;
            if (!objective.in_box(candidate)) continue;
            const double cand_ll = objective.loglik(candidate);
            if (cand_ll >= ll) {
                accepted = !(candidate.array() == theta.array()).all();
                theta = candidate;
                ll = cand_ll;
                break;
            }
        }
        if (!accepted) {
            // No representable ascent along the Newton direction.
            converged = objective.gradient(theta).cwiseAbs().maxCoeff() < options.gradient_tolerance;
            break;
        }
    }

    result.params = unpack(theta, shape);
    result.loglik = ll;
    result.n_iterations = iteration;

    // Observed information and its inverse.
    const Matrix info = -objective.hessian(theta);
    const auto n = info.rows();
    Eigen::LLT<Matrix> llt(info);
    double ridge = 0.0;
    if (llt.info() != Eigen::Success) {
        const double trace = std::abs(info.trace());
        ridge = 1e-8 * (trace > 0.0 ? trace : 1.0);
        for (int attempt = 0; attempt < 60; ++attempt, ridge *= 10.0) {
            llt.compute(info + ridge * Matrix::Identity(n, n));
            if (llt.info() == Eigen::Success) break;
        }
        converged = false;
    }
    Matrix cov = llt.solve(Matrix::Identity(n, n));
    cov = 0.5 * (cov + cov.transpose());
    result.covariance = cov;
    result.ridge = ridge;
    result.converged = converged;
    if (!shape.varying_design) {
        result.se_x0 = std::sqrt(std::max(0.0, cov(1, 1)));
    }
    return result;
}

namespace detail {

CurvePoint curve_point(const FitResult& fit, double scaled_v) {
    CurvePoint point;
    point.scaled_v = scaled_v;
    point.natural_v = scaled_v;
    double root = 0.0;
    double var = 0.0;
    if (!fit.shape.varying_design) {
        root = fit.fixed().size_root_x0;
        var = fit.covariance(1, 1);
    } else {
        const auto& p = fit.varying();
        root = eval_poly(p.size_coefs, scaled_v);
        const auto nj = static_cast<Eigen::Index>(p.slope_coefs.size());
        const auto nk = static_cast<Eigen::Index>(p.size_coefs.size());
        Eigen::VectorXd g(nk);
        double acc = 1.0;
        for (Eigen::Index k = 0; k < nk; ++k) {
            g(k) = acc;
            acc *= scaled_v;
        }
        var = g.dot(fit.covariance.block(nj, nj, nk, nk) * g);
    }
    const double se = std::sqrt(std::max(0.0, var));
    point.size_root_estimate = root;
    point.size_root_se = se;
    point.size_estimate = size_from_root(root);
    point.ci_low = size_from_root(std::max(root - kZ975 * se, 0.0));
    point.ci_high = size_from_root(root + kZ975 * se);
    return point;
}

}  // namespace detail

std::vector<CurvePoint> curve_with_ci(const FitResult& fit, std::span<const double> grid) {
    return curve_with_ci(fit, grid, [](double v) { return v; });
}

}  // namespace simsize

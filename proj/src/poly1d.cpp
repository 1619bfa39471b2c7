#include "simsize/poly1d.hpp"

#include <cmath>
#include <stdexcept>

#include "simsize/stats.hpp"

namespace simsize {
namespace {

double checked_v(const SimRecord& rec) {
    if (!rec.scaled_v) {
        throw std::invalid_argument("varying-design model given a record without a design value");
    }
    const double v = *rec.scaled_v;
    if (!(std::abs(v) <= 1.0 + kScaledVSlack)) {
        throw std::invalid_argument("scaled design value outside [-1, 1]");
    }
    return v;
}

// v^0 .. v^{n-1} by repeated multiplication, so 0^0 = 1 and the constant
// term is multiplied by exactly 1.
std::vector<double> powers(double v, std::size_t n) {
    std::vector<double> p(n);
    double acc = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
        p[m] = acc;
        acc *= v;
    }
    return p;
}

}  // namespace

double eval_poly(std::span<const double> coefs, double scaled_v) {
    double acc = 0.0;
    for (auto it = coefs.rbegin(); it != coefs.rend(); ++it) {
        acc = acc * scaled_v + *it;
    }
    return acc;
}

InnerTerms inner_term_1d(const VaryingDesignParams& params, const SimRecord& rec,
                         const TargetSpec& target) {
    const double v = checked_v(rec);
    const double slope = std::exp(eval_poly(params.slope_coefs, v));
    const double shift = slope * (rec.sqrt_size_x - eval_poly(params.size_coefs, v));
    return complete_inner_terms(target.z_target + shift, shift, slope, rec.sign());
}

double loglik_1d(const VaryingDesignParams& params, std::span<const SimRecord> records,
                 const TargetSpec& target) {
    CompensatedSum total;
    for (const auto& rec : records) {
        const auto t = inner_term_1d(params, rec, target);
        total += norm_log_cdf(t.sign > 0 ? t.inner_i : -t.inner_i);
    }
    return total.value();
}

Eigen::VectorXd grad_1d(const VaryingDesignParams& params, std::span<const SimRecord> records,
                        const TargetSpec& target) {
    const std::size_t nj = params.slope_coefs.size();
    const std::size_t nk = params.size_coefs.size();
    std::vector<CompensatedSum> acc(nj + nk);
    for (const auto& rec : records) {
        const auto t = inner_term_1d(params, rec, target);
        const auto vp = powers(*rec.scaled_v, std::max(nj, nk));
        const double signed_h = t.sign * t.hazard;
        for (std::size_t j = 0; j < nj; ++j) {
            acc[j] += vp[j] * t.shift_s * signed_h;
        }
        for (std::size_t k = 0; k < nk; ++k) {
            acc[nj + k] += vp[k] * -t.slope * signed_h;
        }
    }
    Eigen::VectorXd g(static_cast<Eigen::Index>(nj + nk));
    for (std::size_t m = 0; m < nj + nk; ++m) {
        g(static_cast<Eigen::Index>(m)) = acc[m].value();
    }
    return g;
}

Eigen::MatrixXd hessian_1d(const VaryingDesignParams& params,
                           std::span<const SimRecord> records, const TargetSpec& target) {
    const std::size_t nj = params.slope_coefs.size();
    const std::size_t nk = params.size_coefs.size();
    const std::size_t n = nj + nk;
    // Upper triangle only, mirrored at the end.
    std::vector<CompensatedSum> acc(n * n);
    for (const auto& rec : records) {
        const auto t = inner_term_1d(params, rec, target);
        const auto vp = powers(*rec.scaled_v, std::max(nj, nk));
        const double common = t.hazard + t.shift_s * t.curvature_d;
        const double ss = t.sign * t.shift_s * common;
        const double sx = -t.sign * t.slope * common;
        const double xx = t.sign * (t.slope * t.slope) * t.curvature_d;
        for (std::size_t j = 0; j < nj; ++j) {
            for (std::size_t j2 = j; j2 < nj; ++j2) {
                acc[j * n + j2] += (vp[j] * vp[j2]) * ss;
            }
            for (std::size_t k = 0; k < nk; ++k) {
                acc[j * n + nj + k] += (vp[j] * vp[k]) * sx;
            }
        }
        for (std::size_t k = 0; k < nk; ++k) {
            for (std::size_t k2 = k; k2 < nk; ++k2) {
                acc[(nj + k) * n + nj + k2] += (vp[k] * vp[k2]) * xx;
            }
        }
    }
    Eigen::MatrixXd h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            const double value = acc[a * n + b].value();
            h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = value;
            h(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = value;
        }
    }
    return h;
}

}  // namespace simsize

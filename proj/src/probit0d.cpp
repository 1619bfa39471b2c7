#include "simsize/probit0d.hpp"

#include <stdexcept>

#include "simsize/stats.hpp"

namespace simsize {

TargetSpec TargetSpec::from_power(double power) {
    if (!(power > 0.0 && power < 1.0)) {
        throw std::domain_error("target power must lie in (0, 1)");
    }
    return TargetSpec{power, norm_quantile(power)};
}

InnerTerms complete_inner_terms(double inner, double shift, double slope, int sign) {
    InnerTerms t;
    t.inner_i = inner;
    t.shift_s = shift;
    t.slope = slope;
    t.sign = sign;
    const double oriented = sign > 0 ? inner : -inner;
    t.hazard = signed_hazard(inner, sign > 0);
    // D for the upper section is the mirror of the lower section's slope.
    t.curvature_d = sign > 0 ? lower_hazard_slope(oriented) : -lower_hazard_slope(oriented);
    return t;
}

InnerTerms inner_term(const FixedDesignParams& params, const SimRecord& rec,
                      const TargetSpec& target) {
    if (rec.scaled_v) {
        throw std::invalid_argument("inner_term: fixed-design model given a varying-design record");
    }
    const double slope = std::exp(params.log_slope_s);
    const double shift = slope * (rec.sqrt_size_x - params.size_root_x0);
    return complete_inner_terms(target.z_target + shift, shift, slope, rec.sign());
}

double loglik_0d(const FixedDesignParams& params, std::span<const SimRecord> records,
                 const TargetSpec& target) {
    CompensatedSum total;
    for (const auto& rec : records) {
        const auto t = inner_term(params, rec, target);
        total += norm_log_cdf(t.sign > 0 ? t.inner_i : -t.inner_i);
    }
    return total.value();
}

Eigen::Vector2d grad_0d(const FixedDesignParams& params, std::span<const SimRecord> records,
                        const TargetSpec& target) {
    CompensatedSum d_s;
    CompensatedSum d_x0;
    for (const auto& rec : records) {
        const auto t = inner_term(params, rec, target);
        const double signed_h = t.sign * t.hazard;
        d_s += t.shift_s * signed_h;
        d_x0 += -t.slope * signed_h;
    }
    return {d_s.value(), d_x0.value()};
}

Eigen::Matrix2d hessian_0d(const FixedDesignParams& params,
                           std::span<const SimRecord> records, const TargetSpec& target) {
    CompensatedSum ss;
    CompensatedSum sx;
    CompensatedSum xx;
    for (const auto& rec : records) {
        const auto t = inner_term(params, rec, target);
        const double common = t.hazard + t.shift_s * t.curvature_d;
        ss += t.sign * t.shift_s * common;
        sx += -t.sign * t.slope * common;
        xx += t.sign * (t.slope * t.slope) * t.curvature_d;
    }
    Eigen::Matrix2d h;
    h(0, 0) = ss.value();
    h(0, 1) = h(1, 0) = sx.value();
    h(1, 1) = xx.value();
    return h;
}

}  // namespace simsize

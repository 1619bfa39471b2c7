#include "simsize/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "simsize/stats.hpp"

namespace simsize {

void OracleSpec::validate() const {
    if (!(delta != 0.0 && std::isfinite(delta))) {
        throw std::domain_error("oracle: delta must be finite and nonzero");
    }
    if (!(alpha > 0.0 && alpha < 1.0) || !(power > 0.0 && power < 1.0) ||
        !(f1 > 0.0 && f1 < 1.0)) {
        throw std::domain_error("oracle: alpha, power and f1 must lie in (0, 1)");
    }
}

double closed_form_total_size(const OracleSpec& spec) {
    spec.validate();
    const double z_sum = norm_quantile(1.0 - spec.alpha / 2.0) + norm_quantile(spec.power);
    return z_sum * z_sum / (spec.delta * spec.delta * spec.f1 * (1.0 - spec.f1));
}

double closed_form_per_group_size(const OracleSpec& spec) {
    OracleSpec balanced = spec;
    balanced.f1 = 0.5;
    return closed_form_total_size(balanced) / 2.0;
}

double closed_form_power(double total_n, const OracleSpec& spec) {
    OracleSpec checked = spec;
    checked.power = 0.5;
    checked.validate();
    if (!(total_n >= 0.0)) {
        throw std::domain_error("oracle: size must be nonnegative");
    }
    return norm_cdf(-norm_quantile(1.0 - spec.alpha / 2.0) +
                    std::abs(spec.delta) * std::sqrt(total_n * spec.f1 * (1.0 - spec.f1)));
}

}  // namespace simsize

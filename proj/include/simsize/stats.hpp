#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace simsize {

// ---------------------------------------------------------------------------
// Standard normal distribution
// ---------------------------------------------------------------------------

/// Standard normal density (2*pi)^(-1/2) * exp(-x^2/2).
double norm_pdf(double x);

/// Derivative of the standard normal density, -x * phi(x).
double norm_pdf_deriv(double x);

/// Standard normal CDF. Relative error below 1e-12 on [-8, 8]; does not
/// underflow to zero for x >= -37.
double norm_cdf(double x);

/// Upper tail 1 - Phi(x), computed without cancellation.
double norm_sf(double x);

/// Natural log of Phi(x), finite for every finite x.
double norm_log_cdf(double x);

/// Inverse of norm_cdf. Throws std::domain_error unless 0 < p < 1.
double norm_quantile(double p);

/// Mills ratio (1 - Phi(t)) / phi(t).
double mills_ratio(double t);

/// phi(x)/Phi(x) when `success`, phi(x)/(1 - Phi(x)) otherwise.
///
/// The two branches are mirror images (signed_hazard(x, true) ==
/// signed_hazard(-x, false)), so both are evaluated through the lower branch.
/// Beyond |x| > 7 on the unstable side the ratio is taken from the Mills
/// ratio continued fraction, which keeps it finite where Phi underflows.
double signed_hazard(double x, bool success);

/// d/dx [phi(x)/Phi(x)] = -h * (x + h) with h = phi(x)/Phi(x). Always
/// negative; the x + h factor comes from the continued fraction in the far
/// lower tail so it keeps full relative precision.
double lower_hazard_slope(double x);

// ---------------------------------------------------------------------------
// Hypothesis tests used by the built-in scenarios. Both return std::nullopt
// on degenerate input rather than throwing.
// ---------------------------------------------------------------------------

/// Two-sided Welch (unequal variance) t-test p-value.
std::optional<double> welch_t_test(std::span<const double> sample_a,
                                   std::span<const double> sample_b);

/// Kruskal-Wallis rank sum test p-value (chi-square approximation, tie
/// corrected). Undefined with fewer than two groups, an empty group, or when
/// every observation is tied.
std::optional<double> kruskal_wallis(const std::vector<std::vector<double>>& groups);

/// Midranks (1-based); tied values share the mean of their positions.
std::vector<double> average_rank(std::span<const double> values);

// ---------------------------------------------------------------------------
// Summation
// ---------------------------------------------------------------------------

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double v) {
        add(v);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace simsize

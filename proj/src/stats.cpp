#include "simsize/stats.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace simsize {
namespace {

constexpr double kInvSqrtTwoPi = 0.398942280401432677939946059934;
constexpr double kLogSqrtTwoPi = 0.918938533204672741780329736406;
constexpr double kMillsSwitch = 7.0;

// Mills ratio for t > 0 from the continued fraction
//   R(t) = 1 / (t + 1/(t + 2/(t + 3/(t + ...))))
// evaluated bottom-up. 80 terms give full double precision for t >= 7.
double mills_continued_fraction(double t) {
    double tail = t;
    for (int k = 80; k >= 1; --k) {
        tail = t + k / tail;
    }
    return 1.0 / tail;
}

// Denominator of the continued fraction with its leading "t +" removed
// after one level: returns T2 = t + 2/(t + 3/(t + ...)), so that
// 1/R(t) = t + 1/T2.
double mills_tail_after_first(double t) {
    double tail = t;
    for (int k = 80; k >= 2; --k) {
        tail = t + k / tail;
    }
    return tail;
}

// phi(x)/Phi(x).
double lower_hazard(double x) {
    if (x < -kMillsSwitch) {
        return 1.0 / mills_continued_fraction(-x);
    }
    return norm_pdf(x) / norm_cdf(x);
}

}  // namespace

double norm_pdf(double x) { return kInvSqrtTwoPi * std::exp(-0.5 * x * x); }

double norm_pdf_deriv(double x) { return -x * norm_pdf(x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double norm_log_cdf(double x) {
    if (x < -kMillsSwitch) {
        const double t = -x;
        return -0.5 * t * t - kLogSqrtTwoPi + std::log(mills_continued_fraction(t));
    }
    if (x > 0.0) {
        return std::log1p(-norm_sf(x));
    }
    return std::log(norm_cdf(x));
}

double mills_ratio(double t) {
    if (t > kMillsSwitch) {
        return mills_continued_fraction(t);
    }
    return norm_sf(t) / norm_pdf(t);
}

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("norm_quantile: probability must lie in (0, 1)");
    }
    // Wichura, AS 241 (PPND16).
    const double q = p - 0.5;
    double z;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        z = q *
            (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                  67265.770927008700853) * r + 45921.953931549871457) * r +
                13731.693765509461125) * r + 1971.5909503065514427) * r +
              133.14166789178437745) * r + 3.387132872796366608) /
            (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                  39307.89580009271061) * r + 21213.794301586595867) * r +
                5394.1960214247511077) * r + 687.1870074920579083) * r +
              42.313330701600911252) * r + 1.0);
    } else {
        double r = q < 0.0 ? p : 1.0 - p;
        r = std::sqrt(-std::log(r));
        if (r <= 5.0) {
            r -= 1.6;
            z = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                      0.24178072517745061177) * r + 1.27045825245236838258) * r +
                    3.64784832476320460504) * r + 5.7694972214606914055) * r +
                  4.6303378461565452959) * r + 1.42343711074968357734) /
                (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                      0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                    0.68976733498510000455) * r + 1.6763848301838038494) * r +
                  2.05319162663775882187) * r + 1.0);
        } else {
            r -= 5.0;
            z = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                    0.29656057182850489123) * r + 1.7848265399172913358) * r +
                  5.4637849111641143699) * r + 6.6579046435011037772) /
                (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                      1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                    0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                  0.59983220655588793769) * r + 1.0);
        }
        if (q < 0.0) {
            z = -z;
        }
    }
    // One Newton step on the tail that does not cancel.
    const double density = norm_pdf(z);
    if (density > 0.0) {
        const double err = z < 0.0 ? norm_cdf(z) - p : (1.0 - p) - norm_sf(z);
        z -= err / density;
    }
    return z;
}

double signed_hazard(double x, bool success) {
    return success ? lower_hazard(x) : lower_hazard(-x);
}

double lower_hazard_slope(double x) {
    if (x < -kMillsSwitch) {
        const double t = -x;
        const double rest = 1.0 / mills_tail_after_first(t);  // h - t
        const double h = t + rest;
        return -h * rest;
    }
    const double h = lower_hazard(x);
    return -h * (x + h);
}

std::optional<double> welch_t_test(std::span<const double> sample_a,
                                   std::span<const double> sample_b) {
    const auto na = sample_a.size();
    const auto nb = sample_b.size();
    if (na < 2 || nb < 2) {
        return std::nullopt;
    }
    auto mean_var = [](std::span<const double> xs) {
        CompensatedSum s;
        for (double x : xs) s += x;
        const double mean = s.value() / static_cast<double>(xs.size());
        CompensatedSum ss;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return std::pair{mean, ss.value() / static_cast<double>(xs.size() - 1)};
    };
    const auto [mean_a, var_a] = mean_var(sample_a);
    const auto [mean_b, var_b] = mean_var(sample_b);
    const double va = var_a / static_cast<double>(na);
    const double vb = var_b / static_cast<double>(nb);
    const double stderr_diff = std::sqrt(va + vb);
    // Same "essentially constant data" guard as R's t.test.
    const double scale = std::max(std::abs(mean_a), std::abs(mean_b));
    if (!std::isfinite(stderr_diff) ||
        stderr_diff <= 10.0 * std::numeric_limits<double>::epsilon() * scale ||
        stderr_diff == 0.0) {
        return std::nullopt;
    }
    const double df = (va + vb) * (va + vb) /
                      (va * va / static_cast<double>(na - 1) +
                       vb * vb / static_cast<double>(nb - 1));
    const double t = (mean_a - mean_b) / stderr_diff;
    if (!std::isfinite(t) || !std::isfinite(df) || df <= 0.0) {
        return std::nullopt;
    }
    const boost::math::students_t_distribution<double> dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return std::min(1.0, p);
}

std::vector<double> average_rank(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) {
            ++j;
        }
        // positions i..j-1 (0-based) share rank mean of (i+1)..j
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            ranks[order[k]] = midrank;
        }
        i = j;
    }
    return ranks;
}

std::optional<double> kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) {
        return std::nullopt;
    }
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) {
            return std::nullopt;
        }
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const double n = static_cast<double>(pooled.size());
    const auto ranks = average_rank(pooled);

    CompensatedSum stat;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        CompensatedSum rank_sum;
        for (std::size_t k = 0; k < g.size(); ++k) {
            rank_sum += ranks[offset + k];
        }
        offset += g.size();
        const double r = rank_sum.value();
        stat += r * r / static_cast<double>(g.size());
    }
    double h = 12.0 / (n * (n + 1.0)) * stat.value() - 3.0 * (n + 1.0);

    // Tie correction 1 - sum(t^3 - t) / (n^3 - n).
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double correction = 1.0 - tie_term / (n * n * n - n);
    if (!(correction > 0.0)) {
        return std::nullopt;
    }
    h /= correction;
    if (!std::isfinite(h)) {
        return std::nullopt;
    }
    h = std::max(h, 0.0);
    const boost::math::chi_squared_distribution<double> dist(
        static_cast<double>(groups.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, h));
}

}  // namespace simsize

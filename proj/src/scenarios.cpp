#include "simsize/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/random/normal_distribution.hpp>

#include "simsize/seeding.hpp"
#include "simsize/stats.hpp"

namespace simsize {
namespace {

// R's round(): ties go to the even neighbour.
std::int64_t round_half_even(double x) {
    return static_cast<std::int64_t>(std::nearbyint(x));
}

std::vector<double> draw_normals(Rng& rng, std::int64_t n, double mean) {
    boost::random::normal_distribution<double> normal(mean, 1.0);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& x : out) x = normal(rng);
    return out;
}

}  // namespace

bool simulate_unequal_t_test(std::int64_t size, double f1, double delta, double alpha,
                             std::uint64_t seed) {
    const std::int64_t n1 = round_half_even(f1 * static_cast<double>(size));
    const std::int64_t n2 = size - n1;
    if (n1 < 0 || n2 < 0) {
        return false;
    }
    Rng rng = make_rng(seed);
    const auto control = draw_normals(rng, n1, 0.0);
    const auto treated = draw_normals(rng, n2, delta);
    const auto p = welch_t_test(control, treated);
    return p.has_value() && *p < alpha;
}

bool simulate_ranking(std::int64_t size, const std::vector<double>& means, double alpha,
                      std::uint64_t seed) {
    const auto n_cand = static_cast<std::int64_t>(means.size());
    if (n_cand < 2 || size < 1) {
        return false;
    }
    const std::int64_t per_arm =
        round_half_even(static_cast<double>(size) / static_cast<double>(n_cand));
    const std::int64_t last_arm = size - per_arm * (n_cand - 1);
    if (per_arm < 0 || last_arm < 0) {
        return false;
    }
    Rng rng = make_rng(seed);
    std::vector<std::vector<double>> arms;
    arms.reserve(means.size());
    for (std::int64_t a = 0; a < n_cand; ++a) {
        arms.push_back(draw_normals(rng, a + 1 < n_cand ? per_arm : last_arm,
                                    means[static_cast<std::size_t>(a)]));
    }
    const auto p = kruskal_wallis(arms);
    if (!p || !(*p < alpha)) {
        return false;
    }

    std::vector<double> pooled;
    for (const auto& arm : arms) pooled.insert(pooled.end(), arm.begin(), arm.end());
    const auto ranks = average_rank(pooled);
    std::vector<double> arm_mean_rank;
    std::size_t offset = 0;
    for (const auto& arm : arms) {
        const double total = std::accumulate(ranks.begin() + static_cast<std::ptrdiff_t>(offset),
                                             ranks.begin() + static_cast<std::ptrdiff_t>(offset + arm.size()),
                                             0.0);
        arm_mean_rank.push_back(total / static_cast<double>(arm.size()));
        offset += arm.size();
    }
    const auto arm_rank = average_rank(arm_mean_rank);

    // Indices of the two largest true means; later arms win ties, which for
    // ascending means picks the last two arms.
    std::vector<std::size_t> order(means.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });
    const double threshold = static_cast<double>(n_cand) - 1.5;
    return arm_rank[order[order.size() - 1]] > threshold &&
           arm_rank[order[order.size() - 2]] > threshold;
}

bool simulate_probit(std::int64_t size, double size_root, double log_slope, double power,
                     std::uint64_t seed) {
    const double inner = norm_quantile(power) +
                         std::exp(log_slope) * (std::sqrt(static_cast<double>(size)) - size_root);
    Rng rng = make_rng(seed);
    return uniform01(rng) < norm_cdf(inner);
}

std::vector<std::string> builtin_scenario_names() {
    return {"unequal-t-test", "ranking", "probit", "constant"};
}

std::optional<SimulatorHandle> builtin_scenario(const std::string& name, SimulatorArity arity) {
    if (name == "unequal-t-test") {
        return register_simulator(
            {name, arity, ParamSet{{"f1", 0.5}, {"delta", 0.2}, {"alpha", 0.05}}, false},
            [](std::int64_t n, const ParamSet& p, std::uint64_t seed) -> std::optional<bool> {
                return simulate_unequal_t_test(n, p.real("f1"), p.real("delta"), p.real("alpha"),
                                               seed);
            });
    }
    if (name == "ranking") {
        return register_simulator(
            {name, arity,
             ParamSet{{"means", std::vector<double>{0.0, 0.125, 0.25, 0.375, 0.5}},
                      {"alpha", 0.05}},
             false},
            [](std::int64_t n, const ParamSet& p, std::uint64_t seed) -> std::optional<bool> {
                return simulate_ranking(n, p.sequence("means"), p.real("alpha"), seed);
            });
    }
    if (name == "probit") {
        return register_simulator(
            {name, arity,
             ParamSet{{"size_root", 30.0}, {"log_slope", -2.5}, {"power", 0.9}}, false},
            [](std::int64_t n, const ParamSet& p, std::uint64_t seed) -> std::optional<bool> {
                return simulate_probit(n, p.real("size_root"), p.real("log_slope"),
                                       p.real("power"), seed);
            });
    }
    if (name == "constant") {
        return register_simulator(
            {name, arity, ParamSet{{"outcome", 1.0}}, false},
            [](std::int64_t, const ParamSet& p, std::uint64_t) -> std::optional<bool> {
                const double v = p.real("outcome");
                if (v == 1.0) return true;
                if (v == 0.0) return false;
                return std::nullopt;
            });
    }
    return std::nullopt;
}

}  // namespace simsize

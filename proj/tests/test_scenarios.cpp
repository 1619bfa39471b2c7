#include <catch_amalgamated.hpp>

#include <cmath>

#include "simsize/oracle.hpp"
#include "simsize/scenarios.hpp"
#include "simsize/seeding.hpp"
#include "simsize/stats.hpp"

using namespace simsize;

namespace {

template <typename F>
double success_rate(int reps, std::uint64_t master, F trial) {
    int wins = 0;
    for (int i = 0; i < reps; ++i) wins += trial(derive_seed({master, static_cast<std::uint64_t>(i)}));
    return static_cast<double>(wins) / reps;
}

}  // namespace

TEST_CASE("two-arm t-test scenario reaches the closed-form power", "[scenarios]") {
    const OracleSpec spec{0.2, 0.05, 0.9, 0.5};
    const double n = std::round(closed_form_total_size(spec));
    const double rate = success_rate(3000, 1, [&](std::uint64_t seed) {
        return simulate_unequal_t_test(static_cast<std::int64_t>(n), 0.5, 0.2, 0.05, seed);
    });
    // Binomial SD is about 0.0055 at 3000 replicates.
    CHECK(std::abs(rate - 0.9) < 0.025);
}

TEST_CASE("two-arm t-test scenario with no effect holds its level", "[scenarios]") {
    const double rate = success_rate(4000, 2, [](std::uint64_t seed) {
        return simulate_unequal_t_test(200, 0.3, 0.0, 0.05, seed);
    });
    CHECK(std::abs(rate - 0.05) < 0.015);
}

TEST_CASE("t-test scenario fails cleanly when an arm is too small", "[scenarios]") {
    CHECK_FALSE(simulate_unequal_t_test(2, 0.5, 5.0, 0.05, 1));
    CHECK_FALSE(simulate_unequal_t_test(10, 0.01, 5.0, 0.05, 1));
}

TEST_CASE("probit scenario follows its own model", "[scenarios]") {
    const double rate = success_rate(4000, 3, [](std::uint64_t seed) {
        return simulate_probit(900, 30.0, -2.5, 0.9, seed);
    });
    CHECK(std::abs(rate - 0.9) < 0.02);
    const double low = success_rate(4000, 4, [](std::uint64_t seed) {
        return simulate_probit(400, 30.0, -2.5, 0.9, seed);
    });
    const double expected = norm_cdf(norm_quantile(0.9) + std::exp(-2.5) * (20.0 - 30.0));
    CHECK(std::abs(low - expected) < 0.025);
}

TEST_CASE("ranking scenario gains power with size", "[scenarios]") {
    const std::vector<double> means{0, 0.125, 0.25, 0.375, 0.5};
    const double small = success_rate(400, 5, [&](std::uint64_t s) { return simulate_ranking(200, means, 0.05, s); });
    const double large = success_rate(400, 5, [&](std::uint64_t s) { return simulate_ranking(1500, means, 0.05, s); });
    CHECK(small < large);
    CHECK(large > 0.85);
    CHECK_FALSE(simulate_ranking(3, means, 0.05, 1));
}

TEST_CASE("scenarios are deterministic in their seed", "[scenarios]") {
    const std::vector<double> means{0, 0.125, 0.25, 0.375, 0.5};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        CHECK(simulate_ranking(700, means, 0.05, seed) == simulate_ranking(700, means, 0.05, seed));
        CHECK(simulate_unequal_t_test(700, 0.5, 0.2, 0.05, seed) ==
              simulate_unequal_t_test(700, 0.5, 0.2, 0.05, seed));
    }
}

TEST_CASE("built-in scenario registry", "[scenarios]") {
    const auto names = builtin_scenario_names();
    CHECK(names == std::vector<std::string>{"unequal-t-test", "ranking", "probit", "constant"});
    CHECK_FALSE(builtin_scenario("nope").has_value());

    auto t = builtin_scenario("unequal-t-test");
    REQUIRE(t.has_value());
    CHECK(t->params().real("delta") == 0.2);
    CHECK(t->with_params({{"delta", 0.5}}).params().real("delta") == 0.5);
    CHECK_THROWS_AS(t->with_params({{"effect", 0.5}}), std::invalid_argument);

    auto c = builtin_scenario("constant");
    REQUIRE(c.has_value());
    CHECK((*c)(10, 1) == std::optional<bool>(true));
    CHECK(c->with_params({{"outcome", 0.0}})(10, 1) == std::optional<bool>(false));
    CHECK_FALSE(c->with_params({{"outcome", 2.0}})(10, 1).has_value());
}

TEST_CASE("design parameter is passed to the simulator", "[scenarios]") {
    auto t = builtin_scenario("unequal-t-test", SimulatorArity::SizeAndDesign);
    REQUIRE(t.has_value());
    CHECK(t->spec().arity == SimulatorArity::SizeAndDesign);
    // An allocation of 0.01 leaves too few patients in one arm at size 50.
    CHECK((*t)(50, 9, std::make_pair(std::string("f1"), 0.01)) == std::optional<bool>(false));
}

TEST_CASE("parameter values parse as scalars or sequences", "[scenarios]") {
    CHECK(std::get<double>(parse_param_value("0.3")) == 0.3);
    CHECK(std::get<std::vector<double>>(parse_param_value("0,0.5,1")) == std::vector<double>{0, 0.5, 1});
    CHECK_THROWS_AS(parse_param_value("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_param_value(""), std::invalid_argument);
}

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "simsize/driver.hpp"
#include "simsize/oracle.hpp"
#include "simsize/scenarios.hpp"

using namespace simsize;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SimulatorHandle scenario(const std::string& name, ParamSet overrides = {},
                         SimulatorArity arity = SimulatorArity::SizeOnly) {
    auto h = builtin_scenario(name, arity);
    REQUIRE(h.has_value());
    return h->with_params(overrides);
}

RunConfig probit_config(std::int64_t nsims, std::uint64_t seed) {
    RunConfig c;
    c.nsims = nsims;
    c.cap_nn = 5000;
    c.master_seed = seed;
    return c;
}

void check_same(const RunResult& a, const RunResult& b) {
    CHECK(a.size_estimate == b.size_estimate);
    CHECK(a.size_root_estimate == b.size_root_estimate);
    CHECK(a.size_root_se == b.size_root_se);
    CHECK(a.n_simulations == b.n_simulations);
    CHECK(a.final_fit.covariance == b.final_fit.covariance);
}

}  // namespace

TEST_CASE("batch schedule", "[driver]") {
    std::vector<std::int64_t> totals;
    std::int64_t total = 0;
    while (total < 2000) {
        total += next_batch_size(total, 2000);
        totals.push_back(total);
    }
    const std::vector<std::int64_t> expected{50,  100, 150, 200, 250, 300, 350, 400, 450,
                                             500, 550, 605, 666, 733, 807, 888, 977, 1075,
                                             1183, 1302, 1433, 1577, 1735, 1909, 2000};
    CHECK(totals == expected);
    CHECK(next_batch_size(2000, 2000) == 0);
    // A resumed total off the grid is topped up to the next multiple of 50.
    CHECK(next_batch_size(123, 1000) == 27);
}

TEST_CASE("design value scaling", "[driver]") {
    RunConfig1d c;
    c.optiwin_low = 0.2;
    c.optiwin_high = 0.8;
    CHECK(scale_v(-1.0, c) == 0.2);
    CHECK(scale_v(1.0, c) == 0.8);
    CHECK_THAT(scale_v(0.0, c), WithinAbs(0.5, 1e-15));
    CHECK_THAT(unscale_v(scale_v(0.37, c), c), WithinAbs(0.37, 1e-14));

    c.optilog = true;
    c.optiwin_low = 1.0;
    c.optiwin_high = 100.0;
    CHECK(scale_v(-1.0, c) == 1.0);
    CHECK(scale_v(1.0, c) == 100.0);
    CHECK_THAT(scale_v(0.0, c), WithinRel(10.0, 1e-14));
    CHECK_THAT(unscale_v(scale_v(-0.4, c), c), WithinAbs(-0.4, 1e-14));

    c.optiround = true;
    CHECK(scale_v(0.0, c) == 10.0);
    CHECK(scale_v(0.01, c) == std::nearbyint(std::exp(std::log(100.0) * 0.505)));
}

TEST_CASE("size clamping", "[driver]") {
    RunConfig c;
    c.cap_nn = 1000;
    auto rng = make_rng(1);
    CHECK(clamp_size(0.5, c, rng) == 4);
    CHECK(clamp_size(-3.0, c, rng) == 4);
    CHECK(clamp_size(10.2, c, rng) == 104);
    for (int i = 0; i < 1000; ++i) {
        const auto n = clamp_size(100.0, c, rng);
        CHECK(n >= 900);
        CHECK(n <= 1000);
    }
}

TEST_CASE("configuration validation", "[driver]") {
    RunConfig c;
    c.nsims = 50;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = RunConfig{};
    c.target_power = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = RunConfig{};
    c.cap_nn = std::nullopt;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = RunConfig{};
    c.imp_nn = 1000;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.imp_nn = 2000;
    CHECK_NOTHROW(c.validate());

    RunConfig1d d;
    CHECK_THROWS_AS(d.validate(), ConfigError);
    d.optivar = "f1";
    d.optiwin_low = 0.8;
    d.optiwin_high = 0.2;
    CHECK_THROWS_AS(d.validate(), ConfigError);
    d.optiwin_low = 0.0;
    d.optiwin_high = 1.0;
    d.optilog = true;
    CHECK_THROWS_AS(d.validate(), ConfigError);
    d.optilog = false;
    d.n_size_coefs = 0;
    CHECK_THROWS_AS(d.validate(), ConfigError);
}

TEST_CASE("fixed-design run finds the size of a probit scenario", "[driver]") {
    // True size: 30^2 = 900.
    auto config = probit_config(2000, 3);
    config.keep_sims = true;
    const auto r = run_0d(scenario("probit"), config);
    CHECK(r.kind == RunKind::Fixed);
    CHECK(r.termination == Termination::BudgetSpent);
    CHECK(r.n_simulations == 2000);
    CHECK(std::abs(r.size_root_estimate - 30.0) < 1.5);
    CHECK(r.size_ci_low <= r.size_estimate);
    CHECK(r.size_estimate <= r.size_ci_high);
    CHECK(r.trace.size() == 25);
    REQUIRE(r.sims.has_value());
    CHECK(r.sims->size() == 2000);
    for (std::size_t i = 0; i < r.sims->size(); ++i) {
        CHECK((*r.sims)[i].sim_index == i);
        CHECK((*r.sims)[i].size_n >= 4);
        CHECK((*r.sims)[i].size_n <= 5000);
        CHECK((*r.sims)[i].seed == derive_seed({3, i}));
    }
}

TEST_CASE("runs do not depend on the worker count", "[driver]") {
    auto config = probit_config(1200, 21);
    const auto one = run_0d(scenario("unequal-t-test"), config);
    config.workers = 4;
    const auto four = run_0d(scenario("unequal-t-test"), config);
    check_same(one, four);
}

TEST_CASE("resuming at a schedule point reproduces the full run", "[driver]") {
    auto config = probit_config(500, 8);
    config.keep_sims = true;
    const auto first = run_0d(scenario("probit"), config);
    config.nsims = 1500;
    config.keep_sims = false;
    const auto full = run_0d(scenario("probit"), config);
    const auto resumed = resume(scenario("probit"), *first.sims, config);
    check_same(full, resumed);
}

TEST_CASE("prior records alone produce a result without new simulations", "[driver]") {
    auto config = probit_config(500, 8);
    config.keep_sims = true;
    const auto first = run_0d(scenario("probit"), config);
    const auto again = resume(scenario("probit"), *first.sims, config);
    check_same(first, again);
}

TEST_CASE("an always-successful simulator ends at the smallest size", "[driver]") {
    const auto r = run_0d(scenario("constant"), probit_config(1000, 1));
    CHECK(r.termination == Termination::AlwaysSuccessful);
    CHECK(r.size_estimate == 4);
    CHECK(r.n_simulations < 1000);
}

TEST_CASE("an always-failing simulator is reported as persistent separation", "[driver]") {
    CHECK_THROWS_AS(run_0d(scenario("constant", {{"outcome", 0.0}}), probit_config(1000, 1)),
                    PersistentSeparationError);
}

TEST_CASE("an undefined outcome aborts the run with its size and seed", "[driver]") {
    for (unsigned workers : {1u, 3u}) {
        auto config = probit_config(1000, 5);
        config.workers = workers;
        try {
            run_0d(scenario("constant", {{"outcome", 2.0}}), config);
            FAIL("expected SimulatorFailure");
        } catch (const SimulatorFailure& e) {
            CHECK(e.sim_index() == 0);
            CHECK(e.seed() == derive_seed({5, 0}));
            CHECK(e.size() >= 4);
        }
    }
}

TEST_CASE("an out-of-reach target aborts as impossible", "[driver]") {
    // True size 100^2 = 10000 against imp_nn = 2000.
    RunConfig c;
    c.nsims = 3000;
    c.cap_nn = 2000;
    c.imp_nn = 2000;
    c.master_seed = 4;
    try {
        run_0d(scenario("probit", {{"size_root", 100.0}, {"log_slope", -3.0}}), c);
        FAIL("expected ImpossibleSizeError");
    } catch (const ImpossibleSizeError& e) {
        CHECK(e.imp_nn() == 2000);
        CHECK(std::string(e.what()).find("imp_nn=2000") != std::string::npos);
    }
}

TEST_CASE("arity and dimensionality are checked", "[driver]") {
    RunConfig1d d;
    d.optivar = "f1";
    d.nsims = 200;
    CHECK_THROWS_AS(run_1d(scenario("unequal-t-test"), d), SimulatorArityError);
    CHECK_THROWS_AS(run_0d(scenario("unequal-t-test", {}, SimulatorArity::SizeAndDesign), probit_config(200, 0)),
                    SimulatorArityError);
    d.optivar = "effect";
    CHECK_THROWS_AS(run_1d(scenario("unequal-t-test", {}, SimulatorArity::SizeAndDesign), d),
                    SimulatorArityError);

    auto fixed = probit_config(200, 0);
    fixed.keep_sims = true;
    const auto r = run_0d(scenario("probit"), fixed);
    d.optivar = "f1";
    d.prior_records = *r.sims;
    CHECK_THROWS_AS(run_1d(scenario("unequal-t-test", {}, SimulatorArity::SizeAndDesign), d), ConfigError);
}

TEST_CASE("varying-design run follows a known size curve", "[driver]") {
    // Required size is size_root^2, smallest at the low end of the window.
    RunConfig1d d;
    d.optivar = "size_root";
    d.optiwin_low = 20.0;
    d.optiwin_high = 40.0;
    d.nsims = 3000;
    d.cap_nn = 5000;
    d.master_seed = 2;
    const auto r = run_1d(scenario("probit", {}, SimulatorArity::SizeAndDesign), d);
    CHECK(r.kind == RunKind::Varying);
    REQUIRE(r.curve.size() == 201);
    CHECK(r.curve.front().natural_v == 20.0);
    CHECK(r.curve.back().natural_v == 40.0);
    for (std::size_t i = 1; i < r.curve.size(); ++i) CHECK(r.curve[i].natural_v > r.curve[i - 1].natural_v);
    int covered = 0;
    for (const auto& p : r.curve) covered += std::abs(p.size_root_estimate - p.natural_v) <= 3 * p.size_root_se;
    CHECK(covered >= 180);
    CHECK(std::abs(r.size_root_estimate - 20.0) < 2.5);
}

TEST_CASE("sampling weights favour small sizes", "[driver]") {
    FitResult f;
    f.shape = ModelShape::varying(1, 2);
    f.params = VaryingDesignParams{{-2.0}, {30.0, 10.0}};
    f.covariance = Eigen::MatrixXd::Identity(3, 3) * 0.01;
    const auto w = grid_weights_1d(f);
    REQUIRE(w.size() == 201);
    CHECK_THAT(std::accumulate(w.begin(), w.end(), 0.0), WithinAbs(1.0, 1e-12));
    CHECK(w.front() > w.back());
    const double ratio = w.front() / w.back();
    CHECK_THAT(ratio, WithinRel(std::pow(40.0 * 40.0 / (20.0 * 20.0), 2), 1e-12));
}

TEST_CASE("batch windows follow the fitted estimate", "[driver]") {
    FitResult f;
    f.shape = ModelShape::fixed();
    f.params = FixedDesignParams{-2.0, 10.0};
    f.se_x0 = 0.0;
    RunConfig c;
    c.cap_nn = 5000;
    auto rng = make_rng(3);
    for (auto n : next_batch_sizes_0d(f, 50, c, rng)) CHECK(n == 100);
    f.se_x0 = 1.0;
    for (auto n : next_batch_sizes_0d(f, 500, c, rng)) {
        CHECK(n >= 81);
        CHECK(n <= 121);
    }
    f.params = FixedDesignParams{-2.0, 80.0};
    for (auto n : next_batch_sizes_0d(f, 500, c, rng)) {
        CHECK(n >= 4500);
        CHECK(n <= 5000);
    }
}

TEST_CASE("window midpoints in linear and log mode", "[driver]") {
    RunConfig1d c;
    c.optiwin_low = 0.1;
    c.optiwin_high = 10.0;
    CHECK_THAT(scale_v(0.0, c), WithinAbs(5.05, 1e-12));
    c.optilog = true;
    CHECK_THAT(scale_v(0.0, c), WithinAbs(1.0, 1e-12));
}

TEST_CASE("resuming from no records equals a fresh run", "[driver]") {
    const auto config = probit_config(700, 12);
    check_same(run_0d(scenario("probit"), config), resume(scenario("probit"), {}, config));
}

TEST_CASE("a run split anywhere reproduces the uninterrupted run", "[driver]") {
    for (std::int64_t split : {120, 1000}) {
        auto config = probit_config(split, 31);
        config.keep_sims = true;
        const auto first = run_0d(scenario("unequal-t-test"), config);
        config.nsims = 2000;
        const auto resumed = resume(scenario("unequal-t-test"), *first.sims, config);
        const auto full = run_0d(scenario("unequal-t-test"), config);
        INFO("split at " << split);
        check_same(full, resumed);
        REQUIRE(resumed.sims.has_value());
        REQUIRE(full.sims.has_value());
        for (std::size_t i = 0; i < full.sims->size(); ++i) {
            CHECK((*resumed.sims)[i].size_n == (*full.sims)[i].size_n);
            CHECK((*resumed.sims)[i].outcome == (*full.sims)[i].outcome);
        }
    }

    RunConfig1d d;
    d.optivar = "f1";
    d.optiwin_low = 0.2;
    d.optiwin_high = 0.8;
    d.nsims = 1000;
    d.master_seed = 5;
    d.keep_sims = true;
    const auto sim = scenario("unequal-t-test", {}, SimulatorArity::SizeAndDesign);
    const auto first = run_1d(sim, d);
    d.nsims = 1600;
    check_same(run_1d(sim, d), resume(sim, *first.sims, d));
}

TEST_CASE("sampling narrows around the estimate as the run proceeds", "[driver]") {
    auto config = probit_config(2000, 14);
    config.keep_sims = true;
    const auto r = run_0d(scenario("unequal-t-test"), config);
    auto sd = [](auto first, auto last) {
        double n = 0, mean = 0, m2 = 0;
        for (auto it = first; it != last; ++it) {
            const double x = static_cast<double>(it->size_n);
            n += 1;
            const double d = x - mean;
            mean += d / n;
            m2 += d * (x - mean);
        }
        return std::sqrt(m2 / (n - 1));
    };
    const auto& s = *r.sims;
    const double early = sd(s.begin(), s.begin() + 500);
    const double late = sd(s.end() - 200, s.end());
    CHECK(early > 3.0 * late);
}

TEST_CASE("design values are drawn in proportion to the grid weights", "[driver]") {
    FitResult f;
    f.shape = ModelShape::varying(1, 2);
    f.params = VaryingDesignParams{{-2.0}, {30.0, 10.0}};
    f.covariance = Eigen::MatrixXd::Identity(3, 3) * 0.01;
    RunConfig1d c;
    c.optivar = "x";
    c.optiwin_low = -1.0;
    c.optiwin_high = 1.0;
    auto rng = make_rng(99);
    const int n = 40000;
    const auto draws = next_batch_draws_1d(f, n, c, rng);
    const auto w = grid_weights_1d(f);
    std::vector<double> counts(201, 0.0);
    for (const auto& d : draws) counts[static_cast<std::size_t>(std::lround((d.scaled_v + 1.0) * 100.0))] += 1;
    double chi2 = 0.0;
    for (std::size_t g = 0; g < 201; ++g) {
        const double e = w[g] * n;
        chi2 += (counts[g] - e) * (counts[g] - e) / e;
    }
    const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(200), chi2));
    CHECK(p > 0.001);
}

TEST_CASE("a simulator ignoring the design value gives a flat curve", "[driver]") {
    SimulatorSpec spec{"probit-ignoring-v", SimulatorArity::SizeAndDesign, {{"dummy", 0.0}}};
    const auto sim = register_simulator(spec, [](std::int64_t size, const ParamSet&, std::uint64_t seed) {
        return std::optional<bool>(simulate_probit(size, 25.0, -2.0, 0.9, seed));
    });
    RunConfig1d d;
    d.optivar = "dummy";
    d.nsims = 3000;
    d.master_seed = 4;
    const auto r = run_1d(sim, d);
    double highest_low = 0.0;
    double lowest_high = std::numeric_limits<double>::infinity();
    for (const auto& p : r.curve) {
        highest_low = std::max(highest_low, p.ci_low);
        lowest_high = std::min(lowest_high, p.ci_high);
    }
    CHECK(highest_low <= lowest_high);
}

TEST_CASE("alpha has little impact on the ranking scenario size", "[driver]") {
    RunConfig1d d;
    d.optivar = "alpha";
    d.optiwin_low = 0.001;
    d.optiwin_high = 0.1;
    d.optilog = true;
    d.nsims = 10000;
    d.cap_nn = 10000;
    d.master_seed = 1;
    d.workers = 4;
    const auto r = run_1d(scenario("ranking", {}, SimulatorArity::SizeAndDesign), d);
    const auto [lo, hi] = std::minmax_element(r.curve.begin(), r.curve.end(), [](const auto& a, const auto& b) {
        return a.size_estimate < b.size_estimate;
    });
    CHECK(hi->size_estimate < 1.25 * lo->size_estimate);
    CHECK_THAT(r.curve[100].natural_v, WithinRel(0.01, 1e-12));
}

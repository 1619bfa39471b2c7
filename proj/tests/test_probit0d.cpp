#include <catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/LU>

#include "simsize/probit0d.hpp"
#include "simsize/stats.hpp"
#include "test_support.hpp"

using namespace simsize;
using testing_support::fd_gradient;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

const TargetSpec kTarget = TargetSpec::from_power(0.9);

double loglik_at(const Eigen::VectorXd& theta, const std::vector<SimRecord>& recs) {
    return loglik_0d({theta(0), theta(1)}, recs, kTarget);
}

Eigen::VectorXd grad_at(const Eigen::VectorXd& theta, const std::vector<SimRecord>& recs) {
    return grad_0d({theta(0), theta(1)}, recs, kTarget);
}

}  // namespace

TEST_CASE("target probit", "[probit0d]") {
    CHECK_THAT(kTarget.z_target, WithinRel(1.2815515655446005935, 1e-14));
    CHECK_THROWS_AS(TargetSpec::from_power(1.0), std::domain_error);
}

TEST_CASE("log-likelihood is the sum of log probabilities", "[probit0d]") {
    const std::vector<SimRecord> recs{SimRecord::fixed(0, 100, true), SimRecord::fixed(1, 400, false),
                                      SimRecord::fixed(2, 900, true)};
    const FixedDesignParams p{-2.0, 18.0};
    double expected = 0.0;
    for (const auto& r : recs) {
        const double inner = kTarget.z_target + std::exp(p.log_slope_s) * (r.sqrt_size_x - p.size_root_x0);
        expected += std::log(r.outcome ? norm_cdf(inner) : 1.0 - norm_cdf(inner));
    }
    CHECK_THAT(loglik_0d(p, recs, kTarget), WithinRel(expected, 1e-14));
}

TEST_CASE("gradient and Hessian match finite differences", "[probit0d]") {
    auto rng = make_rng(101);
    for (int rep = 0; rep < 50; ++rep) {
        const double s = testing_support::uniform(rng, -4.0, -1.0);
        const double x0 = testing_support::uniform(rng, 5.0, 45.0);
        const auto recs = testing_support::random_fixed_records(rng, 60);
        Eigen::VectorXd theta(2);
        theta << s, x0;
        auto ll = [&](const Eigen::VectorXd& t) { return loglik_at(t, recs); };
        const Eigen::VectorXd g = grad_at(theta, recs);
        const Eigen::VectorXd g_fd = fd_gradient(ll, theta);
        CHECK((g - g_fd).lpNorm<Eigen::Infinity>() <= 1e-6 * std::max(1.0, g_fd.lpNorm<Eigen::Infinity>()));

        const Eigen::Matrix2d h = hessian_0d({s, x0}, recs, kTarget);
        Eigen::Matrix2d h_fd;
        for (int c = 0; c < 2; ++c) {
            auto gc = [&](const Eigen::VectorXd& t) { return grad_at(t, recs)(c); };
            h_fd.row(c) = fd_gradient(gc, theta).transpose();
        }
        CHECK((h - h_fd).lpNorm<Eigen::Infinity>() <= 1e-5 * std::max(1.0, h_fd.lpNorm<Eigen::Infinity>()));
        CHECK(h(0, 1) == h(1, 0));
    }
}

TEST_CASE("likelihood terms stay finite for extreme inner values", "[probit0d]") {
    // I around +-40: Phi underflows on one side, but the hazards do not.
    const std::vector<SimRecord> recs{SimRecord::fixed(0, 4, true), SimRecord::fixed(1, 10000, false)};
    const FixedDesignParams p{0.5, 50.0};
    CHECK(std::isfinite(loglik_0d(p, recs, kTarget)));
    CHECK(grad_0d(p, recs, kTarget).allFinite());
    CHECK(hessian_0d(p, recs, kTarget).allFinite());
}

TEST_CASE("Hessian is negative definite on ordered outcomes", "[probit0d]") {
    // Successes mostly above sqrt 25, failures below, evaluated at the truth.
    auto rng = make_rng(5);
    std::vector<SimRecord> recs;
    for (int i = 0; i < 400; ++i) {
        auto rec = SimRecord::fixed(static_cast<std::uint64_t>(i),
                                    static_cast<std::int64_t>(testing_support::uniform(rng, 100, 1600)), false);
        rec.outcome = uniform01(rng) < norm_cdf(kTarget.z_target + std::exp(-2.0) * (rec.sqrt_size_x - 25.0));
        recs.push_back(rec);
    }
    const Eigen::Matrix2d h = hessian_0d({-2.0, 25.0}, recs, kTarget);
    CHECK(h(0, 0) < 0.0);
    CHECK(h.determinant() > 0.0);
}

TEST_CASE("fixed-design terms reject varying-design records", "[probit0d]") {
    const auto rec = SimRecord::varying(0, 100, 0.0, 0.0, true);
    CHECK_THROWS_AS(inner_term({-2.0, 10.0}, rec, kTarget), std::invalid_argument);
}

TEST_CASE("inner terms at simple points", "[probit0d]") {
    const auto rec = SimRecord::fixed(0, 400, true);
    auto t = inner_term({0.0, 20.0}, rec, kTarget);
    CHECK(t.inner_i == kTarget.z_target);
    CHECK(t.shift_s == 0.0);
    t = inner_term({0.0, 19.0}, rec, kTarget);
    CHECK_THAT(t.inner_i, WithinRel(2.281552, 1e-6));
    CHECK(t.shift_s == t.inner_i - kTarget.z_target);
    t = inner_term({std::log(2.0), 21.0}, rec, kTarget);
    CHECK_THAT(t.shift_s, WithinRel(-2.0, 1e-15));
}

TEST_CASE("log-likelihood examples", "[probit0d]") {
    // One success exactly at I = 0: power 0.5 target, record at X0.
    const auto half = TargetSpec::from_power(0.5);
    std::vector<SimRecord> one{SimRecord::fixed(0, 100, true)};
    CHECK_THAT(loglik_0d({0.0, 10.0}, one, half), WithinRel(std::log(0.5), 1e-15));
    const Eigen::Vector2d g = grad_0d({0.0, 10.0}, one, half);
    CHECK(g(0) == 0.0);
    CHECK_THAT(g(1), WithinRel(-0.7978846, 1e-6));

    std::vector<SimRecord> pair{SimRecord::fixed(0, 100, true), SimRecord::fixed(1, 100, false)};
    CHECK_THAT(loglik_0d({0.0, 10.0}, pair, kTarget), WithinRel(-2.40794560865, 1e-10));

    auto rng = make_rng(6);
    auto recs = testing_support::random_fixed_records(rng, 50);
    auto doubled = recs;
    doubled.insert(doubled.end(), recs.begin(), recs.end());
    const FixedDesignParams p{-2.5, 22.0};
    CHECK_THAT(loglik_0d(p, doubled, kTarget), WithinRel(2.0 * loglik_0d(p, recs, kTarget), 1e-14));
}

TEST_CASE("empty record sets and records at the target", "[probit0d]") {
    const std::vector<SimRecord> none;
    CHECK(hessian_0d({-1.0, 5.0}, none, kTarget) == Eigen::Matrix2d::Zero());
    CHECK(grad_0d({-1.0, 5.0}, none, kTarget) == Eigen::Vector2d::Zero());
    // At S = 0 the record adds nothing to d2/ds2.
    const std::vector<SimRecord> at{SimRecord::fixed(0, 400, false)};
    CHECK(hessian_0d({-1.0, 20.0}, at, kTarget)(0, 0) == 0.0);
}

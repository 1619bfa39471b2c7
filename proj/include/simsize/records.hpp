#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace simsize {

/// One simulated trial.
///
/// `scaled_v` (in [-1, 1]) and `natural_v` (user units) are present only for
/// records produced by a varying-design run.
struct SimRecord {
    std::uint64_t sim_index = 0;
    std::int64_t size_n = 1;
    double sqrt_size_x = 1.0;
    std::optional<double> scaled_v;
    std::optional<double> natural_v;
    bool outcome = false;
    std::uint64_t seed = 0;

    static SimRecord fixed(std::uint64_t index, std::int64_t size, bool outcome,
                           std::uint64_t seed = 0) {
        SimRecord r;
        r.sim_index = index;
        r.size_n = size;
        r.sqrt_size_x = std::sqrt(static_cast<double>(size));
        r.outcome = outcome;
        r.seed = seed;
        return r;
    }

    static SimRecord varying(std::uint64_t index, std::int64_t size, double scaled,
                             double natural, bool outcome, std::uint64_t seed = 0) {
        SimRecord r = fixed(index, size, outcome, seed);
        r.scaled_v = scaled;
        r.natural_v = natural;
        return r;
    }

    /// +1 for a successful trial, -1 otherwise.
    int sign() const { return outcome ? 1 : -1; }
};

/// Target probability of success and its probit.
struct TargetSpec {
    double target_power = 0.9;
    double z_target = 0.0;

    /// Throws std::domain_error unless 0 < power < 1.
    static TargetSpec from_power(double power);
};

}  // namespace simsize

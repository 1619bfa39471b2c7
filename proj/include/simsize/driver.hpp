#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "simsize/mle.hpp"
#include "simsize/records.hpp"
#include "simsize/seeding.hpp"
#include "simsize/simulator.hpp"

namespace simsize {

/// Settings shared by fixed and varying design runs.
struct RunConfig {
    double target_power = 0.9;
    std::int64_t nsims = 1000;
    /// Largest simulated size; larger draws are jittered into [0.9 cap, cap].
    /// std::nullopt means unbounded.
    std::optional<std::int64_t> cap_nn = 2000;
    /// Size considered infeasible; std::nullopt means unbounded.
    std::optional<std::int64_t> imp_nn;
    /// Keep the first 150 simulations in the fits once 500 exist.
    bool keep_initiation = false;
    /// Records from an earlier run to continue from.
    std::vector<SimRecord> prior_records;
    bool keep_sims = false;
    bool verbose = false;
    std::uint64_t master_seed = 0;
    std::optional<std::filesystem::path> diagnostics_dir;
    /// Concurrent simulator invocations within a batch.
    unsigned workers = 1;

    /// Throws ConfigError.
    void validate() const;
};

/// Additional settings for a run that also explores one design parameter.
struct RunConfig1d : RunConfig {
    std::string optivar;
    double optiwin_low = 0.0;
    double optiwin_high = 1.0;
    bool optilog = false;
    bool optiround = false;
    int n_slope_coefs = 2;
    int n_size_coefs = 4;

    void validate() const;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The simulator returned no outcome (or threw).
class SimulatorFailure : public std::runtime_error {
public:
    SimulatorFailure(std::uint64_t sim_index, std::int64_t size, std::uint64_t seed,
                     const std::string& detail);
    std::uint64_t sim_index() const { return sim_index_; }
    std::int64_t size() const { return size_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t sim_index_;
    std::int64_t size_;
    std::uint64_t seed_;
};

/// After 500+ simulations the estimate minus one SE is above sqrt(imp_nn).
class ImpossibleSizeError : public std::runtime_error {
public:
    ImpossibleSizeError(std::int64_t imp_nn, double size_root, double size_root_se);
    std::int64_t imp_nn() const { return imp_nn_; }

private:
    std::int64_t imp_nn_;
};

/// Every simulation failed, even after widening the sampled sizes towards
/// cap_nn.
class PersistentSeparationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RunKind { Fixed, Varying };

enum class Termination {
    BudgetSpent,       ///< nsims reached
    AlwaysSuccessful,  ///< every simulation succeeded down to the smallest sizes
};

/// Estimate after one batch.
struct BatchTrace {
    int batch = 0;
    std::int64_t n_simulations = 0;
    /// X0 (fixed design) or X0 at the grid minimum of the size curve.
    std::optional<double> size_root_estimate;
    std::optional<double> size_root_se;
    bool separated = false;
};

struct RunResult {
    RunKind kind = RunKind::Fixed;
    Termination termination = Termination::BudgetSpent;
    std::int64_t n_simulations = 0;

    /// Fixed design: round(X0^2) with its 95% band. Varying design: values
    /// at the grid point with the smallest estimated size.
    std::int64_t size_estimate = 0;
    double size_root_estimate = 0.0;
    double size_root_se = 0.0;
    double size_ci_low = 0.0;
    double size_ci_high = 0.0;

    /// 201 points along the design window (varying design only).
    std::vector<CurvePoint> curve;
    FitResult final_fit;
    std::vector<BatchTrace> trace;
    /// Present iff keep_sims.
    std::optional<std::vector<SimRecord>> sims;
};

/// Cumulative counts after each batch: 50, 100, ..., 500, then batches of
/// ceil(10%) of the current total, truncated to reach nsims exactly.
std::int64_t next_batch_size(std::int64_t current_total, std::int64_t nsims);

/// Linear (or log-linear with optilog) map from [-1, 1] onto the window,
/// rounded to the nearest integer with optiround.
double scale_v(double scaled, const RunConfig1d& config);

/// Inverse of the unrounded scale_v.
double unscale_v(double natural, const RunConfig1d& config);

/// Clamps a drawn sqrt-size to an integer size in [4, cap_nn]; sizes above
/// the cap are jittered uniformly into [0.9 cap, cap] using `rng`.
std::int64_t clamp_size(double size_root, const RunConfig& config, Rng& rng);

/// Sizes drawn uniformly in X0 +/- SE on the sqrt scale.
std::vector<std::int64_t> next_batch_sizes_0d(const FitResult& fit, std::int64_t batch_size,
                                              const RunConfig& config, Rng& rng);

/// One planned varying-design simulation.
struct DesignDraw {
    double scaled_v = 0.0;
    double natural_v = 0.0;
    std::int64_t size = 0;
};

/// Grid values drawn with probability proportional to 1/max(N(v), 4)^2,
/// then sizes uniform in X0(v) +/- SE(v) on the sqrt scale.
std::vector<DesignDraw> next_batch_draws_1d(const FitResult& fit, std::int64_t batch_size,
                                            const RunConfig1d& config, Rng& rng);

/// Sampling weights over the 201-point grid used by next_batch_draws_1d
/// (normalised to sum to one).
std::vector<double> grid_weights_1d(const FitResult& fit);

RunResult run_0d(const SimulatorHandle& simulator, const RunConfig& config);
RunResult run_1d(const SimulatorHandle& simulator, const RunConfig1d& config);

/// Continues from `records` as if this run had produced them.
RunResult resume(const SimulatorHandle& simulator, std::vector<SimRecord> records,
                 RunConfig config);
RunResult resume(const SimulatorHandle& simulator, std::vector<SimRecord> records,
                 RunConfig1d config);

/// Simulation index below which records are dropped from fits once 500
/// simulations exist (unless keep_initiation).
inline constexpr std::uint64_t kDiscardedInitiation = 150;

}  // namespace simsize

#include "simsize/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <boost/random/discrete_distribution.hpp>

#include "simsize/diagnostics.hpp"

namespace simsize {
namespace {

constexpr std::int64_t kBatchBeforeGrowth = 50;
constexpr std::int64_t kGrowthStart = 500;
constexpr int kMaxWidenedBatches = 3;
constexpr double kMinSizeRoot = 2.0;
constexpr std::uint64_t kPlanStreamTag = 0x706c616e6e696e67ULL;  // "planning"

std::string describe_cap(const std::optional<std::int64_t>& cap) {
    return cap ? std::to_string(*cap) : std::string("inf");
}

FitOptions fit_options(const RunConfig& config) {
    FitOptions options;
    if (config.cap_nn) {
        options.size_root_max = std::sqrt(10.0 * static_cast<double>(*config.cap_nn));
    }
    return options;
}

double uniform_between(Rng& rng, double lo, double hi) {
    return lo + uniform01(rng) * (hi - lo);
}

struct Job {
    std::uint64_t index = 0;
    std::int64_t size = 0;
    std::optional<DesignDraw> design;
    std::uint64_t seed = 0;
};

// Runs one batch of simulations. Each job's outcome depends only on its
// seed, so the worker count never changes the result.
std::vector<SimRecord> simulate_batch(const SimulatorHandle& simulator, std::vector<Job> jobs,
                                      const std::string& design_name, unsigned workers) {
    std::vector<std::optional<bool>> outcomes(jobs.size());
    std::vector<std::string> errors(jobs.size());
    auto run_one = [&](std::size_t k) {
        const Job& job = jobs[k];
        try {
            std::optional<std::pair<std::string, double>> design;
            if (job.design) design.emplace(design_name, job.design->natural_v);
            outcomes[k] = simulator(job.size, job.seed, design);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        } catch (...) {
            errors[k] = "unknown exception";
        }
    };
    const unsigned n_workers = simulator.spec().serial_only
                                   ? 1u
                                   : std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
    if (n_workers <= 1) {
        for (std::size_t k = 0; k < jobs.size(); ++k) run_one(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < jobs.size(); k = next++) run_one(k);
            });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<SimRecord> out;
    out.reserve(jobs.size());
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const Job& job = jobs[k];
        if (!outcomes[k]) {
            throw SimulatorFailure(job.index, job.size, job.seed,
                                   errors[k].empty() ? "simulator returned no outcome" : errors[k]);
        }
        if (job.design) {
            out.push_back(SimRecord::varying(job.index, job.size, job.design->scaled_v,
                                             job.design->natural_v, *outcomes[k], job.seed));
        } else {
            out.push_back(SimRecord::fixed(job.index, job.size, *outcomes[k], job.seed));
        }
    }
    return out;
}

// Fit outcome after a batch: a fit, or the direction of separation.
struct FitState {
    std::optional<FitResult> fit;
    std::optional<bool> separated_all_success;
    std::size_t n_eligible = 0;
    double eligible_root_min = 0.0;
    double eligible_root_max = 0.0;
};

class AdaptiveRun {
public:
    AdaptiveRun(const SimulatorHandle& simulator, const RunConfig& config,
                const RunConfig1d* design)
        : simulator_(simulator), config_(config), design_(design),
          target_(TargetSpec::from_power(config.target_power)),
          shape_(design ? ModelShape::varying(design->n_slope_coefs, design->n_size_coefs)
                        : ModelShape::fixed()),
          plan_master_(mix64(config.master_seed ^ kPlanStreamTag)) {
        if (config_.diagnostics_dir) {
            diagnostics_.emplace(*config_.diagnostics_dir);
        }
    }

    RunResult run() {
        check_arity();
        records_ = config_.prior_records;
        validate_prior();

        int batch = 0;
        if (!records_.empty()) {
            plan_interrupted_batch();
            refit();
        }
        while (static_cast<std::int64_t>(records_.size()) < config_.nsims) {
            const auto total = static_cast<std::int64_t>(records_.size());
            const std::int64_t n = next_batch_size(total, config_.nsims);
            auto plan = pending_plan_ ? std::move(*pending_plan_) : plan_batch(n);
            pending_plan_.reset();
            const std::size_t begin = records_.size();
            auto fresh = simulate_batch(simulator_, to_jobs(plan),
                                        design_ ? design_->optivar : std::string(), config_.workers);
            records_.insert(records_.end(), fresh.begin(), fresh.end());
            ++batch;

            refit();
            record_trace(batch);
            if (always_successful_) {
                emit_diagnostics(batch, begin);
                break;
            }
            check_impossible();

            const auto next_total = static_cast<std::int64_t>(records_.size());
            if (next_total < config_.nsims) {
                pending_plan_ = plan_batch(next_batch_size(next_total, config_.nsims));
            }
            emit_diagnostics(batch, begin);
            if (config_.verbose) log_batch(batch);
        }
        return finish();
    }

private:
    // ---- setup -------------------------------------------------------------

    void check_arity() const {
        const auto arity = simulator_.spec().arity;
        if (design_ && arity != SimulatorArity::SizeAndDesign) {
            throw SimulatorArityError("simulator '" + simulator_.spec().name +
                                      "' takes no design parameter; use a fixed-design run");
        }
        if (!design_ && arity != SimulatorArity::SizeOnly) {
            throw SimulatorArityError("simulator '" + simulator_.spec().name +
                                      "' needs a design parameter; use a varying-design run");
        }
        if (design_ && !simulator_.spec().defaults.values().empty() &&
            !simulator_.spec().defaults.contains(design_->optivar)) {
            throw SimulatorArityError("simulator '" + simulator_.spec().name +
                                      "' has no parameter named '" + design_->optivar + "'");
        }
    }

    void validate_prior() const {
        for (std::size_t k = 0; k < records_.size(); ++k) {
            const auto& r = records_[k];
            const std::string where = "prior record " + std::to_string(k) + ": ";
            if (r.sim_index != k) {
                throw ConfigError(where + "simulation indices must run 0, 1, 2, ...");
            }
            if (r.size_n < 1) {
                throw ConfigError(where + "size must be a positive integer");
            }
            if (std::abs(r.sqrt_size_x * r.sqrt_size_x - static_cast<double>(r.size_n)) >
                1e-9 * static_cast<double>(r.size_n)) {
                throw ConfigError(where + "cached square root does not match the size");
            }
            if (r.scaled_v.has_value() != (design_ != nullptr) ||
                r.natural_v.has_value() != (design_ != nullptr)) {
                throw ConfigError(where + (design_ ? "fixed-design record given to a varying-design run"
                                                   : "varying-design record given to a fixed-design run"));
            }
            if (design_) {
                if (!(std::abs(*r.scaled_v) <= 1.0 + kScaledVSlack)) {
                    throw ConfigError(where + "scaled design value outside [-1, 1]");
                }
                const double expected = scale_v(*r.scaled_v, *design_);
                if (std::abs(expected - *r.natural_v) > 1e-6 * std::max(1.0, std::abs(expected))) {
                    throw ConfigError(where + "design value does not match the exploration window");
                }
            }
        }
    }

    // Prior records ending between two schedule points come from a run whose
    // last batch was truncated. Its remainder is planned from the fit at that
    // batch's start, exactly as the uninterrupted run would have planned it,
    // so splitting a run into run + resume does not change the result.
    void plan_interrupted_batch() {
        constexpr auto kUnbounded = std::numeric_limits<std::int64_t>::max();
        const auto n = static_cast<std::int64_t>(records_.size());
        if (n >= config_.nsims) return;
        std::int64_t start = 0;
        while (start + next_batch_size(start, kUnbounded) <= n) start += next_batch_size(start, kUnbounded);
        if (start == n) return;
        const std::int64_t full = next_batch_size(start, kUnbounded);

        std::vector<SimRecord> all = std::move(records_);
        records_.assign(all.begin(), all.begin() + start);
        if (!records_.empty()) refit();
        auto plan = plan_batch(full);
        records_ = std::move(all);

        const auto end = std::min(full, config_.nsims - start);
        pending_plan_.emplace(plan.begin() + (n - start), plan.begin() + end);
    }

    // ---- fitting -----------------------------------------------------------

    std::vector<SimRecord> eligible_records() const {
        const bool discard = !config_.keep_initiation &&
                             static_cast<std::int64_t>(records_.size()) >= kGrowthStart;
        if (!discard) return records_;
        std::vector<SimRecord> out;
        out.reserve(records_.size());
        std::copy_if(records_.begin(), records_.end(), std::back_inserter(out),
                     [](const SimRecord& r) { return r.sim_index >= kDiscardedInitiation; });
        return out;
    }

    void refit() {
        const auto eligible = eligible_records();
        FitState next;
        next.n_eligible = eligible.size();
        if (!eligible.empty()) {
            const auto [lo, hi] = std::minmax_element(
                eligible.begin(), eligible.end(),
                [](const SimRecord& a, const SimRecord& b) { return a.sqrt_size_x < b.sqrt_size_x; });
            next.eligible_root_min = lo->sqrt_size_x;
            next.eligible_root_max = hi->sqrt_size_x;
        }
        try {
            const auto options = fit_options(config_);
            auto result = fit(eligible, target_, shape_, std::nullopt, options);
            if (!result.converged && state_.fit) {
                auto retry = fit(eligible, target_, shape_, state_.fit->params, options);
                if (retry.converged || retry.loglik > result.loglik) result = std::move(retry);
            }
            next.fit = std::move(result);
            widened_batches_ = 0;
        } catch (const SeparationError& e) {
            next.separated_all_success = e.all_success();
        } catch (const std::invalid_argument&) {
            // fewer than two eligible records
            next.separated_all_success = eligible.empty() || eligible.front().outcome;
        }
        if (!next.fit) {
            if (widened_batches_ >= kMaxWidenedBatches ||
                static_cast<std::int64_t>(records_.size()) >= config_.nsims) {
                if (*next.separated_all_success) {
                    always_successful_ = true;
                } else {
                    throw PersistentSeparationError(
                        "every simulation failed, up to sizes near cap_nn=" +
                        describe_cap(config_.cap_nn) + "; the target looks unreachable");
                }
            }
        }
        state_ = std::move(next);
    }

    void check_impossible() const {
        if (!config_.imp_nn || !state_.fit ||
            static_cast<std::int64_t>(records_.size()) < kGrowthStart) {
            return;
        }
        const double limit = std::sqrt(static_cast<double>(*config_.imp_nn));
        const auto [root, se] = best_root();
        if (root - se > limit) {
            throw ImpossibleSizeError(*config_.imp_nn, root, se);
        }
    }

    // X0 and SE for the fixed design, or at the grid point minimising
    // X0(v) - SE(v) for a varying design.
    std::pair<double, double> best_root() const {
        const auto& f = *state_.fit;
        if (!design_) return {f.fixed().size_root_x0, f.se_x0};
        const auto grid = default_grid();
        double best = std::numeric_limits<double>::infinity();
        std::pair<double, double> out{0.0, 0.0};
        for (double v : grid) {
            const auto p = detail::curve_point(f, v);
            if (p.size_root_estimate - p.size_root_se < best) {
                best = p.size_root_estimate - p.size_root_se;
                out = {p.size_root_estimate, p.size_root_se};
            }
        }
        return out;
    }

    // ---- planning ----------------------------------------------------------

    // Upper end of the sqrt-size range explored by initiation and widening;
    // without a cap, twice the largest size simulated so far.
    double exploration_root_max() const {
        if (config_.cap_nn) return std::sqrt(static_cast<double>(*config_.cap_nn));
        double hi = kMinSizeRoot;
        for (const auto& r : records_) hi = std::max(hi, r.sqrt_size_x);
        return 2.0 * hi;
    }

    Rng plan_rng() const {
        return make_rng(derive_seed({plan_master_, static_cast<std::uint64_t>(records_.size())}));
    }

    DesignDraw design_draw(double scaled) const {
        DesignDraw d;
        d.natural_v = scale_v(scaled, *design_);
        d.scaled_v = design_->optiround
                         ? std::clamp(unscale_v(d.natural_v, *design_), -1.0, 1.0)
                         : scaled;
        return d;
    }

    std::vector<DesignDraw> plan_batch(std::int64_t n) {
        Rng rng = plan_rng();
        if (state_.fit) {
            if (design_) return next_batch_draws_1d(*state_.fit, n, *design_, rng);
            std::vector<DesignDraw> plan;
            for (auto size : next_batch_sizes_0d(*state_.fit, n, config_, rng)) {
                plan.push_back({0.0, 0.0, size});
            }
            return plan;
        }
        // Initiation (no records yet) or a widened batch after separation.
        double lo = kMinSizeRoot;
        double hi = exploration_root_max();
        if (state_.separated_all_success) {
            ++widened_batches_;
            if (*state_.separated_all_success) {
                hi = std::max(kMinSizeRoot, state_.eligible_root_min);
            } else {
                lo = state_.eligible_root_max;
                hi = config_.cap_nn ? std::max(lo, exploration_root_max()) : 2.0 * lo;
            }
        }
        std::vector<DesignDraw> plan;
        plan.reserve(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k) {
            DesignDraw d;
            if (design_) d = design_draw(uniform_between(rng, -1.0, 1.0));
            d.size = clamp_size(uniform_between(rng, lo, hi), config_, rng);
            plan.push_back(d);
        }
        return plan;
    }

    std::vector<Job> to_jobs(const std::vector<DesignDraw>& plan) const {
        std::vector<Job> jobs;
        jobs.reserve(plan.size());
        for (std::size_t k = 0; k < plan.size(); ++k) {
            Job job;
            job.index = records_.size() + k;
            job.size = plan[k].size;
            if (design_) job.design = plan[k];
            job.seed = derive_seed({config_.master_seed, job.index});
            jobs.push_back(job);
        }
        return jobs;
    }

    // ---- reporting ---------------------------------------------------------

    void record_trace(int batch) {
        BatchTrace t;
        t.batch = batch;
        t.n_simulations = static_cast<std::int64_t>(records_.size());
        t.separated = !state_.fit.has_value();
        if (state_.fit) {
            const auto [root, se] = design_ ? min_size_point() : best_root();
            t.size_root_estimate = root;
            t.size_root_se = se;
        }
        trace_.push_back(t);
    }

    std::pair<double, double> min_size_point() const {
        const auto grid = default_grid();
        CurvePoint best;
        best.size_root_estimate = std::numeric_limits<double>::infinity();
        for (double v : grid) {
            const auto p = detail::curve_point(*state_.fit, v);
            if (p.size_root_estimate < best.size_root_estimate) best = p;
        }
        return {best.size_root_estimate, best.size_root_se};
    }

    std::vector<CurvePoint> current_curve() const {
        const auto grid = default_grid();
        auto cfg = *design_;
        cfg.optiround = false;
        return curve_with_ci(*state_.fit, grid, [&](double v) { return scale_v(v, cfg); });
    }

    void emit_diagnostics(int batch, std::size_t begin) {
        if (!diagnostics_) return;
        BatchSnapshot snap;
        snap.kind = design_ ? RunKind::Varying : RunKind::Fixed;
        snap.batch = batch;
        snap.target_power = config_.target_power;
        snap.records = records_;
        snap.batch_begin = begin;
        snap.fit = state_.fit ? &*state_.fit : nullptr;
        if (design_ && state_.fit) snap.curve = current_curve();
        if (pending_plan_) snap.next_batch = *pending_plan_;
        diagnostics_->emit(snap);
    }

    void log_batch(int batch) const {
        const auto& t = trace_.back();
        std::ostringstream os;
        os << "batch " << batch << ": " << t.n_simulations << " simulations";
        if (t.size_root_estimate) {
            os << ", size estimate " << size_from_root(*t.size_root_estimate) << " (sqrt "
               << *t.size_root_estimate << " +/- " << *t.size_root_se << ")";
        } else {
            os << ", outcomes separated";
        }
        std::cerr << os.str() << '\n';
    }

    FitResult floor_fit() const {
        FitResult f;
        f.shape = shape_;
        const FitOptions options = fit_options(config_);
        if (design_) {
            VaryingDesignParams p;
            p.slope_coefs.assign(static_cast<std::size_t>(shape_.n_slope_coefs), 0.0);
            p.size_coefs.assign(static_cast<std::size_t>(shape_.n_size_coefs), 0.0);
            p.slope_coefs[0] = options.log_slope_max;
            p.size_coefs[0] = options.size_root_min;
            f.params = p;
        } else {
            f.params = FixedDesignParams{options.log_slope_max, options.size_root_min};
            f.se_x0 = 0.0;
        }
        f.covariance = Eigen::MatrixXd::Zero(shape_.n_params(), shape_.n_params());
        f.converged = false;
        return f;
    }

    RunResult finish() {
        RunResult result;
        result.kind = design_ ? RunKind::Varying : RunKind::Fixed;
        result.termination = always_successful_ ? Termination::AlwaysSuccessful
                                                : Termination::BudgetSpent;
        result.n_simulations = static_cast<std::int64_t>(records_.size());
        if (!state_.fit && !always_successful_) {
            // Budget already spent by the prior records and they are separated.
            if (state_.separated_all_success.value_or(false)) {
                always_successful_ = true;
                result.termination = Termination::AlwaysSuccessful;
            } else {
                throw PersistentSeparationError("every simulation failed; the target looks unreachable");
            }
        }
        result.final_fit = state_.fit ? *state_.fit : floor_fit();
        if (design_) {
            const auto grid = default_grid();
            auto cfg = *design_;
            cfg.optiround = false;
            result.curve = curve_with_ci(result.final_fit, grid,
                                         [&](double v) { return scale_v(v, cfg); });
            const auto best = std::min_element(
                result.curve.begin(), result.curve.end(), [](const CurvePoint& a, const CurvePoint& b) {
                    return a.size_root_estimate < b.size_root_estimate;
                });
            fill_point(result, *best);
        } else {
            fill_point(result, detail::curve_point(result.final_fit, 0.0));
        }
        result.trace = trace_;
        if (config_.keep_sims) result.sims = records_;
        return result;
    }

    static void fill_point(RunResult& result, const CurvePoint& p) {
        result.size_estimate = static_cast<std::int64_t>(p.size_estimate);
        result.size_root_estimate = p.size_root_estimate;
        result.size_root_se = p.size_root_se;
        result.size_ci_low = p.ci_low;
        result.size_ci_high = p.ci_high;
    }

    const SimulatorHandle& simulator_;
    const RunConfig& config_;
    const RunConfig1d* design_;
    TargetSpec target_;
    ModelShape shape_;
    std::uint64_t plan_master_;

    std::vector<SimRecord> records_;
    FitState state_;
    std::optional<std::vector<DesignDraw>> pending_plan_;
    int widened_batches_ = 0;
    bool always_successful_ = false;
    std::vector<BatchTrace> trace_;
    std::optional<DiagnosticsWriter> diagnostics_;
};

}  // namespace

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
    if (!(target_power > 0.0 && target_power < 1.0)) {
        throw ConfigError("target power must lie in (0, 1)");
    }
    if (nsims < 100) {
        throw ConfigError("nsims must be at least 100");
    }
    if (cap_nn && *cap_nn < 4) {
        throw ConfigError("cap_nn must be at least 4");
    }
    if (imp_nn && (!cap_nn || *imp_nn < *cap_nn)) {
        throw ConfigError("imp_nn must be at least cap_nn");
    }
    if (!cap_nn && prior_records.empty()) {
        throw ConfigError("an unbounded cap_nn needs prior records: initiation samples up to cap_nn");
    }
}

void RunConfig1d::validate() const {
    RunConfig::validate();
    if (optivar.empty()) {
        throw ConfigError("optivar (the design parameter to explore) is required");
    }
    if (!(optiwin_low < optiwin_high) || !std::isfinite(optiwin_low) || !std::isfinite(optiwin_high)) {
        throw ConfigError("optiwin must satisfy low < high");
    }
    if (optilog && !(optiwin_low > 0.0)) {
        throw ConfigError("optilog requires a positive optiwin");
    }
    if (n_slope_coefs < 1 || n_size_coefs < 1 || n_slope_coefs > 8 || n_size_coefs > 8) {
        throw ConfigError("polynomial lengths must lie in 1..8");
    }
}

SimulatorFailure::SimulatorFailure(std::uint64_t sim_index, std::int64_t size, std::uint64_t seed,
                                   const std::string& detail)
    : std::runtime_error("simulation " + std::to_string(sim_index) + " (size " +
                         std::to_string(size) + ", seed " + std::to_string(seed) +
                         ") failed: " + detail),
      sim_index_(sim_index), size_(size), seed_(seed) {}

ImpossibleSizeError::ImpossibleSizeError(std::int64_t imp_nn, double size_root, double size_root_se)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "required size looks impossible: estimate " << size_root * size_root
             << " (sqrt " << size_root << " +/- " << size_root_se << ") exceeds imp_nn="
             << imp_nn << " by more than one standard error";
          return os.str();
      }()),
      imp_nn_(imp_nn) {}

std::int64_t next_batch_size(std::int64_t current_total, std::int64_t nsims) {
    std::int64_t n;
    if (current_total < kGrowthStart) {
        n = kBatchBeforeGrowth - current_total % kBatchBeforeGrowth;
    } else {
        n = (current_total + 9) / 10;
    }
    return std::max<std::int64_t>(0, std::min(n, nsims - current_total));
}

double scale_v(double scaled, const RunConfig1d& config) {
    const double t = (scaled + 1.0) / 2.0;
    double natural;
    if (t <= 0.0) {
        natural = config.optiwin_low;
    } else if (t >= 1.0) {
        natural = config.optiwin_high;
    } else if (config.optilog) {
        natural = std::exp(std::lerp(std::log(config.optiwin_low), std::log(config.optiwin_high), t));
    } else {
        natural = std::lerp(config.optiwin_low, config.optiwin_high, t);
    }
    return config.optiround ? std::nearbyint(natural) : natural;
}

double unscale_v(double natural, const RunConfig1d& config) {
    double t;
    if (config.optilog) {
        t = (std::log(natural) - std::log(config.optiwin_low)) /
            (std::log(config.optiwin_high) - std::log(config.optiwin_low));
    } else {
        t = (natural - config.optiwin_low) / (config.optiwin_high - config.optiwin_low);
    }
    return 2.0 * t - 1.0;
}

std::int64_t clamp_size(double size_root, const RunConfig& config, Rng& rng) {
    if (!std::isfinite(size_root)) {
        size_root = size_root > 0 ? std::numeric_limits<double>::max() : 0.0;
    }
    const double root = std::max(size_root, 0.0);
    const double squared = std::round(root * root);
    if (config.cap_nn && squared > static_cast<double>(*config.cap_nn)) {
        const double cap = static_cast<double>(*config.cap_nn);
        const double jittered = std::round(uniform_between(rng, 0.9 * cap, cap));
        return std::clamp(static_cast<std::int64_t>(jittered), std::int64_t{4}, *config.cap_nn);
    }
    if (squared > 9e18) return std::numeric_limits<std::int64_t>::max() / 2;
    return std::max<std::int64_t>(4, static_cast<std::int64_t>(squared));
}

std::vector<std::int64_t> next_batch_sizes_0d(const FitResult& fit, std::int64_t batch_size,
                                              const RunConfig& config, Rng& rng) {
    const double root = fit.fixed().size_root_x0;
    const double se = std::isfinite(fit.se_x0) ? fit.se_x0 : 0.0;
    std::vector<std::int64_t> sizes;
    sizes.reserve(static_cast<std::size_t>(std::max<std::int64_t>(batch_size, 0)));
    for (std::int64_t k = 0; k < batch_size; ++k) {
        sizes.push_back(clamp_size(uniform_between(rng, root - se, root + se), config, rng));
    }
    return sizes;
}

std::vector<double> grid_weights_1d(const FitResult& fit) {
    const auto grid = default_grid();
    std::vector<double> w;
    w.reserve(grid.size());
    double total = 0.0;
    for (double v : grid) {
        const double root = eval_poly(fit.varying().size_coefs, v);
        const double size = std::max(root * root, kMinSize);
        w.push_back(1.0 / (size * size));
        total += w.back();
    }
    for (auto& x : w) x /= total;
    return w;
}

std::vector<DesignDraw> next_batch_draws_1d(const FitResult& fit, std::int64_t batch_size,
                                            const RunConfig1d& config, Rng& rng) {
    const auto grid = default_grid();
    const auto weights = grid_weights_1d(fit);
    boost::random::discrete_distribution<std::size_t, double> pick(weights.begin(), weights.end());
    std::vector<DesignDraw> draws;
    draws.reserve(static_cast<std::size_t>(std::max<std::int64_t>(batch_size, 0)));
    for (std::int64_t k = 0; k < batch_size; ++k) {
        const double v = grid[pick(rng)];
        const auto point = detail::curve_point(fit, v);
        DesignDraw d;
        d.natural_v = scale_v(v, config);
        d.scaled_v = config.optiround ? std::clamp(unscale_v(d.natural_v, config), -1.0, 1.0) : v;
        d.size = clamp_size(uniform_between(rng, point.size_root_estimate - point.size_root_se,
                                            point.size_root_estimate + point.size_root_se),
                            config, rng);
        draws.push_back(d);
    }
    return draws;
}

RunResult run_0d(const SimulatorHandle& simulator, const RunConfig& config) {
    config.validate();
    return AdaptiveRun(simulator, config, nullptr).run();
}

RunResult run_1d(const SimulatorHandle& simulator, const RunConfig1d& config) {
    config.validate();
    return AdaptiveRun(simulator, config, &config).run();
}

RunResult resume(const SimulatorHandle& simulator, std::vector<SimRecord> records,
                 RunConfig config) {
    config.prior_records = std::move(records);
    return run_0d(simulator, config);
}

RunResult resume(const SimulatorHandle& simulator, std::vector<SimRecord> records,
                 RunConfig1d config) {
    config.prior_records = std::move(records);
    return run_1d(simulator, config);
}

}  // namespace simsize

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace simsize {

using ParamValue = std::variant<double, std::vector<double>>;

/// Named simulator parameters (the trial design knobs other than size).
class ParamSet {
public:
    ParamSet() = default;
    ParamSet(std::initializer_list<std::pair<const std::string, ParamValue>> init)
        : values_(init) {}

    void set(const std::string& name, ParamValue value) { values_[name] = std::move(value); }
    bool contains(const std::string& name) const { return values_.count(name) != 0; }

    /// Throws std::invalid_argument if missing or not a scalar.
    double real(const std::string& name) const;
    /// A scalar is promoted to a one-element sequence.
    std::vector<double> sequence(const std::string& name) const;

    const std::map<std::string, ParamValue>& values() const { return values_; }

private:
    std::map<std::string, ParamValue> values_;
};

/// Parses "0.3" as a scalar and "0,0.5,1" as a sequence.
ParamValue parse_param_value(const std::string& text);

enum class SimulatorArity { SizeOnly, SizeAndDesign };

/// One simulated trial: returns success/failure, or std::nullopt when the
/// simulator could not produce an outcome (which aborts a run).
using SimulatorFn =
    std::function<std::optional<bool>(std::int64_t size, const ParamSet& params, std::uint64_t seed)>;

struct SimulatorSpec {
    std::string name;
    SimulatorArity arity = SimulatorArity::SizeOnly;
    ParamSet defaults;
    /// Set for callables that must not be invoked concurrently.
    bool serial_only = false;
};

class SimulatorArityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A registered simulator with its parameter overrides applied.
class SimulatorHandle {
public:
    SimulatorHandle(SimulatorSpec spec, SimulatorFn fn);

    const SimulatorSpec& spec() const { return *spec_; }

    /// Returns a handle whose named parameters are overridden. Unknown
    /// names are accepted only if the spec declares no defaults at all.
    SimulatorHandle with_params(const ParamSet& overrides) const;

    /// Effective parameters after overrides.
    const ParamSet& params() const { return params_; }

    /// Invokes the simulator; `design` sets the named parameter first.
    std::optional<bool> operator()(std::int64_t size, std::uint64_t seed,
                                   const std::optional<std::pair<std::string, double>>& design =
                                       std::nullopt) const;

private:
    std::shared_ptr<const SimulatorSpec> spec_;
    std::shared_ptr<const SimulatorFn> fn_;
    ParamSet params_;
};

SimulatorHandle register_simulator(SimulatorSpec spec, SimulatorFn fn);

}  // namespace simsize

#include "simsize/simulator.hpp"

#include <sstream>

namespace simsize {

double ParamSet::real(const std::string& name) const {
    const auto it = values_.find(name);
    if (it == values_.end()) {
        throw std::invalid_argument("missing simulator parameter '" + name + "'");
    }
    if (const auto* d = std::get_if<double>(&it->second)) {
        return *d;
    }
    const auto& seq = std::get<std::vector<double>>(it->second);
    if (seq.size() == 1) {
        return seq.front();
    }
    throw std::invalid_argument("simulator parameter '" + name + "' is not a scalar");
}

std::vector<double> ParamSet::sequence(const std::string& name) const {
    const auto it = values_.find(name);
    if (it == values_.end()) {
        throw std::invalid_argument("missing simulator parameter '" + name + "'");
    }
    if (const auto* d = std::get_if<double>(&it->second)) {
        return {*d};
    }
    return std::get<std::vector<double>>(it->second);
}

ParamValue parse_param_value(const std::string& text) {
    std::vector<double> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number: '" + item + "'");
        }
        if (used != item.size()) {
            throw std::invalid_argument("not a number: '" + item + "'");
        }
        items.push_back(value);
    }
    if (items.empty()) {
        throw std::invalid_argument("empty parameter value");
    }
    if (items.size() == 1 && text.find(',') == std::string::npos) {
        return items.front();
    }
    return items;
}

SimulatorHandle::SimulatorHandle(SimulatorSpec spec, SimulatorFn fn)
    : spec_(std::make_shared<const SimulatorSpec>(std::move(spec))),
      fn_(std::make_shared<const SimulatorFn>(std::move(fn))),
      params_(spec_->defaults) {
    if (!*fn_) {
        throw std::invalid_argument("register_simulator: empty callable");
    }
}

SimulatorHandle SimulatorHandle::with_params(const ParamSet& overrides) const {
    SimulatorHandle copy = *this;
    const bool open = spec_->defaults.values().empty();
    for (const auto& [name, value] : overrides.values()) {
        if (!open && !spec_->defaults.contains(name)) {
            throw std::invalid_argument("simulator '" + spec_->name + "' has no parameter '" +
                                        name + "'");
        }
        copy.params_.set(name, value);
    }
    return copy;
}

std::optional<bool> SimulatorHandle::operator()(
    std::int64_t size, std::uint64_t seed,
    const std::optional<std::pair<std::string, double>>& design) const {
    if (!design) {
        return (*fn_)(size, params_, seed);
    }
    ParamSet local = params_;
    local.set(design->first, design->second);
    return (*fn_)(size, local, seed);
}

SimulatorHandle register_simulator(SimulatorSpec spec, SimulatorFn fn) {
    if (spec.name.empty()) {
        throw std::invalid_argument("register_simulator: simulator needs a name");
    }
    return SimulatorHandle(std::move(spec), std::move(fn));
}

}  // namespace simsize

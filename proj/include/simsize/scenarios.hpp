#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simsize/simulator.hpp"

namespace simsize {

/// Two-arm trial with a normal outcome: round(f1*N) patients in the control
/// arm, the rest shifted by `delta` SDs, analysed with a Welch t-test.
/// Succeeds iff the p-value is defined and below alpha.
bool simulate_unequal_t_test(std::int64_t size, double f1, double delta, double alpha,
                             std::uint64_t seed);

/// Multi-arm trial with normal outcomes: round(N/k) patients in each of the
/// first k-1 arms, the remainder in the last. Succeeds iff the Kruskal-Wallis
/// test is significant at alpha and the two arms with the largest true means
/// hold the top two mean outcome ranks.
bool simulate_ranking(std::int64_t size, const std::vector<double>& means, double alpha,
                      std::uint64_t seed);

/// Synthetic trial following the probit model exactly: succeeds with
/// probability Phi(z_power + e^log_slope (sqrt(N) - size_root)).
bool simulate_probit(std::int64_t size, double size_root, double log_slope, double power,
                     std::uint64_t seed);

/// Names of the built-in scenarios, in listing order.
std::vector<std::string> builtin_scenario_names();

/// Registers a built-in scenario by name with the given arity; std::nullopt
/// for an unknown name. Built-ins:
///   unequal-t-test  f1=0.5 delta=0.2 alpha=0.05
///   ranking         means=0,0.125,0.25,0.375,0.5 alpha=0.05
///   probit          size_root=30 log_slope=-2.5 power=0.9
///   constant        outcome=1   (1 true, 0 false, anything else undefined)
std::optional<SimulatorHandle> builtin_scenario(const std::string& name,
                                                SimulatorArity arity = SimulatorArity::SizeOnly);

}  // namespace simsize

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "simsize/driver.hpp"

namespace simsize {

using Json = nlohmann::ordered_json;

/// Serialized outcome of a run. Everything outside `metadata` depends only
/// on the configuration, seed and simulator.
struct ResultDocument {
    struct Fit {
        std::vector<double> slope_coefs;
        std::vector<double> size_coefs;
        double loglik = 0.0;
        std::vector<std::vector<double>> covariance;
        bool converged = false;
        int n_iterations = 0;
        double ridge = 0.0;
    };
    struct Metadata {
        std::string timestamp;
        double elapsed_seconds = 0.0;
        std::string version;
    };

    std::string kind;  ///< "0d" or "1d"
    Json config;
    std::string termination;
    std::int64_t n_simulations = 0;
    std::int64_t size_estimate = 0;
    double size_root_estimate = 0.0;
    double size_root_se = 0.0;
    double size_confint_lower = 0.0;
    double size_confint_higher = 0.0;

    // Varying design only; 201 entries each.
    std::vector<double> abscissae;
    std::vector<double> size_natural_estimate_by_optival;
    std::vector<double> size_confint_lower_by_optival;
    std::vector<double> size_confint_higher_by_optival;
    std::vector<double> size_root_se_by_optival;

    Fit fit;
    std::vector<BatchTrace> trace;
    Metadata metadata;
};

Json config_to_json(const RunConfig& config);
Json config_to_json(const RunConfig1d& config);

ResultDocument make_result_document(const RunResult& result, Json config_echo,
                                    ResultDocument::Metadata metadata);

void to_json(Json& j, const ResultDocument& doc);
void from_json(const Json& j, ResultDocument& doc);

/// Pretty-printed JSON with a trailing newline.
std::string serialize(const ResultDocument& doc);
ResultDocument parse_result_document(const std::string& text);

/// serialize() without the metadata field; equal for repeated seeded runs.
std::string deterministic_payload(const ResultDocument& doc);

void write_result_document(const std::filesystem::path& path, const ResultDocument& doc);
ResultDocument read_result_document(const std::filesystem::path& path);

}  // namespace simsize

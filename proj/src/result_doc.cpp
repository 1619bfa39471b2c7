#include "simsize/result_doc.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace simsize {
namespace {

Json optional_cap(const std::optional<std::int64_t>& cap) {
    return cap ? Json(*cap) : Json("inf");
}

Json real_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double real_from(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

Json config_to_json(const RunConfig& config) {
    Json j;
    j["tar_power"] = config.target_power;
    j["nsims"] = config.nsims;
    j["cap_nn"] = optional_cap(config.cap_nn);
    j["imp_nn"] = optional_cap(config.imp_nn);
    j["keep_initiation"] = config.keep_initiation;
    j["prior_records"] = config.prior_records.size();
    j["keep_sims"] = config.keep_sims;
    j["seed"] = config.master_seed;
    return j;
}

Json config_to_json(const RunConfig1d& config) {
    Json j = config_to_json(static_cast<const RunConfig&>(config));
    j["optivar"] = config.optivar;
    j["optiwin"] = {config.optiwin_low, config.optiwin_high};
    j["optilog"] = config.optilog;
    j["optiround"] = config.optiround;
    j["n_slope_coefs"] = config.n_slope_coefs;
    j["n_size_coefs"] = config.n_size_coefs;
    return j;
}

ResultDocument make_result_document(const RunResult& result, Json config_echo,
                                    ResultDocument::Metadata metadata) {
    ResultDocument doc;
    doc.kind = result.kind == RunKind::Fixed ? "0d" : "1d";
    doc.config = std::move(config_echo);
    doc.termination =
        result.termination == Termination::BudgetSpent ? "budget_spent" : "always_successful";
    doc.n_simulations = result.n_simulations;
    doc.size_estimate = result.size_estimate;
    doc.size_root_estimate = result.size_root_estimate;
    doc.size_root_se = result.size_root_se;
    doc.size_confint_lower = result.size_ci_low;
    doc.size_confint_higher = result.size_ci_high;
    for (const auto& p : result.curve) {
        doc.abscissae.push_back(p.natural_v);
        doc.size_natural_estimate_by_optival.push_back(p.size_estimate);
        doc.size_confint_lower_by_optival.push_back(p.ci_low);
        doc.size_confint_higher_by_optival.push_back(p.ci_high);
        doc.size_root_se_by_optival.push_back(p.size_root_se);
    }
    const auto& f = result.final_fit;
    if (const auto* fixed = std::get_if<FixedDesignParams>(&f.params)) {
        doc.fit.slope_coefs = {fixed->log_slope_s};
        doc.fit.size_coefs = {fixed->size_root_x0};
    } else {
        doc.fit.slope_coefs = f.varying().slope_coefs;
        doc.fit.size_coefs = f.varying().size_coefs;
    }
    doc.fit.loglik = f.loglik;
    for (Eigen::Index r = 0; r < f.covariance.rows(); ++r) {
        std::vector<double> row;
        for (Eigen::Index c = 0; c < f.covariance.cols(); ++c) row.push_back(f.covariance(r, c));
        doc.fit.covariance.push_back(std::move(row));
    }
    doc.fit.converged = f.converged;
    doc.fit.n_iterations = f.n_iterations;
    doc.fit.ridge = f.ridge;
    doc.trace = result.trace;
    doc.metadata = std::move(metadata);
    return doc;
}

void to_json(Json& j, const ResultDocument& doc) {
    j = Json::object();
    j["kind"] = doc.kind;
    j["config"] = doc.config;
    j["termination"] = doc.termination;
    j["n_simulations"] = doc.n_simulations;
    j["size_estimate"] = doc.size_estimate;
    j["size_root_estimate"] = real_or_null(doc.size_root_estimate);
    j["size_root_se"] = real_or_null(doc.size_root_se);
    j["size_confint_lower"] = doc.size_confint_lower;
    j["size_confint_higher"] = doc.size_confint_higher;
    if (doc.kind == "1d") {
        j["abscissae"] = doc.abscissae;
        j["size_natural_estimate_by_optival"] = doc.size_natural_estimate_by_optival;
        j["size_confint_lower_by_optival"] = doc.size_confint_lower_by_optival;
        j["size_confint_higher_by_optival"] = doc.size_confint_higher_by_optival;
        j["size_root_se_by_optival"] = doc.size_root_se_by_optival;
    }
    Json fit;
    fit["slope_coefs"] = doc.fit.slope_coefs;
    fit["size_coefs"] = doc.fit.size_coefs;
    fit["loglik"] = real_or_null(doc.fit.loglik);
    fit["covariance"] = doc.fit.covariance;
    fit["converged"] = doc.fit.converged;
    fit["n_iterations"] = doc.fit.n_iterations;
    fit["ridge"] = doc.fit.ridge;
    j["fit"] = std::move(fit);
    Json trace = Json::array();
    for (const auto& t : doc.trace) {
        Json row;
        row["batch"] = t.batch;
        row["n_simulations"] = t.n_simulations;
        row["size_root_estimate"] = t.size_root_estimate ? Json(*t.size_root_estimate) : Json(nullptr);
        row["size_root_se"] = t.size_root_se ? Json(*t.size_root_se) : Json(nullptr);
        row["separated"] = t.separated;
        trace.push_back(std::move(row));
    }
    j["trace"] = std::move(trace);
    j["metadata"] = {{"timestamp", doc.metadata.timestamp},
                     {"elapsed_seconds", doc.metadata.elapsed_seconds},
                     {"version", doc.metadata.version}};
}

void from_json(const Json& j, ResultDocument& doc) {
    doc.kind = j.at("kind").get<std::string>();
    if (doc.kind != "0d" && doc.kind != "1d") {
        throw std::runtime_error("result document: unknown kind '" + doc.kind + "'");
    }
    doc.config = j.at("config");
    doc.termination = j.at("termination").get<std::string>();
    doc.n_simulations = j.at("n_simulations").get<std::int64_t>();
    doc.size_estimate = j.at("size_estimate").get<std::int64_t>();
    doc.size_root_estimate = real_from(j.at("size_root_estimate"));
    doc.size_root_se = real_from(j.at("size_root_se"));
    doc.size_confint_lower = j.at("size_confint_lower").get<double>();
    doc.size_confint_higher = j.at("size_confint_higher").get<double>();
    if (doc.kind == "1d") {
        doc.abscissae = j.at("abscissae").get<std::vector<double>>();
        doc.size_natural_estimate_by_optival =
            j.at("size_natural_estimate_by_optival").get<std::vector<double>>();
        doc.size_confint_lower_by_optival =
            j.at("size_confint_lower_by_optival").get<std::vector<double>>();
        doc.size_confint_higher_by_optival =
            j.at("size_confint_higher_by_optival").get<std::vector<double>>();
        doc.size_root_se_by_optival = j.at("size_root_se_by_optival").get<std::vector<double>>();
    }
    const auto& fit = j.at("fit");
    doc.fit.slope_coefs = fit.at("slope_coefs").get<std::vector<double>>();
    doc.fit.size_coefs = fit.at("size_coefs").get<std::vector<double>>();
    doc.fit.loglik = real_from(fit.at("loglik"));
    doc.fit.covariance = fit.at("covariance").get<std::vector<std::vector<double>>>();
    doc.fit.converged = fit.at("converged").get<bool>();
    doc.fit.n_iterations = fit.at("n_iterations").get<int>();
    doc.fit.ridge = fit.at("ridge").get<double>();
    doc.trace.clear();
    for (const auto& row : j.at("trace")) {
        BatchTrace t;
        t.batch = row.at("batch").get<int>();
        t.n_simulations = row.at("n_simulations").get<std::int64_t>();
        if (!row.at("size_root_estimate").is_null()) t.size_root_estimate = row.at("size_root_estimate").get<double>();
        if (!row.at("size_root_se").is_null()) t.size_root_se = row.at("size_root_se").get<double>();
        t.separated = row.at("separated").get<bool>();
        doc.trace.push_back(t);
    }
    const auto& meta = j.at("metadata");
    doc.metadata.timestamp = meta.at("timestamp").get<std::string>();
    doc.metadata.elapsed_seconds = meta.at("elapsed_seconds").get<double>();
    doc.metadata.version = meta.at("version").get<std::string>();
}

std::string serialize(const ResultDocument& doc) {
    Json j = doc;
    return j.dump(2) + "\n";
}

ResultDocument parse_result_document(const std::string& text) {
    return Json::parse(text).get<ResultDocument>();
}

std::string deterministic_payload(const ResultDocument& doc) {
    Json j = doc;
    j.erase("metadata");
    return j.dump(2) + "\n";
}

void write_result_document(const std::filesystem::path& path, const ResultDocument& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << serialize(doc);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

ResultDocument read_result_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_result_document(ss.str());
}

}  // namespace simsize

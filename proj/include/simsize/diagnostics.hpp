#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simsize/driver.hpp"
#include "simsize/mle.hpp"
#include "simsize/records.hpp"

namespace simsize {

/// Everything the per-batch diagnostics need, captured right after a refit.
struct BatchSnapshot {
    RunKind kind = RunKind::Fixed;
    int batch = 0;
    double target_power = 0.9;
    /// All records so far; the current batch is records[batch_begin..].
    std::span<const SimRecord> records;
    std::size_t batch_begin = 0;
    /// Absent while the records are separated.
    const FitResult* fit = nullptr;
    /// Varying design: current curve (natural units filled in).
    std::vector<CurvePoint> curve;
    /// Planned next batch, when one follows.
    std::vector<DesignDraw> next_batch;
};

/// UTC timestamp in compact ISO-8601 form, e.g. 20261016T093015Z.
std::string utc_compact_timestamp();

/// Writes batch_<NNNN>_<timestamp>.csv and .svg into a directory. Failures
/// are reported once on stderr and never interrupt the run.
class DiagnosticsWriter {
public:
    explicit DiagnosticsWriter(std::filesystem::path dir);

    void emit(const BatchSnapshot& snapshot);

    /// Paths written so far.
    const std::vector<std::filesystem::path>& written() const { return written_; }

private:
    void warn_once(const std::string& message);

    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    bool warned_ = false;
};

/// Per-record CSV rows: sim_index,size,v,outcome,x0,se (v empty for fixed
/// designs; x0/se empty while separated).
std::string diagnostics_csv(const BatchSnapshot& snapshot);

/// Fixed design: size progression and the fitted probit curve over the
/// jittered outcomes. Varying design: (v, size) scatter by outcome with the
/// current curve, its band and the next batch.
std::string diagnostics_svg(const BatchSnapshot& snapshot);

}  // namespace simsize

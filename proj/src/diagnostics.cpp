#include "simsize/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "simsize/stats.hpp"

namespace simsize {
namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string fmt_px(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

/// Linear map from a data range onto a pixel range (inverted for y).
struct Axis {
    double lo;
    double hi;
    double px_lo;
    double px_hi;

    double operator()(double v) const {
        const double span = hi > lo ? hi - lo : 1.0;
        return px_lo + (v - lo) / span * (px_hi - px_lo);
    }
};

struct Panel {
    Axis x;
    Axis y;
};

void frame(std::ostringstream& svg, const Panel& p, const std::string& title,
           const std::string& xlabel, const std::string& ylabel) {
    const double left = p.x.px_lo;
    const double right = p.x.px_hi;
    const double top = p.y.px_hi;
    const double bottom = p.y.px_lo;
    svg << "<rect x=\"" << fmt_px(left) << "\" y=\"" << fmt_px(top) << "\" width=\""
        << fmt_px(right - left) << "\" height=\"" << fmt_px(bottom - top)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << fmt_px(0.5 * (left + right)) << "\" y=\"" << fmt_px(top - 8)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << title << "</text>\n";
    svg << "<text x=\"" << fmt_px(0.5 * (left + right)) << "\" y=\"" << fmt_px(bottom + 32)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << xlabel << "</text>\n";
    svg << "<text x=\"" << fmt_px(left - 40) << "\" y=\"" << fmt_px(0.5 * (top + bottom))
        << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 "
        << fmt_px(left - 40) << ' ' << fmt_px(0.5 * (top + bottom)) << ")\">" << ylabel
        << "</text>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = p.x.lo + (p.x.hi - p.x.lo) * t / 4.0;
        const double yv = p.y.lo + (p.y.hi - p.y.lo) * t / 4.0;
        svg << "<text x=\"" << fmt_px(p.x(xv)) << "\" y=\"" << fmt_px(bottom + 14)
            << "\" text-anchor=\"middle\" font-size=\"9\">" << fmt(xv) << "</text>\n";
        svg << "<text x=\"" << fmt_px(left - 4) << "\" y=\"" << fmt_px(p.y(yv) + 3)
            << "\" text-anchor=\"end\" font-size=\"9\">" << fmt(yv) << "</text>\n";
    }
}

void dot(std::ostringstream& svg, double cx, double cy, const char* colour, double r = 2.0) {
    svg << "<circle cx=\"" << fmt_px(cx) << "\" cy=\"" << fmt_px(cy) << "\" r=\"" << fmt(r)
        << "\" fill=\"" << colour << "\" fill-opacity=\"0.6\"/>\n";
}

void polyline(std::ostringstream& svg, const std::vector<std::pair<double, double>>& pts,
              const char* colour, const char* dash = nullptr) {
    if (pts.empty()) return;
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
    if (dash) svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " points=\"";
    for (const auto& [x, y] : pts) svg << fmt_px(x) << ',' << fmt_px(y) << ' ';
    svg << "\"/>\n";
}

// Deterministic vertical jitter for 0/1 outcomes, derived from the index.
double jitter(std::uint64_t index) {
    return (static_cast<double>(mix64(index) >> 11) * 0x1.0p-53 - 0.5) * 0.08;
}

constexpr const char* kSuccess = "#1b7837";
constexpr const char* kFailure = "#b2182b";

std::string svg_fixed(const BatchSnapshot& snap) {
    std::ostringstream svg;
    const auto& recs = snap.records;
    double max_size = 4.0;
    double max_root = 2.0;
    for (const auto& r : recs) {
        max_size = std::max(max_size, static_cast<double>(r.size_n));
        max_root = std::max(max_root, r.sqrt_size_x);
    }
    for (const auto& d : snap.next_batch) {
        max_size = std::max(max_size, static_cast<double>(d.size));
    }
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"380\">\n";

    const Panel left{{0.0, static_cast<double>(std::max<std::size_t>(recs.size(), 1)), 70, 420},
                     {0.0, max_size, 320, 40}};
    frame(svg, left, "Sizes by simulation (batch " + std::to_string(snap.batch) + ")",
          "simulation index", "size");
    for (const auto& r : recs) {
        dot(svg, left.x(static_cast<double>(r.sim_index)), left.y(static_cast<double>(r.size_n)),
            r.outcome ? kSuccess : kFailure);
    }

    const Panel right{{0.0, max_root * 1.05, 520, 870}, {-0.1, 1.1, 320, 40}};
    frame(svg, right, "Outcomes and fitted power curve", "sqrt(size)", "power");
    for (std::size_t i = snap.batch_begin; i < recs.size(); ++i) {
        const auto& r = recs[i];
        dot(svg, right.x(r.sqrt_size_x), right.y((r.outcome ? 1.0 : 0.0) + jitter(r.sim_index)),
            r.outcome ? kSuccess : kFailure);
    }
    if (snap.fit) {
        const auto& p = snap.fit->fixed();
        const double z = norm_quantile(snap.target_power);
        std::vector<std::pair<double, double>> curve;
        for (int i = 0; i <= 200; ++i) {
            const double x = right.x.hi * i / 200.0;
            const double power = norm_cdf(z + std::exp(p.log_slope_s) * (x - p.size_root_x0));
            curve.emplace_back(right.x(x), right.y(power));
        }
        polyline(svg, curve, "#2166ac");
        polyline(svg, {{right.x(0.0), right.y(snap.target_power)},
                       {right.x(right.x.hi), right.y(snap.target_power)}},
                 "#888", "4 3");
        const double x0 = std::clamp(p.size_root_x0, 0.0, right.x.hi);
        polyline(svg, {{right.x(x0), right.y(-0.1)}, {right.x(x0), right.y(1.1)}}, "#2166ac",
                 "2 2");
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string svg_varying(const BatchSnapshot& snap) {
    std::ostringstream svg;
    double vlo = std::numeric_limits<double>::infinity();
    double vhi = -vlo;
    double max_size = 4.0;
    auto extend_v = [&](double v) {
        vlo = std::min(vlo, v);
        vhi = std::max(vhi, v);
    };
    for (const auto& r : snap.records) {
        if (r.natural_v) extend_v(*r.natural_v);
        max_size = std::max(max_size, static_cast<double>(r.size_n));
    }
    for (const auto& c : snap.curve) {
        extend_v(c.natural_v);
        if (std::isfinite(c.ci_high)) max_size = std::max(max_size, std::min(c.ci_high, 4.0 * max_size));
    }
    for (const auto& d : snap.next_batch) {
        extend_v(d.natural_v);
        max_size = std::max(max_size, static_cast<double>(d.size));
    }
    if (!(vlo < vhi)) {
        vlo = std::isfinite(vlo) ? vlo - 1.0 : -1.0;
        vhi = vlo + 2.0;
    }
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"380\">\n";
    const Panel panel{{vlo, vhi, 70, 490}, {0.0, max_size * 1.05, 320, 40}};
    frame(svg, panel, "Size curve (batch " + std::to_string(snap.batch) + ")", "design value",
          "size");
    for (const auto& r : snap.records) {
        if (!r.natural_v) continue;
        dot(svg, panel.x(*r.natural_v), panel.y(static_cast<double>(r.size_n)),
            r.outcome ? kSuccess : kFailure, 1.8);
    }
    for (const auto& d : snap.next_batch) {
        svg << "<rect x=\"" << fmt_px(panel.x(d.natural_v) - 1.5) << "\" y=\""
            << fmt_px(panel.y(static_cast<double>(d.size)) - 1.5)
            << "\" width=\"3\" height=\"3\" fill=\"#999\"/>\n";
    }
    if (!snap.curve.empty()) {
        std::vector<std::pair<double, double>> mid;
        std::vector<std::pair<double, double>> low;
        std::vector<std::pair<double, double>> high;
        const double top = panel.y.hi;
        for (const auto& c : snap.curve) {
            const double px = panel.x(c.natural_v);
            mid.emplace_back(px, panel.y(std::min(c.size_estimate, top)));
            low.emplace_back(px, panel.y(std::min(c.ci_low, top)));
            high.emplace_back(px, panel.y(std::min(c.ci_high, top)));
        }
        polyline(svg, low, "#2166ac", "4 3");
        polyline(svg, high, "#2166ac", "4 3");
        polyline(svg, mid, "#2166ac");
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

std::string utc_compact_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

std::string diagnostics_csv(const BatchSnapshot& snap) {
    std::ostringstream out;
    out << "sim_index,size,v,outcome,x0,se\n";
    for (std::size_t i = snap.batch_begin; i < snap.records.size(); ++i) {
        const auto& r = snap.records[i];
        out << r.sim_index << ',' << r.size_n << ',';
        if (r.natural_v) out << fmt(*r.natural_v);
        out << ',' << (r.outcome ? 1 : 0) << ',';
        if (snap.fit) {
            if (r.scaled_v) {
                const auto p = detail::curve_point(*snap.fit, *r.scaled_v);
                out << fmt(p.size_root_estimate) << ',' << fmt(p.size_root_se);
            } else {
                out << fmt(snap.fit->fixed().size_root_x0) << ',' << fmt(snap.fit->se_x0);
            }
        } else {
            out << ',';
        }
        out << '\n';
    }
    return out.str();
}

std::string diagnostics_svg(const BatchSnapshot& snap) {
    return snap.kind == RunKind::Fixed ? svg_fixed(snap) : svg_varying(snap);
}

DiagnosticsWriter::DiagnosticsWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

void DiagnosticsWriter::warn_once(const std::string& message) {
    if (warned_) return;
    warned_ = true;
    std::cerr << "warning: diagnostics disabled: " << message << '\n';
}

void DiagnosticsWriter::emit(const BatchSnapshot& snapshot) {
    if (warned_) return;
    try {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) {
            warn_once("cannot create " + dir_.string() + ": " + ec.message());
            return;
        }
        char stem[32];
        std::snprintf(stem, sizeof stem, "batch_%04d_", snapshot.batch);
        const std::string base = stem + utc_compact_timestamp();
        const std::pair<std::string, std::string> files[] = {
            {base + ".csv", diagnostics_csv(snapshot)},
            {base + ".svg", diagnostics_svg(snapshot)},
        };
        for (const auto& [name, content] : files) {
            const auto path = dir_ / name;
            std::ofstream out(path);
            out << content;
            if (!out) {
                warn_once("cannot write " + path.string());
                return;
            }
            written_.push_back(path);
        }
    } catch (const std::exception& e) {
        warn_once(e.what());
    }
}

}  // namespace simsize

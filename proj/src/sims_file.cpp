#include "simsize/sims_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace simsize {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line, const char* column) {
    T value{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw SimsFileError(line, std::string("invalid ") + column + " '" + text + "'");
    }
    return value;
}

}  // namespace

SimsFileError::SimsFileError(std::size_t line, const std::string& message)
    : std::runtime_error("sims file line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_real(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_sims(std::ostream& out, const std::vector<SimRecord>& records) {
    out << kSimsHeader << '\n';
    for (const auto& r : records) {
        out << r.sim_index << ',' << r.size_n << ',';
        if (r.natural_v) out << format_real(*r.natural_v);
        out << ',';
        if (r.scaled_v) out << format_real(*r.scaled_v);
        out << ',' << (r.outcome ? 1 : 0) << ',' << r.seed << '\n';
    }
}

void write_sims(const std::filesystem::path& path, const std::vector<SimRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_sims(out, records);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<SimRecord> read_sims(std::istream& in) {
    std::vector<SimRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::optional<bool> has_v;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kSimsHeader) throw SimsFileError(line_no, "unexpected header '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 6) {
            throw SimsFileError(line_no, "expected 6 columns, found " + std::to_string(f.size()));
        }
        SimRecord r;
        r.sim_index = parse_number<std::uint64_t>(f[0], line_no, "sim_index");
        if (r.sim_index != records.size()) {
            throw SimsFileError(line_no, "sim_index " + f[0] + " out of sequence");
        }
        r.size_n = parse_number<std::int64_t>(f[1], line_no, "size_n");
        if (r.size_n < 1) throw SimsFileError(line_no, "size_n must be positive");
        r.sqrt_size_x = std::sqrt(static_cast<double>(r.size_n));
        const bool row_has_v = !f[2].empty() || !f[3].empty();
        if (row_has_v && (f[2].empty() || f[3].empty())) {
            throw SimsFileError(line_no, "natural_v and scaled_v must both be set or both empty");
        }
        if (has_v && *has_v != row_has_v) {
            throw SimsFileError(line_no, "design value columns must be filled in every row or none");
        }
        has_v = row_has_v;
        if (row_has_v) {
            r.natural_v = parse_number<double>(f[2], line_no, "natural_v");
            r.scaled_v = parse_number<double>(f[3], line_no, "scaled_v");
        }
        if (f[4] != "0" && f[4] != "1") throw SimsFileError(line_no, "outcome must be 0 or 1");
        r.outcome = f[4] == "1";
        r.seed = parse_number<std::uint64_t>(f[5], line_no, "seed");
        records.push_back(r);
    }
    return records;
}

std::vector<SimRecord> read_sims(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_sims(in);
}

}  // namespace simsize

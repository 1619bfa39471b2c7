#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "simsize/records.hpp"

namespace simsize {

/// CSV of simulation records:
///   sim_index,size_n,natural_v,scaled_v,outcome,seed
/// v columns are empty for fixed-design runs. Reals are written in shortest
/// round-trip form so reading back reproduces every record exactly.
inline constexpr const char* kSimsHeader = "sim_index,size_n,natural_v,scaled_v,outcome,seed";

class SimsFileError : public std::runtime_error {
public:
    SimsFileError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

void write_sims(std::ostream& out, const std::vector<SimRecord>& records);
void write_sims(const std::filesystem::path& path, const std::vector<SimRecord>& records);

/// An empty file (or a header alone) yields no records. Throws SimsFileError
/// naming the 1-based line of the first malformed row.
std::vector<SimRecord> read_sims(std::istream& in);
std::vector<SimRecord> read_sims(const std::filesystem::path& path);

/// Shortest decimal string that parses back to the same double.
std::string format_real(double value);

}  // namespace simsize

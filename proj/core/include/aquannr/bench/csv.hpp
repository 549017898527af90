#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "aquannr/snr_series.hpp"

namespace aquannr::bench {

class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& message, std::size_t line)
        : std::runtime_error(message + " (line " + std::to_string(line) + ")"),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Reads a `time_s,snr_db` trace file. Rejects malformed rows (with the
/// offending line number), non-monotone times and files without data rows.
SnrSeries load_csv(const std::filesystem::path& path);

/// Writes a trace with full double round-trip precision.
void save_csv(const SnrSeries& series, const std::filesystem::path& path);

/// Shortest-exact double formatting used by every CSV writer (%.17g trim).
std::string format_double(double v);

}  // namespace aquannr::bench

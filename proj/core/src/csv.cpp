#include "aquannr/bench/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace aquannr::bench {

namespace {

bool parse_field(const std::string& text, double& out) {
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end != begin && *end == '\0';
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

SnrSeries load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open '" + path.string() + "'", 0);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw CsvError("empty file", 0);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "time_s,snr_db") {
        throw CsvError("expected header 'time_s,snr_db'", line_no);
    }

    SnrSeries series;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw CsvError("missing comma", line_no);
        double time_s = 0.0;
        double snr_db = 0.0;
        if (!parse_field(line.substr(0, comma), time_s) ||
            !parse_field(line.substr(comma + 1), snr_db)) {
            throw CsvError("malformed row", line_no);
        }
        try {
            series.append(time_s, snr_db);
        } catch (const std::invalid_argument& e) {
            throw CsvError(e.what(), line_no);
        }
    }
    if (series.empty()) throw CsvError("no data rows", line_no);
    return series;
}

void save_csv(const SnrSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw CsvError("cannot write '" + path.string() + "'", 0);
    out << "time_s,snr_db\n";
    for (const auto& s : series.samples()) {
        out << format_double(s.time_s) << ',' << format_double(s.snr_db) << '\n';
    }
    if (!out) throw CsvError("write failure on '" + path.string() + "'", 0);
}

}  // namespace aquannr::bench

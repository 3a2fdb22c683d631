#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace munu {

// Round-trip-safe text forms shared by CSV and JSON output: reals get 17
// significant digits, '.' decimal separator.
std::string fmt_real(double v);
std::string fmt_int(std::int64_t v);
std::string fmt_uint(std::uint64_t v);

struct Assertion {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

// One study's output: per-point rows for CSV plus assertions and metadata.
// Reproducible bit-exactly from the recorded inputs.
struct StudyReport {
    std::string study;
    nlohmann::ordered_json grid;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<Assertion> assertions;
    std::vector<std::pair<std::string, std::string>> metadata;

    bool pass() const;
    void write_csv(std::ostream& os) const;
    std::string csv_string() const;
    nlohmann::ordered_json summary_json() const;  // {study, grid, pass, failures, metadata}
};

} // namespace munu

#include "munu/report.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace munu {

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_int(std::int64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    return buf;
}

std::string fmt_uint(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    return buf;
}

bool StudyReport::pass() const {
    for (const Assertion& a : assertions)
        if (!a.pass) return false;
    return true;
}

void StudyReport::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ',';
        os << columns[i];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << row[i];
        }
        os << '\n';
    }
}

std::string StudyReport::csv_string() const {
    std::ostringstream ss;
    write_csv(ss);
    return ss.str();
}

nlohmann::ordered_json StudyReport::summary_json() const {
    nlohmann::ordered_json j;
    j["study"] = study;
    j["grid"] = grid;
    j["pass"] = pass();
    auto failures = nlohmann::ordered_json::array();
    for (const Assertion& a : assertions) {
        if (a.pass) continue;
        nlohmann::ordered_json f;
        f["name"] = a.name;
        f["lhs"] = fmt_real(a.lhs);
        f["rhs"] = fmt_real(a.rhs);
        failures.push_back(std::move(f));
    }
    j["failures"] = std::move(failures);
    auto assertion_list = nlohmann::ordered_json::array();
    for (const Assertion& a : assertions) {
        nlohmann::ordered_json e;
        e["name"] = a.name;
        e["lhs"] = fmt_real(a.lhs);
        e["rhs"] = fmt_real(a.rhs);
        e["pass"] = a.pass;
        assertion_list.push_back(std::move(e));
    }
    j["assertions"] = std::move(assertion_list);
    nlohmann::ordered_json meta;
    for (const auto& [k, v] : metadata) meta[k] = v;
    j["metadata"] = std::move(meta);
    return j;
}

} // namespace munu

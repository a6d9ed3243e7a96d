#include "weylwalk/io.hpp"

#include <cstdio>

#include <json.hpp>

#include "weylwalk/errors.hpp"

namespace weylwalk {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    bool needs_quote = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs_quote) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
    for (const auto& [k, v] : t.meta) os << "# " << k << "=" << v << "\n";
    for (size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << csv_field(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
    }
}

void write_json(std::ostream& os, const Table& t) {
    nlohmann::ordered_json j;
    j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) j["meta"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) j["rows"].push_back(row);
    os << j.dump(2) << "\n";
}

void write_table(std::ostream& os, const Table& t, const std::string& format) {
    if (format == "csv")
        write_csv(os, t);
    else if (format == "json")
        write_json(os, t);
    else
        throw InvalidArgument("unknown output format '" + format + "' (use csv or json)");
}

}  // namespace weylwalk

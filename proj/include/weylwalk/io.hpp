#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace weylwalk {

// A rectangular report: deterministic cell strings, rendered to CSV or JSON.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;  // ordered key/value
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(std::string key, std::string value) {
        meta.emplace_back(std::move(key), std::move(value));
    }
    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
};

// Shortest round-trip-ish formatting used everywhere doubles are printed.
std::string fmt_double(double v);

// CSV: meta as leading "# key=value" comment lines, then header, then rows;
// fields containing commas, quotes, or newlines are double-quoted.
void write_csv(std::ostream& os, const Table& t);

// JSON object {"meta": {...}, "columns": [...], "rows": [[...]]} mirroring the
// CSV content; all cells are strings.
void write_json(std::ostream& os, const Table& t);

// Renders to the chosen format ("csv" or "json").
void write_table(std::ostream& os, const Table& t, const std::string& format);

}  // namespace weylwalk

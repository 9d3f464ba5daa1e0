#pragma once
// Minimal RFC-4180-style CSV reading and writing for the evaluation
// interfaces (comparisons, ratings, fits, similarity distributions).

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace hypoforge {

using CsvRow = std::vector<std::string>;

inline CsvRow parse_csv_line(const std::string& line) {
    CsvRow row;
    std::string field;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    row.push_back(field);
    return row;
}

inline std::vector<CsvRow> parse_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        rows.push_back(parse_csv_line(line));
    }
    return rows;
}

inline std::vector<CsvRow> read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open CSV file: " + path);
    return parse_csv(in);
}

inline std::string csv_escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& out, const CsvRow& row) {
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(row[i]);
    }
    out << '\n';
}

}  // namespace hypoforge

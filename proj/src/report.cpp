#include "wmb/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wmb/config.hpp"

namespace wmb {

void Table::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns.size())
        throw std::logic_error("Table: row width does not match column count");
    rows.push_back(std::move(cells));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string cell_to_text(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c.value)) return "";
    if (const auto* d = std::get_if<double>(&c.value)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c.value))
        return std::to_string(*i);
    return std::get<std::string>(c.value);
}

} // namespace

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += '"';
    return out;
}

} // namespace

std::string to_csv(const Table& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.columns.size(); i++) {
        if (i) out << ',';
        out << csv_escape(t.columns[i]);
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); i++) {
            if (i) out << ',';
            out << csv_escape(cell_to_text(row[i]));
        }
        out << '\n';
    }
    return out.str();
}

std::string to_json(const Table& t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); i++) {
            const Cell& c = row[i];
            if (c.is_null()) obj[t.columns[i]] = nullptr;
            else if (const auto* d = std::get_if<double>(&c.value))
                obj[t.columns[i]] = *d;
            else if (const auto* v = std::get_if<std::int64_t>(&c.value))
                obj[t.columns[i]] = *v;
            else obj[t.columns[i]] = std::get<std::string>(c.value);
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

namespace {

Cell cell_from_text(const std::string& s) {
    if (s.empty()) return Cell();
    // integral?
    {
        std::size_t used = 0;
        try {
            const long long v = std::stoll(s, &used);
            if (used == s.size()) return Cell(static_cast<std::int64_t>(v));
        } catch (const std::exception&) {}
    }
    {
        std::size_t used = 0;
        try {
            const double v = std::stod(s, &used);
            if (used == s.size()) return Cell(v);
        } catch (const std::exception&) {}
    }
    return Cell(s);
}

} // namespace

Table table_from_csv(const std::string& csv) {
    Table t;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> parts;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); i++) {
            const char ch = line[i];
            if (quoted) {
                if (ch == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        cur.push_back('"');
                        i++;
                    } else {
                        quoted = false;
                    }
                } else {
                    cur.push_back(ch);
                }
            } else if (ch == '"' && cur.empty()) {
                quoted = true;
            } else if (ch == ',') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        parts.push_back(cur);
        if (header) {
            t.columns = parts;
            header = false;
            continue;
        }
        std::vector<Cell> row;
        row.reserve(parts.size());
        for (const auto& p : parts) row.push_back(cell_from_text(p));
        t.add_row(std::move(row));
    }
    return t;
}

Table table_from_json(const std::string& json_text) {
    const nlohmann::ordered_json arr = nlohmann::ordered_json::parse(json_text);
    Table t;
    if (!arr.is_array()) throw std::runtime_error("table_from_json: not an array");
    bool first = true;
    for (const auto& obj : arr) {
        if (first) {
            for (auto it = obj.begin(); it != obj.end(); ++it)
                t.columns.push_back(it.key());
            first = false;
        }
        std::vector<Cell> row;
        for (const auto& col : t.columns) {
            const auto& v = obj.at(col);
            if (v.is_null()) row.push_back(Cell());
            else if (v.is_number_integer())
                row.push_back(Cell(static_cast<std::int64_t>(v.get<std::int64_t>())));
            else if (v.is_number()) row.push_back(Cell(v.get<double>()));
            else row.push_back(Cell(v.get<std::string>()));
        }
        t.add_row(std::move(row));
    }
    return t;
}

void emit_report(const Table& t, const std::string& format,
                 const std::string& path) {
    if (format != "csv" && format != "json")
        throw UsageError("emit_report: unknown format '" + format + "'");
    const std::string text = format == "csv" ? to_csv(t) : to_json(t);
    if (path.empty()) {
        std::cout << text;
        if (!std::cout) throw IoError("emit_report: write to stdout failed");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("emit_report: cannot open " + path);
    out << text;
    out.flush();
    if (!out) throw IoError("emit_report: write failed: " + path);
}

} // namespace wmb

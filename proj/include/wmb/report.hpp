// Machine-readable report tables: a column-ordered table of typed cells,
// CSV and JSON emission with 17-significant-digit floats (so csv -> json ->
// csv round trips are byte-exact), and a CSV reader for the round-trip path.

#ifndef WMB_REPORT_HPP
#define WMB_REPORT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace wmb {

struct Cell {
    std::variant<std::monostate, double, std::int64_t, std::string> value;

    Cell() = default;
    Cell(double v) : value(v) {}
    Cell(std::int64_t v) : value(v) {}
    Cell(int v) : value(static_cast<std::int64_t>(v)) {}
    Cell(std::string v) : value(std::move(v)) {}
    Cell(const char* v) : value(std::string(v)) {}

    bool is_null() const { return std::holds_alternative<std::monostate>(value); }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells);
};

// floats at 17 significant digits
std::string format_double(double v);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

// Parses CSV produced by to_csv: numeric-looking cells become doubles
// (integers stay integral), empty cells null, everything else strings.
Table table_from_csv(const std::string& csv);
Table table_from_json(const std::string& json_text);

// Writes the table in `format` ("csv"|"json") to `path`, or to stdout when
// path is empty.  I/O failures raise IoError with the path in the message.
void emit_report(const Table& t, const std::string& format,
                 const std::string& path);

} // namespace wmb

#endif

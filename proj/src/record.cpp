#include "otoclab/record.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace otoclab {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double x) const { return format_real(x); }
        std::string operator()(long long x) const { return std::to_string(x); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(const std::vector<Cell>& cells) {
    std::vector<std::string> row;
    row.reserve(cells.size());
    for (const Cell& c : cells) row.push_back(format_cell(c));
    add_text_row(std::move(row));
}

void Table::add_text_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) {
        throw StructuralError("row has " + std::to_string(cells.size()) + " cells, table has " +
                              std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(cells));
}

bool Table::has_column(const std::string& name) const {
    for (const auto& c : columns_) {
        if (c == name) return true;
    }
    return false;
}

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) return static_cast<int>(i);
    }
    throw DomainError("record has no column '" + name + "'");
}

const std::string& Table::text(std::size_t row, const std::string& col) const {
    return rows_.at(row).at(column(col));
}

std::optional<double> Table::number(std::size_t row, const std::string& col) const {
    const std::string& s = text(row, col);
    if (s.empty()) return std::nullopt;
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw DomainError("row " + std::to_string(row + 1) + ", column '" + col + "': not a number: '" + s + "'");
    }
    return v;
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void append_line(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += quote(fields[i]);
    }
    out += "\r\n";
}

}  // namespace

std::string to_csv(const Table& t) {
    std::string out;
    append_line(out, t.columns());
    for (std::size_t i = 0; i < t.size(); ++i) append_line(out, t.row(i));
    return out;
}

Table parse_csv(const std::string& text, const std::string& source) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    int line = 1, col = 1;
    std::size_t i = 0;
    bool quoted = false, field_started = false;
    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    col += 2;
                    continue;
                }
                quoted = false;
                ++i;
                ++col;
                if (i < text.size() && text[i] != ',' && text[i] != '\r' && text[i] != '\n') {
                    throw ParseError(source, line, col, "unexpected character after closing quote");
                }
                continue;
            }
            if (c == '\n') {
                ++line;
                col = 0;
            }
            field += c;
            ++i;
            ++col;
            continue;
        }
        if (c == '"') {
            if (field_started) throw ParseError(source, line, col, "quote inside an unquoted field");
            quoted = true;
            field_started = true;
            ++i;
            ++col;
        } else if (c == ',') {
            end_field();
            ++i;
            ++col;
        } else if (c == '\r' || c == '\n') {
            end_field();
            records.push_back(std::move(fields));
            fields.clear();
            i += (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
            ++line;
            col = 1;
        } else {
            field += c;
            field_started = true;
            ++i;
            ++col;
        }
    }
    if (quoted) throw ParseError(source, line, col, "unterminated quoted field");
    if (field_started || !fields.empty()) {
        end_field();
        records.push_back(std::move(fields));
    }
    if (records.empty()) throw ParseError(source, 1, 1, "empty file: no header row");
    Table t(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != records.front().size()) {
            throw ParseError(source, static_cast<int>(r + 1), 1,
                             "expected " + std::to_string(records.front().size()) + " fields, found " +
                                 std::to_string(records[r].size()));
        }
        t.add_text_row(std::move(records[r]));
    }
    return t;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ResourceError("write failed for '" + path + "'");
}

}  // namespace otoclab

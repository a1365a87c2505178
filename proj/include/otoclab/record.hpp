#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "otoclab/errors.hpp"

namespace otoclab {

// "%.17g"; non-finite values print as nan, inf, -inf.
std::string format_real(double x);

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

std::string format_cell(const Cell& c);

// Row data with text cells. Numbers are formatted on insertion so emitted
// text and re-checked text are the same bytes.
class Table {
public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    void add_row(const std::vector<Cell>& cells);
    void add_text_row(std::vector<std::string> cells);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }

    bool has_column(const std::string& name) const;
    int column(const std::string& name) const;
    const std::string& text(std::size_t row, const std::string& col) const;
    // Empty cell -> nullopt. Throws DomainError on non-numeric text.
    std::optional<double> number(std::size_t row, const std::string& col) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// RFC 4180: CRLF line ends, fields quoted when they hold , " CR or LF.
std::string to_csv(const Table& t);
Table parse_csv(const std::string& text, const std::string& source = "<csv>");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace otoclab

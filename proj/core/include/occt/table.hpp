#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace occt {

// Machine-readable result tables shared by the CLI subcommands: CSV with
// RFC 4180 quoting or a single JSON object {meta, rows}.
class Table {
public:
    using Cell = std::variant<std::string, double, std::int64_t, bool>;

    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row);
    void set_meta(const std::string& key, const std::string& value);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t rows() const { return rows_.size(); }
    const std::vector<Cell>& row(std::size_t i) const { return rows_[i]; }

    std::string to_csv() const;
    std::string to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::map<std::string, std::string> meta_;
};

// FNV-1a of a canonicalized string; stamps configs into table metadata.
std::uint64_t fnv1a(const std::string& data);

}  // namespace occt

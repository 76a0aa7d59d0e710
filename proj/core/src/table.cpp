#include "occt/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "occt/errors.hpp"

namespace occt {

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string cell_to_string(const Table::Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<bool>(c) ? "true" : "false";
}

std::string cell_to_json(const Table::Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return "\"" + json_escape(*s) + "\"";
    if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return "\"" + format_double(*d) + "\"";
        return format_double(*d);
    }
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<bool>(c) ? "true" : "false";
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
        throw ConfigError("Table: row width does not match the header");
    rows_.push_back(std::move(row));
}

void Table::set_meta(const std::string& key, const std::string& value) { meta_[key] = value; }

std::string Table::to_csv() const {
    std::ostringstream out;
    for (const auto& [k, v] : meta_) out << "# " << k << "=" << v << "\r\n";
    for (size_t i = 0; i < columns_.size(); ++i)
        out << (i ? "," : "") << csv_escape(columns_[i]);
    out << "\r\n";
    for (const auto& row : rows_) {
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_escape(cell_to_string(row[i]));
        out << "\r\n";
    }
    return out.str();
}

std::string Table::to_json() const {
    std::ostringstream out;
    out << "{\"meta\":{";
    bool first = true;
    for (const auto& [k, v] : meta_) {
        if (!first) out << ",";
        out << "\"" << json_escape(k) << "\":\"" << json_escape(v) << "\"";
        first = false;
    }
    out << "},\"rows\":[";
    for (size_t r = 0; r < rows_.size(); ++r) {
        if (r) out << ",";
        out << "{";
        for (size_t i = 0; i < rows_[r].size(); ++i) {
            if (i) out << ",";
            out << "\"" << json_escape(columns_[i]) << "\":" << cell_to_json(rows_[r][i]);
        }
        out << "}";
    }
    out << "]}";
    return out.str();
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace occt

#include "nlbs/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlbs {

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string format_number(std::size_t value) { return std::to_string(value); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) {
        throw std::invalid_argument("csv row has " + std::to_string(row.size()) + " cells, header has " +
                                    std::to_string(header_.size()));
    }
    rows_.push_back(std::move(row));
}

std::size_t CsvTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    throw std::out_of_range("csv has no column '" + std::string(name) + "'");
}

std::vector<std::string> CsvTable::column(std::string_view name) const {
    const std::size_t j = column_index(name);
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r[j]);
    return out;
}

std::vector<double> CsvTable::numbers(std::string_view name) const {
    std::vector<double> out;
    for (const auto& cell : column(name)) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw std::invalid_argument("csv cell '" + cell + "' in column '" + std::string(name) +
                                        "' is not a number");
        }
        out.push_back(v);
    }
    return out;
}

namespace {

void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> cells;
    while (true) {
        const auto comma = line.find(',');
        cells.emplace_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return cells;
}

}  // namespace

std::string CsvTable::to_string() const {
    std::string out;
    append_line(out, header_);
    for (const auto& r : rows_) append_line(out, r);
    return out;
}

void CsvTable::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_string();
}

CsvTable CsvTable::parse(std::string_view text) {
    CsvTable t;
    bool first = true;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (first) {
            t.header_ = split(line);
            first = false;
        } else {
            t.add_row(split(line));
        }
    }
    if (first) throw std::invalid_argument("csv text has no header");
    return t;
}

CsvTable CsvTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace nlbs

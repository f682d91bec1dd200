#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nlbs {

/// 17 significant digits, so doubles survive a text round trip.
std::string format_number(double value);
std::string format_number(std::size_t value);
inline std::string format_bool(bool value) { return value ? "true" : "false"; }

/// Header plus rows of unquoted, comma-free cells.
class CsvTable {
public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> header);

    /// Throws std::invalid_argument if the row width differs from the header.
    void add_row(std::vector<std::string> row);

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

    /// Throws std::out_of_range for an unknown column.
    std::size_t column_index(std::string_view name) const;
    std::vector<std::string> column(std::string_view name) const;
    /// Column parsed as doubles; throws std::invalid_argument on bad cells.
    std::vector<double> numbers(std::string_view name) const;

    std::string to_string() const;
    void save(const std::filesystem::path& path) const;

    /// Inverse of to_string. Throws std::invalid_argument on ragged rows.
    static CsvTable parse(std::string_view text);
    static CsvTable load(const std::filesystem::path& path);

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace nlbs

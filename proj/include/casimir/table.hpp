#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace casimir::cli {

using Cell = std::variant<long long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells);
};

enum class TableFormat { csv, json };

/// Doubles are written as scientific notation with 17 significant digits,
/// '.' decimal separator; identical tables produce identical bytes.
std::string format_cell(const Cell& cell);

void emit_table(const Table& table, TableFormat format, std::ostream& out);

void write_table_file(const Table& table, TableFormat format,
                      const std::filesystem::path& path);

/// FNV-1a hash of a byte string, hex-encoded; used for config fingerprints.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace casimir::cli

#include "casimir/table.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace casimir::cli {

void Table::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns.size())
        throw std::invalid_argument("Table: row width does not match header");
    rows.push_back(std::move(cells));
}

std::string format_cell(const Cell& cell) {
    if (std::holds_alternative<long long>(cell)) return std::to_string(std::get<long long>(cell));
    if (std::holds_alternative<std::string>(cell)) return std::get<std::string>(cell);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", std::get<double>(cell));
    return buf;
}

void emit_table(const Table& table, TableFormat format, std::ostream& out) {
    if (format == TableFormat::csv) {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            out << (c ? "," : "") << table.columns[c];
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << format_cell(row[c]);
            out << "\n";
        }
        return;
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            const Cell& cell = row[c];
            if (std::holds_alternative<long long>(cell))
                obj[table.columns[c]] = std::get<long long>(cell);
            else if (std::holds_alternative<double>(cell))
                obj[table.columns[c]] = std::get<double>(cell);
            else
                obj[table.columns[c]] = std::get<std::string>(cell);
        }
        doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << "\n";
}

void write_table_file(const Table& table, TableFormat format,
                      const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    emit_table(table, format, out);
    if (!out.good()) throw std::runtime_error("write failed: " + path.string());
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace casimir::cli

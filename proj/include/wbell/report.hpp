#pragma once

// Machine-readable output tables. CSV cells and JSON numbers carry 12
// significant digits; values are snapped to that precision when a row is
// built, so emitted files parse back to the exact in-memory table.

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wbell/version.hpp"

namespace wbell {

inline std::string format_significant(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

/// Double snapped to its 12-significant-digit decimal representation.
inline double snap_significant(double v, int digits = 12) {
    return std::strtod(format_significant(v, digits).c_str(), nullptr);
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;

    void add_row(std::vector<nlohmann::json> row) {
        if (row.size() != columns.size()) {
            throw std::invalid_argument("row width does not match header");
        }
        rows.push_back(std::move(row));
    }

    static nlohmann::json number(double v) { return snap_significant(v); }

    std::string to_csv() const {
        std::string out;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += columns[c];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += cell_text(row[c]);
            }
            out += '\n';
        }
        return out;
    }

    static std::string cell_text(const nlohmann::json& cell) {
        if (cell.is_string()) return cell.get<std::string>();
        if (cell.is_number_float()) {
            return format_significant(cell.get<double>());
        }
        return cell.dump();
    }

    nlohmann::json rows_as_json() const {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json obj = nlohmann::json::object();
            for (std::size_t c = 0; c < columns.size(); ++c) {
                obj[columns[c]] = row[c];
            }
            out.push_back(std::move(obj));
        }
        return out;
    }

    static Table from_csv(const std::string& text) {
        Table table;
        std::istringstream stream(text);
        std::string line;
        bool header = true;
        while (std::getline(stream, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cells;
            std::string cell;
            std::istringstream ls(line);
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            if (line.back() == ',') cells.emplace_back();
            if (header) {
                table.columns = cells;
                header = false;
                continue;
            }
            std::vector<nlohmann::json> row;
            row.reserve(cells.size());
            for (const std::string& c : cells) row.push_back(parse_cell(c));
            table.add_row(std::move(row));
        }
        return table;
    }

    friend bool operator==(const Table&, const Table&) = default;

  private:
    static nlohmann::json parse_cell(const std::string& text) {
        if (!text.empty()) {
            bool integral = true;
            for (std::size_t i = 0; i < text.size(); ++i) {
                if (i == 0 && (text[i] == '-' || text[i] == '+')) continue;
                if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
                    integral = false;
                    break;
                }
            }
            if (integral && text != "-" && text != "+") {
                return std::stoll(text);
            }
            char* end = nullptr;
            const double v = std::strtod(text.c_str(), &end);
            if (end == text.c_str() + text.size()) return v;
        }
        return text;
    }
};

/// Top-level JSON document: {command, config, <payload_key>, version}.
inline nlohmann::json make_envelope(const std::string& command,
                                    nlohmann::json config,
                                    const std::string& payload_key,
                                    nlohmann::json payload) {
    return nlohmann::json{{"command", command},
                          {"config", std::move(config)},
                          {payload_key, std::move(payload)},
                          {"version", kVersion}};
}

}  // namespace wbell

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "flc/analysis.hpp"
#include "flc/series.hpp"
#include "flc/solvers.hpp"

namespace flc::cli {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// One command result in every output form it supports.
struct Report {
    Table table;
    Json json = Json::object();
    /// Plain-text form, used when no format is requested.
    std::optional<std::string> text;
};

enum class Format { csv, json, text };

/// 17 significant digits, shortest exponent form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

/// Header line plus one line per row, '\n' terminated; fields containing
/// ',', '"' or a newline are quoted.
std::string to_csv(const Table& t);

/// Compact single-line JSON with every float printed through format_number;
/// non-finite floats become null.
std::string to_json(const Json& j);

/// Table as {"columns": [...], "rows": [[...], ...]}.
Json table_json(const Table& t);

std::string emit(const Report& r, Format f);

Report series_report(const FractalSeries& s);
Report series2d_report(const FractalSeries2D& s);
Report grid_report(const GridFunction& g, std::size_t stride = 1);
Report hoelder_report(const HoelderEstimate& e);
Report continuity_report(const ContinuityReport& r);

}  // namespace flc::cli

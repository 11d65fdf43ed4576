#include "flc_cli/emit.hpp"

#include <charconv>
#include <cmath>

#include "flc/error.hpp"

namespace flc::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_number(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return csv_field(v);
            }
        },
        c);
}

Json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return Json(v); }, c);
}

void write_json(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_number(v) : "null";
            break;
        }
        case Json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ',';
                first = false;
                write_json(e, out);
            }
            out += ']';
            break;
        }
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                out += Json(key).dump();
                out += ':';
                write_json(value, out);
            }
            out += '}';
            break;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + csv_field(t.header[i]);
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
        out += '\n';
    }
    return out;
}

std::string to_json(const Json& j) {
    std::string out;
    write_json(j, out);
    return out;
}

Json table_json(const Table& t) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
        Json r = Json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    return Json{{"columns", t.header}, {"rows", std::move(rows)}};
}

std::string emit(const Report& r, Format f) {
    switch (f) {
        case Format::csv:
            return to_csv(r.table);
        case Format::json:
            return to_json(r.json) + "\n";
        case Format::text:
            if (r.text) return *r.text + "\n";
            return to_csv(r.table);
    }
    throw IoError("emit", "unknown output format");
}

Report series_report(const FractalSeries& s) {
    Report r;
    r.table.header = {"k", "coeff"};
    for (std::size_t k = 0; k < s.coeffs().size(); ++k) {
        r.table.rows.push_back({static_cast<std::int64_t>(k), s.coeffs()[k]});
    }
    r.json = Json{{"alpha", s.alpha()}, {"x0", s.center()}, {"coeffs", s.coeffs()}};
    return r;
}

Report series2d_report(const FractalSeries2D& s) {
    Report r;
    r.table.header = {"i", "j", "coeff"};
    for (std::size_t n = 0; n < s.rows().size(); ++n) {
        for (std::size_t i = 0; i <= n; ++i) {
            r.table.rows.push_back(
                {static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - i), s.rows()[n][i]});
        }
    }
    r.json = Json{{"alpha", s.order().value()},
                  {"center", {s.center().first, s.center().second}},
                  {"rows", s.rows()}};
    return r;
}

Report grid_report(const GridFunction& g, std::size_t stride) {
    Report r;
    r.table.header.push_back("t");
    for (double x : g.x_nodes) r.table.header.push_back(format_number(x));
    Json t_nodes = Json::array();
    Json values = Json::array();
    const std::size_t nt = g.t_nodes.size();
    for (std::size_t ti = 0; ti < nt; ++ti) {
        if (ti % stride != 0 && ti + 1 != nt) continue;
        std::vector<Cell> row{g.t_nodes[ti]};
        std::vector<double> vals;
        for (std::size_t xi = 0; xi < g.x_nodes.size(); ++xi) {
            row.emplace_back(g.at(ti, xi));
            vals.push_back(g.at(ti, xi));
        }
        r.table.rows.push_back(std::move(row));
        t_nodes.push_back(g.t_nodes[ti]);
        values.push_back(std::move(vals));
    }
    r.json = Json{{"x_nodes", g.x_nodes}, {"t_nodes", std::move(t_nodes)}, {"values", std::move(values)}};
    return r;
}

Report hoelder_report(const HoelderEstimate& e) {
    Report r;
    r.table.header = {"exponent_hat", "constant_hat", "fit_residual", "pairs_used"};
    r.table.rows.push_back({e.exponent_hat, e.constant_hat, e.fit_residual, static_cast<std::int64_t>(e.pairs_used)});
    r.json = Json{{"exponent_hat", e.exponent_hat},
                  {"constant_hat", e.constant_hat},
                  {"fit_residual", e.fit_residual},
                  {"pairs_used", e.pairs_used}};
    return r;
}

Report continuity_report(const ContinuityReport& c) {
    Report r;
    r.table.header = {"is_continuous", "worst_pair_0", "worst_pair_1", "worst_ratio"};
    r.table.rows.push_back({c.is_continuous, c.worst_pair.first, c.worst_pair.second, c.worst_ratio});
    r.json = Json{{"is_continuous", c.is_continuous},
                  {"worst_pair", {c.worst_pair.first, c.worst_pair.second}},
                  {"worst_ratio", c.worst_ratio}};
    return r;
}

}  // namespace flc::cli

#include <prepot/io.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <prepot/errors.hpp>

#ifndef PREPOT_VERSION
#define PREPOT_VERSION "0.0.0"
#endif

namespace prepot::io {

std::string format_real(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_real(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty())
        throw ValidationError("not a real number: '" + std::string(text) + "'", {"real number"});
    return v;
}

std::size_t Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ValidationError("CSV: missing column '" + std::string(name) + "'", {"column " + std::string(name)});
}

void write_csv(std::ostream& out, const Table& table)
{
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

Table read_csv(std::istream& in)
{
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (first) {
            t.header = std::move(cells);
            first = false;
            continue;
        }
        if (cells.size() != t.header.size())
            throw ValidationError("CSV: row width differs from header", {"consistent columns"});
        t.rows.push_back(std::move(cells));
    }
    if (first) throw ValidationError("CSV: empty input", {"header row"});
    return t;
}

Table spectrum_table(const std::vector<SpectrumRow>& rows)
{
    Table t{{"N", "E", "E_susy", "bound"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.N), format_real(r.energy), format_real(r.susy_energy), r.bound ? "true" : "false"});
    return t;
}

std::vector<SpectrumRow> spectrum_rows(const Table& table)
{
    const auto cn = table.column("N"), ce = table.column("E"), cs = table.column("E_susy"), cb = table.column("bound");
    std::vector<SpectrumRow> out;
    for (const auto& r : table.rows) {
        SpectrumRow row;
        row.N = std::stoi(r[cn]);
        row.energy = parse_real(r[ce]);
        row.susy_energy = parse_real(r[cs]);
        row.bound = r[cb] == "true";
        out.push_back(row);
    }
    return out;
}

json real(double v)
{
    if (std::isfinite(v)) return v;
    return format_real(v);
}

double real_from_json(const json& j)
{
    if (j.is_string()) return parse_real(j.get<std::string>());
    return j.get<double>();
}

json to_json(const SpectrumRow& row)
{
    return {{"N", row.N}, {"E", real(row.energy)}, {"E_susy", real(row.susy_energy)}, {"bound", row.bound}};
}

SpectrumRow spectrum_row_from_json(const json& j)
{
    return {j.at("N").get<int>(), real_from_json(j.at("E")), real_from_json(j.at("E_susy")), j.at("bound").get<bool>()};
}

Table column_table(std::string_view first, const std::vector<double>& a, std::string_view second,
                   const std::vector<double>& b)
{
    if (a.size() != b.size()) throw ValidationError("column_table: columns differ in length", {"equal lengths"});
    Table t{{std::string(first), std::string(second)}, {}};
    t.rows.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) t.rows.push_back({format_real(a[i]), format_real(b[i])});
    return t;
}

std::string version() { return PREPOT_VERSION; }

json envelope(std::string_view command, ModelKind kind, const ModelParams<double>& params, json results)
{
    json j;
    j["command"] = command;
    j["model"] = cli_name(kind);
    j["params"] = {{"A", real(params.A)}, {"B", real(params.B)}};
    j["results"] = std::move(results);
    j["meta"] = {{"version", version()}};
    return j;
}

json envelope(std::string_view command, json results)
{
    json j;
    j["command"] = command;
    j["model"] = nullptr;
    j["params"] = nullptr;
    j["results"] = std::move(results);
    j["meta"] = {{"version", version()}};
    return j;
}

} // namespace prepot::io

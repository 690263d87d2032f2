#pragma once

// Text output shared by the command-line tools: shortest-exact real
// formatting, a minimal CSV table and the JSON envelope.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include <prepot/models.hpp>

namespace prepot::io {

using json = nlohmann::json;

/// 17 significant digits, so parse_real(format_real(v)) == v for finite v.
std::string format_real(double v);

/// Accepts what format_real writes plus "inf", "-inf", "nan".
double parse_real(std::string_view text);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
};

/// Header row, comma separated, LF line endings. Cells may not contain
/// commas, quotes or newlines.
void write_csv(std::ostream& out, const Table& table);
Table read_csv(std::istream& in);

struct SpectrumRow {
    int N = 0;
    double energy = 0;
    double susy_energy = 0;
    bool bound = true;
};

Table spectrum_table(const std::vector<SpectrumRow>& rows);
std::vector<SpectrumRow> spectrum_rows(const Table& table);

json to_json(const SpectrumRow& row);
SpectrumRow spectrum_row_from_json(const json& j);

/// Two real columns, e.g. (x, phi) or (k, z).
Table column_table(std::string_view first, const std::vector<double>& a, std::string_view second,
                   const std::vector<double>& b);

/// Real-valued JSON number; infinities and NaN become the strings format_real writes.
json real(double v);
double real_from_json(const json& j);

/// {"command", "model", "params": {"A", "B"}, "results", "meta": {"version"}}
json envelope(std::string_view command, ModelKind kind, const ModelParams<double>& params, json results);
json envelope(std::string_view command, json results);

std::string version();

} // namespace prepot::io

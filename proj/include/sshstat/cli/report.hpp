#pragma once

#include <optional>
#include <string>

#include "json.hpp"

namespace sshstat::cli {

using json = nlohmann::ordered_json;

/// Round to 12 significant digits: golden-file comparisons stay meaningful
/// without being brittle at machine epsilon.
double round_sig(double v);

/// Rounded JSON value; NaN and infinities become null.
json num(double v);

/// %.12g rendering for CSV cells, matching the JSON rounding.
std::string fmt_num(double v);

/// RFC-4180 style quoting: wrap when the field holds a comma, quote or
/// newline, doubling embedded quotes.
std::string csv_escape(const std::string& field);

/// Write to `path` atomically (temp file + rename); empty path = stdout.
void write_text(const std::string& path, const std::string& content);

/// Envelope shared by every JSON report: tool, version, command, config.
json report_envelope(const std::string& command, json config);

} // namespace sshstat::cli

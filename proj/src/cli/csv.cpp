#include "sshstat/cli/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <unordered_set>

#include "sshstat/errors.hpp"

namespace sshstat::cli {

namespace {

// One physical line into fields. Quotes wrap a field; doubled quotes
// inside a quoted field escape to one quote.
std::vector<std::string> split_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw ValidationError("row " + std::to_string(line_no) +
                              ": unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size() && std::isfinite(out);
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

} // namespace

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path,
                                                    std::vector<std::string>& header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");

    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && line_no > 1) continue;
        std::vector<std::string> fields = split_line(line, line_no);
        if (line_no == 1) {
            header = std::move(fields);
            continue;
        }
        if (fields.size() != header.size())
            throw ValidationError("row " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
        rows.push_back(std::move(fields));
    }
    if (line_no == 0) throw ValidationError("'" + path + "' is empty");
    return rows;
}

Dataset ingest_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line, 1);

    const std::size_t id_col = column_index(header, schema.id_column);
    const std::size_t y_col = column_index(header, schema.y_column);

    struct Col {
        std::string name;
        std::size_t index;
        CovariateKind kind;
        bool auto_kind;
        std::vector<std::string> raw;
    };
    std::vector<Col> cols;
    std::unordered_set<std::string> wanted;
    for (const auto& [name, kind] : schema.declared) {
        if (name == schema.id_column || name == schema.y_column) continue;
        if (!wanted.insert(name).second) continue;
        cols.push_back({name, column_index(header, name), kind, false, {}});
    }
    for (const std::string& name : schema.auto_columns) {
        if (name == schema.id_column || name == schema.y_column) continue;
        if (!wanted.insert(name).second) continue;
        cols.push_back({name, column_index(header, name), CovariateKind::categorical,
                        true, {}});
    }

    std::vector<std::string> ids;
    std::vector<double> y;
    std::vector<std::size_t> row_lines;
    std::unordered_set<std::string> seen_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_line(line, line_no);
        if (fields.size() != header.size())
            throw ValidationError("row " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));

        const std::string& id = fields[id_col];
        if (id.empty())
            throw ValidationError("row " + std::to_string(line_no) + ": empty id");
        if (!seen_ids.insert(id).second)
            throw ValidationError("row " + std::to_string(line_no) + ": duplicate id '" +
                                  id + "'");
        double yv = 0.0;
        if (!parse_double(fields[y_col], yv))
            throw ValidationError("row " + std::to_string(line_no) +
                                  ": unparseable y value '" + fields[y_col] + "'");
        ids.push_back(id);
        y.push_back(yv);
        row_lines.push_back(line_no);
        for (Col& c : cols) c.raw.push_back(fields[c.index]);
    }
    if (ids.empty()) throw ValidationError("'" + path + "' has no data rows");

    Dataset data(std::move(ids), std::move(y));
    for (Col& c : cols) {
        Covariate cov;
        cov.name = c.name;
        bool numeric = c.kind == CovariateKind::continuous;
        if (c.auto_kind) {
            numeric = true;
            double tmp;
            for (const std::string& s : c.raw)
                if (!parse_double(s, tmp)) {
                    numeric = false;
                    break;
                }
        }
        if (numeric) {
            cov.kind = CovariateKind::continuous;
            cov.values.reserve(c.raw.size());
            for (std::size_t i = 0; i < c.raw.size(); ++i) {
                double v;
                if (!parse_double(c.raw[i], v))
                    throw ValidationError("row " + std::to_string(row_lines[i]) +
                                          ": unparseable numeric value '" + c.raw[i] +
                                          "' in column '" + c.name + "'");
                cov.values.push_back(v);
            }
        } else {
            cov.kind = CovariateKind::categorical;
            cov.labels = std::move(c.raw);
        }
        data.add_covariate(std::move(cov));
    }
    return data;
}

} // namespace sshstat::cli

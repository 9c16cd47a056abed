#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sshstat/core.hpp"

namespace sshstat::cli {

/// Which columns of a CSV file to load and how to type them. Columns in
/// `declared` are parsed with the given kind; columns in `auto_columns`
/// become continuous when every value parses as a number, categorical
/// otherwise.
struct CsvSchema {
    std::string id_column = "id";
    std::string y_column = "y";
    std::vector<std::pair<std::string, CovariateKind>> declared;
    std::vector<std::string> auto_columns;
};

/// Parse a UTF-8, comma-separated file (first row header, '.' decimals)
/// into a Dataset. Quoted fields may contain commas and doubled quotes;
/// a field must not span lines. Errors name the offending physical line.
Dataset ingest_csv(const std::string& path, const CsvSchema& schema);

/// One parsed CSV record: header names to raw fields. Exposed for the
/// sandwich inputs, which are not unit datasets.
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path,
                                                    std::vector<std::string>& header);

} // namespace sshstat::cli

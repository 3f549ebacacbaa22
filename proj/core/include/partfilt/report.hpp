#pragma once

#include <map>
#include <string>
#include <vector>

namespace pf {

/// Tabular results emitted as CSV and JSON twins. The JSON twin echoes
/// the run configuration and seeds for exact replay.
struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> config;

    void add_row(std::vector<std::string> row);
};

std::string format_double(double v);

/// Writes <stem>.csv and <stem>.json.
void emit_report(const Report& report, const std::string& stem);

/// Flat key=value config file; '#' starts a comment line.
std::map<std::string, std::string> load_config(const std::string& path);

std::string version_string();

}  // namespace pf

#include "partfilt/report.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "partfilt/errors.hpp"

namespace pf {

void Report::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size())
        throw ShapeError("report row width != column count");
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string version_string() { return "partfilt-0.1.0"; }

void emit_report(const Report& report, const std::string& stem) {
    {
        std::ofstream csv(stem + ".csv");
        if (!csv) throw ParseError("cannot write report: " + stem + ".csv");
        for (std::size_t j = 0; j < report.columns.size(); ++j)
            csv << (j ? "," : "") << report.columns[j];
        csv << "\n";
        for (const auto& row : report.rows) {
            for (std::size_t j = 0; j < row.size(); ++j)
                csv << (j ? "," : "") << row[j];
            csv << "\n";
        }
    }
    nlohmann::json j;
    j["version"] = version_string();
    j["config"] = report.config;
    j["columns"] = report.columns;
    j["rows"] = report.rows;
    std::ofstream js(stem + ".json");
    if (!js) throw ParseError("cannot write report: " + stem + ".json");
    js << j.dump(2) << "\n";
}

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string()
                                          : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace pf

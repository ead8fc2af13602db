#include "fejc/output.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "fejc/errors.hpp"

namespace fejc {

namespace {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

} // namespace

void write_csv(std::ostream& out, const ResultTable& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw Error("row width differs from header in " + table.name);
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_value(row[c]);
        out << '\n';
    }
}

std::string manifest_json(const ScenarioResult& result) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [key, value] : result.manifest) {
        std::visit([&, &k = key](const auto& v) { j[k] = v; }, value);
    }
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_outputs(const ScenarioResult& result, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    const std::string stem = to_string(result.kind);
    std::vector<std::filesystem::path> written;
    for (const auto& table : result.tables) {
        auto path = directory / (stem + "_" + table.name + ".csv");
        std::ofstream out(path);
        if (!out) throw Error("cannot write " + path.string());
        write_csv(out, table);
        written.push_back(std::move(path));
    }
    auto path = directory / (stem + "_manifest.json");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << manifest_json(result);
    written.push_back(std::move(path));
    return written;
}

} // namespace fejc

#include "steklov/report.hpp"

#include "steklov/error.hpp"
#include "steklov/hash.hpp"
#include "steklov/mesh_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

namespace steklov
{
void Table::add(std::vector< double > row)
{
    if (row.size() != columns.size())
        throw ParameterError(fmt::format("table {}: row has {} cells, expected {}", name, row.size(), columns.size()));
    rows.push_back(std::move(row));
}

Table& ExperimentReport::table(const std::string& name, const std::vector< std::string >& columns)
{
    for (auto& t : tables)
        if (t.name == name)
            return t;
    tables.push_back({name, columns, {}});
    return tables.back();
}

const Table* ExperimentReport::find_table(const std::string& name) const
{
    for (const auto& t : tables)
        if (t.name == name)
            return &t;
    return nullptr;
}

const Check* ExperimentReport::find_check(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

void ExperimentReport::check(std::string name, bool passed, double value, double threshold, std::string detail,
                             bool upper)
{
    checks.push_back({std::move(name), passed, value, threshold, std::move(detail), upper});
}

bool ExperimentReport::passed() const
{
    return point_errors.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace
{
Json body_json(const ExperimentReport& report)
{
    Json j;
    j["format"]  = "steklov-report v1";
    j["kind"]    = report.kind;
    j["config"]  = report.config;
    j["results"] = report.results;
    auto& checks = j["checks"] = Json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"value", format_real(c.value)},
                          {"threshold", format_real(c.threshold)},
                          {"bound", c.upper ? "upper" : "lower"},
                          {"margin", format_real(c.margin())},
                          {"detail", c.detail}});
    auto& tables = j["tables"] = Json::array();
    for (const auto& t : report.tables)
        tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows.size()}});
    j["point_errors"] = report.point_errors;
    j["passed"]       = report.passed();
    return j;
}
} // namespace

std::uint64_t ExperimentReport::content_hash() const
{
    Fnv1a h;
    h.text(body_json(*this).dump());
    for (const auto& t : tables)
        h.text(to_csv(t));
    return h.digest();
}

Json to_json(const ExperimentReport& report)
{
    Json j            = body_json(report);
    j["content_hash"] = fmt::format("{:016x}", report.content_hash());
    j["environment"]  = report.environment;
    j["wall_seconds"] = report.wall_seconds;
    return j;
}

std::string to_csv(const Table& table)
{
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? "," : "") + table.columns[i];
    out += '\n';
    for (const auto& row : table.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + format_real(row[i]);
        out += '\n';
    }
    return out;
}

std::string environment_stamp()
{
#if defined(__clang__)
    const std::string compiler = fmt::format("clang {}.{}.{}", __clang_major__, __clang_minor__, __clang_patchlevel__);
#elif defined(__GNUC__)
    const std::string compiler = fmt::format("gcc {}.{}.{}", __GNUC__, __GNUC_MINOR__, __GNUC_PATCHLEVEL__);
#else
    const std::string compiler = "unknown compiler";
#endif
    return fmt::format("{}; C++ {}", compiler, __cplusplus);
}

void write_report(const std::filesystem::path& dir, const ExperimentReport& report)
{
    std::error_code ec;
    std::filesystem::create_directories(dir / "tables", ec);
    if (ec)
        throw IoError(fmt::format("cannot create {}: {}", (dir / "tables").string(), ec.message()));
    {
        std::ofstream os(dir / "report.json");
        if (!os)
            throw IoError(fmt::format("cannot write {}", (dir / "report.json").string()));
        os << to_json(report).dump(2) << '\n';
    }
    for (const auto& t : report.tables)
    {
        const auto    path = dir / "tables" / (t.name + ".csv");
        std::ofstream os(path);
        if (!os)
            throw IoError(fmt::format("cannot write {}", path.string()));
        os << to_csv(t);
    }
}

} // namespace steklov

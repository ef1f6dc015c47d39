#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace steklov
{
using Json = nlohmann::ordered_json;

/// Numeric table; rendered as CSV.
struct Table
{
    std::string                          name;
    std::vector< std::string >           columns;
    std::vector< std::vector< double > > rows;

    void add(std::vector< double > row);
};

/// One named pass/fail decision together with the numbers it was derived from.
struct Check
{
    std::string name;
    bool        passed    = false;
    double      value     = 0.0;
    double      threshold = 0.0;
    std::string detail;
    bool        upper = true;   // value is bounded above by threshold (below when false)

    [[nodiscard]] double margin() const { return upper ? threshold - value : value - threshold; }
};

struct ExperimentReport
{
    std::string                kind;
    Json                       config = Json::object();
    Json                       results = Json::object();
    std::vector< Table >       tables;
    std::vector< Check >       checks;
    std::vector< std::string > point_errors;   // captured per sweep point, sweep continues
    std::string                environment;    // excluded from the hash
    double                     wall_seconds = 0.0;   // excluded from the hash

    Table&                      table(const std::string& name, const std::vector< std::string >& columns);
    [[nodiscard]] const Table*  find_table(const std::string& name) const;
    [[nodiscard]] const Check*  find_check(const std::string& name) const;
    void                        check(std::string name, bool passed, double value, double threshold,
                                      std::string detail = {}, bool upper = true);
    [[nodiscard]] bool          passed() const;
    /// FNV-1a over the canonical JSON without the environment stamp and wall clock.
    [[nodiscard]] std::uint64_t content_hash() const;
};

Json to_json(const ExperimentReport& report);

std::string to_csv(const Table& table);

/// Compiler / build stamp recorded in reports.
std::string environment_stamp();

/// Writes report.json and tables/<name>.csv under `dir`.
void write_report(const std::filesystem::path& dir, const ExperimentReport& report);

} // namespace steklov

#pragma once

#include "steklov/geometry.hpp"
#include "steklov/report.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace steklov
{
enum class ExperimentKind : std::uint8_t
{
    Spectrum,
    DensitySweep,
    SubdomainSweep,
    CollarSweep,
    GraphLimit,
    PrescriptionPipeline,
    NodalAudit,
    MultiplicityAudit,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind   parse_experiment_kind(std::string_view text);

/// One experiment. File layout:
///
///     { "kind": "<kind>", "seed": 1, "jobs": 0, "tol": null, "output": "out", "params": { ... } }
///
/// `params` are kind specific (see README); unknown keys are rejected.
struct ExperimentConfig
{
    ExperimentKind          kind = ExperimentKind::Spectrum;
    Json                    params = Json::object();
    std::optional< std::uint64_t > seed;
    unsigned                jobs = 0;
    std::optional< double > tol;   // overrides the kind's main tolerance
    std::string             output = "out";

    /// Throws ParameterError for missing seeds, unknown keys or out-of-range values.
    void validate() const;
};

ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
Json             to_json(const ExperimentConfig& config);

/// Report plus the artifacts written next to it.
struct RunOutput
{
    ExperimentReport                  report;
    std::map< std::string, std::string > figures;   // name -> SVG text
    std::map< std::string, Mesh2D >   meshes;
};

/// Dispatches to the module operations. Module errors at a sweep point are recorded in
/// report.point_errors and the sweep continues.
RunOutput run(const ExperimentConfig& config);

/// report.json, tables/*.csv, figures/*.svg, meshes/*.msh and summary.txt under `dir`.
void emit_outputs(const std::filesystem::path& dir, const RunOutput& output);

/// One line per check with value, threshold and pass/fail.
std::string summary_text(const ExperimentReport& report);

} // namespace steklov

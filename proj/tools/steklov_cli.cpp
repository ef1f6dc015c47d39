// Command line front end: mesh, spectrum, prescribe, thicken, run, audit.

#include "steklov/error.hpp"
#include "steklov/fem.hpp"
#include "steklov/graphs.hpp"
#include "steklov/harness.hpp"
#include "steklov/mesh_io.hpp"
#include "steklov/thickening.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

using namespace steklov;

namespace
{
struct RunFlags
{
    std::string                   config;
    std::optional< std::uint64_t > seed;
    std::optional< double >       tol;
    std::optional< unsigned >     jobs;
    std::string                   out;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool config_required)
{
    auto* c = app->add_option("--config", f.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    if (config_required)
        c->required();
    app->add_option("--seed", f.seed, "random seed (overrides the config)");
    app->add_option("--tol", f.tol, "main tolerance of the experiment (overrides the config)");
    app->add_option("--jobs", f.jobs, "worker threads, 0 = all cores");
    app->add_option("--out", f.out, "output directory");
}

int execute(ExperimentConfig config, const RunFlags& f)
{
    if (f.seed)
        config.seed = f.seed;
    if (f.tol)
        config.tol = f.tol;
    if (f.jobs)
        config.jobs = *f.jobs;
    if (!f.out.empty())
        config.output = f.out;
    config.validate();
    const auto output = run(config);
    emit_outputs(config.output, output);
    std::cout << summary_text(output.report);
    std::cout << fmt::format("report: {}/report.json  hash {:016x}  {:.2f} s\n", config.output,
                             output.report.content_hash(), output.report.wall_seconds);
    return output.report.passed() ? 0 : 1;
}

std::vector< double > parse_list(const std::string& text)
{
    std::vector< double > out;
    std::string           item;
    for (char ch : text + ",")
    {
        if (ch == ',' || ch == ' ')
        {
            if (!item.empty())
                out.push_back(std::stod(item));
            item.clear();
        }
        else
            item += ch;
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Steklov spectra of planar domains"};
    app.require_subcommand(1);

    // mesh
    auto*       mesh_cmd = app.add_subcommand("mesh", "generate a mesh file");
    std::string domain   = "disk";
    double      radius = 1.0, inner = 0.5, h = 0.05, length = 2.0 * std::numbers::pi, width = 1.0;
    std::string mesh_out = "mesh.msh";
    mesh_cmd->add_option("--domain", domain, "disk | annulus | strip")->check(CLI::IsMember({"disk", "annulus", "strip"}));
    mesh_cmd->add_option("--radius", radius);
    mesh_cmd->add_option("--inner-radius", inner);
    mesh_cmd->add_option("--mesh-size", h, "target edge length");
    mesh_cmd->add_option("--length", length, "strip length (periodic)");
    mesh_cmd->add_option("--width", width, "strip width");
    mesh_cmd->add_option("--out", mesh_out);

    // spectrum
    auto*       spec_cmd = app.add_subcommand("spectrum", "Steklov spectrum of a mesh file");
    std::string spec_mesh;
    int         n_eigs = 8;
    std::optional< double > cluster_tol;
    std::string spec_out;
    spec_cmd->add_option("--mesh", spec_mesh)->required()->check(CLI::ExistingFile);
    spec_cmd->add_option("--n", n_eigs, "number of eigenpairs");
    spec_cmd->add_option("--tol", cluster_tol, "relative cluster tolerance");
    spec_cmd->add_option("--out", spec_out, "write the spectrum JSON here");

    // prescribe
    auto*               presc_cmd = app.add_subcommand("prescribe", "edge lengths on K_{N+1} with a given spectrum");
    std::string         targets_text;
    PrescriptionOptions popts;
    std::string         graph_out;
    presc_cmd->add_option("--targets", targets_text, "comma separated a_1..a_N")->required();
    presc_cmd->add_option("--tol", popts.tol);
    presc_cmd->add_option("--seed", popts.seed);
    presc_cmd->add_option("--starts", popts.starts);
    presc_cmd->add_option("--out", graph_out, "graph file");

    // thicken
    auto*       thick_cmd = app.add_subcommand("thicken", "mesh of a thickened graph");
    std::string graph_in, style = "convex", thick_out = "thickened.msh";
    double      eps = 0.05, c = 2.0, thick_h = 0.0;
    thick_cmd->add_option("--graph", graph_in)->required()->check(CLI::ExistingFile);
    thick_cmd->add_option("--style", style, "convex | path | star");
    thick_cmd->add_option("--eps", eps);
    thick_cmd->add_option("--c", c);
    thick_cmd->add_option("--mesh-size", thick_h, "0 = eps / 4");
    thick_cmd->add_option("--out", thick_out);

    // run / audit
    auto*    run_cmd = app.add_subcommand("run", "run an experiment config");
    RunFlags run_flags;
    add_run_flags(run_cmd, run_flags, true);
    auto*    audit_cmd = app.add_subcommand("audit", "nodal or multiplicity audit");
    RunFlags audit_flags;
    std::string audit_kind = "nodal";
    std::vector< std::string > audit_domains;
    int         audit_samples = 0;
    add_run_flags(audit_cmd, audit_flags, false);
    audit_cmd->add_option("--kind", audit_kind, "nodal | multiplicity (without --config)")
        ->check(CLI::IsMember({"nodal", "multiplicity"}));
    audit_cmd->add_option("--domains", audit_domains, "disk annulus mixed-disk");
    audit_cmd->add_option("--samples", audit_samples);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (mesh_cmd->parsed())
        {
            Mesh2D m = domain == "disk"      ? make_disk_mesh(radius, h)
                       : domain == "annulus" ? make_annulus_mesh(inner, radius, h)
                                             : make_strip_mesh(length, width, h, true);
            save_mesh(mesh_out, m);
            std::cout << fmt::format("{}: {} vertices, {} triangles, hash {:016x}\n", mesh_out, m.vertices.size(),
                                     m.triangles.size(), content_hash(m));
            return 0;
        }
        if (spec_cmd->parsed())
        {
            const auto m = load_mesh(spec_mesh);
            const auto r = cluster_tol ? steklov_spectrum(m, n_eigs, *cluster_tol) : steklov_spectrum(m, n_eigs);
            const auto res = spectral_residuals(m, r);
            for (std::size_t k = 0; k < r.eigenvalues.size(); ++k)
                std::cout << fmt::format("{:4d}  {:.12g}  cluster {}  residual {:.2e}\n", k, r.eigenvalues[k],
                                         r.cluster_of(static_cast< int >(k)).size(), res[k]);
            if (!spec_out.empty())
            {
                std::ofstream os(spec_out);
                if (!os)
                    throw IoError(fmt::format("cannot write {}", spec_out));
                os << to_json(r).dump(2) << '\n';
            }
            return 0;
        }
        if (presc_cmd->parsed())
        {
            const auto targets = parse_list(targets_text);
            const auto r       = prescribe_spectrum(targets, popts);
            std::cout << fmt::format("max relative error {:.3e} (start {}, {} iterations)\n", r.max_rel_err, r.start,
                                     r.iterations);
            if (graph_out.empty())
                write_graph(std::cout, r.graph);
            else
                save_graph(graph_out, r.graph);
            return 0;
        }
        if (thick_cmd->parsed())
        {
            const auto     g = load_graph(graph_in);
            ThickeningSpec spec{g, embed_graph(g, parse_embedding_style(style)), eps, c, thick_h};
            const auto     m = build_thickened_mesh(spec);
            save_mesh(thick_out, m);
            std::cout << fmt::format("{}: {} vertices, area {:.6f} (estimate {:.6f}), Steklov length {:.6f}\n", thick_out,
                                     m.vertices.size(), total_area(m), thickened_area_estimate(spec),
                                     boundary_length(m, BoundaryTag::Steklov));
            return 0;
        }
        if (run_cmd->parsed())
            return execute(load_config(run_flags.config), run_flags);
        if (audit_cmd->parsed())
        {
            Json j;
            if (!audit_flags.config.empty())
                j = to_json(load_config(audit_flags.config));
            else
            {
                j = {{"kind", audit_kind == "nodal" ? "nodal-audit" : "multiplicity-audit"}, {"seed", 1}, {"params", Json::object()}};
            }
            if (!audit_domains.empty())
                j["params"]["domains"] = audit_domains;
            if (audit_samples > 0)
                j["params"]["samples"] = audit_samples;
            auto config = parse_config(j);
            if (config.kind != ExperimentKind::NodalAudit && config.kind != ExperimentKind::MultiplicityAudit)
                throw ParameterError("audit needs a nodal-audit or multiplicity-audit config");
            return execute(config, audit_flags);
        }
    }
    catch (const OptimizationFailure& e)
    {
        std::cerr << "error: " << e.what() << fmt::format(" (best residual {:.3e})\n", e.residual());
        return 2;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

// Runs the shipped criterion configs in process and prints one line per criterion.
//
//     steklov_acceptance            all criteria
//     steklov_acceptance 4 7        selected criteria

#include "steklov/error.hpp"
#include "steklov/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifndef STEKLOV_CONFIG_DIR
#error "STEKLOV_CONFIG_DIR must point at the configs directory"
#endif

using namespace steklov;

namespace
{
struct Criterion
{
    int                        id;
    std::string                name;
    std::string                config;
    std::vector< std::string > checks;   // must exist and pass
    std::function< std::string(const ExperimentReport&) > extra = {};   // non-empty = failure reason
};

std::string rotations_exercised(const ExperimentReport& r)
{
    for (const auto& d : r.results["domains"])
        if (r.results[d.get< std::string >()]["random_rotations"].get< int >() == 0)
            return fmt::format("no cluster rotations on {}", d.get< std::string >());
    return {};
}

const std::vector< Criterion >& criteria()
{
    static const std::vector< Criterion > all{
        {1, "disk spectrum oracle", "c01_disk_spectrum.json", {"residual", "eigenvalue_oracle", "cluster_pattern"}},
        {2, "cylinder formula", "c02_cylinder.json", {"symmetric_branch"}},
        {3, "collar convergence", "c03_collar.json", {"error_decreasing", "final_error"}},
        {4, "density family", "c04_density.json", {"final_error", "eventually_decreasing"}},
        {5, "subdomain family", "c05_subdomain.json", {"final_error"}},
        {6, "graph prescriber", "c06_prescription.json", {"prescription_error", "homogeneity"}},
        {7, "thickened-graph limit", "c07_graph_limit.json", {"ratio_spread", "gap_monotone"},
         [](const ExperimentReport& r) -> std::string {
             const auto& c = r.results["candidates"];
             return c.contains("c^(n-1)") && c.contains("c^-(n-1)") ? "" : "limit constant candidates not recorded";
         }},
        {8, "Courant audit", "c08_courant.json", {"courant/disk", "courant/annulus"}, rotations_exercised},
        {9, "boundary-touch audit", "c09_boundary_touch.json", {"boundary_touch/mixed-disk"}},
        {10, "multiplicity audits", "c10_multiplicity.json",
         {"multiplicity/disk", "multiplicity/mixed-disk", "multiplicity/annulus"}},
        {11, "nodal graph structure", "c11_nodal_graph.json",
         {"nodal_tree/disk", "endpoint_parity/disk", "nodal_tree/mixed-disk", "endpoint_parity/mixed-disk"},
         rotations_exercised},
    };
    return all;
}

bool evaluate(const Criterion& c)
{
    std::string reason;
    double      seconds = 0.0;
    try
    {
        auto config   = load_config(std::string(STEKLOV_CONFIG_DIR) + "/" + c.config);
        config.output = std::string("acceptance_out/") + c.config.substr(0, c.config.find('.'));
        const auto out = run(config);
        emit_outputs(config.output, out);
        const auto& r = out.report;
        seconds       = r.wall_seconds;
        for (const auto& name : c.checks)
        {
            const Check* k = r.find_check(name);
            if (k == nullptr)
                reason += fmt::format(" missing check {};", name);
            else if (!k->passed)
                reason += fmt::format(" {} = {:.4g} vs {:.4g};", name, k->value, k->threshold);
        }
        if (!r.passed())
            reason += " report has failing checks;";
        if (!r.point_errors.empty())
            reason += fmt::format(" {} point errors (first: {});", r.point_errors.size(), r.point_errors.front());
        if (c.extra && reason.empty())
            reason = c.extra(r);
    }
    catch (const std::exception& e)
    {
        reason = fmt::format(" error: {}", e.what());
    }
    const bool ok = reason.empty();
    fmt::print("criterion {:2d} {:<24} {}  ({}, {:.1f} s){}\n", c.id, c.name, ok ? "PASS" : "FAIL", c.config, seconds,
               ok ? "" : " :" + reason);
    std::fflush(stdout);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector< int > wanted;
    for (int i = 1; i < argc; ++i)
        wanted.push_back(std::atoi(argv[i]));
    int failed = 0, ran = 0;
    for (const auto& c : criteria())
    {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end())
            continue;
        ++ran;
        failed += !evaluate(c);
    }
    if (ran == 0)
    {
        fmt::print(stderr, "no matching criterion\n");
        return 2;
    }
    fmt::print("{} of {} criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}

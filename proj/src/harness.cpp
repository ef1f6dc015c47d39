#include "steklov/harness.hpp"

#include "steklov/deformations.hpp"
#include "steklov/error.hpp"
#include "steklov/fem.hpp"
#include "steklov/graphs.hpp"
#include "steklov/mesh_io.hpp"
#include "steklov/nodal.hpp"
#include "steklov/parallel.hpp"
#include "steklov/random.hpp"
#include "steklov/thickening.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace steklov
{
namespace
{
constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr std::array< std::pair< ExperimentKind, std::string_view >, 8 > kKindNames{{
    {ExperimentKind::Spectrum, "spectrum"},
    {ExperimentKind::DensitySweep, "density-sweep"},
    {ExperimentKind::SubdomainSweep, "subdomain-sweep"},
    {ExperimentKind::CollarSweep, "collar-sweep"},
    {ExperimentKind::GraphLimit, "graph-limit"},
    {ExperimentKind::PrescriptionPipeline, "prescription-pipeline"},
    {ExperimentKind::NodalAudit, "nodal-audit"},
    {ExperimentKind::MultiplicityAudit, "multiplicity-audit"},
}};

/// Typed access to a params object; remembers which keys were read so leftovers can be rejected.
class Params
{
public:
    explicit Params(const Json& j) : m_j(j)
    {
        if (!j.is_object())
            throw ParameterError("params must be an object");
    }

    double real(const std::string& key, double fallback, double lo, double hi)
    {
        const double v = has(key) ? number(key) : fallback;
        if (!(v >= lo && v <= hi))
            throw ParameterError(fmt::format("params.{} = {} outside [{}, {}]", key, v, lo, hi));
        return v;
    }

    int integer(const std::string& key, int fallback, int lo, int hi)
    {
        int v = fallback;
        if (has(key))
        {
            if (!m_j[key].is_number_integer())
                throw ParameterError(fmt::format("params.{} must be an integer", key));
            v = m_j[key].get< int >();
        }
        if (v < lo || v > hi)
            throw ParameterError(fmt::format("params.{} = {} outside [{}, {}]", key, v, lo, hi));
        return v;
    }

    bool boolean(const std::string& key, bool fallback)
    {
        if (!has(key))
            return fallback;
        if (!m_j[key].is_boolean())
            throw ParameterError(fmt::format("params.{} must be true or false", key));
        return m_j[key].get< bool >();
    }

    std::string text(const std::string& key, const std::string& fallback, std::initializer_list< std::string_view > allowed = {})
    {
        std::string v = fallback;
        if (has(key))
        {
            if (!m_j[key].is_string())
                throw ParameterError(fmt::format("params.{} must be a string", key));
            v = m_j[key].get< std::string >();
        }
        if (allowed.size() > 0 && std::find(allowed.begin(), allowed.end(), v) == allowed.end())
            throw ParameterError(fmt::format("params.{} = '{}' is not one of the supported values", key, v));
        return v;
    }

    std::vector< double > reals(const std::string& key, std::vector< double > fallback, double lo, double hi)
    {
        if (has(key))
        {
            if (!m_j[key].is_array())
                throw ParameterError(fmt::format("params.{} must be an array of numbers", key));
            fallback.clear();
            for (const auto& x : m_j[key])
            {
                if (!x.is_number())
                    throw ParameterError(fmt::format("params.{} must be an array of numbers", key));
                fallback.push_back(x.get< double >());
            }
        }
        for (double v : fallback)
            if (!(v >= lo && v <= hi))
                throw ParameterError(fmt::format("params.{} has {} outside [{}, {}]", key, v, lo, hi));
        return fallback;
    }

    std::vector< std::string > texts(const std::string& key, std::vector< std::string > fallback,
                                     std::initializer_list< std::string_view > allowed)
    {
        if (has(key))
        {
            if (!m_j[key].is_array())
                throw ParameterError(fmt::format("params.{} must be an array of strings", key));
            fallback.clear();
            for (const auto& x : m_j[key])
            {
                if (!x.is_string())
                    throw ParameterError(fmt::format("params.{} must be an array of strings", key));
                fallback.push_back(x.get< std::string >());
            }
        }
        for (const auto& v : fallback)
            if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
                throw ParameterError(fmt::format("params.{} has unsupported entry '{}'", key, v));
        return fallback;
    }

    bool has(const std::string& key)
    {
        m_seen.insert(key);
        return m_j.contains(key) && !m_j[key].is_null();
    }

    void finish() const
    {
        for (const auto& [key, value] : m_j.items())
            if (!m_seen.contains(key))
                throw ParameterError(fmt::format("unknown parameter params.{}", key));
    }

private:
    double number(const std::string& key) const
    {
        if (!m_j[key].is_number())
            throw ParameterError(fmt::format("params.{} must be a number", key));
        return m_j[key].get< double >();
    }

    const Json&             m_j;
    std::set< std::string > m_seen;
};

std::vector< double > decreasing(std::vector< double > v, const std::string& what)
{
    if (v.empty())
        throw ParameterError(fmt::format("{} sweep is empty", what));
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1]))
            throw ParameterError(fmt::format("{} sweep must be strictly decreasing", what));
    return v;
}

/// Values under `key` of a JSON array of points.
std::vector< double > point_series(const Json& points, const char* key)
{
    std::vector< double > out;
    for (const auto& p : points)
        out.push_back(p[key].get< double >());
    return out;
}

void absorb(ExperimentReport& into, const ExperimentReport& from, const std::string& prefix)
{
    for (const auto& t : from.tables)
    {
        auto& dst = into.table(t.name, t.columns);
        for (const auto& row : t.rows)
            dst.add(row);
    }
    into.results[prefix] = from.results;
    for (const auto& e : from.point_errors)
        into.point_errors.push_back(prefix + ": " + e);
}

// ------------------------------------------------------------------------------------------------
// audit domains

enum class AuditDomain : std::uint8_t
{
    Disk,
    Annulus,
    MixedDisk,
};

AuditDomain parse_domain(const std::string& s)
{
    if (s == "disk")
        return AuditDomain::Disk;
    if (s == "annulus")
        return AuditDomain::Annulus;
    return AuditDomain::MixedDisk;
}

struct DomainSample
{
    Mesh2D          mesh;
    SurfaceTopology topology;
    ProblemKind     kind = ProblemKind::Steklov;
    Json            description;
};

struct DomainParams
{
    double radius       = 1.0;
    double inner_radius = 0.5;
    double h            = 0.05;
    double frac_lo      = 0.25;
    double frac_hi      = 0.75;
    double amplitude    = 0.5;

    static DomainParams read(Params& p)
    {
        DomainParams d;
        d.radius       = p.real("radius", 1.0, 1e-3, 1e3);
        d.inner_radius = p.real("inner_radius", 0.5 * d.radius, 1e-3 * d.radius, 0.9 * d.radius);
        d.h            = p.real("h", 0.05 * d.radius, 1e-3 * d.radius, 0.25 * (d.radius - d.inner_radius));
        const auto f   = p.reals("steklov_fraction", {0.25, 0.75}, 0.05, 0.95);
        if (f.size() != 2 || f[0] > f[1])
            throw ParameterError("params.steklov_fraction must be [lo, hi] with lo <= hi");
        d.frac_lo   = f[0];
        d.frac_hi   = f[1];
        d.amplitude = p.real("density_amplitude", 0.5, 0.0, 2.0);
        return d;
    }
};

/// Steklov on [start, start + 2 pi fraction), Neumann elsewhere (angles taken mod 2 pi).
Mesh2D mixed_disk(const Mesh2D& disk, double start, double fraction)
{
    const double         end = start + two_pi * fraction;
    std::vector< ArcTag > arcs;
    if (end <= two_pi)
    {
        arcs.push_back({ArcParam::Angle, start, end, BoundaryTag::Steklov});
        if (start > 0.0)
            arcs.push_back({ArcParam::Angle, 0.0, start, BoundaryTag::Neumann});
        if (end < two_pi)
            arcs.push_back({ArcParam::Angle, end, two_pi, BoundaryTag::Neumann});
    }
    else
    {
        arcs.push_back({ArcParam::Angle, start, two_pi, BoundaryTag::Steklov});
        arcs.push_back({ArcParam::Angle, 0.0, end - two_pi, BoundaryTag::Steklov});
        arcs.push_back({ArcParam::Angle, end - two_pi, start, BoundaryTag::Neumann});
    }
    return tag_boundary(disk, arcs);
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t domain, std::size_t sample)
{
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (domain + 1));
    s += 0xBF58476D1CE4E5B9ULL * (sample + 1);
    return s;
}

/// Sample 0 uses the uniform density when `uniform_first` is set.
DomainSample make_sample(AuditDomain domain, const DomainParams& p, const Mesh2D& disk, const Mesh2D& annulus,
                         std::uint64_t seed, bool flat)
{
    Rng            rng(seed);
    DomainSample   s;
    FourierDensity density;
    if (!flat)
        density = FourierDensity::sample(rng, p.amplitude);
    switch (domain)
    {
    case AuditDomain::Disk:
        s.mesh     = disk;
        s.topology = SurfaceTopology::disk();
        break;
    case AuditDomain::Annulus:
        s.mesh     = annulus;
        s.topology = SurfaceTopology::annulus();
        break;
    case AuditDomain::MixedDisk:
    {
        const double fraction = flat ? 0.5 : uniform(rng, p.frac_lo, p.frac_hi);
        const double start    = flat ? 0.0 : uniform(rng, 0.0, two_pi);
        s.mesh                = mixed_disk(disk, start, fraction);
        s.topology            = SurfaceTopology::disk();
        s.kind                = ProblemKind::SteklovNeumann;
        s.description["steklov_arc"] = {{"start", start}, {"fraction", fraction}};
        break;
    }
    }
    if (!flat)
        s.mesh = with_edge_density(s.mesh, density);
    s.description["density"] = flat ? Json("uniform") : Json{{"a", density.a}, {"b", density.b}};
    return s;
}

// ------------------------------------------------------------------------------------------------
// spectrum

struct SpectrumParams
{
    std::string           domain;
    DomainParams          geometry;
    double                length = two_pi, width = 1.0;
    bool                  periodic = true;
    std::string           mesh_file;
    int                   n_eigs = 8;
    std::optional< double > cluster_tol;
    std::vector< double > expected;
    double                expected_tol = 0.01;
    std::vector< double > expected_clusters;

    static SpectrumParams read(Params& p, const ExperimentConfig& c)
    {
        SpectrumParams s;
        s.domain    = p.text("domain", "disk", {"disk", "annulus", "mixed-disk", "strip", "mesh"});
        s.geometry  = DomainParams::read(p);
        s.length    = p.real("length", two_pi, 1e-3, 1e3);
        s.width     = p.real("width", 1.0, 1e-3, 1e3);
        s.periodic  = p.boolean("periodic", true);
        s.mesh_file = p.text("mesh_file", "");
        if (s.domain == "mesh" && s.mesh_file.empty())
            throw ParameterError("domain 'mesh' needs params.mesh_file");
        s.n_eigs = p.integer("n_eigs", 8, 1, 2000);
        if (p.has("cluster_tol"))
            s.cluster_tol = p.real("cluster_tol", 1e-3, 0.0, 0.5);
        s.expected          = p.reals("expected", {}, 0.0, 1e12);
        s.expected_tol      = c.tol.value_or(p.real("expected_tol", 0.01, 0.0, 1.0));
        s.expected_clusters = p.reals("expected_clusters", {}, 1, 1000);
        if (static_cast< int >(s.expected.size()) >= s.n_eigs)
            throw ParameterError("params.expected lists more eigenvalues than n_eigs - 1");
        return s;
    }
};

Mesh2D spectrum_mesh(const SpectrumParams& s)
{
    const auto& g = s.geometry;
    if (s.domain == "disk")
        return make_disk_mesh(g.radius, g.h);
    if (s.domain == "annulus")
        return make_annulus_mesh(g.inner_radius, g.radius, g.h);
    if (s.domain == "mixed-disk")
        return mixed_disk(make_disk_mesh(g.radius, g.h), 0.0, 0.5 * (g.frac_lo + g.frac_hi));
    if (s.domain == "strip")
        return make_strip_mesh(s.length, s.width, g.h, s.periodic, {BoundaryTag::Steklov, BoundaryTag::Steklov});
    return load_mesh(s.mesh_file);
}

void run_spectrum(const SpectrumParams& s, RunOutput& out)
{
    auto&        report = out.report;
    const Mesh2D mesh   = spectrum_mesh(s);
    validate(mesh);
    out.meshes["domain"] = mesh;
    const double tol     = s.cluster_tol.value_or(default_cluster_tol(mesh));
    const auto   r       = steklov_spectrum(mesh, s.n_eigs, tol);
    const auto   res     = spectral_residuals(mesh, r);
    report.results["spectrum"] = to_json(r);

    auto& table = report.table("spectrum", {"k", "sigma", "residual", "cluster_size"});
    for (int k = 0; k < static_cast< int >(r.eigenvalues.size()); ++k)
        table.add({static_cast< double >(k), r.eigenvalues[k], res[k], static_cast< double >(r.cluster_of(k).size())});
    report.check("residual", *std::max_element(res.begin(), res.end()) <= 1e-8,
                  *std::max_element(res.begin(), res.end()), 1e-8, "max relative eigenpair residual");

    if (!s.expected.empty())
    {
        double worst = 0.0;
        for (std::size_t k = 0; k < s.expected.size(); ++k)
            worst = std::max(worst, std::abs(r.eigenvalues[k + 1] - s.expected[k]) / s.expected[k]);
        report.check("eigenvalue_oracle", worst <= s.expected_tol, worst, s.expected_tol,
                     fmt::format("sigma_1..sigma_{} against the expected values", s.expected.size()));
    }
    if (!s.expected_clusters.empty())
    {
        // clusters after the zero eigenvalue, in order
        std::vector< double > sizes;
        for (const auto& c : r.clusters)
            if (c.first > 0 && sizes.size() < s.expected_clusters.size())
                sizes.push_back(c.size());
        const bool same = sizes == s.expected_clusters;
        report.results["cluster_sizes"] = sizes;
        report.check("cluster_pattern", same, same ? 0.0 : 1.0, 0.0,
                     fmt::format("cluster sizes at rel_tol {}", format_real(tol)));
    }
}

// ------------------------------------------------------------------------------------------------
// density / subdomain sweeps

struct SweepParams
{
    double radius = 1.0, h = 0.05;
    bool   graded      = true;
    double growth      = 1.3;
    int    virtual_dim = 3;
    int    j_min = 1, j_max = 10;
    int    n_eigs       = 5;
    double tol          = 0.02;
    double amplitude    = 0.5;
    int    tail         = 3;

    static SweepParams read(Params& p, const ExperimentConfig& c, bool density)
    {
        SweepParams s;
        s.radius      = p.real("radius", 1.0, 1e-3, 1e3);
        s.h           = p.real("h", 0.05 * s.radius, 1e-3 * s.radius, 0.2 * s.radius);
        s.graded      = p.boolean("graded", density);
        s.growth      = p.real("growth", 1.3, 1.05, 3.0);
        s.virtual_dim = p.integer("virtual_dim", 3, 3, 12);
        s.j_min       = p.integer("j_min", 1, 0, 30);
        s.j_max       = p.integer("j_max", density ? 10 : 8, s.j_min, 30);
        s.n_eigs      = p.integer("n_eigs", density ? 5 : 4, 1, 200);
        s.tol         = c.tol.value_or(p.real("final_tol", density ? 0.02 : 0.05, 0.0, 10.0));
        s.amplitude   = p.real("density_amplitude", 0.5, 0.0, 2.0);
        s.tail        = p.integer("tail", 3, 2, 30);
        return s;
    }

    [[nodiscard]] Mesh2D mesh() const
    {
        // the thinnest layer is resolved by four elements across
        if (graded)
            return make_graded_disk_mesh(radius, h, std::min(h, std::ldexp(radius, -j_max) / 4.0), growth);
        return make_disk_mesh(radius, h);
    }
};

void sweep_checks(ExperimentReport& report, const std::string& param, const SweepParams& s, bool need_decreasing)
{
    const auto errors = point_series(report.results["points"], "max_rel_err");
    if (errors.empty())
    {
        report.check("final_error", false, 1.0, s.tol, "no sweep point succeeded");
        return;
    }
    report.check("final_error", errors.back() < s.tol, errors.back(), s.tol,
                 fmt::format("max_k relative error at the smallest {}", param));
    if (need_decreasing)
    {
        const bool dec = eventually_decreasing(errors, static_cast< std::size_t >(s.tail));
        report.check("eventually_decreasing", dec, dec ? 0.0 : 1.0, 0.0,
                     fmt::format("last {} errors non-increasing", s.tail));
    }
}

void run_density(const SweepParams& s, std::uint64_t seed, unsigned jobs, RunOutput& out)
{
    Rng        rng(seed);
    const auto fd = FourierDensity::sample(rng, s.amplitude);
    // rho = 1; the target density is normalized so that its minimum is 1
    double mn = 1e300;
    for (int i = 0; i < 4096; ++i)
        mn = std::min(mn, fd.at_angle(two_pi * i / 4096));
    const Mesh2D base = s.mesh();
    out.meshes["base"] = base;
    const auto fam    = make_density_family(base, [&](Vec2 p) { return fd(p) / mn; }, s.virtual_dim);
    auto       sub    = density_convergence_run(fam, dyadic_sweep(s.j_min, s.j_max), s.n_eigs, jobs);
    auto&      report = out.report;
    absorb(report, sub, "density");
    report.results["points"]     = sub.results["points"];
    report.results["rho_bar"]    = {{"a", fd.a}, {"b", fd.b}, {"divided_by", mn}};
    report.results["mesh"]       = {{"vertices", base.vertices.size()}, {"triangles", base.triangles.size()}};
    sweep_checks(report, "eps", s, true);
}

void run_subdomain(const SweepParams& s, unsigned jobs, RunOutput& out)
{
    const Mesh2D base = s.mesh();
    SingularWeightFamily fam{base, std::vector< bool >(base.triangles.size()), s.virtual_dim};
    for (std::size_t t = 0; t < base.triangles.size(); ++t)
        fam.in_u[t] = base.centroid(static_cast< int >(t)).x > 0.0;
    out.meshes["base"] = base;
    out.meshes["subdomain"] = singular_family_limit(fam);
    auto  sub    = subdomain_convergence_run(fam, dyadic_sweep(s.j_min, s.j_max), s.n_eigs, jobs);
    auto& report = out.report;
    absorb(report, sub, "subdomain");
    report.results["points"] = sub.results["points"];
    sweep_checks(report, "eta", s, false);
}

// ------------------------------------------------------------------------------------------------
// collar / cylinder

struct CollarParams
{
    std::string           mode;
    double                circle_length = two_pi;
    std::vector< double > widths;
    int                   n_eigs          = 3;
    int                   elements_across = 8;
    double                h_along         = 0.0;
    double                tol             = 0.02;

    static CollarParams read(Params& p, const ExperimentConfig& c)
    {
        CollarParams s;
        s.mode          = p.text("mode", "collar", {"collar", "cylinder"});
        const bool cyl  = s.mode == "cylinder";
        s.circle_length = p.real("circle_length", two_pi, 1e-3, 1e3);
        s.widths = decreasing(p.reals(cyl ? "half_widths" : "widths", cyl ? std::vector{0.5, 0.25, 0.125}
                                                                          : std::vector{0.2, 0.1, 0.05},
                                      1e-6, 1e3),
                              "width");
        s.n_eigs          = p.integer(cyl ? "k_max" : "n_eigs", cyl ? 4 : 3, 1, 100);
        s.elements_across = p.integer("elements_across", cyl ? 32 : 8, 8, 512);
        s.h_along         = p.real("h_along", s.circle_length / (cyl ? 256.0 : 128.0), 0.0, s.circle_length / 3);
        s.tol             = c.tol.value_or(p.real("final_tol", cyl ? 0.01 : 0.02, 0.0, 10.0));
        if (cyl && s.elements_across % 2 != 0)
            throw ParameterError("params.elements_across must be even for the symmetric split");
        return s;
    }
};

void run_collar(const CollarParams& s, RunOutput& out)
{
    auto& report = out.report;
    if (s.mode == "collar")
    {
        auto sub = collar_convergence_run(s.circle_length, s.widths, s.n_eigs, {s.elements_across, s.h_along, 1e-3});
        absorb(report, sub, "collar");
        report.results["points"] = sub.results["points"];
        const auto errors        = point_series(sub.results["points"], "max_rel_err");
        if (errors.empty())
        {
            report.check("final_error", false, 1.0, s.tol, "no collar width succeeded");
            return;
        }
        bool dec = true;
        for (std::size_t i = 1; i < errors.size(); ++i)
            dec = dec && errors[i] < errors[i - 1];
        report.check("error_decreasing", dec, dec ? 0.0 : 1.0, 0.0, "max_k error decreases with the width");
        report.check("final_error", errors.back() < s.tol, errors.back(), s.tol,
                     fmt::format("max over k <= {} at the thinnest collar", s.n_eigs));
        return;
    }

    // both circles Steklov at distance 2 eta; symmetric branch t_k = k' tanh(eta k'), k' = 2 pi k / L
    auto&  table  = report.table("cylinder", {"eta", "k", "sigma", "reference", "rel_err"});
    double worst  = 0.0;
    Json   points = Json::array();
    for (double eta : s.widths)
    {
        try
        {
            // enough pairs to hold 2 k_max + 1 symmetric values at the thickest collar
            const int  n   = 6 * s.n_eigs + 6;
            const auto b   = cylinder_branches(s.circle_length, eta, n, s.elements_across, s.h_along);
            const auto ref = cylinder_symmetric_reference(s.circle_length, eta, 2 * s.n_eigs + 1);
            if (b.symmetric.size() < ref.size())
                throw ResolutionError(fmt::format("only {} symmetric eigenvalues among the first {}",
                                                  b.symmetric.size(), n));
            double point_worst = 0.0;
            for (std::size_t i = 1; i < ref.size(); ++i)
            {
                const double rel = std::abs(b.symmetric[i] - ref[i]) / ref[i];
                point_worst      = std::max(point_worst, rel);
                table.add({eta, static_cast< double >((i + 1) / 2), b.symmetric[i], ref[i], rel});
            }
            worst = std::max(worst, point_worst);
            points.push_back({{"eta", eta},
                              {"max_rel_err", point_worst},
                              {"symmetric", b.symmetric},
                              {"antisymmetric", b.antisymmetric}});
        }
        catch (const Error& e)
        {
            report.point_errors.push_back(fmt::format("eta = {}: {}", eta, e.what()));
        }
    }
    report.results["points"] = points;
    report.check("symmetric_branch", !points.empty() && worst <= s.tol, worst, s.tol,
                 fmt::format("k tanh(eta k) for k <= {}", s.n_eigs));
}

// ------------------------------------------------------------------------------------------------
// graphs

struct GraphParams
{
    MetricGraph           graph;
    EmbeddingStyle        style = EmbeddingStyle::ConvexBoundary;
    double                c     = 2.0;
    std::vector< double > eps;
    int                   elements_across = 8;
    int                   n_eigs          = 0;
    double                tol             = 0.05;

    static MetricGraph read_graph_spec(Params& p, const Json& raw)
    {
        const std::string family = p.text("graph", "complete", {"complete", "path", "cycle", "star", "edges"});
        const int         n      = p.integer("vertices", 3, 2, 64);
        const double      l      = p.real("length", 1.0, 1e-6, 1e6);
        auto              ls     = p.reals("lengths", {}, 1e-6, 1e6);
        if (family == "complete")
            return complete_graph(n, l);
        if (family == "edges")
        {
            if (!p.has("edges") || !raw["edges"].is_array())
                throw ParameterError("graph 'edges' needs params.edges as [[a, b], ...]");
            MetricGraph g;
            g.n_vertices = n;
            for (const auto& e : raw["edges"])
            {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
                    throw ParameterError("params.edges entries must be integer pairs");
                g.edges.push_back({e[0].get< int >(), e[1].get< int >()});
            }
            g.lengths = ls.empty() ? std::vector< double >(g.edges.size(), l) : ls;
            return g;
        }
        if (ls.empty())
            ls.assign(family == "cycle" ? n : n - 1, l);
        if (family == "path")
            return path_graph(ls);
        if (family == "cycle")
            return cycle_graph(ls);
        return star_graph(ls);
    }

    static GraphParams read(Params& p, const ExperimentConfig& cfg, const Json& raw, bool need_graph)
    {
        GraphParams s;
        if (need_graph)
        {
            s.graph = read_graph_spec(p, raw);
            s.graph.validate();
        }
        s.style           = parse_embedding_style(p.text("embedding", "convex"));
        s.c               = p.real("c", 2.0, 1.0 + 1e-9, 100.0);
        s.eps             = decreasing(p.reals("eps", {0.08, 0.04, 0.02, 0.01}, 1e-6, 1e3), "eps");
        s.elements_across = p.integer("elements_across", 8, 2, 256);
        s.n_eigs          = p.integer("n_eigs", 0, 0, 1000);
        s.tol             = p.real("ratio_tol", 0.05, 0.0, 10.0);
        if (need_graph && cfg.tol)
            s.tol = *cfg.tol;
        return s;
    }
};

/// Thickened-domain family over the eps sweep, limit report and its checks.
ExperimentReport graph_limit_report(const MetricGraph& g, const GraphParams& s, unsigned jobs, RunOutput& out)
{
    const auto                    embedding = embed_graph(g, s.style);
    std::vector< ThickeningSpec > family;
    for (double e : s.eps)
        family.push_back({g, embedding, e, s.c, 2.0 * e / s.elements_across});
    auto report = verify_graph_limit(family, {s.n_eigs, s.elements_across, jobs});
    try
    {
        out.meshes[fmt::format("omega_eps_{}", format_real(s.eps.back()))] = build_thickened_mesh(family.back());
    }
    catch (const Error& e)
    {
        report.point_errors.push_back(e.what());
    }
    return report;
}

void graph_limit_checks(ExperimentReport& report, const Json& rows, double tol, int n_vertices)
{
    if (rows.empty())
    {
        report.check("ratio_spread", false, 1.0, tol, "no eps point succeeded");
        return;
    }
    const double spread = rows.back()["spread"].get< double >();
    report.check("ratio_spread", spread < tol, spread, tol, "(max - min) / mean of sigma_k / lambda_k at the smallest eps");
    const auto gaps = point_series(rows, "gap");
    double     step = gaps.size() > 1 ? 1e300 : 0.0;
    for (std::size_t i = 1; i < gaps.size(); ++i)
        step = std::min(step, gaps[i] / gaps[i - 1]);
    report.check("gap_monotone", step > 1.0, step, 1.0,
                 "smallest ratio of consecutive gaps sigma_|S| / sigma_|S|-1 along the sweep", false);

    double sigma0 = 0.0, gap_floor = 1e300;
    bool   components = true;
    for (const auto& r : rows)
    {
        sigma0 = std::max(sigma0, std::abs(r["sigma_0"].get< double >()));
        components = components && r["steklov_components"].get< int >() == n_vertices;
        gap_floor  = std::min(gap_floor, r["sigma_S_eps2"].get< double >() / r["eps"].get< double >());
    }
    const double gap_first = rows.front()["sigma_S_eps2"].get< double >() / rows.front()["eps"].get< double >();
    report.check("sigma_0", sigma0 <= 1e-9, sigma0, 1e-9, "constants are eigenfunctions at every eps");
    report.check("steklov_components", components, components ? 0.0 : 1.0, 0.0, "one Steklov diameter per graph vertex");
    const double osc = rows.back()["oscillation"].get< double >();
    report.check("diameter_oscillation", osc <= 0.1, osc, 0.1,
                 "low eigenfunctions nearly constant on each diameter at the smallest eps");
    report.check("half_disk_gap", gap_floor >= 0.5 * gap_first, gap_floor / gap_first, 0.5,
                 "sigma_|S| eps stays bounded below along the sweep (sigma_|S| eps^2 in the points)", false);
}

void run_graph_limit(const GraphParams& s, unsigned jobs, RunOutput& out)
{
    auto sub = graph_limit_report(s.graph, s, jobs, out);
    auto& report = out.report;
    absorb(report, sub, "graph_limit");
    for (const char* key : {"points", "limit_constant", "candidates", "closer_candidate", "graph_spectrum"})
        if (sub.results.contains(key))
            report.results[key] = sub.results[key];
    graph_limit_checks(report, sub.results["points"], s.tol, s.graph.n_vertices);
}

struct PipelineParams
{
    std::vector< double > targets;
    GraphParams           limit;
    int                   batch = 0, n_min = 2, n_max = 6;
    double                lo = 0.5, hi = 5.0;
    double                presc_tol = 1e-8, homogeneity_tol = 1e-12;
    int                   starts = 8, max_iters = 400;

    static PipelineParams read(Params& p, const ExperimentConfig& c, const Json& raw)
    {
        PipelineParams s;
        s.targets = p.reals("targets", {}, 1e-9, 1e9);
        std::sort(s.targets.begin(), s.targets.end());
        s.limit           = GraphParams::read(p, c, raw, false);
        s.batch           = p.integer("batch", 0, 0, 100000);
        s.n_min           = p.integer("batch_n_min", 2, 1, 30);
        s.n_max           = p.integer("batch_n_max", 6, s.n_min, 30);
        const auto range  = p.reals("batch_range", {0.5, 5.0}, 1e-9, 1e9);
        if (range.size() != 2 || !(range[0] < range[1]))
            throw ParameterError("params.batch_range must be [lo, hi] with lo < hi");
        s.lo              = range[0];
        s.hi              = range[1];
        s.presc_tol       = c.tol.value_or(p.real("prescription_tol", 1e-8, 1e-15, 1.0));
        s.homogeneity_tol = p.real("homogeneity_tol", 1e-12, 0.0, 1.0);
        s.starts          = p.integer("starts", 8, 1, 1000);
        s.max_iters       = p.integer("max_iters", 400, 1, 100000);
        if (s.targets.empty() && s.batch == 0)
            throw ParameterError("prescription-pipeline needs params.targets or params.batch");
        if (!c.seed)
            throw ParameterError("prescription-pipeline needs a seed");
        return s;
    }
};

/// max_k |lambda_k(l / t) - t lambda_k(l)| / (t lambda_k(l)).
double homogeneity_error(const MetricGraph& g, double t)
{
    MetricGraph scaled_graph = g;
    for (auto& l : scaled_graph.lengths)
        l /= t;
    const auto a = graph_laplacian_spectrum(g).eigenvalues;
    const auto b = graph_laplacian_spectrum(scaled_graph).eigenvalues;
    double     worst = 0.0;
    for (std::size_t k = 1; k < a.size(); ++k)
        worst = std::max(worst, std::abs(b[k] - t * a[k]) / (t * a[k]));
    return worst;
}

void run_pipeline(const PipelineParams& s, std::uint64_t seed, unsigned jobs, RunOutput& out)
{
    auto& report = out.report;
    PrescriptionOptions opts{s.max_iters, s.presc_tol, s.starts, seed};

    if (s.batch > 0)
    {
        struct Item
        {
            std::vector< double > targets;
            double                err = 1.0, homog = 1.0, t = 1.0;
            int                   start = -1, iterations = 0;
            std::string           error;
        };
        std::vector< Item > items(s.batch);
        Rng                 rng(seed);
        for (auto& it : items)
        {
            const int n = s.n_min + static_cast< int >(uniform_index(rng, s.n_max - s.n_min + 1));
            for (int k = 0; k < n; ++k)
                it.targets.push_back(uniform(rng, s.lo, s.hi));
            std::sort(it.targets.begin(), it.targets.end());
            it.t = uniform(rng, 0.5, 2.0);
        }
        parallel_for(items.size(), jobs, [&](std::size_t i) {
            auto& it = items[i];
            try
            {
                const auto r  = prescribe_spectrum(it.targets, opts);
                // the oracle is a direct eigensolve of the returned graph
                it.err        = spectrum_error(r.graph, it.targets);
                it.homog      = homogeneity_error(r.graph, it.t);
                it.start      = r.start;
                it.iterations = r.iterations;
            }
            catch (const OptimizationFailure& e)
            {
                it.err   = e.residual();
                it.homog = homogeneity_error(e.best(), it.t);
                it.error = e.what();
            }
            catch (const Error& e)
            {
                it.error = e.what();
            }
        });
        auto&  table = report.table("prescription", {"index", "n", "max_rel_err", "homogeneity_err", "start", "iterations"});
        double worst = 0.0, worst_h = 0.0;
        Json   batch = Json::array();
        for (std::size_t i = 0; i < items.size(); ++i)
        {
            const auto& it = items[i];
            if (!it.error.empty())
                report.point_errors.push_back(fmt::format("target {}: {}", i, it.error));
            table.add({static_cast< double >(i), static_cast< double >(it.targets.size()), it.err, it.homog,
                       static_cast< double >(it.start), static_cast< double >(it.iterations)});
            worst   = std::max(worst, it.err);
            worst_h = std::max(worst_h, it.homog);
            batch.push_back({{"targets", it.targets}, {"scale", it.t}});
        }
        report.results["batch"] = batch;
        report.check("prescription_error", worst <= s.presc_tol, worst, s.presc_tol,
                     fmt::format("{} random targets, direct eigensolve of the returned lengths", s.batch));
        report.check("homogeneity", worst_h <= s.homogeneity_tol, worst_h, s.homogeneity_tol,
                     "spectrum of l / t equals t times the spectrum of l");
    }

    if (s.targets.empty())
        return;
    try
    {
        const auto r = prescribe_spectrum(s.targets, opts);
        report.results["prescribed"] = {{"targets", s.targets},
                                        {"lengths", r.graph.lengths},
                                        {"max_rel_err", r.max_rel_err},
                                        {"start", r.start}};
        std::ostringstream os;
        write_graph(os, r.graph);
        report.results["prescribed"]["graph"] = os.str();
        auto sub = graph_limit_report(r.graph, s.limit, jobs, out);
        absorb(report, sub, "graph_limit");
        for (const char* key : {"points", "limit_constant", "candidates", "closer_candidate"})
            if (sub.results.contains(key))
                report.results[key] = sub.results[key];
        graph_limit_checks(report, sub.results["points"], s.limit.tol, r.graph.n_vertices);
    }
    catch (const Error& e)
    {
        report.point_errors.push_back(fmt::format("pipeline: {}", e.what()));
        report.check("ratio_spread", false, 1.0, s.limit.tol, e.what());
    }
}

// ------------------------------------------------------------------------------------------------
// nodal and multiplicity audits

struct AuditParams
{
    std::vector< std::string > domains;
    DomainParams               geometry;
    int                        samples       = 50;
    int                        k_max         = 6;
    int                        n_random      = 20;
    double                     zero_tol      = 1e-7;
    std::optional< double >    cluster_tol;
    bool                       uniform_first = false;
    int                        figures       = 4;
    int                        max_dumps     = 5;

    static AuditParams read(Params& p, const ExperimentConfig& c, bool nodal)
    {
        AuditParams s;
        s.domains  = p.texts("domains", {"disk"}, {"disk", "annulus", "mixed-disk"});
        s.geometry = DomainParams::read(p);
        s.samples  = p.integer("samples", 50, 1, 100000);
        s.k_max    = p.integer("k_max", nodal ? 6 : 4, nodal ? 0 : 1, 200);
        s.n_random = p.integer("random_rotations", 20, 0, 10000);
        if (nodal)
            s.zero_tol = c.tol.value_or(p.real("zero_tol", 1e-7, 0.0, 0.5));
        else if (c.tol)
            s.cluster_tol = *c.tol;
        else if (p.has("cluster_tol"))
            s.cluster_tol = p.real("cluster_tol", 1e-3, 0.0, 0.5);
        s.uniform_first = p.boolean("uniform_first", !nodal);
        s.figures       = p.integer("figures", nodal ? 4 : 0, 0, 100);
        s.max_dumps     = p.integer("max_dumps", 5, 0, 1000);
        if (!c.seed)
            throw ParameterError("randomized audits need a seed");
        return s;
    }
};

struct NodalSampleResult
{
    Json                              description;
    std::vector< CourantEntry >       courant;
    std::vector< std::array< int, 4 > > basis;   // k, all_touch, cycle_rank, endpoints_even
    bool                              violation = false;
    int                               first_bad_k = -1;
    std::string                       error;
};

void run_nodal_audit(const AuditParams& s, std::uint64_t seed, unsigned jobs, RunOutput& out)
{
    auto&        report  = out.report;
    const auto&  g       = s.geometry;
    const Mesh2D disk    = make_disk_mesh(g.radius, g.h);
    const Mesh2D annulus = make_annulus_mesh(g.inner_radius, g.radius, g.h);
    report.table("nodal", {"domain", "sample", "k", "random", "domains", "bound", "touches_all", "cycle_rank",
                           "endpoints_even"});
    // violation dumps append tables, so the audit table is looked up by name
    const auto table_add = [&](std::vector< double > row) { report.table("nodal", {}).add(std::move(row)); };
    report.results["domains"] = s.domains;
    int dumps = 0;

    for (std::size_t d = 0; d < s.domains.size(); ++d)
    {
        const AuditDomain              domain    = parse_domain(s.domains[d]);
        const bool                     disk_topo = domain != AuditDomain::Annulus;
        std::vector< NodalSampleResult > results(s.samples);
        parallel_for(results.size(), jobs, [&](std::size_t i) {
            auto& res = results[i];
            try
            {
                const auto sample = make_sample(domain, g, disk, annulus, sample_seed(seed, d, i), s.uniform_first && i == 0);
                res.description   = sample.description;
                // two extra pairs so that the cluster of sigma_kmax is not cut
                const auto r = steklov_spectrum(sample.mesh, s.k_max + 3);
                res.courant  = courant_check(r, sample.mesh, s.k_max, s.zero_tol, s.n_random, sample_seed(seed, d, i) + 1).entries;
                for (const auto& e : res.courant)
                    if (!e.ok())
                    {
                        res.violation   = true;
                        res.first_bad_k = res.first_bad_k < 0 ? e.k : res.first_bad_k;
                    }
                for (int k = 0; k <= s.k_max; ++k)
                {
                    const Eigen::VectorXd f = r.extensions.col(k);
                    const auto dec   = decompose_nodal(sample.mesh, {f.data(), static_cast< std::size_t >(f.size())}, s.zero_tol);
                    const auto touch = boundary_touch_check(dec, sample.mesh);
                    const auto stats = nodal_graph_stats(dec, sample.mesh);
                    const bool all   = std::all_of(touch.begin(), touch.end(), [](bool b) { return b; });
                    res.basis.push_back({k, all, stats.cycle_rank, stats.endpoints_even()});
                    if (!all || !stats.endpoints_even() || (disk_topo && stats.cycle_rank != 0))
                    {
                        res.violation   = true;
                        res.first_bad_k = res.first_bad_k < 0 ? k : res.first_bad_k;
                    }
                }
            }
            catch (const Error& e)
            {
                res.error = e.what();
            }
        });

        int courant_bad = 0, touch_bad = 0, tree_bad = 0, parity_bad = 0, checked = 0, rotations = 0;
        Json samples = Json::array();
        for (std::size_t i = 0; i < results.size(); ++i)
        {
            const auto& res = results[i];
            if (!res.error.empty())
            {
                report.point_errors.push_back(fmt::format("{} sample {}: {}", s.domains[d], i, res.error));
                continue;
            }
            samples.push_back(res.description);
            for (const auto& e : res.courant)
            {
                ++checked;
                rotations += e.random;
                courant_bad += !e.ok();
                if (!e.random)
                {
                    const auto& b = res.basis[e.k];
                    table_add({static_cast< double >(d), static_cast< double >(i), static_cast< double >(e.k), 0.0,
                               static_cast< double >(e.domains), static_cast< double >(e.bound), static_cast< double >(b[1]),
                               static_cast< double >(b[2]), static_cast< double >(b[3])});
                }
                else
                    table_add({static_cast< double >(d), static_cast< double >(i), static_cast< double >(e.k), 1.0,
                               static_cast< double >(e.domains), static_cast< double >(e.bound), -1.0, -1.0, -1.0});
            }
            for (const auto& b : res.basis)
            {
                touch_bad += !b[1];
                tree_bad += disk_topo && b[2] != 0;
                parity_bad += !b[3];
            }
            if (res.violation && dumps < s.max_dumps)
            {
                // post-mortem: mesh and offending field
                const auto sample = make_sample(domain, g, disk, annulus, sample_seed(seed, d, i), s.uniform_first && i == 0);
                const auto r      = steklov_spectrum(sample.mesh, s.k_max + 3);
                const std::string name = fmt::format("violation_{}_{}", s.domains[d], i);
                out.meshes[name]       = sample.mesh;
                auto& field            = report.table(fmt::format("{}_k{}", name, res.first_bad_k), {"vertex", "value"});
                for (Eigen::Index v = 0; v < r.extensions.rows(); ++v)
                    field.add({static_cast< double >(v), r.extensions(v, res.first_bad_k)});
                ++dumps;
            }
        }
        report.results[s.domains[d]] = {{"samples", samples},
                                        {"eigenfunctions_checked", checked},
                                        {"random_rotations", rotations},
                                        {"courant_violations", courant_bad},
                                        {"touch_violations", touch_bad},
                                        {"cycle_violations", tree_bad},
                                        {"parity_violations", parity_bad}};
        const auto& name = s.domains[d];
        report.check("courant/" + name, courant_bad == 0, courant_bad, 0,
                     fmt::format("{} fields incl. {} cluster rotations, bound k + 1", checked, rotations));
        report.check("boundary_touch/" + name, touch_bad == 0, touch_bad, 0, "every nodal domain meets the Steklov boundary");
        if (disk_topo)
            report.check("nodal_tree/" + name, tree_bad == 0, tree_bad, 0, "cycle rank of the nodal graph is 0");
        report.check("endpoint_parity/" + name, parity_bad == 0, parity_bad, 0, "boundary endpoints even on every loop");

        // figures of the first sample
        if (s.figures > 0)
        {
            try
            {
                const auto sample = make_sample(domain, g, disk, annulus, sample_seed(seed, d, 0), s.uniform_first);
                const auto r      = steklov_spectrum(sample.mesh, s.k_max + 3);
                for (int k = 1; k <= std::min(s.figures, s.k_max); ++k)
                {
                    const Eigen::VectorXd f = r.extensions.col(k);
                    const auto dec = decompose_nodal(sample.mesh, {f.data(), static_cast< std::size_t >(f.size())}, s.zero_tol);
                    std::ostringstream os;
                    write_nodal_svg(os, sample.mesh, dec);
                    out.figures[fmt::format("nodal_{}_k{}", name, k)] = os.str();
                }
            }
            catch (const Error& e)
            {
                report.point_errors.push_back(fmt::format("{} figures: {}", name, e.what()));
            }
        }
    }
}

void run_multiplicity_audit(const AuditParams& s, std::uint64_t seed, unsigned jobs, RunOutput& out)
{
    auto&        report  = out.report;
    const auto&  g       = s.geometry;
    const Mesh2D disk    = make_disk_mesh(g.radius, g.h);
    const Mesh2D annulus = make_annulus_mesh(g.inner_radius, g.radius, g.h);
    auto&        table   = report.table("multiplicity", {"domain", "sample", "k", "cluster_size", "bound", "margin"});
    report.results["domains"] = s.domains;

    for (std::size_t d = 0; d < s.domains.size(); ++d)
    {
        const AuditDomain domain = parse_domain(s.domains[d]);
        struct Item
        {
            std::vector< MultiplicityEntry > entries;
            double                           tol = 0.0;
            std::string                      error;
        };
        std::vector< Item > items(s.samples);
        parallel_for(items.size(), jobs, [&](std::size_t i) {
            try
            {
                const auto sample = make_sample(domain, g, disk, annulus, sample_seed(seed, d, i), s.uniform_first && i == 0);
                items[i].tol      = s.cluster_tol.value_or(default_cluster_tol(sample.mesh));
                const auto r      = steklov_spectrum(sample.mesh, s.k_max + 4, items[i].tol);
                items[i].entries  = multiplicity_bound_check(r, sample.topology, sample.kind, s.k_max).entries;
            }
            catch (const Error& e)
            {
                items[i].error = e.what();
            }
        });
        int  bad = 0, max_cluster = 0, min_margin = 1 << 30;
        Json labels = Json::object();
        for (std::size_t i = 0; i < items.size(); ++i)
        {
            if (!items[i].error.empty())
            {
                report.point_errors.push_back(fmt::format("{} sample {}: {}", s.domains[d], i, items[i].error));
                continue;
            }
            for (const auto& e : items[i].entries)
            {
                table.add({static_cast< double >(d), static_cast< double >(i), static_cast< double >(e.k),
                           static_cast< double >(e.cluster_size), static_cast< double >(e.bound),
                           static_cast< double >(e.margin())});
                bad += !e.ok();
                max_cluster = std::max(max_cluster, e.cluster_size);
                min_margin  = std::min(min_margin, e.margin());
                labels[std::to_string(e.k)] = e.bound_label;
                if (e.secondary_bound >= 0)
                    labels[std::to_string(e.k) + "_secondary"] = e.secondary_label;
            }
        }
        report.results[s.domains[d]] = {{"violations", bad},
                                        {"largest_cluster", max_cluster},
                                        {"smallest_margin", min_margin},
                                        {"bounds", labels},
                                        {"cluster_tol", s.cluster_tol ? Json(*s.cluster_tol) : Json("default")}};
        report.check("multiplicity/" + s.domains[d], bad == 0, bad, 0,
                     fmt::format("cluster sizes for k = 1..{} against the applicable bound", s.k_max));
    }
}

// ------------------------------------------------------------------------------------------------

/// Reads and checks every parameter of the config; `action` receives the typed params.
template < typename Fn >
void with_params(const ExperimentConfig& c, Fn&& action)
{
    Params p(c.params);
    switch (c.kind)
    {
    case ExperimentKind::Spectrum:
    {
        auto s = SpectrumParams::read(p, c);
        p.finish();
        action(s);
        break;
    }
    case ExperimentKind::DensitySweep:
    case ExperimentKind::SubdomainSweep:
    {
        const bool density = c.kind == ExperimentKind::DensitySweep;
        auto       s       = SweepParams::read(p, c, density);
        if (density && !c.seed)
            throw ParameterError("density-sweep needs a seed");
        p.finish();
        action(s);
        break;
    }
    case ExperimentKind::CollarSweep:
    {
        auto s = CollarParams::read(p, c);
        p.finish();
        action(s);
        break;
    }
    case ExperimentKind::GraphLimit:
    {
        auto s = GraphParams::read(p, c, c.params, true);
        p.finish();
        action(s);
        break;
    }
    case ExperimentKind::PrescriptionPipeline:
    {
        auto s = PipelineParams::read(p, c, c.params);
        p.finish();
        action(s);
        break;
    }
    case ExperimentKind::NodalAudit:
    case ExperimentKind::MultiplicityAudit:
    {
        auto s = AuditParams::read(p, c, c.kind == ExperimentKind::NodalAudit);
        p.finish();
        action(s);
        break;
    }
    }
}

} // namespace

std::string_view to_string(ExperimentKind kind)
{
    for (const auto& [k, name] : kKindNames)
        if (k == kind)
            return name;
    return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text)
{
    for (const auto& [k, name] : kKindNames)
        if (name == text)
            return k;
    throw ParameterError(fmt::format("unknown experiment kind '{}'", text));
}

void ExperimentConfig::validate() const
{
    with_params(*this, [](const auto&) {});
}

ExperimentConfig parse_config(const Json& j)
{
    if (!j.is_object())
        throw ParameterError("config must be a JSON object");
    static const std::set< std::string > known{"kind", "seed", "jobs", "tol", "output", "params", "description"};
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            throw ParameterError(fmt::format("unknown config field '{}'", key));
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ParameterError("config needs a string field 'kind'");
    ExperimentConfig c;
    c.kind = parse_experiment_kind(j["kind"].get< std::string >());
    try
    {
        if (j.contains("seed") && !j["seed"].is_null())
            c.seed = j["seed"].get< std::uint64_t >();
        if (j.contains("jobs"))
            c.jobs = j["jobs"].get< unsigned >();
        if (j.contains("tol") && !j["tol"].is_null())
            c.tol = j["tol"].get< double >();
        if (j.contains("output"))
            c.output = j["output"].get< std::string >();
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ParameterError(fmt::format("malformed config field: {}", e.what()));
    }
    if (j.contains("params"))
        c.params = j["params"];
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError(fmt::format("cannot open config {}", path.string()));
    Json j;
    try
    {
        j = Json::parse(is);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw ParameterError(fmt::format("{}: {}", path.string(), e.what()));
    }
    return parse_config(j);
}

Json to_json(const ExperimentConfig& c)
{
    Json j;
    j["kind"]   = to_string(c.kind);
    j["seed"]   = c.seed ? Json(*c.seed) : Json(nullptr);
    j["tol"]    = c.tol ? Json(*c.tol) : Json(nullptr);
    j["params"] = c.params;
    return j;
}

RunOutput run(const ExperimentConfig& config)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunOutput  out;
    out.report.kind        = std::string(to_string(config.kind));
    out.report.config      = to_json(config);
    out.report.environment = environment_stamp();
    const std::uint64_t seed = config.seed.value_or(1);
    const unsigned      jobs = config.jobs;

    with_params(config, [&](const auto& s) {
        using T = std::decay_t< decltype(s) >;
        try
        {
            if constexpr (std::is_same_v< T, SpectrumParams >)
                run_spectrum(s, out);
            else if constexpr (std::is_same_v< T, SweepParams >)
            {
                if (config.kind == ExperimentKind::DensitySweep)
                    run_density(s, seed, jobs, out);
                else
                    run_subdomain(s, jobs, out);
            }
            else if constexpr (std::is_same_v< T, CollarParams >)
                run_collar(s, out);
            else if constexpr (std::is_same_v< T, GraphParams >)
                run_graph_limit(s, jobs, out);
            else if constexpr (std::is_same_v< T, PipelineParams >)
                run_pipeline(s, seed, jobs, out);
            else if (config.kind == ExperimentKind::NodalAudit)
                run_nodal_audit(s, seed, jobs, out);
            else
                run_multiplicity_audit(s, seed, jobs, out);
        }
        catch (const Error& e)
        {
            out.report.point_errors.push_back(e.what());
        }
    });
    out.report.wall_seconds = std::chrono::duration< double >(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::string summary_text(const ExperimentReport& report)
{
    std::string s = fmt::format("{}: {}\n", report.kind, report.passed() ? "PASS" : "FAIL");
    for (const auto& c : report.checks)
        s += fmt::format("  [{}] {:<28} value {:<12.6g} threshold {:<12.6g} margin {:<+12.4g} {}\n",
                         c.passed ? "pass" : "FAIL", c.name, c.value, c.threshold, c.margin(), c.detail);
    for (const auto& e : report.point_errors)
        s += fmt::format("  error: {}\n", e);
    return s;
}

void emit_outputs(const std::filesystem::path& dir, const RunOutput& output)
{
    write_report(dir, output.report);
    const auto write = [](const std::filesystem::path& path, const std::string& text) {
        std::ofstream os(path);
        if (!os)
            throw IoError(fmt::format("cannot write {}", path.string()));
        os << text;
    };
    write(dir / "summary.txt", summary_text(output.report));
    std::error_code ec;
    if (!output.figures.empty())
    {
        std::filesystem::create_directories(dir / "figures", ec);
        if (ec)
            throw IoError(fmt::format("cannot create {}: {}", (dir / "figures").string(), ec.message()));
        for (const auto& [name, svg] : output.figures)
            write(dir / "figures" / (name + ".svg"), svg);
    }
    if (!output.meshes.empty())
    {
        std::filesystem::create_directories(dir / "meshes", ec);
        if (ec)
            throw IoError(fmt::format("cannot create {}: {}", (dir / "meshes").string(), ec.message()));
        for (const auto& [name, mesh] : output.meshes)
            save_mesh(dir / "meshes" / (name + ".msh"), mesh);
    }
}

} // namespace steklov

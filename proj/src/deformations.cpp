#include "steklov/deformations.hpp"

#include "steklov/error.hpp"
#include "steklov/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace steklov
{
namespace
{
constexpr int kQuadratureLevel = 6;   // kQuadratureLevel^2 sub-triangle centroids per triangle

double segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2   d  = b - a;
    const double dd = dot(d, d);
    const double t  = dd > 0.0 ? std::clamp(dot(p - a, d) / dd, 0.0, 1.0) : 0.0;
    return norm(p - (a + t * d));
}

struct SteklovSegment
{
    Vec2   a, b;
    double factor;   // boundary value of h
};

std::vector< std::array< double, 2 > > quadrature_points()
{
    std::vector< std::array< double, 2 > > out;
    const double m = kQuadratureLevel;
    for (int i = 0; i < kQuadratureLevel; ++i)
        for (int j = 0; i + j < kQuadratureLevel; ++j)
        {
            out.push_back({(i + 1.0 / 3.0) / m, (j + 1.0 / 3.0) / m});
            if (i + j < kQuadratureLevel - 1)
                out.push_back({(i + 2.0 / 3.0) / m, (j + 2.0 / 3.0) / m});
        }
    return out;
}

void check_dim(int n)
{
    if (n < 3)
        throw ParameterError(fmt::format("virtual dimension must be at least 3, got {}", n));
}

std::vector< double > relative_errors(const std::vector< double >& sigma, const std::vector< double >& reference)
{
    std::vector< double > out;
    for (std::size_t k = 0; k < sigma.size(); ++k)
        out.push_back(std::abs(sigma[k] - reference[k]) / std::max(std::abs(reference[k]), 1e-300));
    return out;
}

/// Shared sweep driver: parameter list -> mesh -> eigenvalues 1..n_eigs vs. reference.
template < typename MakeMesh >
ExperimentReport convergence_sweep(const std::string& kind, const std::string& param, const std::vector< double >& values,
                                   const std::vector< double >& reference, MakeMesh&& make_mesh, unsigned jobs)
{
    ExperimentReport report;
    report.kind      = kind;
    const int n_eigs = static_cast< int >(reference.size());
    auto&     table  = report.table(kind, {param, "k", "sigma", "reference", "abs_err", "rel_err"});

    std::vector< std::vector< double > > sigma(values.size());
    std::vector< std::string >           errors(values.size());
    parallel_for(values.size(), jobs, [&](std::size_t i) {
        try
        {
            const auto r = steklov_spectrum(make_mesh(values[i]), n_eigs + 1);
            sigma[i].assign(r.eigenvalues.begin() + 1, r.eigenvalues.end());
        }
        catch (const Error& e)
        {
            errors[i] = fmt::format("{} = {}: {}", param, values[i], e.what());
        }
    });

    Json points = Json::array();
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (!errors[i].empty())
        {
            report.point_errors.push_back(errors[i]);
            continue;
        }
        const auto rel = relative_errors(sigma[i], reference);
        for (int k = 0; k < n_eigs; ++k)
            table.add({values[i], static_cast< double >(k + 1), sigma[i][k], reference[k],
                       std::abs(sigma[i][k] - reference[k]), rel[k]});
        points.push_back({{param, values[i]}, {"max_rel_err", *std::max_element(rel.begin(), rel.end())}});
    }
    report.results["reference"] = reference;
    report.results["points"]    = points;
    return report;
}

} // namespace

DensityFamily make_density_family(const Mesh2D& base, const std::function< double(Vec2) >& rho_bar, int virtual_dim)
{
    check_dim(virtual_dim);
    DensityFamily f{base, std::vector< double >(base.boundary_edges.size(), 0.0), virtual_dim};
    for (std::size_t i = 0; i < base.boundary_edges.size(); ++i)
    {
        const auto& e       = base.boundary_edges[i];
        f.target_density[i] = e.tag == BoundaryTag::Steklov ? rho_bar(base.edge_midpoint(e.v[0], e.v[1])) : e.density;
    }
    return f;
}

Mesh2D density_family_at(const DensityFamily& family, double eps)
{
    check_dim(family.virtual_dim);
    if (!(eps > 0.0) || eps > 1.0)
        throw ParameterError(fmt::format("eps must lie in (0, 1], got {}", eps));
    const Mesh2D& base = family.base;
    if (family.target_density.size() != base.boundary_edges.size())
        throw ParameterError("target density size differs from the boundary edge count");

    const double                  n = family.virtual_dim;
    std::vector< SteklovSegment > segs;
    Mesh2D                        out = base;
    for (std::size_t i = 0; i < base.boundary_edges.size(); ++i)
    {
        auto& e = out.boundary_edges[i];
        if (e.tag != BoundaryTag::Steklov)
            continue;
        const double rho = e.density, rho_bar = family.target_density[i];
        if (!(rho_bar >= rho))
            throw PreconditionError(
                fmt::format("target density {} below base density {} on boundary edge {}", rho_bar, rho, i));
        segs.push_back({base.vertices[e.v[0]], base.vertices[e.v[0]] + base.delta(e.v[0], e.v[1]),
                        std::pow(rho_bar / rho, 1.0 / (n - 1.0))});
        e.density = rho_bar;
    }
    if (segs.empty())
        throw EmptyBoundaryError("density family needs Steklov edges");

    const auto nearest = [&](Vec2 p) {
        double best = std::numeric_limits< double >::infinity();
        double hb   = 1.0;
        for (const auto& s : segs)
            if (const double d = segment_distance(p, s.a, s.b); d < best)
            {
                best = d;
                hb   = s.factor;
            }
        return std::pair{best, hb};
    };

    const auto qp = quadrature_points();
    for (std::size_t t = 0; t < base.triangles.size(); ++t)
    {
        const auto   p    = base.triangle_points(static_cast< int >(t));
        const double diam = std::max({norm(p[1] - p[0]), norm(p[2] - p[1]), norm(p[0] - p[2])});
        double       dmin = std::numeric_limits< double >::infinity();
        for (const auto& v : p)
            dmin = std::min(dmin, nearest(v).first);
        if (dmin > eps + diam)
            continue;   // every quadrature point is beyond the profile: h = 1
        double acc = 0.0;
        for (const auto& [l1, l2] : qp)
        {
            const Vec2 q        = p[0] + l1 * (p[1] - p[0]) + l2 * (p[2] - p[0]);
            const auto [d, hb]  = nearest(q);
            const double h      = 1.0 + (hb - 1.0) * std::max(0.0, 1.0 - d / eps);
            acc += std::pow(h, n - 2.0);
        }
        out.tri_weight[t] = base.tri_weight[t] * acc / static_cast< double >(qp.size());
    }
    return out;
}

namespace
{
/// Index of the triangle owning each boundary edge.
std::vector< int > owning_triangles(const Mesh2D& mesh)
{
    std::unordered_map< std::uint64_t, int > owner;
    const auto key = [](int a, int b) { return (static_cast< std::uint64_t >(a) << 32U) | static_cast< std::uint32_t >(b); };
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        for (int k = 0; k < 3; ++k)
            owner[key(mesh.triangles[t][k], mesh.triangles[t][(k + 1) % 3])] = static_cast< int >(t);
    std::vector< int > out;
    for (const auto& e : mesh.boundary_edges)
    {
        auto it = owner.find(key(e.v[0], e.v[1]));
        if (it == owner.end())
            throw ValidationError(fmt::format("boundary edge ({}, {}) has no owning triangle", e.v[0], e.v[1]));
        out.push_back(it->second);
    }
    return out;
}

void check_singular_family(const SingularWeightFamily& family, const std::vector< int >& owner)
{
    check_dim(family.virtual_dim);
    if (family.in_u.size() != family.base.triangles.size())
        throw ParameterError("subdomain mask size differs from triangle count");
    for (std::size_t i = 0; i < owner.size(); ++i)
        if (family.base.boundary_edges[i].tag == BoundaryTag::Steklov && family.in_u[owner[i]])
            return;
    throw PreconditionError("subdomain U contains no Steklov boundary edge; the limit problem is undefined");
}
} // namespace

Mesh2D singular_family_at(const SingularWeightFamily& family, double eta)
{
    if (!(eta > 0.0) || eta > 1.0)
        throw ParameterError(fmt::format("eta must lie in (0, 1], got {}", eta));
    const auto owner = owning_triangles(family.base);
    check_singular_family(family, owner);

    const double n   = family.virtual_dim;
    const double w   = std::pow(eta, n - 2.0);
    const double rho = std::pow(eta, n - 1.0);
    Mesh2D       out = family.base;
    for (std::size_t t = 0; t < out.triangles.size(); ++t)
        if (!family.in_u[t])
            out.tri_weight[t] *= w;
    for (std::size_t i = 0; i < out.boundary_edges.size(); ++i)
        if (out.boundary_edges[i].tag == BoundaryTag::Steklov && !family.in_u[owner[i]])
            out.boundary_edges[i].density *= rho;
    return out;
}

Mesh2D singular_family_limit(const SingularWeightFamily& family)
{
    check_singular_family(family, owning_triangles(family.base));
    return extract_submesh(family.base, family.in_u, BoundaryTag::Neumann).mesh;
}

double cylinder_formula(double lambda, double eta)
{
    if (!(lambda >= 0.0) || !(eta > 0.0))
        throw ParameterError("cylinder formula needs lambda >= 0 and eta > 0");
    const double s = std::sqrt(lambda);
    return s * std::tanh(eta * s);
}

ExperimentReport collar_convergence_run(double circle_length, const std::vector< double >& widths, int n_eigs,
                                        const CollarOptions& options)
{
    if (!(circle_length > 0.0))
        throw ParameterError("circle length must be positive");
    if (n_eigs < 1)
        throw ParameterError("n_eigs must be positive");
    if (options.elements_across < 8)
        throw ResolutionError(
            fmt::format("{} elements across the collar; at least 8 are required", options.elements_across));
    for (std::size_t i = 0; i < widths.size(); ++i)
        if (!(widths[i] > 0.0) || (i > 0 && !(widths[i] < widths[i - 1])))
            throw ParameterError("collar widths must be positive and decreasing");

    const double h_along = options.h_along > 0.0 ? options.h_along : circle_length / 128.0;
    const int    nx      = std::max(3, static_cast< int >(std::ceil(circle_length / h_along - 1e-9)));

    ExperimentReport report;
    report.kind = "collar-sweep";
    report.config = {{"circle_length", circle_length}, {"widths", widths}, {"n_eigs", n_eigs},
                     {"elements_across", options.elements_across}, {"nx", nx}};
    auto& table = report.table("collar", {"eta", "k", "sigma", "reference", "abs_err", "rel_err"});
    Json  points = Json::array();
    for (double eta : widths)
    {
        try
        {
            const auto mesh = make_strip_mesh(circle_length, eta, nx, options.elements_across, true,
                                              {BoundaryTag::Steklov, BoundaryTag::Neumann});
            // circle eigenvalues come in pairs: 0, l1, l1, l2, l2, ...
            const auto r       = steklov_spectrum(mesh, n_eigs + 1 + n_eigs, options.cluster_rel_tol);
            double     max_rel = 0.0;
            Json       per_k   = Json::array();
            for (int k = 0; k <= n_eigs; ++k)
            {
                const double lambda = std::pow(2.0 * std::numbers::pi * k / circle_length, 2);
                // the two members of each pair are both compared; report the worse one
                const int    i0  = k == 0 ? 0 : 2 * k - 1;
                const int    i1  = k == 0 ? 0 : 2 * k;
                double       worst_sigma = r.eigenvalues[i0] / eta;
                for (int i : {i0, i1})
                    if (std::abs(r.eigenvalues[i] / eta - lambda) > std::abs(worst_sigma - lambda))
                        worst_sigma = r.eigenvalues[i] / eta;
                const double abs_err = std::abs(worst_sigma - lambda);
                const double rel_err = k == 0 ? abs_err : abs_err / lambda;
                table.add({eta, static_cast< double >(k), worst_sigma, lambda, abs_err, rel_err});
                if (k > 0)
                    max_rel = std::max(max_rel, rel_err);
            }
            points.push_back({{"eta", eta}, {"max_rel_err", max_rel}});
        }
        catch (const Error& e)
        {
            report.point_errors.push_back(fmt::format("eta = {}: {}", eta, e.what()));
        }
    }
    report.results["points"] = points;
    return report;
}

CylinderBranches cylinder_branches(double circle_length, double eta, int n_eigs, int elements_across, double h_along)
{
    if (elements_across < 8 || elements_across % 2 != 0)
        throw ResolutionError("the two-sided cylinder needs an even row count of at least 8");
    if (h_along <= 0.0)
        h_along = circle_length / 128.0;
    const int  nx   = std::max(3, static_cast< int >(std::ceil(circle_length / h_along - 1e-9)));
    const auto mesh = make_strip_mesh(circle_length, 2.0 * eta, nx, elements_across, true,
                                      {BoundaryTag::Steklov, BoundaryTag::Steklov});
    const auto r    = steklov_spectrum(mesh, n_eigs, 1e-3);

    // pair every bottom vertex with the top vertex of equal x
    std::vector< std::pair< double, int > > bottom, top;
    for (std::size_t i = 0; i < r.boundary_vertices.size(); ++i)
    {
        const Vec2 p = mesh.vertices[r.boundary_vertices[i]];
        (p.y < eta ? bottom : top).emplace_back(p.x, static_cast< int >(i));
    }
    std::sort(bottom.begin(), bottom.end());
    std::sort(top.begin(), top.end());
    if (bottom.size() != top.size())
        throw GeometryError("cylinder mesh is not mirror symmetric");

    CylinderBranches out;
    for (int k = 0; k < n_eigs; ++k)
    {
        double plus = 0.0, minus = 0.0;
        for (std::size_t i = 0; i < bottom.size(); ++i)
        {
            const double vb = r.boundary_vectors(bottom[i].second, k);
            const double vt = r.boundary_vectors(top[i].second, k);
            plus += (vt + vb) * (vt + vb);
            minus += (vt - vb) * (vt - vb);
        }
        (minus < plus ? out.symmetric : out.antisymmetric).push_back(r.eigenvalues[k]);
    }
    return out;
}

std::vector< double > cylinder_symmetric_reference(double circle_length, double eta, int count)
{
    std::vector< double > out;
    for (int i = 0; i < count; ++i)
    {
        const int k = (i + 1) / 2;
        out.push_back(cylinder_formula(std::pow(2.0 * std::numbers::pi * k / circle_length, 2), eta));
    }
    return out;
}

ExperimentReport density_convergence_run(const DensityFamily& family, const std::vector< double >& eps_values,
                                         int n_eigs, unsigned jobs)
{
    Mesh2D oracle = family.base;
    for (std::size_t i = 0; i < oracle.boundary_edges.size(); ++i)
        if (oracle.boundary_edges[i].tag == BoundaryTag::Steklov)
            oracle.boundary_edges[i].density = family.target_density[i];
    const auto            ref_full = steklov_spectrum(oracle, n_eigs + 1);
    std::vector< double > reference(ref_full.eigenvalues.begin() + 1, ref_full.eigenvalues.end());
    auto report = convergence_sweep("density", "eps", eps_values, reference,
                                    [&](double eps) { return density_family_at(family, eps); }, jobs);
    report.kind   = "density-sweep";
    report.config = {{"eps", eps_values}, {"n_eigs", n_eigs}, {"virtual_dim", family.virtual_dim}};
    return report;
}

ExperimentReport subdomain_convergence_run(const SingularWeightFamily& family, const std::vector< double >& eta_values,
                                           int n_eigs, unsigned jobs)
{
    const auto            ref_full = steklov_spectrum(singular_family_limit(family), n_eigs + 1);
    std::vector< double > reference(ref_full.eigenvalues.begin() + 1, ref_full.eigenvalues.end());
    auto report = convergence_sweep("subdomain", "eta", eta_values, reference,
                                    [&](double eta) { return singular_family_at(family, eta); }, jobs);
    report.kind   = "subdomain-sweep";
    report.config = {{"eta", eta_values}, {"n_eigs", n_eigs}, {"virtual_dim", family.virtual_dim}};
    return report;
}

std::vector< double > dyadic_sweep(int j_min, int j_max)
{
    std::vector< double > out;
    for (int j = j_min; j <= j_max; ++j)
        out.push_back(std::ldexp(1.0, -j));
    return out;
}

bool eventually_decreasing(const std::vector< double >& errors, std::size_t tail, double slack)
{
    if (errors.size() < 2)
        return true;
    const std::size_t start = errors.size() > tail ? errors.size() - tail : 0;
    for (std::size_t i = start + 1; i < errors.size(); ++i)
        if (errors[i] > errors[i - 1] * (1.0 + slack) + 1e-14)
            return false;
    return true;
}

} // namespace steklov

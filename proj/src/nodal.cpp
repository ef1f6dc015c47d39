#include "steklov/nodal.hpp"

#include "steklov/error.hpp"
#include "steklov/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

namespace steklov
{
namespace
{
struct UnionFind
{
    std::vector< int > parent;
    explicit UnionFind(std::size_t n) : parent(n)
    {
        for (std::size_t i = 0; i < n; ++i)
            parent[i] = static_cast< int >(i);
    }
    int find(int x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::uint64_t edge_key(int a, int b)
{
    if (a > b)
        std::swap(a, b);
    return (static_cast< std::uint64_t >(a) << 32U) | static_cast< std::uint32_t >(b);
}

NodalNode crossing(int a, int b)
{
    return {std::min(a, b), std::max(a, b)};
}

/// Zero of the linear interpolant on the segment p-q with values fp, fq of opposite sign.
Vec2 zero_point(Vec2 p, Vec2 q, double fp, double fq)
{
    const double t = fp / (fp - fq);
    return p + t * (q - p);
}

/// Polygon of {s * g > 0} inside a triangle.
std::vector< Vec2 > clip_piece(const std::array< Vec2, 3 >& p, const std::array< double, 3 >& g, int s)
{
    std::vector< Vec2 > out;
    for (int i = 0; i < 3; ++i)
    {
        const int    j  = (i + 1) % 3;
        const double gi = s * g[i], gj = s * g[j];
        if (gi >= 0.0)
            out.push_back(p[i]);
        if ((gi > 0.0 && gj < 0.0) || (gi < 0.0 && gj > 0.0))
            out.push_back(zero_point(p[i], p[j], gi, gj));
    }
    return out;
}
} // namespace

NodalDecomposition decompose_nodal(const Mesh2D& mesh, std::span< const double > field, double zero_tol)
{
    if (field.size() != mesh.vertices.size())
        throw ParameterError("field size differs from the vertex count");
    if (!(zero_tol >= 0.0) || zero_tol >= 1.0)
        throw ParameterError("zero tolerance must lie in [0, 1)");
    double fmax = 0.0;
    for (double f : field)
    {
        if (!std::isfinite(f))
            throw DegenerateInputError("field has non-finite values");
        fmax = std::max(fmax, std::abs(f));
    }
    if (!(fmax > 0.0))
        throw DegenerateInputError("field vanishes identically; no nodal decomposition");

    NodalDecomposition dec;
    dec.values.resize(field.size());
    dec.vertex_sign.resize(field.size());
    for (std::size_t v = 0; v < field.size(); ++v)
    {
        const double f     = std::abs(field[v]) <= zero_tol * fmax ? 0.0 : field[v];
        dec.values[v]      = f;
        dec.vertex_sign[v] = f > 0.0 ? 1 : (f < 0.0 ? -1 : 0);
    }
    const auto& g = dec.values;

    // pieces: index 2t for the positive part, 2t + 1 for the negative part
    const std::size_t  nt = mesh.triangles.size();
    std::vector< int > piece_id(2 * nt, -1);
    for (std::size_t t = 0; t < nt; ++t)
    {
        const auto& tri = mesh.triangles[t];
        const double hi = std::max({g[tri[0]], g[tri[1]], g[tri[2]]});
        const double lo = std::min({g[tri[0]], g[tri[1]], g[tri[2]]});
        if (hi > 0.0)
        {
            piece_id[2 * t] = static_cast< int >(dec.pieces.size());
            dec.pieces.push_back({static_cast< int >(t), 1, -1});
        }
        if (lo < 0.0)
        {
            piece_id[2 * t + 1] = static_cast< int >(dec.pieces.size());
            dec.pieces.push_back({static_cast< int >(t), -1, -1});
        }
    }

    // same-sign pieces of neighbouring triangles connect through a shared edge carrying that sign
    UnionFind                                uf(dec.pieces.size());
    std::unordered_map< std::uint64_t, int > first_owner;
    for (std::size_t t = 0; t < nt; ++t)
    {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k)
        {
            const int a = tri[k], b = tri[(k + 1) % 3];
            auto [it, fresh] = first_owner.emplace(edge_key(a, b), static_cast< int >(t));
            if (fresh)
                continue;
            const int u = it->second;
            if (std::max(g[a], g[b]) > 0.0)
                uf.unite(piece_id[2 * t], piece_id[2 * u]);
            if (std::min(g[a], g[b]) < 0.0)
                uf.unite(piece_id[2 * t + 1], piece_id[2 * u + 1]);
        }
    }
    std::unordered_map< int, int > domain_of_root;
    for (std::size_t i = 0; i < dec.pieces.size(); ++i)
    {
        const int root      = uf.find(static_cast< int >(i));
        auto [it, fresh]    = domain_of_root.emplace(root, dec.domain_count);
        if (fresh)
        {
            ++dec.domain_count;
            dec.domain_sign.push_back(dec.pieces[i].sign);
        }
        dec.pieces[i].domain = it->second;
    }

    // nodal segments of the linear interpolant
    std::set< std::pair< NodalNode, NodalNode > > seen;
    for (std::size_t t = 0; t < nt; ++t)
    {
        const auto& tri = mesh.triangles[t];
        const auto  p   = mesh.triangle_points(static_cast< int >(t));
        std::vector< std::pair< NodalNode, Vec2 > > zeros;
        for (int k = 0; k < 3; ++k)
        {
            const int a = tri[k], b = tri[(k + 1) % 3];
            if (g[a] == 0.0)
                zeros.push_back({{a, a}, p[k]});
            else if (g[a] * g[b] < 0.0)
                zeros.push_back({crossing(a, b), zero_point(p[k], p[(k + 1) % 3], g[a], g[b])});
        }
        const auto add = [&](const std::pair< NodalNode, Vec2 >& x, const std::pair< NodalNode, Vec2 >& y) {
            auto key = x.first < y.first ? std::pair{x.first, y.first} : std::pair{y.first, x.first};
            if (seen.insert(key).second)
                dec.segments.push_back({x.first, y.first, {x.second, y.second}});
        };
        if (zeros.size() == 2)
            add(zeros[0], zeros[1]);
        else if (zeros.size() == 3)
        {
            // identically zero triangle: its edges belong to the nodal set
            add(zeros[0], zeros[1]);
            add(zeros[1], zeros[2]);
            add(zeros[2], zeros[0]);
        }
    }
    return dec;
}

std::vector< bool > boundary_touch_check(const NodalDecomposition& dec, const Mesh2D& mesh)
{
    std::vector< bool > steklov_vertex(mesh.vertices.size(), false);
    for (const auto& e : mesh.boundary_edges)
        if (e.tag == BoundaryTag::Steklov)
            steklov_vertex[e.v[0]] = steklov_vertex[e.v[1]] = true;
    std::vector< bool > out(dec.domain_count, false);
    for (const auto& piece : dec.pieces)
        for (int v : mesh.triangles[piece.triangle])
            if (steklov_vertex[v] && piece.sign * dec.values[v] >= 0.0)
                out[piece.domain] = true;
    return out;
}

bool NodalGraphStats::endpoints_even() const
{
    return std::all_of(boundary_endpoints.begin(), boundary_endpoints.end(), [](int n) { return n % 2 == 0; });
}

NodalGraphStats nodal_graph_stats(const NodalDecomposition& dec, const Mesh2D& mesh)
{
    NodalGraphStats stats;
    const auto      loops  = boundary_loops(mesh);
    const auto      comp   = boundary_component_of_edge(mesh);
    std::unordered_map< std::uint64_t, int > boundary_edge_comp;
    std::vector< int >                       vertex_comp(mesh.vertices.size(), -1);
    for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i)
    {
        const auto& e = mesh.boundary_edges[i];
        boundary_edge_comp[edge_key(e.v[0], e.v[1])] = comp[i];
        vertex_comp[e.v[0]] = vertex_comp[e.v[1]] = comp[i];
    }
    const auto node_comp = [&](const NodalNode& n) {
        if (n.a == n.b)
            return vertex_comp[n.a];
        auto it = boundary_edge_comp.find(edge_key(n.a, n.b));
        return it == boundary_edge_comp.end() ? -1 : it->second;
    };

    std::map< NodalNode, int > ids;
    const auto id = [&](const NodalNode& n) { return ids.emplace(n, static_cast< int >(ids.size())).first->second; };
    std::vector< std::array< int, 2 > > edges;
    std::vector< bool >                 along_boundary;
    for (const auto& s : dec.segments)
    {
        edges.push_back({id(s.from), id(s.to)});
        along_boundary.push_back(s.from.a == s.from.b && s.to.a == s.to.b &&
                                 boundary_edge_comp.contains(edge_key(s.from.a, s.to.a)));
    }
    stats.nodes = static_cast< int >(ids.size());
    stats.edges = static_cast< int >(edges.size());
    UnionFind uf(ids.size());
    for (const auto& e : edges)
        uf.unite(e[0], e[1]);
    std::set< int > roots;
    for (std::size_t i = 0; i < ids.size(); ++i)
        roots.insert(uf.find(static_cast< int >(i)));
    stats.components = static_cast< int >(roots.size());
    // zero triangles are filled 2-cells of the zero set, not cycles
    for (const auto& tri : mesh.triangles)
        stats.zero_faces += dec.values[tri[0]] == 0.0 && dec.values[tri[1]] == 0.0 && dec.values[tri[2]] == 0.0;
    stats.cycle_rank = stats.edges - stats.nodes + stats.components - stats.zero_faces;

    std::vector< int > degree(ids.size(), 0);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (!along_boundary[i])
        {
            ++degree[edges[i][0]];
            ++degree[edges[i][1]];
        }
    stats.boundary_endpoints.assign(loops.size(), 0);
    for (const auto& [node, i] : ids)
        if (const int c = node_comp(node); c >= 0)
            stats.boundary_endpoints[c] += degree[i];
    return stats;
}

bool CourantReport::all_ok() const
{
    return std::all_of(entries.begin(), entries.end(), [](const CourantEntry& e) { return e.ok(); });
}

CourantReport courant_check(const SpectralResult& result, const Mesh2D& mesh, int k_max, double zero_tol, int n_random,
                            std::uint64_t seed)
{
    const int n = static_cast< int >(result.eigenvalues.size());
    if (k_max < 0 || k_max >= n)
        throw ParameterError(fmt::format("k_max = {} needs {} computed eigenpairs, have {}", k_max, k_max + 1, n));
    CourantReport report;
    Rng           rng(seed);
    const auto    count = [&](const Eigen::VectorXd& f) {
        return decompose_nodal(mesh, std::span< const double >(f.data(), static_cast< std::size_t >(f.size())), zero_tol)
            .domain_count;
    };
    for (int k = 0; k <= k_max; ++k)
    {
        const auto& c = result.cluster_of(k);
        report.entries.push_back({k, c.first, c.last, false, count(result.extensions.col(k)), k + 1});
        // random rotations once per cluster, when its last member is reached
        if (c.size() > 1 && k == std::min(c.last, k_max))
        {
            const int last = std::min(c.last, n - 1);
            for (int r = 0; r < n_random; ++r)
            {
                Eigen::VectorXd coef(last - c.first + 1);
                for (Eigen::Index i = 0; i < coef.size(); ++i)
                    coef(i) = normal(rng);
                coef.normalize();
                const Eigen::VectorXd f = result.extensions.middleCols(c.first, coef.size()) * coef;
                report.entries.push_back({k, c.first, c.last, true, count(f), last + 1});
            }
        }
    }
    return report;
}

std::string_view to_string(ProblemKind kind)
{
    return kind == ProblemKind::Steklov ? "steklov" : "steklov-neumann";
}

ProblemKind parse_problem_kind(std::string_view text)
{
    if (text == "steklov")
        return ProblemKind::Steklov;
    if (text == "steklov-neumann" || text == "sloshing")
        return ProblemKind::SteklovNeumann;
    throw ParameterError(fmt::format("unknown problem kind '{}'", text));
}

MultiplicityEntry multiplicity_bound(const SurfaceTopology& topology, ProblemKind kind, int k)
{
    topology.validate();
    if (k < 1)
        throw ParameterError("multiplicity bounds concern sigma_k with k >= 1");
    const bool disk = topology.orientable && topology.genus == 0 && topology.boundary_components == 1;
    MultiplicityEntry e;
    e.k = k;
    if (kind == ProblemKind::SteklovNeumann)
    {
        if (!disk)
            throw UnsupportedCaseError("Steklov-Neumann multiplicity bounds are only available on the disk");
        e.bound       = k + 1;
        e.bound_label = "disk Steklov-Neumann: k+1";
        return e;
    }
    if (topology.orientable)
    {
        e.bound       = 4 * topology.genus + 2 * k + 1;
        e.bound_label = "orientable: 4g+2k+1";
        if (disk && k <= 2)
        {
            e.bound       = k + 1;
            e.bound_label = k == 1 ? "disk: sigma_1 <= 2" : "disk: sigma_2 <= 3";
        }
        return e;
    }
    e.bound           = 4 * topology.p_invariant + 4 * k + 1;
    e.bound_label     = "non-orientable (statement): 4p+4k+1";
    e.secondary_bound = 4 * topology.p_invariant + 4 * k + 3;
    e.secondary_label = "non-orientable (proof): 4p+4k+3";
    return e;
}

bool MultiplicityReport::all_ok() const
{
    return std::all_of(entries.begin(), entries.end(), [](const MultiplicityEntry& e) { return e.ok(); });
}

MultiplicityReport multiplicity_bound_check(const SpectralResult& result, const SurfaceTopology& topology,
                                            ProblemKind kind, int k_max)
{
    const int n = static_cast< int >(result.eigenvalues.size());
    if (k_max < 1 || k_max >= n)
        throw ParameterError(fmt::format("k_max = {} outside [1, {}]", k_max, n - 1));
    MultiplicityReport report;
    for (int k = 1; k <= k_max; ++k)
    {
        auto e = multiplicity_bound(topology, kind, k);
        const auto& c = result.cluster_of(k);
        // a cluster cut by the end of the computed range may be larger than it looks
        e.cluster_size = c.size();
        report.entries.push_back(std::move(e));
    }
    return report;
}

void write_nodal_svg(std::ostream& os, const Mesh2D& mesh, const NodalDecomposition& dec)
{
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        for (const auto& p : mesh.triangle_points(static_cast< int >(t)))
        {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    const double span  = std::max(xmax - xmin, ymax - ymin);
    const double scale = 600.0 / span;
    const auto   X     = [&](Vec2 p) { return fmt::format("{:.2f},{:.2f}", 10 + (p.x - xmin) * scale, 10 + (ymax - p.y) * scale); };
    os << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}">)",
                      20 + (xmax - xmin) * scale, 20 + (ymax - ymin) * scale)
       << '\n';
    for (const auto& piece : dec.pieces)
    {
        const auto& tri = mesh.triangles[piece.triangle];
        const auto  p   = mesh.triangle_points(piece.triangle);
        const auto  poly =
            clip_piece(p, {dec.values[tri[0]], dec.values[tri[1]], dec.values[tri[2]]}, piece.sign);
        os << R"(<polygon points=")";
        for (const auto& q : poly)
            os << X(q) << ' ';
        os << (piece.sign > 0 ? R"(" fill="#f4a582" stroke="none"/>)" : R"(" fill="#92c5de" stroke="none"/>)") << '\n';
    }
    for (const auto& e : mesh.boundary_edges)
    {
        const Vec2 a = mesh.vertices[e.v[0]];
        const Vec2 b = a + mesh.delta(e.v[0], e.v[1]);
        os << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}"/>)",
                          X(a).substr(0, X(a).find(',')), X(a).substr(X(a).find(',') + 1),
                          X(b).substr(0, X(b).find(',')), X(b).substr(X(b).find(',') + 1),
                          e.tag == BoundaryTag::Steklov ? "#2166ac" : "#777777",
                          e.tag == BoundaryTag::Steklov ? 3 : 1)
           << '\n';
    }
    for (const auto& s : dec.segments)
    {
        const auto a = X(s.points[0]), b = X(s.points[1]);
        os << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"/>)",
                          a.substr(0, a.find(',')), a.substr(a.find(',') + 1), b.substr(0, b.find(',')),
                          b.substr(b.find(',') + 1))
           << '\n';
    }
    os << "</svg>\n";
}

nlohmann::ordered_json nodal_stats_json(const NodalDecomposition& dec, const Mesh2D& mesh)
{
    const auto             stats   = nodal_graph_stats(dec, mesh);
    const auto             touches = boundary_touch_check(dec, mesh);
    nlohmann::ordered_json j;
    j["domains"]            = dec.domain_count;
    j["domain_sign"]        = dec.domain_sign;
    j["touches_steklov"]    = touches;
    j["segments"]           = dec.segments.size();
    j["cycle_rank"]         = stats.cycle_rank;
    j["zero_faces"]         = stats.zero_faces;
    j["graph_components"]   = stats.components;
    j["boundary_endpoints"] = stats.boundary_endpoints;
    j["endpoints_even"]     = stats.endpoints_even();
    return j;
}

} // namespace steklov

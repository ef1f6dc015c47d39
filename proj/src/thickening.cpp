#include "steklov/thickening.hpp"

#include "steklov/error.hpp"
#include "steklov/fem.hpp"
#include "steklov/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace steklov
{
namespace
{
constexpr int kArcPieces = 256;

Vec2 unit(Vec2 v)
{
    const double n = norm(v);
    return {v.x / n, v.y / n};
}

std::vector< std::vector< int > > adjacency(const MetricGraph& g)
{
    std::vector< std::vector< int > > adj(g.n_vertices);
    for (const auto& e : g.edges)
    {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    return adj;
}

double edge_length_between(const MetricGraph& g, int a, int b)
{
    for (int i = 0; i < g.num_edges(); ++i)
        if ((g.edges[i][0] == a && g.edges[i][1] == b) || (g.edges[i][0] == b && g.edges[i][1] == a))
            return g.lengths[i];
    throw ParameterError(fmt::format("no edge between {} and {}", a, b));
}

/// Walks a path or cycle starting at `start`.
std::vector< int > walk(const std::vector< std::vector< int > >& adj, int start)
{
    std::vector< int > order{start};
    int                prev = -1, cur = start;
    while (true)
    {
        int next = -1;
        for (int u : adj[cur])
            if (u != prev && u != start)
            {
                next = u;
                break;
            }
        if (next < 0 || std::find(order.begin(), order.end(), next) != order.end())
            break;
        order.push_back(next);
        prev = cur;
        cur  = next;
    }
    return order;
}

std::vector< Vec2 > straight(Vec2 a, Vec2 b)
{
    return {a, b};
}

/// Circular arc from a to b of central angle theta, bulging to the left of a->b, made of
/// kArcPieces equal chords of total length `length` (the chord |b - a| must match).
std::vector< Vec2 > arc_path(Vec2 a, Vec2 b, double theta)
{
    const Vec2   d     = b - a;
    const double chord = norm(d);
    const double r     = chord / (2.0 * std::sin(theta / 2.0));
    const Vec2   mid   = 0.5 * (a + b);
    const Vec2   left  = unit(Vec2{-d.y, d.x});
    const Vec2   c     = mid - r * std::cos(theta / 2.0) * left;
    const double a0    = std::atan2(a.y - c.y, a.x - c.x);
    std::vector< Vec2 > out;
    for (int i = 0; i <= kArcPieces; ++i)
    {
        const double t = a0 - theta * i / kArcPieces;   // clockwise from a about c moves left of a->b
        out.push_back(c + r * Vec2{std::cos(t), std::sin(t)});
    }
    out.front() = a;
    out.back()  = b;
    return out;
}

/// Chord giving a kArcPieces-chord arc of angle theta the polyline length l.
double arc_chord(double l, double theta)
{
    const double r = l / (2.0 * kArcPieces * std::sin(theta / (2.0 * kArcPieces)));
    return 2.0 * r * std::sin(theta / 2.0);
}

/// Point and unit tangent at arclength s along a polyline.
std::pair< Vec2, Vec2 > point_at(const std::vector< Vec2 >& path, double s)
{
    for (std::size_t i = 1; i < path.size(); ++i)
    {
        const double len = norm(path[i] - path[i - 1]);
        if (s <= len || i + 1 == path.size())
        {
            const Vec2 t = unit(path[i] - path[i - 1]);
            return {path[i - 1] + std::clamp(s, 0.0, len) * t, t};
        }
        s -= len;
    }
    return {path.front(), Vec2{1.0, 0.0}};
}

/// Angle between the edge leaving vertex v (as the polyline starts there) and the diameter.
struct Departure
{
    int    edge;
    bool   reversed;
    Vec2   direction;
    double alpha;   // in (0, pi) when the edge enters the half-disk side
};

std::vector< Departure > departures(const ThickeningSpec& spec, int v)
{
    const auto&              emb = spec.embedding;
    const Vec2               nu  = emb.normals[v];
    const Vec2               tau{nu.y, -nu.x};
    std::vector< Departure > out;
    for (int i = 0; i < spec.graph.num_edges(); ++i)
        for (int end = 0; end < 2; ++end)
        {
            if (spec.graph.edges[i][end] != v)
                continue;
            const auto& p = emb.edge_paths[i];
            const Vec2  d = end == 0 ? unit(p[1] - p[0]) : unit(p[p.size() - 2] - p.back());
            out.push_back({i, end == 1, d, std::atan2(dot(d, nu), dot(d, tau))});
        }
    return out;
}

double trim_length(double alpha, double eps, double c)
{
    return 0.5 * eps * (std::abs(std::cos(alpha) / std::sin(alpha)) + std::sqrt(c * c - 1.0));
}

double polyline_distance(const std::vector< Vec2 >& a, const std::vector< Vec2 >& b)
{
    const auto seg_seg = [](Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1) {
        const auto sd = [](Vec2 p, Vec2 a, Vec2 b) {
            const Vec2   d  = b - a;
            const double dd = dot(d, d);
            const double t  = dd > 0.0 ? std::clamp(dot(p - a, d) / dd, 0.0, 1.0) : 0.0;
            return norm(p - (a + t * d));
        };
        const double c1 = cross(p1 - p0, q0 - p0), c2 = cross(p1 - p0, q1 - p0);
        const double c3 = cross(q1 - q0, p0 - q0), c4 = cross(q1 - q0, p1 - q0);
        if (((c1 > 0) != (c2 > 0)) && ((c3 > 0) != (c4 > 0)))
            return 0.0;
        return std::min({sd(p0, q0, q1), sd(p1, q0, q1), sd(q0, p0, p1), sd(q1, p0, p1)});
    };
    double best = std::numeric_limits< double >::infinity();
    for (std::size_t i = 1; i < a.size(); ++i)
        for (std::size_t j = 1; j < b.size(); ++j)
            best = std::min(best, seg_seg(a[i - 1], a[i], b[j - 1], b[j]));
    return best;
}

/// Sub-polyline between arclengths s0 and s1.
std::vector< Vec2 > sub_path(const std::vector< Vec2 >& path, double s0, double s1)
{
    std::vector< Vec2 > out{point_at(path, s0).first};
    double              s = 0.0;
    for (std::size_t i = 1; i + 1 < path.size(); ++i)
    {
        s += norm(path[i] - path[i - 1]);
        if (s > s0 && s < s1)
            out.push_back(path[i]);
    }
    out.push_back(point_at(path, s1).first);
    return out;
}

/// Polygon of the eps-neighbourhood of a polyline with flat ends (left side out, right side back).
std::vector< Vec2 > tube_polygon(const std::vector< Vec2 >& path, double eps)
{
    const std::size_t   n = path.size();
    std::vector< Vec2 > left, right;
    for (std::size_t i = 0; i < n; ++i)
    {
        Vec2 t;
        if (i == 0)
            t = unit(path[1] - path[0]);
        else if (i + 1 == n)
            t = unit(path[n - 1] - path[n - 2]);
        else
            t = unit(unit(path[i] - path[i - 1]) + unit(path[i + 1] - path[i]));
        const Vec2 nrm{-t.y, t.x};
        left.push_back(path[i] + eps * nrm);
        right.push_back(path[i] - eps * nrm);
    }
    std::vector< Vec2 > out(right.begin(), right.end());
    out.insert(out.end(), left.rbegin(), left.rend());
    return out;
}

} // namespace

std::string_view to_string(EmbeddingStyle style)
{
    switch (style)
    {
    case EmbeddingStyle::ConvexBoundary: return "convex-boundary";
    case EmbeddingStyle::Path: return "path";
    case EmbeddingStyle::Star: return "star";
    }
    return "?";
}

EmbeddingStyle parse_embedding_style(std::string_view text)
{
    if (text == "convex-boundary" || text == "convex")
        return EmbeddingStyle::ConvexBoundary;
    if (text == "path")
        return EmbeddingStyle::Path;
    if (text == "star")
        return EmbeddingStyle::Star;
    throw ParameterError(fmt::format("unknown embedding style '{}'", text));
}

double polyline_length(const std::vector< Vec2 >& path)
{
    double l = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i)
        l += norm(path[i] - path[i - 1]);
    return l;
}

GraphEmbedding embed_graph(const MetricGraph& g, EmbeddingStyle style)
{
    g.validate();
    const auto     adj = adjacency(g);
    const int      n   = g.n_vertices;
    const int      m   = g.num_edges();
    GraphEmbedding emb;
    emb.positions.resize(n);
    emb.normals.resize(n);
    emb.edge_paths.resize(m);

    switch (style)
    {
    case EmbeddingStyle::ConvexBoundary:
    {
        if (m > 2 * n - 3 && n >= 3)
            throw EmbeddingError(fmt::format(
                "graph with {} vertices and {} edges is not outerplanar (an outerplanar graph has at most "
                "2|S| - 3 = {} edges), so its vertices cannot all lie on the outer boundary",
                n, m, 2 * n - 3));
        const bool cycle = m == n && std::all_of(adj.begin(), adj.end(), [](const auto& a) { return a.size() == 2; });
        if (!cycle)
            throw EmbeddingError("convex-boundary style embeds cycles only; use the path or star style for trees");
        const auto            order = walk(adj, 0);
        std::vector< double > chords;
        for (int i = 0; i < n; ++i)
            chords.push_back(edge_length_between(g, order[i], order[(i + 1) % n]));
        const double lmax  = *std::max_element(chords.begin(), chords.end());
        const auto   angle = [&](double r) {
            double s = 0.0;
            for (double l : chords)
                s += 2.0 * std::asin(std::min(1.0, l / (2.0 * r)));
            return s - 2.0 * std::numbers::pi;
        };
        if (angle(lmax / 2.0) < 0.0)
            throw EmbeddingError("cycle lengths too unequal for a convex inscribed layout (longest edge exceeds the rest)");
        double lo = lmax / 2.0, hi = lmax;
        while (angle(hi) > 0.0)
            hi *= 2.0;
        for (int it = 0; it < 200; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (angle(mid) > 0.0 ? lo : hi) = mid;
        }
        const double r   = 0.5 * (lo + hi);
        double       phi = std::numbers::pi / 2.0;
        for (int i = 0; i < n; ++i)
        {
            emb.positions[order[i]] = r * Vec2{std::cos(phi), std::sin(phi)};
            phi += 2.0 * std::asin(std::min(1.0, chords[i] / (2.0 * r)));
        }
        for (int i = 0; i < n; ++i)
        {
            const Vec2 p       = emb.positions[order[i]];
            const Vec2 prev    = emb.positions[order[(i + n - 1) % n]];
            const Vec2 next    = emb.positions[order[(i + 1) % n]];
            emb.normals[order[i]] = unit(unit(prev - p) + unit(next - p));
        }
        for (int i = 0; i < m; ++i)
            emb.edge_paths[i] = straight(emb.positions[g.edges[i][0]], emb.positions[g.edges[i][1]]);
        break;
    }
    case EmbeddingStyle::Path:
    {
        const bool path = m == n - 1 && std::all_of(adj.begin(), adj.end(), [](const auto& a) { return a.size() <= 2; });
        if (!path)
            throw EmbeddingError("path style needs a path graph");
        int start = 0;
        while (adj[start].size() != 1)
            ++start;
        const auto order = walk(adj, start);
        if (m == 1)
        {
            emb.positions[order[0]] = {0.0, 0.0};
            emb.positions[order[1]] = {g.lengths[0], 0.0};
            emb.normals[order[0]]   = {1.0, 0.0};
            emb.normals[order[1]]   = {-1.0, 0.0};
            emb.edge_paths[0]       = straight(emb.positions[g.edges[0][0]], emb.positions[g.edges[0][1]]);
            break;
        }
        const double theta = std::numbers::pi / 2.0;
        double       x     = 0.0;
        for (int i = 0; i < n; ++i)
        {
            emb.positions[order[i]] = {x, 0.0};
            emb.normals[order[i]]   = {0.0, 1.0};
            if (i + 1 < n)
                x += arc_chord(edge_length_between(g, order[i], order[i + 1]), theta);
        }
        for (int i = 0; i < m; ++i)
        {
            const Vec2 a = emb.positions[g.edges[i][0]], b = emb.positions[g.edges[i][1]];
            // bulge upward: left of a->b when a is left of b
            emb.edge_paths[i] = a.x < b.x ? arc_path(a, b, theta) : arc_path(b, a, theta);
            if (a.x > b.x)
                std::reverse(emb.edge_paths[i].begin(), emb.edge_paths[i].end());
        }
        break;
    }
    case EmbeddingStyle::Star:
    {
        int center = -1;
        for (int v = 0; v < n; ++v)
            if (static_cast< int >(adj[v].size()) == n - 1)
                center = v;
        if (m != n - 1 || center < 0)
            throw EmbeddingError("star style needs a star graph");
        if (n == 2)
            center = 0;
        const int d           = n - 1;
        emb.positions[center] = {0.0, 0.0};
        emb.normals[center]   = {0.0, 1.0};
        int slot              = 0;
        for (int v = 0; v < n; ++v)
        {
            if (v == center)
                continue;
            const double a   = std::numbers::pi * (slot + 1) / (d + 1);
            const Vec2   dir{std::cos(a), std::sin(a)};
            emb.positions[v] = edge_length_between(g, center, v) * dir;
            emb.normals[v]   = -1.0 * dir;
            ++slot;
        }
        for (int i = 0; i < m; ++i)
            emb.edge_paths[i] = straight(emb.positions[g.edges[i][0]], emb.positions[g.edges[i][1]]);
        break;
    }
    }

    for (int i = 0; i < m; ++i)
        if (std::abs(polyline_length(emb.edge_paths[i]) - g.lengths[i]) > 1e-9 * std::max(1.0, g.lengths[i]))
            throw EmbeddingError(fmt::format("edge {} realized with length {} instead of {}", i,
                                             polyline_length(emb.edge_paths[i]), g.lengths[i]));
    return emb;
}

void check_thickening(const ThickeningSpec& spec)
{
    const auto& g   = spec.graph;
    const auto& emb = spec.embedding;
    g.validate();
    if (!(spec.eps > 0.0) || !(spec.c > 1.0))
        throw ParameterError("thickening needs eps > 0 and c > 1");
    if (emb.positions.size() != static_cast< std::size_t >(g.n_vertices) ||
        emb.normals.size() != emb.positions.size() || emb.edge_paths.size() != g.edges.size())
        throw ParameterError("embedding does not match the graph");
    const double r = spec.c * spec.eps;
    for (int i = 0; i < g.num_edges(); ++i)
    {
        if (!(2.0 * r < g.lengths[i]))
            throw GeometryError(fmt::format("2 c eps = {} is not below the length {} of edge {}; use a smaller eps",
                                            2.0 * r, g.lengths[i], i));
        if (std::abs(polyline_length(emb.edge_paths[i]) - g.lengths[i]) > 1e-9 * std::max(1.0, g.lengths[i]))
            throw GeometryError(fmt::format("edge {} polyline length differs from its length", i));
    }
    const double min_sin = 1.0 / spec.c;
    for (int v = 0; v < g.n_vertices; ++v)
    {
        const auto deps = departures(spec, v);
        for (const auto& d : deps)
            if (!(d.alpha > 0.0 && d.alpha < std::numbers::pi) || std::sin(d.alpha) < min_sin * (1.0 - 1e-9))
                throw GeometryError(fmt::format(
                    "edge {} leaves vertex {} at {:.1f} degrees from the diameter; its tube would cross the Steklov "
                    "side (need sin >= 1/c; increase c)",
                    d.edge, v, d.alpha * 180.0 / std::numbers::pi));
        for (std::size_t a = 0; a < deps.size(); ++a)
            for (std::size_t b = a + 1; b < deps.size(); ++b)
            {
                const double delta = std::acos(std::clamp(dot(deps[a].direction, deps[b].direction), -1.0, 1.0));
                if (std::sin(delta / 2.0) < min_sin * (1.0 - 1e-9))
                    throw GeometryError(fmt::format(
                        "tubes of edges {} and {} overlap beyond the half-disk at vertex {} (angle {:.1f} degrees); "
                        "increase c",
                        deps[a].edge, deps[b].edge, v, delta * 180.0 / std::numbers::pi));
            }
    }
    for (int a = 0; a < g.n_vertices; ++a)
        for (int b = a + 1; b < g.n_vertices; ++b)
            if (norm(emb.positions[a] - emb.positions[b]) <= 2.0 * r)
                throw GeometryError(fmt::format("half-disks of vertices {} and {} intersect", a, b));

    // tubes of distinct edges stay apart outside the half-disks
    std::vector< std::vector< Vec2 > > cores;
    for (int i = 0; i < g.num_edges(); ++i)
    {
        const auto& p = emb.edge_paths[i];
        const double l = polyline_length(p);
        cores.push_back(sub_path(p, r + spec.eps, l - r - spec.eps));
    }
    for (int i = 0; i < g.num_edges(); ++i)
    {
        for (int j = i + 1; j < g.num_edges(); ++j)
            if (polyline_distance(cores[i], cores[j]) <= 2.0 * spec.eps)
                throw GeometryError(fmt::format("tubes of edges {} and {} intersect; use a smaller eps", i, j));
        for (int v = 0; v < g.n_vertices; ++v)
        {
            if (g.edges[i][0] == v || g.edges[i][1] == v)
                continue;
            if (polyline_distance(cores[i], {emb.positions[v], emb.positions[v]}) <= r + spec.eps)
                throw GeometryError(fmt::format("tube of edge {} runs into the half-disk of vertex {}", i, v));
        }
    }
}

PlanarRegion thickened_region(const ThickeningSpec& spec)
{
    check_thickening(spec);
    const auto&  emb = spec.embedding;
    const double r   = spec.c * spec.eps;
    const double h   = spec.target_h > 0.0 ? spec.target_h : spec.eps / 4.0;
    PlanarRegion region;
    for (int v = 0; v < spec.graph.n_vertices; ++v)
    {
        const Vec2 nu = unit(emb.normals[v]);
        const Vec2 tau{nu.y, -nu.x};
        region.parts.push_back(half_disk_polygon(emb.positions[v], nu, r, h));
        const Vec2 a = emb.positions[v] - r * tau, b = emb.positions[v] + r * tau;
        region.steklov_segments.push_back({a, b});
        region.corners.push_back(a);
        region.corners.push_back(b);
    }
    std::vector< double > trim_start(spec.graph.num_edges()), trim_end(spec.graph.num_edges());
    for (int v = 0; v < spec.graph.n_vertices; ++v)
        for (const auto& d : departures(spec, v))
            (d.reversed ? trim_end : trim_start)[d.edge] = trim_length(d.alpha, spec.eps, spec.c);
    for (int i = 0; i < spec.graph.num_edges(); ++i)
    {
        const auto&  p = emb.edge_paths[i];
        const double l = polyline_length(p);
        region.parts.push_back(tube_polygon(sub_path(p, trim_start[i], l - trim_end[i]), spec.eps));
    }
    return region;
}

Mesh2D build_thickened_mesh(const ThickeningSpec& spec)
{
    const double h = spec.target_h > 0.0 ? spec.target_h : spec.eps / 4.0;
    return mesh_region(thickened_region(spec), h);
}

double thickened_area_estimate(const ThickeningSpec& spec)
{
    const double r    = spec.c * spec.eps;
    double       area = spec.graph.n_vertices * std::numbers::pi * r * r / 2.0;
    for (double l : spec.graph.lengths)
        area += (l - 2.0 * r) * 2.0 * spec.eps;
    return area;
}

ExperimentReport verify_graph_limit(const std::vector< ThickeningSpec >& family, const GraphLimitOptions& options)
{
    if (family.empty())
        throw ParameterError("graph-limit sweep needs at least one eps");
    const auto& g0 = family.front();
    for (std::size_t i = 0; i < family.size(); ++i)
    {
        const auto& s = family[i];
        if (s.c != g0.c || s.graph.edges != g0.graph.edges || s.graph.lengths != g0.graph.lengths)
            throw ParameterError("graph-limit sweep needs one graph and one c across the family");
        if (i > 0 && !(s.eps < family[i - 1].eps))
            throw ParameterError("eps values must decrease along the family");
        const double h = s.target_h > 0.0 ? s.target_h : s.eps / 4.0;
        if (h > 2.0 * s.eps / options.elements_across * (1.0 + 1e-12) || options.elements_across < 8)
            throw ResolutionError(fmt::format(
                "mesh size {} gives fewer than {} elements across the tube width {} (at least 8 are required)", h,
                std::max(options.elements_across, 8), 2.0 * s.eps));
    }
    const int  n_s    = g0.graph.n_vertices;
    const int  n_eigs = options.n_eigs > 0 ? options.n_eigs : n_s - 1;
    const auto gspec  = graph_laplacian_spectrum(g0.graph);
    if (n_eigs > n_s - 1)
        throw ParameterError("n_eigs exceeds the number of nonzero graph eigenvalues");

    struct Point
    {
        std::vector< double > sigma;
        double                oscillation = 0.0;
        std::size_t           steklov_components = 0;
        std::string           error;
    };
    std::vector< Point > points(family.size());
    parallel_for(family.size(), options.jobs, [&](std::size_t i) {
        try
        {
            const auto spec = family[i];
            const auto mesh = build_thickened_mesh(spec);
            const auto r    = steklov_spectrum(mesh, n_s + 2);
            points[i].sigma = r.eigenvalues;

            // near-constancy on each diameter for k < |S|
            const auto comps          = steklov_components(mesh);
            points[i].steklov_components = comps.size();
            std::vector< int > row_of(mesh.vertices.size(), -1);
            for (std::size_t b = 0; b < r.boundary_vertices.size(); ++b)
                row_of[r.boundary_vertices[b]] = static_cast< int >(b);
            double worst = 0.0;
            for (int k = 1; k < n_s; ++k)
            {
                double osc = 0.0, mean_lo = 1e300, mean_hi = -1e300;
                for (const auto& comp : comps)
                {
                    double lo = 1e300, hi = -1e300, sum = 0.0;
                    for (int v : comp)
                    {
                        const double f = r.boundary_vectors(row_of[v], k);
                        lo             = std::min(lo, f);
                        hi             = std::max(hi, f);
                        sum += f;
                    }
                    osc     = std::max(osc, hi - lo);
                    mean_lo = std::min(mean_lo, sum / comp.size());
                    mean_hi = std::max(mean_hi, sum / comp.size());
                }
                worst = std::max(worst, osc / std::max(mean_hi - mean_lo, 1e-300));
            }
            points[i].oscillation = worst;
        }
        catch (const Error& e)
        {
            points[i].error = fmt::format("eps = {}: {}", family[i].eps, e.what());
        }
    });

    ExperimentReport report;
    report.kind   = "graph-limit";
    report.config = {{"vertices", n_s}, {"edges", g0.graph.num_edges()}, {"c", g0.c}, {"n_eigs", n_eigs}};
    std::vector< double > eps_list;
    for (const auto& s : family)
        eps_list.push_back(s.eps);
    report.config["eps"] = eps_list;
    report.results["graph_spectrum"] = gspec.eigenvalues;

    auto& table = report.table("graph_limit", {"eps", "k", "sigma", "lambda", "ratio"});
    Json  rows  = Json::array();
    for (std::size_t i = 0; i < family.size(); ++i)
    {
        const auto& p = points[i];
        if (!p.error.empty())
        {
            report.point_errors.push_back(p.error);
            continue;
        }
        std::vector< double > ratios;
        for (int k = 1; k <= n_eigs; ++k)
        {
            const double ratio = p.sigma[k] / gspec.eigenvalues[k];
            ratios.push_back(ratio);
            table.add({family[i].eps, static_cast< double >(k), p.sigma[k], gspec.eigenvalues[k], ratio});
        }
        const double mean   = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
        const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
        rows.push_back({{"eps", family[i].eps},
                        {"ratios", ratios},
                        {"mean_ratio", mean},
                        {"spread", (*hi - *lo) / mean},
                        {"gap", p.sigma[n_s] / p.sigma[n_s - 1]},
                        {"sigma_S_eps2", p.sigma[n_s] * family[i].eps * family[i].eps},
                        {"sigma_0", p.sigma[0]},
                        {"oscillation", p.oscillation},
                        {"steklov_components", p.steklov_components}});
    }
    report.results["points"] = rows;
    if (!rows.empty())
    {
        const double constant = rows.back()["mean_ratio"].get< double >();
        const double n        = 2.0;
        const double up       = std::pow(g0.c, n - 1.0);
        const double down     = std::pow(g0.c, -(n - 1.0));
        report.results["limit_constant"] = constant;
        report.results["candidates"]     = {
            {"c^(n-1)", {{"value", up}, {"rel_distance", std::abs(constant - up) / up}}},
            {"c^-(n-1)", {{"value", down}, {"rel_distance", std::abs(constant - down) / down}}},
        };
        report.results["closer_candidate"] =
            std::abs(constant - up) / up < std::abs(constant - down) / down ? "c^(n-1)" : "c^-(n-1)";
    }
    return report;
}

} // namespace steklov

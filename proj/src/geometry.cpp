#include "steklov/geometry.hpp"

#include "steklov/error.hpp"
#include "steklov/hash.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace steklov
{
namespace
{
constexpr double two_pi = 2.0 * std::numbers::pi;

std::uint64_t edge_key(int a, int b)
{
    const auto lo = static_cast< std::uint64_t >(std::min(a, b));
    const auto hi = static_cast< std::uint64_t >(std::max(a, b));
    return (lo << 32U) | hi;
}

double wrap_periodic(double x, double period)
{
    if (period <= 0.0)
        return x;
    double r = std::fmod(x, period);
    if (r < 0.0)
        r += period;
    if (r >= period)
        r -= period;
    return r;
}

// Number of intervals of length <= h covering `extent`. The epsilon keeps homothetic parameter
// pairs such as (1, 0.05) and (2, 0.1) on the same integer.
int intervals_for(double extent, double h)
{
    return std::max(1, static_cast< int >(std::ceil(extent / h - 1e-9)));
}

// Triangulates the band between two concentric rings whose first points sit at angle 0.
// Ring k point j is at angle 2*pi*j/m_k; the merge compares angles in exact integer arithmetic.
void stitch_rings(int in0, int m_in, int out0, int m_out, std::vector< std::array< int, 3 > >& tris)
{
    int a = 0;
    int b = 0;
    while (a < m_in || b < m_out)
    {
        const bool advance_outer =
            a == m_in ||
            (b < m_out && static_cast< long long >(b + 1) * m_in < static_cast< long long >(a + 1) * m_out);
        const int ia = in0 + a % m_in;
        if (advance_outer)
        {
            tris.push_back({ia, out0 + b % m_out, out0 + (b + 1) % m_out});
            ++b;
        }
        else
        {
            tris.push_back({ia, out0 + b % m_out, in0 + (a + 1) % m_in});
            ++a;
        }
    }
}

void push_ring(std::vector< Vec2 >& verts, double r, int m)
{
    for (int j = 0; j < m; ++j)
    {
        const double theta = two_pi * j / m;
        verts.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
}

double arc_param_value(const Mesh2D& mesh, const BoundaryEdge& e, ArcParam p)
{
    const Vec2 m = mesh.edge_midpoint(e.v[0], e.v[1]);
    switch (p)
    {
    case ArcParam::X:
        return m.x;
    case ArcParam::Y:
        return m.y;
    case ArcParam::Angle:
    {
        double a = std::atan2(m.y, m.x);
        if (a < 0.0)
            a += two_pi;
        return a;
    }
    }
    return 0.0;
}

struct UnionFind
{
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x)
        {
            parent[x] = parent[parent[x]];
            x         = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
    std::vector< int > parent;
};

} // namespace

std::string_view to_string(BoundaryTag tag)
{
    switch (tag)
    {
    case BoundaryTag::Steklov:
        return "steklov";
    case BoundaryTag::Neumann:
        return "neumann";
    case BoundaryTag::Dirichlet:
        return "dirichlet";
    }
    return "unknown";
}

BoundaryTag parse_boundary_tag(std::string_view text)
{
    if (text == "steklov" || text == "S")
        return BoundaryTag::Steklov;
    if (text == "neumann" || text == "N")
        return BoundaryTag::Neumann;
    if (text == "dirichlet" || text == "D")
        return BoundaryTag::Dirichlet;
    throw ParameterError(fmt::format("unknown boundary tag '{}'", text));
}

Vec2 Mesh2D::delta(int from, int to) const
{
    Vec2 d = vertices[to] - vertices[from];
    if (period_x > 0.0)
        d.x -= period_x * std::round(d.x / period_x);
    return d;
}

std::array< Vec2, 3 > Mesh2D::triangle_points(int t) const
{
    const auto& tri = triangles[t];
    const Vec2  p0  = vertices[tri[0]];
    return {p0, p0 + delta(tri[0], tri[1]), p0 + delta(tri[0], tri[2])};
}

double Mesh2D::signed_area(int t) const
{
    const auto& tri = triangles[t];
    return 0.5 * cross(delta(tri[0], tri[1]), delta(tri[0], tri[2]));
}

Vec2 Mesh2D::edge_midpoint(int a, int b) const
{
    Vec2 m = vertices[a] + 0.5 * delta(a, b);
    m.x    = wrap_periodic(m.x, period_x);
    return m;
}

Vec2 Mesh2D::centroid(int t) const
{
    const auto p = triangle_points(t);
    Vec2       c = (1.0 / 3.0) * (p[0] + p[1] + p[2]);
    c.x          = wrap_periodic(c.x, period_x);
    return c;
}

SurfaceTopology SurfaceTopology::non_orientable(int euler_characteristic, int boundary_components)
{
    SurfaceTopology t;
    t.orientable          = false;
    t.genus               = 0;
    t.boundary_components = boundary_components;
    t.p_invariant         = 1 - euler_characteristic - boundary_components;
    return t;
}

int SurfaceTopology::euler_characteristic() const
{
    if (orientable)
        return 2 - 2 * genus - boundary_components;
    return 1 - p_invariant - boundary_components;
}

void SurfaceTopology::validate() const
{
    if (genus < 0)
        throw ValidationError("genus must be nonnegative");
    if (boundary_components < 1)
        throw ValidationError("a surface with boundary needs at least one boundary component");
    if (orientable && p_invariant != 0)
        throw ValidationError("p invariant is only defined for non-orientable surfaces");
    if (!orientable && p_invariant < 0)
        throw ValidationError("a non-orientable surface has p = 1 - chi - l >= 0");
}

Mesh2D make_disk_mesh(double radius, double target_h)
{
    if (!(radius > 0.0) || !(target_h > 0.0) || !(target_h < radius))
        throw ParameterError(fmt::format("disk mesh needs radius > 0 and 0 < h < radius (got {}, {})", radius, target_h));
    const int n = intervals_for(radius, target_h);

    Mesh2D mesh;
    mesh.vertices.push_back({0.0, 0.0});
    std::vector< int > ring_start{0};
    for (int i = 1; i <= n; ++i)
    {
        ring_start.push_back(static_cast< int >(mesh.vertices.size()));
        push_ring(mesh.vertices, radius * i / n, 6 * i);
    }
    for (int j = 0; j < 6; ++j)
        mesh.triangles.push_back({0, ring_start[1] + j, ring_start[1] + (j + 1) % 6});
    for (int i = 2; i <= n; ++i)
        stitch_rings(ring_start[i - 1], 6 * (i - 1), ring_start[i], 6 * i, mesh.triangles);

    const int m = 6 * n;
    for (int j = 0; j < m; ++j)
        mesh.boundary_edges.push_back({{ring_start[n] + j, ring_start[n] + (j + 1) % m}, BoundaryTag::Steklov, 1.0});
    mesh.tri_weight.assign(mesh.triangles.size(), 1.0);
    return mesh;
}

Mesh2D make_graded_disk_mesh(double radius, double target_h, double boundary_h, double growth)
{
    if (!(radius > 0.0) || !(target_h > 0.0) || !(target_h < radius / 4.0))
        throw ParameterError(fmt::format("graded disk needs radius > 0 and 0 < h < radius / 4 (got {}, {})", radius, target_h));
    if (!(boundary_h > 0.0) || boundary_h > target_h || !(growth > 1.0))
        throw ParameterError("graded disk needs 0 < boundary_h <= h and growth > 1");

    // layer offsets from the circle: boundary_h, boundary_h (1 + growth), ... until a step reaches h
    std::vector< double > depth{0.0};
    for (double d = boundary_h; d < target_h; d *= growth)
        depth.push_back(depth.back() + d);
    const double core = radius - depth.back();
    if (!(core > 2.0 * target_h))
        throw ParameterError("boundary layers leave no room for the core disk");

    const int m  = intervals_for(two_pi * radius, target_h);
    const int nc = intervals_for(core, target_h);

    Mesh2D mesh;
    mesh.vertices.push_back({0.0, 0.0});
    std::vector< int > start{0}, count{1};
    for (int i = 1; i <= nc; ++i)
    {
        start.push_back(static_cast< int >(mesh.vertices.size()));
        count.push_back(6 * i);
        push_ring(mesh.vertices, core * i / nc, 6 * i);
    }
    for (int j = 0; j < 6; ++j)
        mesh.triangles.push_back({0, start[1] + j, start[1] + (j + 1) % 6});
    for (int i = 2; i <= nc; ++i)
        stitch_rings(start[i - 1], count[i - 1], start[i], count[i], mesh.triangles);
    for (std::size_t l = depth.size() - 1; l-- > 0;)
    {
        start.push_back(static_cast< int >(mesh.vertices.size()));
        count.push_back(m);
        push_ring(mesh.vertices, radius - depth[l], m);
        const std::size_t i = start.size() - 1;
        stitch_rings(start[i - 1], count[i - 1], start[i], count[i], mesh.triangles);
    }

    for (int j = 0; j < m; ++j)
        mesh.boundary_edges.push_back({{start.back() + j, start.back() + (j + 1) % m}, BoundaryTag::Steklov, 1.0});
    mesh.tri_weight.assign(mesh.triangles.size(), 1.0);
    return mesh;
}

Mesh2D make_annulus_mesh(double inner_radius, double outer_radius, double target_h)
{
    if (!(inner_radius > 0.0) || !(outer_radius > inner_radius) || !(target_h > 0.0) ||
        !(target_h < outer_radius - inner_radius))
        throw ParameterError("annulus mesh needs 0 < r_in < r_out and 0 < h < r_out - r_in");
    const int n = intervals_for(outer_radius - inner_radius, target_h);

    Mesh2D             mesh;
    std::vector< int > start;
    std::vector< int > count;
    for (int i = 0; i <= n; ++i)
    {
        const double r = inner_radius + (outer_radius - inner_radius) * i / n;
        const int    m = std::max(6, intervals_for(two_pi * r, target_h));
        start.push_back(static_cast< int >(mesh.vertices.size()));
        count.push_back(m);
        push_ring(mesh.vertices, r, m);
    }
    for (int i = 1; i <= n; ++i)
        stitch_rings(start[i - 1], count[i - 1], start[i], count[i], mesh.triangles);

    for (int j = 0; j < count[n]; ++j)
        mesh.boundary_edges.push_back({{start[n] + j, start[n] + (j + 1) % count[n]}, BoundaryTag::Steklov, 1.0});
    for (int j = 0; j < count[0]; ++j)
        mesh.boundary_edges.push_back({{start[0] + (j + 1) % count[0], start[0] + j}, BoundaryTag::Steklov, 1.0});
    mesh.tri_weight.assign(mesh.triangles.size(), 1.0);
    return mesh;
}

Mesh2D make_strip_mesh(double length, double width, double target_h, bool periodic, const StripTags& tags)
{
    if (!(length > 0.0) || !(width > 0.0) || !(target_h > 0.0))
        throw ParameterError("strip mesh needs positive length, width and h");
    if (target_h >= std::min(length, width))
        throw ParameterError(
            fmt::format("strip mesh needs h < min(L, w) (got h = {}, L = {}, w = {})", target_h, length, width));
    return make_strip_mesh(length, width, intervals_for(length, target_h), intervals_for(width, target_h), periodic, tags);
}

Mesh2D make_strip_mesh(double length, double width, int nx, int ny, bool periodic, const StripTags& tags)
{
    if (!(length > 0.0) || !(width > 0.0) || ny < 1 || nx < (periodic ? 3 : 1))
        throw ParameterError("strip mesh needs positive extents, ny >= 1 and nx >= 1 (3 when periodic)");
    const int cols = periodic ? nx : nx + 1;
    auto      id   = [&](int i, int j) { return j * cols + (periodic ? i % nx : i); };

    Mesh2D mesh;
    mesh.period_x = periodic ? length : 0.0;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < cols; ++i)
            mesh.vertices.push_back({length * i / nx, width * j / ny});

    for (int j = 0; j < ny; ++j)
    {
        const bool rising = 2 * j + 1 <= ny;
        for (int i = 0; i < nx; ++i)
        {
            const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
            if (rising)
            {
                mesh.triangles.push_back({v00, v10, v11});
                mesh.triangles.push_back({v00, v11, v01});
            }
            else
            {
                mesh.triangles.push_back({v00, v10, v01});
                mesh.triangles.push_back({v10, v11, v01});
            }
        }
    }

    for (int i = 0; i < nx; ++i)
        mesh.boundary_edges.push_back({{id(i, 0), id(i + 1, 0)}, tags.bottom, 1.0});
    for (int i = 0; i < nx; ++i)
        mesh.boundary_edges.push_back({{id(i + 1, ny), id(i, ny)}, tags.top, 1.0});
    if (!periodic)
    {
        for (int j = 0; j < ny; ++j)
            mesh.boundary_edges.push_back({{id(nx, j), id(nx, j + 1)}, tags.right, 1.0});
        for (int j = 0; j < ny; ++j)
            mesh.boundary_edges.push_back({{id(0, j + 1), id(0, j)}, tags.left, 1.0});
    }
    mesh.tri_weight.assign(mesh.triangles.size(), 1.0);
    return mesh;
}

Mesh2D tag_boundary(const Mesh2D& mesh, std::span< const ArcTag > arcs)
{
    for (std::size_t a = 0; a < arcs.size(); ++a)
    {
        if (!(arcs[a].lo < arcs[a].hi))
            throw ParameterError(fmt::format("arc {} is empty: [{}, {})", a, arcs[a].lo, arcs[a].hi));
        for (std::size_t b = 0; b < a; ++b)
            if (arcs[a].param == arcs[b].param && arcs[a].lo < arcs[b].hi && arcs[b].lo < arcs[a].hi)
                throw TaggingError(fmt::format("arcs {} and {} overlap", b, a));
    }

    Mesh2D out = mesh;
    for (auto& e : out.boundary_edges)
    {
        int hits = 0;
        for (const auto& arc : arcs)
        {
            const double v = arc_param_value(mesh, e, arc.param);
            if (v >= arc.lo && v < arc.hi)
            {
                e.tag = arc.tag;
                ++hits;
            }
        }
        if (hits > 1)
            throw TaggingError(fmt::format("boundary edge ({}, {}) selected by {} arcs", e.v[0], e.v[1], hits));
    }
    if (std::none_of(out.boundary_edges.begin(), out.boundary_edges.end(),
                     [](const BoundaryEdge& e) { return e.tag == BoundaryTag::Steklov; }))
        throw ValidationError("tagging left no Steklov boundary");
    return out;
}

Mesh2D refine(const Mesh2D& mesh)
{
    Mesh2D out;
    out.period_x = mesh.period_x;
    out.vertices = mesh.vertices;

    std::unordered_map< std::uint64_t, int > midpoint;
    auto mid = [&](int a, int b) {
        const auto key = edge_key(a, b);
        if (auto it = midpoint.find(key); it != midpoint.end())
            return it->second;
        const int id = static_cast< int >(out.vertices.size());
        out.vertices.push_back(mesh.edge_midpoint(a, b));
        midpoint.emplace(key, id);
        return id;
    };

    out.triangles.reserve(4 * mesh.triangles.size());
    out.tri_weight.reserve(4 * mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    {
        const auto [a, b, c] = mesh.triangles[t];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        out.triangles.push_back({a, ab, ca});
        out.triangles.push_back({ab, b, bc});
        out.triangles.push_back({ca, bc, c});
        out.triangles.push_back({ab, bc, ca});
        for (int k = 0; k < 4; ++k)
            out.tri_weight.push_back(mesh.tri_weight[t]);
    }
    for (const auto& e : mesh.boundary_edges)
    {
        const int m = mid(e.v[0], e.v[1]);
        out.boundary_edges.push_back({{e.v[0], m}, e.tag, e.density});
        out.boundary_edges.push_back({{m, e.v[1]}, e.tag, e.density});
    }
    return out;
}

void validate(const Mesh2D& mesh)
{
    const auto nv = static_cast< int >(mesh.vertices.size());
    if (mesh.tri_weight.size() != mesh.triangles.size())
        throw ValidationError("tri_weight size differs from triangle count");
    if (mesh.triangles.empty())
        throw ValidationError("mesh has no triangles");

    std::vector< bool >                      used(mesh.vertices.size(), false);
    std::unordered_map< std::uint64_t, int > edge_count;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    {
        for (int v : mesh.triangles[t])
        {
            if (v < 0 || v >= nv)
                throw ValidationError(fmt::format("triangle {} references vertex {} out of range", t, v));
            used[v] = true;
        }
        if (!(mesh.signed_area(static_cast< int >(t)) > 0.0))
            throw ValidationError(fmt::format("triangle {} has non-positive signed area", t));
        if (!(mesh.tri_weight[t] > 0.0))
            throw ValidationError(fmt::format("triangle {} has non-positive weight", t));
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k)
            ++edge_count[edge_key(tri[k], tri[(k + 1) % 3])];
    }
    for (int v = 0; v < nv; ++v)
        if (!used[v])
            throw ValidationError(fmt::format("vertex {} belongs to no triangle", v));

    std::unordered_map< std::uint64_t, int > listed;
    std::vector< int >                       out_degree(mesh.vertices.size(), 0);
    std::vector< int >                       in_degree(mesh.vertices.size(), 0);
    for (const auto& e : mesh.boundary_edges)
    {
        if (!(e.density > 0.0))
            throw ValidationError(fmt::format("boundary edge ({}, {}) has non-positive density", e.v[0], e.v[1]));
        const auto key = edge_key(e.v[0], e.v[1]);
        auto       it  = edge_count.find(key);
        if (it == edge_count.end() || it->second != 1)
            throw ValidationError(fmt::format("boundary edge ({}, {}) does not belong to exactly one triangle", e.v[0], e.v[1]));
        if (++listed[key] > 1)
            throw ValidationError(fmt::format("boundary edge ({}, {}) listed twice", e.v[0], e.v[1]));
        ++out_degree[e.v[0]];
        ++in_degree[e.v[1]];
    }
    for (const auto& [key, count] : edge_count)
    {
        if (count > 2)
            throw ValidationError("an edge is shared by more than two triangles");
        if (count == 1 && !listed.contains(key))
            throw ValidationError(fmt::format("edge ({}, {}) lies on the boundary but is not listed", key >> 32U,
                                              key & 0xffffffffULL));
    }
    for (int v = 0; v < nv; ++v)
        if (out_degree[v] != in_degree[v])
            throw ValidationError(fmt::format("boundary is not a union of closed curves at vertex {}", v));
}

Submesh extract_submesh(const Mesh2D& mesh, const std::vector< bool >& keep, BoundaryTag cut_tag)
{
    if (keep.size() != mesh.triangles.size())
        throw ParameterError("submesh mask size differs from triangle count");

    Submesh            out;
    std::vector< int > new_id(mesh.vertices.size(), -1);
    out.mesh.period_x = mesh.period_x;
    std::unordered_map< std::uint64_t, int > count;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    {
        if (!keep[t])
            continue;
        std::array< int, 3 > tri{};
        for (int k = 0; k < 3; ++k)
        {
            const int v = mesh.triangles[t][k];
            if (new_id[v] < 0)
            {
                new_id[v] = static_cast< int >(out.mesh.vertices.size());
                out.mesh.vertices.push_back(mesh.vertices[v]);
                out.parent_vertex.push_back(v);
            }
            tri[k] = new_id[v];
            ++count[edge_key(mesh.triangles[t][k], mesh.triangles[t][(k + 1) % 3])];
        }
        out.mesh.triangles.push_back(tri);
        out.mesh.tri_weight.push_back(mesh.tri_weight[t]);
    }
    if (out.mesh.triangles.empty())
        throw ParameterError("submesh selection is empty");

    std::unordered_map< std::uint64_t, const BoundaryEdge* > parent_edge;
    for (const auto& e : mesh.boundary_edges)
        parent_edge.emplace(edge_key(e.v[0], e.v[1]), &e);

    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    {
        if (!keep[t])
            continue;
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k)
        {
            const int a = tri[k], b = tri[(k + 1) % 3];
            if (count[edge_key(a, b)] != 1)
                continue;
            BoundaryEdge e{{new_id[a], new_id[b]}, cut_tag, 1.0};
            if (auto it = parent_edge.find(edge_key(a, b)); it != parent_edge.end())
            {
                e.tag     = it->second->tag;
                e.density = it->second->density;
            }
            out.mesh.boundary_edges.push_back(e);
        }
    }
    return out;
}

double total_area(const Mesh2D& mesh)
{
    double a = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        a += mesh.signed_area(static_cast< int >(t));
    return a;
}

double boundary_length(const Mesh2D& mesh, BoundaryTag tag)
{
    double l = 0.0;
    for (const auto& e : mesh.boundary_edges)
        if (e.tag == tag)
            l += mesh.edge_length(e.v[0], e.v[1]);
    return l;
}

double max_edge_length(const Mesh2D& mesh)
{
    double h = 0.0;
    for (const auto& tri : mesh.triangles)
        for (int k = 0; k < 3; ++k)
            h = std::max(h, mesh.edge_length(tri[k], tri[(k + 1) % 3]));
    return h;
}

int euler_characteristic(const Mesh2D& mesh)
{
    std::unordered_map< std::uint64_t, int > edges;
    for (const auto& tri : mesh.triangles)
        for (int k = 0; k < 3; ++k)
            edges.emplace(edge_key(tri[k], tri[(k + 1) % 3]), 0);
    return static_cast< int >(mesh.vertices.size()) - static_cast< int >(edges.size()) +
           static_cast< int >(mesh.triangles.size());
}

std::vector< std::vector< int > > boundary_loops(const Mesh2D& mesh)
{
    std::unordered_map< int, int > outgoing;
    for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i)
        outgoing.emplace(mesh.boundary_edges[i].v[0], static_cast< int >(i));

    std::vector< bool >               seen(mesh.boundary_edges.size(), false);
    std::vector< std::vector< int > > loops;
    for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i)
    {
        if (seen[i])
            continue;
        std::vector< int > loop;
        int                cur = static_cast< int >(i);
        while (!seen[cur])
        {
            seen[cur] = true;
            loop.push_back(cur);
            auto it = outgoing.find(mesh.boundary_edges[cur].v[1]);
            if (it == outgoing.end())
                throw ValidationError("open boundary curve");
            cur = it->second;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector< int > boundary_component_of_edge(const Mesh2D& mesh)
{
    std::vector< int > comp(mesh.boundary_edges.size(), -1);
    const auto         loops = boundary_loops(mesh);
    for (std::size_t c = 0; c < loops.size(); ++c)
        for (int e : loops[c])
            comp[e] = static_cast< int >(c);
    return comp;
}

int count_boundary_polylines(const Mesh2D& mesh, double corner_angle)
{
    int total = 0;
    for (const auto& loop : boundary_loops(mesh))
    {
        int breaks = 0;
        for (std::size_t k = 0; k < loop.size(); ++k)
        {
            const auto& prev = mesh.boundary_edges[loop[k]];
            const auto& next = mesh.boundary_edges[loop[(k + 1) % loop.size()]];
            const Vec2  d0   = mesh.delta(prev.v[0], prev.v[1]);
            const Vec2  d1   = mesh.delta(next.v[0], next.v[1]);
            const double turn = std::atan2(cross(d0, d1), dot(d0, d1));
            if (std::abs(turn) > corner_angle || prev.tag != next.tag)
                ++breaks;
        }
        total += std::max(1, breaks);
    }
    return total;
}

std::vector< std::vector< int > > steklov_components(const Mesh2D& mesh)
{
    UnionFind           uf(mesh.vertices.size());
    std::vector< bool > on(mesh.vertices.size(), false);
    for (const auto& e : mesh.boundary_edges)
    {
        if (e.tag != BoundaryTag::Steklov)
            continue;
        uf.unite(e.v[0], e.v[1]);
        on[e.v[0]] = on[e.v[1]] = true;
    }
    std::map< int, std::vector< int > > groups;
    for (std::size_t v = 0; v < on.size(); ++v)
        if (on[v])
            groups[uf.find(static_cast< int >(v))].push_back(static_cast< int >(v));
    std::vector< std::vector< int > > out;
    for (auto& [root, verts] : groups)
        out.push_back(std::move(verts));
    std::sort(out.begin(), out.end());
    return out;
}

Mesh2D scaled(const Mesh2D& mesh, double factor)
{
    if (!(factor > 0.0))
        throw ParameterError("scale factor must be positive");
    Mesh2D out = mesh;
    for (auto& v : out.vertices)
        v = factor * v;
    out.period_x *= factor;
    return out;
}

Mesh2D with_edge_density(const Mesh2D& mesh, const std::function< double(Vec2) >& density)
{
    Mesh2D out = mesh;
    for (auto& e : out.boundary_edges)
    {
        if (e.tag != BoundaryTag::Steklov)
            continue;
        e.density = density(mesh.edge_midpoint(e.v[0], e.v[1]));
        if (!(e.density > 0.0))
            throw ParameterError("edge density must be positive");
    }
    return out;
}

std::uint64_t content_hash(const Mesh2D& mesh)
{
    Fnv1a h;
    h.text("steklov-mesh");
    h.value(mesh.period_x);
    h.value(static_cast< std::uint64_t >(mesh.vertices.size()));
    for (const auto& v : mesh.vertices)
    {
        h.value(v.x);
        h.value(v.y);
    }
    h.value(static_cast< std::uint64_t >(mesh.triangles.size()));
    for (const auto& t : mesh.triangles)
        for (int v : t)
            h.value(static_cast< std::int32_t >(v));
    h.value(static_cast< std::uint64_t >(mesh.boundary_edges.size()));
    for (const auto& e : mesh.boundary_edges)
    {
        h.value(static_cast< std::int32_t >(e.v[0]));
        h.value(static_cast< std::int32_t >(e.v[1]));
        h.value(static_cast< std::uint8_t >(e.tag));
        h.value(e.density);
    }
    for (double w : mesh.tri_weight)
        h.value(w);
    return h.digest();
}

} // namespace steklov

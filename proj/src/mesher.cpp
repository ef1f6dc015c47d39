#include "steklov/mesher.hpp"

#include "steklov/error.hpp"
#include "steklov/hash.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/multi/geometries/multi_polygon.hpp>
#include <boost/polygon/voronoi.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

namespace steklov
{
namespace bg = boost::geometry;

namespace
{
using BgPoint   = bg::model::d2::point_xy< double >;
using BgPolygon = bg::model::polygon< BgPoint, false, true >;   // counterclockwise, closed
using BgMulti   = bg::model::multi_polygon< BgPolygon >;

constexpr double kCornerTurn = 0.35;   // radians; sharper ring vertices survive resampling

std::uint64_t edge_key(int a, int b)
{
    if (a > b)
        std::swap(a, b);
    return (static_cast< std::uint64_t >(a) << 32U) | static_cast< std::uint32_t >(b);
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2   d  = b - a;
    const double dd = dot(d, d);
    const double t  = dd > 0.0 ? std::clamp(dot(p - a, d) / dd, 0.0, 1.0) : 0.0;
    return norm(p - (a + t * d));
}

BgPolygon to_bg(const std::vector< Vec2 >& pts)
{
    BgPolygon poly;
    for (const auto& p : pts)
        bg::append(poly.outer(), BgPoint(p.x, p.y));
    bg::append(poly.outer(), BgPoint(pts.front().x, pts.front().y));
    bg::correct(poly);
    return poly;
}

std::vector< Vec2 > from_ring(const BgPolygon::ring_type& ring, double merge_tol)
{
    std::vector< Vec2 > out;
    for (const auto& p : ring)
    {
        const Vec2 v{p.x(), p.y()};
        if (out.empty() || norm(v - out.back()) > merge_tol)
            out.push_back(v);
    }
    while (out.size() > 1 && norm(out.front() - out.back()) <= merge_tol)
        out.pop_back();
    return out;
}

/// Resamples a closed ring: sharp vertices and requested corners stay, the smooth runs between
/// them are redistributed by arclength at spacing <= h.
std::vector< Vec2 > resample_ring(const std::vector< Vec2 >& ring, const std::vector< Vec2 >& corners, double h,
                                  double tol)
{
    const std::size_t   n = ring.size();
    std::vector< bool > keep(n, false);
    for (std::size_t i = 0; i < n; ++i)
    {
        const Vec2   a    = ring[(i + n - 1) % n], p = ring[i], b = ring[(i + 1) % n];
        const Vec2   u    = p - a, v = b - p;
        const double turn = std::atan2(std::abs(cross(u, v)), dot(u, v));
        keep[i]           = turn > kCornerTurn;
        for (const auto& c : corners)
            if (norm(p - c) <= tol)
                keep[i] = true;
    }
    std::size_t first = 0;
    while (first < n && !keep[first])
        ++first;
    if (first == n)
    {
        // smooth closed curve: anchor at vertex 0
        first   = 0;
        keep[0] = true;
    }

    std::vector< Vec2 > out;
    std::size_t         i = first;
    do
    {
        // gather the run from kept vertex i to the next kept vertex
        std::vector< Vec2 > run{ring[i]};
        std::size_t         j = (i + 1) % n;
        while (!keep[j])
        {
            run.push_back(ring[j]);
            j = (j + 1) % n;
        }
        run.push_back(ring[j]);
        std::vector< double > s{0.0};
        for (std::size_t k = 1; k < run.size(); ++k)
            s.push_back(s.back() + norm(run[k] - run[k - 1]));
        const int pieces = std::max(1, static_cast< int >(std::ceil(s.back() / h - 1e-9)));
        out.push_back(run.front());
        std::size_t seg = 1;
        for (int q = 1; q < pieces; ++q)
        {
            const double target = s.back() * q / pieces;
            while (seg + 1 < s.size() && s[seg] < target)
                ++seg;
            const double t = (target - s[seg - 1]) / std::max(s[seg] - s[seg - 1], 1e-300);
            out.push_back(run[seg - 1] + t * (run[seg] - run[seg - 1]));
        }
        i = j;
    } while (i != first);
    return out;
}

/// Uniform bucket grid over boundary segments for near-boundary queries.
class SegmentGrid
{
public:
    SegmentGrid(const std::vector< std::array< Vec2, 2 > >& segs, Vec2 lo, double cell)
        : m_segs(segs), m_lo(lo), m_cell(cell)
    {
        for (std::size_t i = 0; i < segs.size(); ++i)
        {
            const auto [x0, y0] = key(Vec2{std::min(segs[i][0].x, segs[i][1].x), std::min(segs[i][0].y, segs[i][1].y)});
            const auto [x1, y1] = key(Vec2{std::max(segs[i][0].x, segs[i][1].x), std::max(segs[i][0].y, segs[i][1].y)});
            for (long x = x0; x <= x1; ++x)
                for (long y = y0; y <= y1; ++y)
                    m_cells[pack(x, y)].push_back(static_cast< int >(i));
        }
    }

    /// True when some segment lies closer than r (r <= cell) to p.
    [[nodiscard]] bool near(Vec2 p, double r) const
    {
        const auto [cx, cy] = key(p);
        for (long x = cx - 1; x <= cx + 1; ++x)
            for (long y = cy - 1; y <= cy + 1; ++y)
            {
                auto it = m_cells.find(pack(x, y));
                if (it == m_cells.end())
                    continue;
                for (int s : it->second)
                    if (segment_distance(p, m_segs[s][0], m_segs[s][1]) < r)
                        return true;
            }
        return false;
    }

private:
    [[nodiscard]] std::pair< long, long > key(Vec2 p) const
    {
        return {static_cast< long >(std::floor((p.x - m_lo.x) / m_cell)),
                static_cast< long >(std::floor((p.y - m_lo.y) / m_cell))};
    }
    static std::uint64_t pack(long x, long y)
    {
        return (static_cast< std::uint64_t >(static_cast< std::uint32_t >(x)) << 32U) |
               static_cast< std::uint32_t >(y);
    }

    const std::vector< std::array< Vec2, 2 > >&               m_segs;
    Vec2                                                      m_lo;
    double                                                    m_cell;
    std::unordered_map< std::uint64_t, std::vector< int > >   m_cells;
};

/// Deterministic jitter in [-1, 1] from lattice indices.
double jitter(long i, long j, int salt)
{
    Fnv1a h;
    h.value(i);
    h.value(j);
    h.value(salt);
    return static_cast< double >(h.digest() >> 11) * 0x1.0p-52 - 1.0;
}

/// Delaunay triangles (counterclockwise, by index) of distinct points, via the Voronoi dual.
std::vector< std::array< int, 3 > > delaunay(const std::vector< Vec2 >& pts)
{
    double xmin = pts[0].x, xmax = xmin, ymin = pts[0].y, ymax = ymin;
    for (const auto& p : pts)
    {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double scale = std::ldexp(1.0, 29) / std::max(xmax - xmin, ymax - ymin);
    std::vector< boost::polygon::point_data< int > > ipts;
    ipts.reserve(pts.size());
    for (const auto& p : pts)
        ipts.emplace_back(static_cast< int >(std::llround((p.x - xmin) * scale)),
                          static_cast< int >(std::llround((p.y - ymin) * scale)));

    boost::polygon::voronoi_diagram< double > vd;
    boost::polygon::construct_voronoi(ipts.begin(), ipts.end(), &vd);

    std::vector< std::array< int, 3 > > tris;
    std::vector< int >                  ring;
    const auto orient = [&](int a, int b, int c) {
        // exact in 64-bit integers: coordinates < 2^30
        const std::int64_t ax = ipts[a].x(), ay = ipts[a].y();
        return (static_cast< std::int64_t >(ipts[b].x()) - ax) * (static_cast< std::int64_t >(ipts[c].y()) - ay) -
               (static_cast< std::int64_t >(ipts[b].y()) - ay) * (static_cast< std::int64_t >(ipts[c].x()) - ax);
    };
    for (const auto& v : vd.vertices())
    {
        ring.clear();
        const auto* e = v.incident_edge();
        do
        {
            ring.push_back(static_cast< int >(e->cell()->source_index()));
            e = e->rot_next();
        } while (e != v.incident_edge());
        for (std::size_t k = 1; k + 1 < ring.size(); ++k)
        {
            std::array< int, 3 > t{ring[0], ring[k], ring[k + 1]};
            const auto           o = orient(t[0], t[1], t[2]);
            if (o == 0)
                continue;
            if (o < 0)
                std::swap(t[1], t[2]);
            tris.push_back(t);
        }
    }
    return tris;
}

} // namespace

std::vector< Vec2 > half_disk_polygon(Vec2 center, Vec2 normal, double radius, double h)
{
    if (!(radius > 0.0) || !(h > 0.0))
        throw ParameterError("half-disk needs positive radius and h");
    const double nn = norm(normal);
    if (!(nn > 0.0))
        throw ParameterError("half-disk normal must be nonzero");
    const Vec2 nu{normal.x / nn, normal.y / nn};
    const Vec2 tau{nu.y, -nu.x};   // diameter direction; tau, nu positively oriented
    const int  n_arc = std::max(16, static_cast< int >(std::ceil(std::numbers::pi * radius / h)));
    const int  n_dia = std::max(2, static_cast< int >(std::ceil(2.0 * radius / h)));
    std::vector< Vec2 > out;
    for (int i = 0; i < n_dia; ++i)
        out.push_back(center + (-radius + 2.0 * radius * i / n_dia) * tau);
    for (int i = 0; i < n_arc; ++i)
    {
        const double a = std::numbers::pi * i / n_arc;
        out.push_back(center + radius * std::cos(a) * tau + radius * std::sin(a) * nu);
    }
    return out;
}

Mesh2D mesh_region(const PlanarRegion& region, double h)
{
    if (!(h > 0.0))
        throw ParameterError("mesh size must be positive");
    if (region.parts.empty())
        throw ParameterError("region has no parts");

    std::vector< BgPolygon > parts;
    for (const auto& p : region.parts)
    {
        if (p.size() < 3)
            throw ParameterError("region part has fewer than three vertices");
        parts.push_back(to_bg(p));
    }
    BgMulti unite;
    for (const auto& p : parts)
    {
        BgMulti next;
        bg::union_(unite, p, next);
        unite = std::move(next);
    }
    bg::model::box< BgPoint > box;
    bg::envelope(unite, box);
    const Vec2   lo{box.min_corner().x(), box.min_corner().y()};
    const Vec2   hi{box.max_corner().x(), box.max_corner().y()};
    const double span = std::max(hi.x - lo.x, hi.y - lo.y);
    const double tol  = 1e-9 * span;

    std::vector< std::vector< Vec2 > > rings;
    for (const auto& poly : unite)
    {
        rings.push_back(resample_ring(from_ring(poly.outer(), 1e-7 * h), region.corners, h, 1e-7 * h));
        for (const auto& inner : poly.inners())
            rings.push_back(resample_ring(from_ring(inner, 1e-7 * h), region.corners, h, 1e-7 * h));
    }

    const auto inside = [&](Vec2 p) {
        const BgPoint q(p.x, p.y);
        return bg::within(q, unite);
    };

    for (int round = 0; round < 12; ++round)
    {
        // boundary points and segments
        std::vector< Vec2 >                  pts;
        std::vector< std::array< int, 2 > >  bsegs;
        std::vector< std::array< Vec2, 2 > > bgeom;
        for (const auto& r : rings)
        {
            const int base = static_cast< int >(pts.size());
            const int m    = static_cast< int >(r.size());
            for (int i = 0; i < m; ++i)
            {
                pts.push_back(r[i]);
                bsegs.push_back({base + i, base + (i + 1) % m});
                bgeom.push_back({r[i], r[(i + 1) % m]});
            }
        }
        const std::size_t n_boundary = pts.size();

        // interior hexagonal lattice, kept 0.6 h away from the boundary
        const SegmentGrid grid(bgeom, lo, h);
        const double      dy = h * std::sqrt(3.0) / 2.0;
        const long        nj = static_cast< long >(std::ceil((hi.y - lo.y) / dy)) + 1;
        const long        ni = static_cast< long >(std::ceil((hi.x - lo.x) / h)) + 1;
        for (long j = 0; j <= nj; ++j)
            for (long i = 0; i <= ni; ++i)
            {
                const Vec2 p{lo.x + (static_cast< double >(i) + (j % 2 ? 0.5 : 0.0) + 0.02 * jitter(i, j, 0)) * h,
                             lo.y + static_cast< double >(j) * dy + 0.02 * h * jitter(i, j, 1)};
                if (p.x <= lo.x || p.x >= hi.x || p.y <= lo.y || p.y >= hi.y)
                    continue;
                if (grid.near(p, 0.6 * h) || !inside(p))
                    continue;
                pts.push_back(p);
            }

        const auto tris = delaunay(pts);
        std::unordered_set< std::uint64_t > edges;
        for (const auto& t : tris)
            for (int k = 0; k < 3; ++k)
                edges.insert(edge_key(t[k], t[(k + 1) % 3]));

        // split boundary segments the triangulation missed, then retry
        bool                missing = false;
        std::vector< bool > seg_missing(bsegs.size(), false);
        for (std::size_t s = 0; s < bsegs.size(); ++s)
            if (!edges.contains(edge_key(bsegs[s][0], bsegs[s][1])))
            {
                seg_missing[s] = true;
                missing        = true;
            }
        if (missing)
        {
            std::size_t s = 0;
            for (auto& r : rings)
            {
                std::vector< Vec2 > next;
                for (std::size_t i = 0; i < r.size(); ++i, ++s)
                {
                    next.push_back(r[i]);
                    if (seg_missing[s])
                        next.push_back(0.5 * (r[i] + r[(i + 1) % r.size()]));
                }
                r = std::move(next);
            }
            continue;
        }

        // keep triangles inside the union; renumber used vertices
        Mesh2D             mesh;
        std::vector< int > id(pts.size(), -1);
        for (const auto& t : tris)
        {
            const Vec2 c = (1.0 / 3.0) * (pts[t[0]] + pts[t[1]] + pts[t[2]]);
            if (!inside(c))
                continue;
            std::array< int, 3 > tri{};
            for (int k = 0; k < 3; ++k)
            {
                if (id[t[k]] < 0)
                {
                    id[t[k]] = static_cast< int >(mesh.vertices.size());
                    mesh.vertices.push_back(pts[t[k]]);
                }
                tri[k] = id[t[k]];
            }
            mesh.triangles.push_back(tri);
            mesh.tri_weight.push_back(1.0);
        }
        for (std::size_t i = 0; i < n_boundary; ++i)
            if (id[i] < 0)
                throw GeometryError(fmt::format("boundary point ({}, {}) lost by the triangulation", pts[i].x, pts[i].y));

        std::unordered_map< std::uint64_t, int > count;
        for (const auto& t : mesh.triangles)
            for (int k = 0; k < 3; ++k)
                ++count[edge_key(t[k], t[(k + 1) % 3])];
        const auto on_steklov = [&](Vec2 p) {
            for (const auto& s : region.steklov_segments)
                if (segment_distance(p, s[0], s[1]) <= tol)
                    return true;
            return false;
        };
        for (const auto& t : mesh.triangles)
            for (int k = 0; k < 3; ++k)
            {
                const int a = t[k], b = t[(k + 1) % 3];
                if (count[edge_key(a, b)] != 1)
                    continue;
                const Vec2 pa = mesh.vertices[a], pb = mesh.vertices[b];
                const bool s  = on_steklov(pa) && on_steklov(pb) && on_steklov(0.5 * (pa + pb));
                mesh.boundary_edges.push_back({{a, b}, s ? BoundaryTag::Steklov : BoundaryTag::Neumann, 1.0});
            }
        if (mesh.boundary_edges.size() != bsegs.size())
            throw GeometryError(fmt::format("triangulated boundary has {} edges, expected {}",
                                            mesh.boundary_edges.size(), bsegs.size()));
        validate(mesh);
        return mesh;
    }
    throw GeometryError("boundary recovery did not converge; try a smaller mesh size");
}

} // namespace steklov

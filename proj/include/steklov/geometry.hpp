#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace steklov
{
struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2   operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2   operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2   operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2   operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr bool   operator==(Vec2 a, Vec2 b) = default;
    friend constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
    friend constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
    friend double           norm(Vec2 a) { return std::hypot(a.x, a.y); }
};

enum class BoundaryTag : std::uint8_t
{
    Steklov,
    Neumann,
    Dirichlet,
};

std::string_view to_string(BoundaryTag tag);
BoundaryTag      parse_boundary_tag(std::string_view text);

struct BoundaryEdge
{
    std::array< int, 2 > v{};   // oriented as in the owning triangle (domain on the left)
    BoundaryTag          tag     = BoundaryTag::Steklov;
    double               density = 1.0;
};

/// Planar P1 triangulation with tagged boundary.
///
/// When `period_x > 0` the x coordinate is periodic: vertices live in [0, period_x) and every
/// geometric query unwraps edge vectors to the nearest image, which turns a rectangle into a
/// flat cylinder.
struct Mesh2D
{
    std::vector< Vec2 >                 vertices;
    std::vector< std::array< int, 3 > > triangles;
    std::vector< BoundaryEdge >         boundary_edges;
    std::vector< double >               tri_weight;
    double                              period_x = 0.0;

    [[nodiscard]] Vec2                  delta(int from, int to) const;
    [[nodiscard]] std::array< Vec2, 3 > triangle_points(int t) const;
    [[nodiscard]] double                signed_area(int t) const;
    [[nodiscard]] double                edge_length(int a, int b) const { return norm(delta(a, b)); }
    [[nodiscard]] Vec2                  edge_midpoint(int a, int b) const;
    [[nodiscard]] Vec2                  centroid(int t) const;
    [[nodiscard]] std::size_t           num_vertices() const { return vertices.size(); }
    [[nodiscard]] std::size_t           num_triangles() const { return triangles.size(); }
};

struct SurfaceTopology
{
    bool orientable          = true;
    int  genus               = 0;
    int  boundary_components = 1;
    int  p_invariant         = 0;

    [[nodiscard]] static SurfaceTopology disk() { return {true, 0, 1, 0}; }
    [[nodiscard]] static SurfaceTopology annulus() { return {true, 0, 2, 0}; }
    /// Non-orientable surface with Euler characteristic chi and l boundary components.
    [[nodiscard]] static SurfaceTopology non_orientable(int euler_characteristic, int boundary_components);

    [[nodiscard]] int euler_characteristic() const;
    /// Throws ValidationError when the fields are mutually inconsistent.
    void validate() const;
};

Mesh2D make_disk_mesh(double radius, double target_h);
/// Disk with a core of spacing target_h and concentric boundary layers whose thickness grows from
/// boundary_h by `growth` until it reaches target_h. All layers share the boundary ring's vertex count.
Mesh2D make_graded_disk_mesh(double radius, double target_h, double boundary_h, double growth = 1.3);
Mesh2D make_annulus_mesh(double inner_radius, double outer_radius, double target_h);

struct StripTags
{
    BoundaryTag bottom = BoundaryTag::Steklov;
    BoundaryTag top    = BoundaryTag::Neumann;
    BoundaryTag left   = BoundaryTag::Neumann;
    BoundaryTag right  = BoundaryTag::Neumann;
};

/// Structured triangulation of [0,L]x[0,w]. Diagonals are mirrored about y = w/2, so the mesh is
/// reflection symmetric whenever the row count is even.
Mesh2D make_strip_mesh(double length, double width, double target_h, bool periodic, const StripTags& tags = {});
Mesh2D make_strip_mesh(double length, double width, int nx, int ny, bool periodic, const StripTags& tags = {});

enum class ArcParam : std::uint8_t
{
    Angle,   // polar angle of the edge midpoint in [0, 2pi)
    X,
    Y,
};

struct ArcTag
{
    ArcParam    param = ArcParam::Angle;
    double      lo    = 0.0;
    double      hi    = 0.0;   // half-open [lo, hi)
    BoundaryTag tag   = BoundaryTag::Steklov;
};

Mesh2D tag_boundary(const Mesh2D& mesh, std::span< const ArcTag > arcs);
Mesh2D refine(const Mesh2D& mesh);

/// Checks every structural invariant; throws ValidationError describing the first violation.
void validate(const Mesh2D& mesh);

/// Submesh made of the triangles selected by `keep`. Boundary edges inherited from the parent keep
/// their tag and density; new boundary edges (cuts) receive `cut_tag`.
struct Submesh
{
    Mesh2D             mesh;
    std::vector< int > parent_vertex;
};
Submesh extract_submesh(const Mesh2D& mesh, const std::vector< bool >& keep, BoundaryTag cut_tag = BoundaryTag::Neumann);

double total_area(const Mesh2D& mesh);
double boundary_length(const Mesh2D& mesh, BoundaryTag tag);
double max_edge_length(const Mesh2D& mesh);
int    euler_characteristic(const Mesh2D& mesh);

/// Boundary loops as ordered lists of boundary-edge indices.
std::vector< std::vector< int > > boundary_loops(const Mesh2D& mesh);
/// Component id (index into boundary_loops) for every boundary edge.
std::vector< int > boundary_component_of_edge(const Mesh2D& mesh);
/// Number of boundary polylines: loops split wherever the tag changes or the boundary turns by more
/// than `corner_angle` radians.
int count_boundary_polylines(const Mesh2D& mesh, double corner_angle = 0.5);
/// Connected components of the Steklov-tagged edges, as sorted vertex lists.
std::vector< std::vector< int > > steklov_components(const Mesh2D& mesh);

/// Scales all coordinates (and the period) by `factor`.
Mesh2D scaled(const Mesh2D& mesh, double factor);

/// Replaces edge densities on Steklov edges by `density(midpoint)`.
Mesh2D with_edge_density(const Mesh2D& mesh, const std::function< double(Vec2) >& density);

/// FNV-1a digest of the complete mesh content.
std::uint64_t content_hash(const Mesh2D& mesh);

} // namespace steklov

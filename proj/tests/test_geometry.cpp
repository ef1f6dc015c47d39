#include "steklov/error.hpp"
#include "steklov/geometry.hpp"
#include "steklov/mesh_io.hpp"

#include <doctest.h>

#include <numbers>
#include <sstream>

using namespace steklov;
constexpr double pi = std::numbers::pi;

namespace
{
double boundary_sum(const Mesh2D& m)
{
    double s = 0.0;
    for (const auto& e : m.boundary_edges)
        s += m.edge_length(e.v[0], e.v[1]);
    return s;
}
} // namespace

TEST_CASE("disk mesh area and perimeter")
{
    const auto m = make_disk_mesh(1.0, 0.05);
    CHECK(total_area(m) == doctest::Approx(pi).epsilon(0.01));
    CHECK(boundary_sum(m) == doctest::Approx(2 * pi).epsilon(0.01));
    CHECK(euler_characteristic(m) == 1);
    CHECK(max_edge_length(m) < 0.1);
    validate(m);
}

TEST_CASE("disk mesh is homothetic in radius")
{
    const auto a = make_disk_mesh(1.0, 0.05);
    const auto b = make_disk_mesh(2.0, 0.1);
    REQUIRE(a.num_vertices() == b.num_vertices());
    REQUIRE(a.triangles == b.triangles);
    for (std::size_t i = 0; i < a.num_vertices(); ++i)
    {
        CHECK(b.vertices[i].x == doctest::Approx(2 * a.vertices[i].x));
        CHECK(b.vertices[i].y == doctest::Approx(2 * a.vertices[i].y));
    }
}

TEST_CASE("disk mesh rejects degenerate parameters")
{
    CHECK_THROWS_AS(make_disk_mesh(-1.0, 0.1), ParameterError);
    CHECK_THROWS_AS(make_disk_mesh(1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(make_disk_mesh(1.0, 5.0), ParameterError);
}

TEST_CASE("graded disk keeps area and refines the rim")
{
    const auto m = make_graded_disk_mesh(1.0, 0.1, 0.005);
    CHECK(total_area(m) == doctest::Approx(pi).epsilon(0.01));
    CHECK(euler_characteristic(m) == 1);
    double rim = 1.0;
    for (const auto& v : m.vertices)
        if (norm(v) < 1.0 - 1e-12)
            rim = std::min(rim, 1.0 - norm(v));
    CHECK(rim == doctest::Approx(0.005).epsilon(1e-6));
    CHECK_THROWS_AS(make_graded_disk_mesh(1.0, 0.1, 0.2), ParameterError);
}

TEST_CASE("periodic strip is an annulus")
{
    const auto m = make_strip_mesh(2 * pi, 0.5, 0.05, true);
    CHECK(euler_characteristic(m) == 0);
    CHECK(boundary_loops(m).size() == 2);
    const auto w = make_strip_mesh(2 * pi, 1.0, 0.05, true, {BoundaryTag::Steklov, BoundaryTag::Steklov});
    CHECK(boundary_length(w, BoundaryTag::Steklov) == doctest::Approx(4 * pi).epsilon(0.01));
    for (const auto& loop : boundary_loops(w))
    {
        double len = 0.0;
        for (std::size_t i = 0; i < loop.size(); ++i)
            len += w.edge_length(loop[i], loop[(i + 1) % loop.size()]);
        CHECK(len == doctest::Approx(2 * pi).epsilon(0.01));
    }
}

TEST_CASE("unit square strip")
{
    const auto m = make_strip_mesh(1.0, 1.0, 0.2, false);
    CHECK(count_boundary_polylines(m) == 4);
    CHECK(total_area(m) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(euler_characteristic(m) == 1);
    CHECK_THROWS_AS(make_strip_mesh(1.0, 0.5, 0.5, false), ParameterError);
}

TEST_CASE("grid strip vertex count with seam identified")
{
    const auto m = make_strip_mesh(2 * pi, 0.5, 40, 4, true);
    CHECK(m.num_vertices() == 40u * 5u);
    CHECK(m.num_triangles() == 2u * 40u * 4u);
}

TEST_CASE("boundary tagging")
{
    const auto disk = make_disk_mesh(1.0, 0.05);
    const ArcTag half[] = {{ArcParam::Angle, 0.0, pi, BoundaryTag::Steklov},
                           {ArcParam::Angle, pi, 2 * pi, BoundaryTag::Neumann}};
    const auto   mixed  = tag_boundary(disk, half);
    CHECK(boundary_length(mixed, BoundaryTag::Steklov) == doctest::Approx(pi).epsilon(0.01));
    CHECK(boundary_length(mixed, BoundaryTag::Neumann) == doctest::Approx(pi).epsilon(0.01));

    const ArcTag full[] = {{ArcParam::Angle, 0.0, 2 * pi, BoundaryTag::Steklov}};
    CHECK(content_hash(tag_boundary(disk, full)) == content_hash(disk));

    const ArcTag overlap[] = {{ArcParam::Angle, 0.0, 4.0, BoundaryTag::Steklov},
                              {ArcParam::Angle, 3.0, 2 * pi, BoundaryTag::Neumann}};
    CHECK_THROWS_AS(tag_boundary(disk, overlap), TaggingError);

    const ArcTag none[] = {{ArcParam::Angle, 0.0, 2 * pi, BoundaryTag::Neumann}};
    CHECK_THROWS_AS(tag_boundary(disk, none), ValidationError);

    const auto   strip  = make_strip_mesh(3.0, 1.0, 0.1, true);
    const ArcTag both[] = {{ArcParam::Y, -0.5, 0.5, BoundaryTag::Steklov}, {ArcParam::Y, 0.5, 1.5, BoundaryTag::Steklov}};
    CHECK(boundary_length(tag_boundary(strip, both), BoundaryTag::Steklov) == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("midpoint refinement")
{
    const auto m = make_disk_mesh(1.0, 0.2);
    const auto r = refine(m);
    CHECK(r.num_triangles() == 4 * m.num_triangles());
    CHECK(r.boundary_edges.size() == 2 * m.boundary_edges.size());
    CHECK(total_area(r) == doctest::Approx(total_area(m)).epsilon(1e-12));
    validate(r);
}

TEST_CASE("submesh extraction tags the cut")
{
    const auto          m = make_disk_mesh(1.0, 0.1);
    std::vector< bool > keep(m.num_triangles());
    for (std::size_t t = 0; t < keep.size(); ++t)
        keep[t] = m.centroid(static_cast< int >(t)).x > 0.0;
    const auto sub = extract_submesh(m, keep);
    CHECK(total_area(sub.mesh) == doctest::Approx(pi / 2).epsilon(0.02));
    CHECK(boundary_length(sub.mesh, BoundaryTag::Steklov) == doctest::Approx(pi).epsilon(0.02));
    // the cut follows triangle edges, so it zigzags around the diameter
    const double cut = boundary_length(sub.mesh, BoundaryTag::Neumann);
    CHECK(cut >= 2.0);
    CHECK(cut < 2.5);
    CHECK(sub.parent_vertex.size() == sub.mesh.num_vertices());
}

TEST_CASE("mesh file round trip")
{
    const auto        m = make_annulus_mesh(0.5, 1.0, 0.1);
    std::stringstream ss;
    write_mesh(ss, m);
    const auto back = read_mesh(ss);
    CHECK(content_hash(back) == content_hash(m));
    CHECK(euler_characteristic(back) == 0);
    std::stringstream bad("not a mesh\n");
    CHECK_THROWS_AS(read_mesh(bad), IoError);
}

TEST_CASE("topology helpers")
{
    CHECK(SurfaceTopology::disk().euler_characteristic() == 1);
    CHECK(SurfaceTopology::annulus().euler_characteristic() == 0);
    const auto mobius = SurfaceTopology::non_orientable(0, 1);
    CHECK_FALSE(mobius.orientable);
    CHECK(mobius.euler_characteristic() == 0);
    CHECK(mobius.p_invariant == 0);
    CHECK(SurfaceTopology::non_orientable(-1, 1).p_invariant == 1);
    CHECK_NOTHROW(mobius.validate());
    SurfaceTopology bad = SurfaceTopology::disk();
    bad.boundary_components = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

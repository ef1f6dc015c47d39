#include "steklov/error.hpp"
#include "steklov/nodal.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numbers>
#include <sstream>

using namespace steklov;
constexpr double pi = std::numbers::pi;

namespace
{
std::vector< double > sample(const Mesh2D& m, const std::function< double(Vec2) >& f)
{
    std::vector< double > out;
    for (const auto& v : m.vertices)
        out.push_back(f(v));
    return out;
}

const Mesh2D& disk()
{
    static const Mesh2D m = make_disk_mesh(1.0, 0.05);
    return m;
}
} // namespace

TEST_CASE("constant field has one domain")
{
    const auto d = decompose_nodal(disk(), sample(disk(), [](Vec2) { return 2.0; }));
    CHECK(d.domain_count == 1);
    CHECK(d.segments.empty());
    CHECK_THROWS_AS(decompose_nodal(disk(), sample(disk(), [](Vec2) { return 0.0; })), DegenerateInputError);
}

TEST_CASE("field x splits the disk along the diameter")
{
    const auto d = decompose_nodal(disk(), sample(disk(), [](Vec2 p) { return p.x; }));
    CHECK(d.domain_count == 2);
    double length = 0.0;
    for (const auto& s : d.segments)
    {
        CHECK(std::abs(s.points[0].x) < 1e-9);
        length += norm(s.points[1] - s.points[0]);
    }
    CHECK(length == doctest::Approx(2.0).epsilon(0.01));
    const auto touch = boundary_touch_check(d, disk());
    CHECK(std::all_of(touch.begin(), touch.end(), [](bool b) { return b; }));
    const auto st = nodal_graph_stats(d, disk());
    CHECK(st.cycle_rank == 0);
    CHECK(st.boundary_endpoints == std::vector< int >{2});
    CHECK(st.endpoints_even());
}

TEST_CASE("field x^2 - y^2 gives an equiangular cross")
{
    const auto d = decompose_nodal(disk(), sample(disk(), [](Vec2 p) { return p.x * p.x - p.y * p.y; }));
    CHECK(d.domain_count == 4);
    const auto st = nodal_graph_stats(d, disk());
    CHECK(st.cycle_rank == 0);
    CHECK(st.components == 1);
    CHECK(st.boundary_endpoints == std::vector< int >{4});
}

TEST_CASE("interior bubble is flagged")
{
    const auto d = decompose_nodal(disk(), sample(disk(), [](Vec2 p) { return p.x * p.x + p.y * p.y - 0.09; }));
    REQUIRE(d.domain_count == 2);
    const auto touch = boundary_touch_check(d, disk());
    CHECK(std::count(touch.begin(), touch.end(), false) == 1);
    for (int i = 0; i < d.domain_count; ++i)
        CHECK(touch[i] == (d.domain_sign[i] > 0));
    CHECK(nodal_graph_stats(d, disk()).cycle_rank == 1);
}

TEST_CASE("mixed disk: every domain meets the Steklov arc")
{
    const auto m = tag_boundary(disk(), std::vector< ArcTag >{{ArcParam::Angle, 0.0, pi, BoundaryTag::Steklov},
                                                              {ArcParam::Angle, pi, 2 * pi, BoundaryTag::Neumann}});
    const auto r = steklov_spectrum(m, 6);
    for (int k = 0; k < 6; ++k)
    {
        const Eigen::VectorXd u = r.extensions.col(k);
        const auto d = decompose_nodal(m, {u.data(), static_cast< std::size_t >(u.size())});
        const auto t = boundary_touch_check(d, m);
        CHECK(std::all_of(t.begin(), t.end(), [](bool b) { return b; }));
    }
}

TEST_CASE("Courant on the round disk")
{
    const auto r   = steklov_spectrum(disk(), 9);
    const auto rep = courant_check(r, disk(), 6, 1e-7, 5, 3);
    CHECK(rep.all_ok());
    int fixed_k0 = -1, fixed_k3 = -1, randoms = 0;
    for (const auto& e : rep.entries)
    {
        if (!e.random && e.k == 0)
            fixed_k0 = e.domains;
        if (!e.random && e.k == 3)
            fixed_k3 = e.domains;
        randoms += e.random;
    }
    CHECK(fixed_k0 == 1);
    CHECK(fixed_k3 == 4);
    CHECK(randoms == 5 * 3);
}

TEST_CASE("multiplicity bounds")
{
    CHECK(multiplicity_bound(SurfaceTopology::disk(), ProblemKind::Steklov, 1).bound == 2);
    CHECK(multiplicity_bound(SurfaceTopology::disk(), ProblemKind::Steklov, 2).bound == 3);
    CHECK(multiplicity_bound(SurfaceTopology::disk(), ProblemKind::Steklov, 3).bound == 7);
    CHECK(multiplicity_bound(SurfaceTopology::annulus(), ProblemKind::Steklov, 1).bound == 3);
    CHECK(multiplicity_bound(SurfaceTopology::disk(), ProblemKind::SteklovNeumann, 1).bound == 2);
    CHECK(multiplicity_bound(SurfaceTopology::disk(), ProblemKind::SteklovNeumann, 4).bound == 5);
    const auto nonor = multiplicity_bound(SurfaceTopology::non_orientable(-1, 1), ProblemKind::Steklov, 1);
    CHECK(nonor.bound == 9);
    CHECK(nonor.secondary_bound == 11);
    CHECK_THROWS_AS(multiplicity_bound(SurfaceTopology::annulus(), ProblemKind::SteklovNeumann, 1), UnsupportedCaseError);
    CHECK(parse_problem_kind(to_string(ProblemKind::SteklovNeumann)) == ProblemKind::SteklovNeumann);
}

TEST_CASE("round disk attains the sigma_1 bound")
{
    const auto r   = steklov_spectrum(disk(), 6);
    const auto rep = multiplicity_bound_check(r, SurfaceTopology::disk(), ProblemKind::Steklov, 4);
    REQUIRE(rep.entries.size() >= 1);
    CHECK(rep.entries[0].k == 1);
    CHECK(rep.entries[0].cluster_size == 2);
    CHECK(rep.entries[0].margin() == 0);
    CHECK(rep.all_ok());
}

TEST_CASE("refinement stabilizes the domain count")
{
    const auto f = [](Vec2 p) { return p.x * p.x * p.x - 3 * p.x * p.y * p.y + 0.1; };
    Mesh2D     m = make_disk_mesh(1.0, 0.2);
    int        prev = decompose_nodal(m, sample(m, f)).domain_count;
    for (int i = 0; i < 2; ++i)
    {
        m = refine(m);
        const int c = decompose_nodal(m, sample(m, f)).domain_count;
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(prev == 4);
}

TEST_CASE("svg and stats output")
{
    const auto         d = decompose_nodal(disk(), sample(disk(), [](Vec2 p) { return p.x; }));
    std::ostringstream os;
    write_nodal_svg(os, disk(), d);
    CHECK(os.str().find("<svg") != std::string::npos);
    const auto j = nodal_stats_json(d, disk());
    CHECK(j["domains"] == 2);
    CHECK(j["cycle_rank"] == 0);
}

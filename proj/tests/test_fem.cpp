#include "steklov/error.hpp"
#include "steklov/fem.hpp"
#include "steklov/geometry.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <numbers>

using namespace steklov;
constexpr double pi = std::numbers::pi;

namespace
{
// Two triangles of the unit square, every edge on the boundary except the diagonal.
Mesh2D two_triangles()
{
    Mesh2D m;
    m.vertices  = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    m.tri_weight = {1.0, 1.0};
    for (int i = 0; i < 4; ++i)
        m.boundary_edges.push_back({{i, (i + 1) % 4}, BoundaryTag::Steklov, 1.0});
    return m;
}

std::vector< double > trace_of_x(const Mesh2D& m, const std::vector< int >& vs)
{
    std::vector< double > f;
    for (int v : vs)
        f.push_back(m.vertices[v].x);
    return f;
}
} // namespace

TEST_CASE("local stiffness of the reference triangle")
{
    const Eigen::Matrix3d k = local_stiffness({Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}}, 1.0);
    Eigen::Matrix3d       expected;
    expected << 1, -0.5, -0.5, -0.5, 0.5, 0, -0.5, 0, 0.5;
    CHECK((k - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((local_stiffness({Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}}, 3.0) - 3 * expected).cwiseAbs().maxCoeff() < 1e-14);

    Mesh2D flat = two_triangles();
    flat.vertices[2] = {0.5, 0.0};
    CHECK_THROWS_AS(assemble_stiffness(flat), AssemblyError);
}

TEST_CASE("stiffness annihilates constants")
{
    const auto      m = make_disk_mesh(1.0, 0.1);
    const auto      k = assemble_stiffness(m);
    Eigen::VectorXd c = Eigen::VectorXd::Constant(static_cast< Eigen::Index >(m.num_vertices()), 2.5);
    CHECK((k.matrix * c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("boundary mass of one edge")
{
    Mesh2D m;
    m.vertices  = {{0, 0}, {1, 0}, {0, 1}};
    m.triangles = {{0, 1, 2}};
    m.tri_weight = {1.0};
    m.boundary_edges = {{{0, 1}, BoundaryTag::Steklov, 1.0}, {{1, 2}, BoundaryTag::Neumann, 1.0},
                        {{2, 0}, BoundaryTag::Neumann, 1.0}};
    const auto mass = assemble_boundary_mass(m);
    REQUIRE(mass.vertices == std::vector< int >{0, 1});
    CHECK(mass.matrix(0, 0) == doctest::Approx(1.0 / 3));
    CHECK(mass.matrix(0, 1) == doctest::Approx(1.0 / 6));
    CHECK(mass.matrix(1, 1) == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(assemble_boundary_mass(m, BoundaryTag::Dirichlet), EmptyBoundaryError);
}

TEST_CASE("boundary mass total is the perimeter")
{
    const auto m    = make_disk_mesh(1.0, 0.05);
    const auto mass = assemble_boundary_mass(m);
    double     perimeter = 0.0;
    for (const auto& e : m.boundary_edges)
        perimeter += m.edge_length(e.v[0], e.v[1]);
    CHECK(mass.matrix.sum() == doctest::Approx(perimeter).epsilon(1e-12));
    CHECK(mass.matrix.sum() == doctest::Approx(2 * pi).epsilon(0.01));
}

TEST_CASE("DtN without interior vertices is the boundary stiffness")
{
    const auto m   = two_triangles();
    const auto k   = assemble_stiffness(m);
    const auto dtn = dtn_matrix(m);
    CHECK(dtn.interior_vertices.empty());
    const Eigen::MatrixXd kd(k.matrix);
    CHECK((dtn.matrix - kd).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("unit disk spectrum")
{
    const auto m = make_disk_mesh(1.0, 0.05);
    const auto r = steklov_spectrum(m, 5);
    REQUIRE(r.eigenvalues.size() == 5);
    CHECK(std::abs(r.eigenvalues[0]) < 1e-10);
    const double expected[] = {0, 1, 1, 2, 2};
    for (int k = 1; k < 5; ++k)
        CHECK(r.eigenvalues[k] == doctest::Approx(expected[k]).epsilon(0.01));
    CHECK(r.cluster_of(1) == Cluster{1, 2});
    CHECK(r.cluster_of(3) == Cluster{3, 4});
    for (double res : spectral_residuals(m, r))
        CHECK(res < 1e-8);
    for (int k = 0; k < 5; ++k)
    {
        const Eigen::VectorXd u = r.extensions.col(k);
        CHECK(rayleigh_quotient(m, {u.data(), static_cast< std::size_t >(u.size())}) ==
              doctest::Approx(r.eigenvalues[k]).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("Rayleigh quotient and harmonic extension")
{
    const auto            m = make_disk_mesh(1.0, 0.05);
    std::vector< double > one(m.num_vertices(), 1.0), x;
    for (const auto& v : m.vertices)
        x.push_back(v.x);
    CHECK(std::abs(rayleigh_quotient(m, one)) < 1e-12);
    CHECK(rayleigh_quotient(m, x) == doctest::Approx(1.0).epsilon(0.01));

    const auto            bv = steklov_vertices(m);
    const std::vector< double > c(bv.size(), 3.0);
    const auto            uc = harmonic_extension(m, c);
    CHECK((uc.array() - 3.0).abs().maxCoeff() < 1e-10);

    const auto ux = harmonic_extension(m, trace_of_x(m, bv));
    for (std::size_t i = 0; i < m.num_vertices(); ++i)
        CHECK(ux[static_cast< Eigen::Index >(i)] == doctest::Approx(m.vertices[i].x).epsilon(1e-8).scale(1.0));

    std::vector< double > zero(m.num_vertices(), 0.0);
    const auto            mixed = tag_boundary(m, std::vector< ArcTag >{{ArcParam::Angle, 0.0, pi, BoundaryTag::Steklov},
                                                                          {ArcParam::Angle, pi, 2 * pi, BoundaryTag::Dirichlet}});
    std::vector< double > bump(m.num_vertices(), 0.0);
    for (std::size_t i = 0; i < bump.size(); ++i)
        bump[i] = std::max(0.0, m.vertices[i].y);
    CHECK_THROWS_AS(rayleigh_quotient(m, zero), DegenerateInputError);
    CHECK(rayleigh_quotient(mixed, bump) > 0.0);
}

TEST_CASE("multiplicity clusters")
{
    const std::vector< double > a{0, 0.999, 1.001, 2.0};
    CHECK(multiplicity_clusters(a, 0.01) == std::vector< Cluster >{{0, 0}, {1, 2}, {3, 3}});
    const std::vector< double > b{0, 1, 2, 3};
    CHECK(multiplicity_clusters(b, 0.01) == std::vector< Cluster >{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    const std::vector< double > c{0, 1, 1, 1};
    CHECK(multiplicity_clusters(c, 0.01) == std::vector< Cluster >{{0, 0}, {1, 3}});
}

TEST_CASE("default cluster tolerance")
{
    const auto m = make_disk_mesh(1.0, 0.05);
    const double h = max_edge_length(m);
    CHECK(default_cluster_tol(m) == doctest::Approx(std::max(1e-3, 2 * h * h)).epsilon(0.02));
}

TEST_CASE("Steklov-Dirichlet spectrum is positive")
{
    const auto m     = make_disk_mesh(1.0, 0.1);
    const auto mixed = tag_boundary(m, std::vector< ArcTag >{{ArcParam::Angle, 0.0, pi, BoundaryTag::Steklov},
                                                               {ArcParam::Angle, pi, 2 * pi, BoundaryTag::Dirichlet}});
    const auto r     = steklov_spectrum(mixed, 3);
    CHECK(r.eigenvalues[0] > 0.1);
    CHECK(r.problem.n_dirichlet > 0);
}

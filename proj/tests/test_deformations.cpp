#include "steklov/deformations.hpp"
#include "steklov/error.hpp"
#include "steklov/fem.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace steklov;
constexpr double pi = std::numbers::pi;

namespace
{
std::vector< bool > right_half(const Mesh2D& m)
{
    std::vector< bool > in(m.num_triangles());
    for (std::size_t t = 0; t < in.size(); ++t)
        in[t] = m.centroid(static_cast< int >(t)).x > 0.0;
    return in;
}

// Triangles owning a boundary edge.
std::vector< int > rim_triangles(const Mesh2D& m)
{
    std::vector< int > out;
    for (std::size_t t = 0; t < m.num_triangles(); ++t)
    {
        int on = 0;
        for (int v : m.triangles[t])
            on += std::abs(norm(m.vertices[v]) - 1.0) < 1e-9;
        if (on == 2)
            out.push_back(static_cast< int >(t));
    }
    return out;
}
} // namespace

TEST_CASE("density family with the base density is the identity")
{
    const auto m = make_disk_mesh(1.0, 0.1);
    const auto f = make_density_family(m, [](Vec2) { return 1.0; });
    for (double eps : {1.0, 0.25, 0.01})
    {
        const auto d = density_family_at(f, eps);
        CHECK(d.tri_weight == m.tri_weight);
        for (std::size_t i = 0; i < d.boundary_edges.size(); ++i)
            CHECK(d.boundary_edges[i].density == m.boundary_edges[i].density);
    }
}

TEST_CASE("density family weight at the rim")
{
    const auto m = make_disk_mesh(1.0, 0.05);
    const auto d = density_family_at(make_density_family(m, [](Vec2) { return 2.0; }, 3), 1.0);
    for (int t : rim_triangles(m))
        CHECK(d.tri_weight[t] == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
    for (const auto& e : d.boundary_edges)
        CHECK(e.density == 2.0);
}

TEST_CASE("density family preconditions")
{
    const auto m = make_disk_mesh(1.0, 0.2);
    CHECK_THROWS_AS(density_family_at(make_density_family(m, [](Vec2) { return 0.5; }), 0.5), PreconditionError);
    const auto f = make_density_family(m, [](Vec2) { return 2.0; });
    CHECK_THROWS_AS(density_family_at(f, 0.0), ParameterError);
    CHECK_THROWS_AS(density_family_at(f, 1.5), ParameterError);
    CHECK_THROWS_AS(make_density_family(m, [](Vec2) { return 2.0; }, 2), ParameterError);
}

TEST_CASE("density family converges to the rho_bar problem")
{
    const auto m   = make_graded_disk_mesh(1.0, 0.1, 0.0025);
    const auto rho = [](Vec2 p) { return 1.5 + 0.5 * std::cos(std::atan2(p.y, p.x)); };
    const auto f   = make_density_family(m, rho);
    const auto rep = density_convergence_run(f, dyadic_sweep(4, 8), 5);
    CHECK(rep.point_errors.empty());
    std::vector< double > errors;
    for (const auto& p : rep.results["points"])
        errors.push_back(p["max_rel_err"].get< double >());
    REQUIRE(errors.size() == 5);
    CHECK(errors.back() < errors.front());
    CHECK(errors.back() < 0.05);
}

TEST_CASE("singular family weights")
{
    const auto                 m = make_disk_mesh(1.0, 0.1);
    const SingularWeightFamily f{m, right_half(m), 3};
    CHECK(singular_family_at(f, 1.0).tri_weight == m.tri_weight);
    const auto a = singular_family_at(f, 0.25);
    SingularWeightFamily       f4{m, right_half(m), 4};
    const auto b = singular_family_at(f4, 0.25);
    for (std::size_t t = 0; t < m.num_triangles(); ++t)
    {
        const double wa = f.in_u[t] ? 1.0 : 0.25;
        const double wb = f.in_u[t] ? 1.0 : 0.0625;
        CHECK(a.tri_weight[t] == wa);
        CHECK(b.tri_weight[t] == wb);
    }
    std::vector< bool > interior(m.num_triangles(), false);
    for (std::size_t t = 0; t < m.num_triangles(); ++t)
        interior[t] = norm(m.centroid(static_cast< int >(t))) < 0.3;
    CHECK_THROWS_AS(singular_family_at({m, interior, 3}, 0.5), PreconditionError);
}

TEST_CASE("singular family converges to the sloshing problem on U")
{
    const auto                 m = make_disk_mesh(1.0, 0.05);
    const SingularWeightFamily f{m, right_half(m), 3};
    const auto                 limit = steklov_spectrum(singular_family_limit(f), 4);
    const auto                 near  = steklov_spectrum(singular_family_at(f, 1.0 / 256), 4);
    for (int k = 1; k < 4; ++k)
        CHECK(near.eigenvalues[k] == doctest::Approx(limit.eigenvalues[k]).epsilon(0.05));
}

TEST_CASE("cylinder formula")
{
    CHECK(cylinder_formula(0.0, 0.3) == 0.0);
    CHECK(cylinder_formula(1.0, 0.5) == doctest::Approx(0.46211715726).epsilon(1e-10));
    for (double eta : {0.1, 0.01, 0.001})
        for (double lambda : {1.0, 4.0, 9.0})
            CHECK(std::abs(cylinder_formula(lambda, eta) - eta * lambda) <= std::pow(eta, 3) * lambda * lambda / 3);
    CHECK_THROWS_AS(cylinder_formula(-1.0, 0.5), ParameterError);
    CHECK_THROWS_AS(cylinder_formula(1.0, 0.0), ParameterError);
}

TEST_CASE("two-sided cylinder symmetric branch")
{
    const auto b   = cylinder_branches(2 * pi, 0.5, 9, 16, 2 * pi / 128);
    const auto ref = cylinder_symmetric_reference(2 * pi, 0.5, 9);
    REQUIRE(b.symmetric.size() >= 5);
    CHECK(std::abs(b.symmetric[0]) < 1e-9);
    for (std::size_t i = 1; i < 5; ++i)
        CHECK(b.symmetric[i] == doctest::Approx(ref[i]).epsilon(0.01));
    CHECK_THROWS_AS(cylinder_branches(2 * pi, 0.5, 9, 7), ResolutionError);
}

TEST_CASE("collar rescaled eigenvalues approach k squared")
{
    const auto rep = collar_convergence_run(2 * pi, {0.2, 0.1, 0.05}, 3);
    REQUIRE(rep.find_table("collar") != nullptr);
    const auto& pts = rep.results["points"];
    REQUIRE(pts.size() == 3);
    CHECK(pts[2]["max_rel_err"].get< double >() < pts[0]["max_rel_err"].get< double >());
    CHECK(pts[2]["max_rel_err"].get< double >() < 0.02);
    CHECK_THROWS_AS(collar_convergence_run(2 * pi, {0.2}, 3, {4}), ResolutionError);
}

TEST_CASE("sweep helpers")
{
    CHECK(dyadic_sweep(1, 3) == std::vector< double >{0.5, 0.25, 0.125});
    CHECK(eventually_decreasing({0.5, 0.9, 0.4, 0.2, 0.1}));
    CHECK_FALSE(eventually_decreasing({0.5, 0.4, 0.2, 0.3}));
}

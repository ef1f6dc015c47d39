#include "steklov/error.hpp"
#include "steklov/fem.hpp"
#include "steklov/thickening.hpp"

#include <doctest.h>

#include <numbers>

using namespace steklov;
constexpr double pi = std::numbers::pi;

TEST_CASE("K3 embeds as an equilateral triangle")
{
    const auto g = complete_graph(3, 1.0);
    const auto e = embed_graph(g, EmbeddingStyle::ConvexBoundary);
    for (int i = 0; i < 3; ++i)
    {
        CHECK(norm(e.positions[i] - e.positions[(i + 1) % 3]) == doctest::Approx(1.0));
        CHECK(norm(e.normals[i]) == doctest::Approx(1.0));
    }
    for (std::size_t i = 0; i < e.edge_paths.size(); ++i)
        CHECK(polyline_length(e.edge_paths[i]) == doctest::Approx(g.lengths[i]));
}

TEST_CASE("path layout is collinear")
{
    const auto g = path_graph({1.0, 2.0});
    const auto e = embed_graph(g, EmbeddingStyle::Path);
    for (const auto& p : e.positions)
        CHECK(p.y == doctest::Approx(e.positions[0].y));
    double total = 0.0;
    for (const auto& path : e.edge_paths)
        total += polyline_length(path);
    CHECK(total == doctest::Approx(3.0));
}

TEST_CASE("embedding errors")
{
    CHECK_THROWS_AS(embed_graph(complete_graph(4, 1.0), EmbeddingStyle::ConvexBoundary), EmbeddingError);
    CHECK_THROWS_AS(embed_graph(complete_graph(3, 1.0), EmbeddingStyle::Star), EmbeddingError);
    CHECK(parse_embedding_style("star") == EmbeddingStyle::Star);
    CHECK_THROWS_AS(parse_embedding_style("spiral"), ParameterError);
}

TEST_CASE("single edge thickening area")
{
    const auto     g = path_graph({1.0});
    ThickeningSpec s{g, embed_graph(g, EmbeddingStyle::Path), 0.05, 2.0, 0.0};
    CHECK(thickened_area_estimate(s) == doctest::Approx(pi * 0.01 / 2 * 2 + 0.8 * 0.1));
    const auto m = build_thickened_mesh(s);
    validate(m);
    CHECK(total_area(m) == doctest::Approx(0.1114).epsilon(0.02));
    CHECK(euler_characteristic(m) == 1);
    CHECK(steklov_components(m).size() == 2);
    // two Steklov diameters of length 2 c eps
    CHECK(boundary_length(m, BoundaryTag::Steklov) == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("K3 thickening is an annulus with three Steklov diameters")
{
    const auto     g = complete_graph(3, 1.0);
    ThickeningSpec s{g, embed_graph(g, EmbeddingStyle::ConvexBoundary), 0.04, 2.0, 0.0};
    const auto     m = build_thickened_mesh(s);
    CHECK(euler_characteristic(m) == 0);
    CHECK(steklov_components(m).size() == 3);
    CHECK(total_area(m) == doctest::Approx(thickened_area_estimate(s)).epsilon(0.05));
    const auto r = steklov_spectrum(m, 4);
    CHECK(std::abs(r.eigenvalues[0]) < 1e-9);
    CHECK(r.eigenvalues[3] / r.eigenvalues[2] > 3.0);
}

TEST_CASE("colliding thickening is rejected")
{
    const auto     g = complete_graph(3, 1.0);
    ThickeningSpec s{g, embed_graph(g, EmbeddingStyle::ConvexBoundary), 0.3, 2.0, 0.0};
    CHECK_THROWS_AS(check_thickening(s), GeometryError);
}

TEST_CASE("graph limit ratios agree across k")
{
    const auto                    g = complete_graph(3, 1.0);
    std::vector< ThickeningSpec > family;
    for (double eps : {0.04, 0.02})
        family.push_back({g, embed_graph(g, EmbeddingStyle::ConvexBoundary), eps, 2.0, 0.0});
    const auto rep = verify_graph_limit(family);
    const auto* t  = rep.find_table("graph_limit");
    REQUIRE(t != nullptr);
    CHECK(t->columns == std::vector< std::string >{"eps", "k", "sigma", "lambda", "ratio"});
    REQUIRE(t->rows.size() == 4);
    const double r1 = t->rows[2][4], r2 = t->rows[3][4];
    CHECK(std::abs(r1 - r2) / (0.5 * (r1 + r2)) < 0.05);
}

#include "steklov/error.hpp"
#include "steklov/graphs.hpp"
#include "steklov/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace steklov;

namespace
{
void check_spectrum(const MetricGraph& g, const std::vector< double >& expected)
{
    const auto s = graph_laplacian_spectrum(g);
    REQUIRE(s.eigenvalues.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k)
        CHECK(s.eigenvalues[k] == doctest::Approx(expected[k]).epsilon(1e-12).scale(1.0));
}
} // namespace

TEST_CASE("small graph spectra")
{
    check_spectrum(path_graph({1.0}), {0, 2});
    check_spectrum(complete_graph(3, 1.0), {0, 3, 3});
    check_spectrum(complete_graph(4, 4.0), {0, 1, 1, 1});
    // path 0-1-2 with unit lengths: eigenvalues 0, 1, 3
    check_spectrum(path_graph({1.0, 1.0}), {0, 1, 3});
}

TEST_CASE("Laplacian quadratic form")
{
    const MetricGraph g{3, {{0, 1}, {1, 2}}, {2.0, 0.5}};
    const auto        l = graph_laplacian(g);
    Eigen::Vector3d   f(1.0, -2.0, 4.0);
    CHECK(f.dot(l * f) == doctest::Approx(9.0 / 2.0 + 36.0 / 0.5));
    CHECK((l * Eigen::Vector3d::Ones()).norm() < 1e-14);
}

TEST_CASE("graph validation")
{
    CHECK_THROWS_AS((MetricGraph{3, {{0, 1}}, {1.0}}.validate()), ValidationError);
    CHECK_THROWS_AS((MetricGraph{2, {{0, 0}}, {1.0}}.validate()), ValidationError);
    CHECK_THROWS_AS((MetricGraph{2, {{0, 1}, {1, 0}}, {1.0, 1.0}}.validate()), ValidationError);
    CHECK_THROWS_AS((MetricGraph{2, {{0, 1}}, {0.0}}.validate()), ValidationError);
    CHECK(complete_graph(5, 1.0).cycle_rank() == 6);
    CHECK(star_graph({1, 2, 3}).is_tree());
    CHECK(cycle_graph({1, 1, 1, 1}).cycle_rank() == 1);
}

TEST_CASE("weight derivatives match finite differences")
{
    const MetricGraph g{3, {{0, 1}, {1, 2}, {0, 2}}, {1.0, 0.7, 1.6}};
    const auto        d = eigenvalue_weight_derivatives(g);
    const auto        s = graph_laplacian_spectrum(g);
    for (int i = 0; i < g.num_edges(); ++i)
    {
        MetricGraph  p  = g;
        const double dw = 1e-6;
        p.lengths[i]    = 1.0 / (1.0 / g.lengths[i] + dw);
        const auto sp   = graph_laplacian_spectrum(p);
        for (int k = 1; k < 3; ++k)
            CHECK((sp.eigenvalues[k] - s.eigenvalues[k]) / dw == doctest::Approx(d(k, i)).epsilon(1e-4));
    }
}

TEST_CASE("prescription of symmetric and distinct targets")
{
    const std::vector< double > ones{1, 1, 1};
    const auto                  r = prescribe_spectrum(ones);
    CHECK(spectrum_error(r.graph, ones) <= 1e-8);
    CHECK(r.graph.n_vertices == 4);

    const std::vector< double > distinct{1, 2, 3};
    const auto                  q = prescribe_spectrum(distinct);
    const auto                  s = graph_laplacian_spectrum(q.graph);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(s.eigenvalues[k + 1] - distinct[k]) <= 1e-8 * distinct[k]);
}

TEST_CASE("prescription homogeneity")
{
    const std::vector< double > a{0.7, 1.3, 2.9};
    const auto                  r = prescribe_spectrum(a);
    for (double c : {0.5, 3.0})
    {
        MetricGraph scaled = r.graph;
        for (auto& l : scaled.lengths)
            l /= c;
        std::vector< double > ca;
        for (double v : a)
            ca.push_back(c * v);
        CHECK(spectrum_error(scaled, ca) <= spectrum_error(r.graph, a) + 1e-12);
    }
}

TEST_CASE("prescription input errors")
{
    CHECK_THROWS_AS(prescribe_spectrum(std::vector< double >{}), ParameterError);
    CHECK_THROWS_AS(prescribe_spectrum(std::vector< double >{2, 1}), ParameterError);
    CHECK_THROWS_AS(prescribe_spectrum(std::vector< double >{-1, 1}), ParameterError);
    PrescriptionOptions o;
    o.max_iters = 1;
    o.starts    = 1;
    o.tol       = 1e-15;
    CHECK_THROWS_AS(prescribe_spectrum(std::vector< double >{0.5, 4.0, 4.1, 30.0}, o), OptimizationFailure);
}

TEST_CASE("seeded random batch reaches 1e-8")
{
    Rng rng(99);
    for (int i = 0; i < 10; ++i)
    {
        const int             n = 2 + static_cast< int >(uniform_index(rng, 5));
        std::vector< double > t;
        for (int k = 0; k < n; ++k)
            t.push_back(uniform(rng, 0.5, 5.0));
        std::sort(t.begin(), t.end());
        PrescriptionOptions o;
        o.seed = 1000 + i;
        CHECK(spectrum_error(prescribe_spectrum(t, o).graph, t) <= 1e-8);
    }
}

TEST_CASE("stability probe")
{
    const auto g    = complete_graph(4, 4.0);
    const auto flat = stability_probe(g, 1, 5, 0.0);
    CHECK(flat.max_spread == 0.0);
    const auto p = stability_probe(g, 1, 20, 1e-3, 3);
    CHECK(p.cluster_first == 1);
    CHECK(p.cluster_last == 3);
    CHECK(p.max_spread > 0.0);
    CHECK(p.max_spread < 1e-2);
    CHECK_THROWS_AS(stability_probe(g, 4, 1, 1e-3), ParameterError);
}

TEST_CASE("graph file round trip")
{
    const MetricGraph g{3, {{0, 1}, {1, 2}, {0, 2}}, {1.0, 0.1 + 0.2, 1.0 / 3.0}};
    std::stringstream ss;
    write_graph(ss, g);
    const auto back = read_graph(ss);
    CHECK(back.edges == g.edges);
    CHECK(back.lengths == g.lengths);
    std::stringstream bad("steklov-graph v1\nvertices 2\nedges 1\n0 1 x\n");
    CHECK_THROWS_AS(read_graph(bad), IoError);
}

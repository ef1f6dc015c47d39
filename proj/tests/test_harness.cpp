#include "steklov/error.hpp"
#include "steklov/harness.hpp"
#include "steklov/hash.hpp"
#include "steklov/parallel.hpp"
#include "steklov/random.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace steklov;

TEST_CASE("config parsing")
{
    const auto c = parse_config(Json::parse(R"({"kind": "spectrum", "params": {"domain": "disk", "h": 0.1}})"));
    CHECK(c.kind == ExperimentKind::Spectrum);
    CHECK_FALSE(c.seed.has_value());
    CHECK(parse_config(to_json(c)).params == c.params);
    CHECK_NOTHROW(c.validate());

    CHECK_THROWS_AS(parse_config(Json::parse(R"({"kind": "spectrum", "colour": 1})")), ParameterError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"kind": "nonsense"})")), ParameterError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"kind": "spectrum", "params": {"hh": 0.1}})")), ParameterError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"kind": "nodal-audit", "params": {"domains": ["disk"]}})")),
                    ParameterError);
    for (auto k : {ExperimentKind::Spectrum, ExperimentKind::GraphLimit, ExperimentKind::MultiplicityAudit})
        CHECK(parse_experiment_kind(to_string(k)) == k);
}

TEST_CASE("empty table renders header only")
{
    Table t{"empty", {"eps", "k", "sigma"}, {}};
    CHECK(to_csv(t) == "eps,k,sigma\n");
    ExperimentReport r;
    CHECK_THROWS(r.table("x", {"a"}).add({1.0, 2.0}));
}

TEST_CASE("check margins and report hash")
{
    ExperimentReport r;
    r.kind = "test";
    r.check("upper", true, 0.2, 0.5);
    r.check("lower", true, 2.0, 1.0, {}, false);
    CHECK(r.find_check("upper")->margin() == doctest::Approx(0.3));
    CHECK(r.find_check("lower")->margin() == doctest::Approx(1.0));
    CHECK(r.passed());
    const auto h   = r.content_hash();
    r.environment  = "other compiler";
    r.wall_seconds = 12.0;
    CHECK(r.content_hash() == h);
    r.check("fail", false, 1.0, 0.0);
    CHECK_FALSE(r.passed());
    CHECK(r.content_hash() != h);
}

TEST_CASE("fnv1a reference values")
{
    Fnv1a a;
    CHECK(a.digest() == 0xcbf29ce484222325ULL);
    Fnv1a b;
    b.text("a");
    CHECK(b.digest() == 0xaf63dc4c8601ec8cULL);
    Fnv1a c;
    c.text("foobar");
    CHECK(c.digest() == 0x85944171f73967e8ULL);
}

TEST_CASE("parallel_for fills every slot")
{
    std::vector< int > slots(1000, 0);
    parallel_for(slots.size(), 4, [&](std::size_t i) { slots[i] = static_cast< int >(i) + 1; });
    for (std::size_t i = 0; i < slots.size(); ++i)
        CHECK(slots[i] == static_cast< int >(i) + 1);
}

TEST_CASE("seeded rng is reproducible")
{
    Rng a(5), b(5);
    for (int i = 0; i < 10; ++i)
        CHECK(uniform(a, 0.0, 1.0) == uniform(b, 0.0, 1.0));
    Rng  r(7);
    auto d = FourierDensity::sample(r);
    for (double c : d.a)
        CHECK(std::abs(c) <= 0.5);
    CHECK(d.at_angle(0.3) > 0.0);
}

TEST_CASE("graph-limit report schema")
{
    const auto c = parse_config(Json::parse(
        R"({"kind": "graph-limit", "params": {"graph": "complete", "vertices": 3, "eps": [0.08, 0.04]}})"));
    const auto out = run(c);
    CHECK(out.report.point_errors.empty());
    const auto* t  = out.report.find_table("graph_limit");
    REQUIRE(t != nullptr);
    CHECK(t->columns == std::vector< std::string >{"eps", "k", "sigma", "lambda", "ratio"});
    CHECK(out.report.find_check("ratio_spread") != nullptr);
    CHECK(out.meshes.size() == 1);
}

TEST_CASE("multiplicity-audit schema")
{
    const auto c = parse_config(Json::parse(
        R"({"kind": "multiplicity-audit", "seed": 3, "params": {"domains": ["disk"], "samples": 3, "h": 0.1}})"));
    const auto out = run(c);
    const auto* t  = out.report.find_table("multiplicity");
    REQUIRE(t != nullptr);
    CHECK(t->columns == std::vector< std::string >{"domain", "sample", "k", "cluster_size", "bound", "margin"});
    CHECK(t->rows.size() == 3 * 4);
    CHECK(out.report.passed());
}

TEST_CASE("nodal audit is deterministic")
{
    const auto c = parse_config(Json::parse(
        R"({"kind": "nodal-audit", "seed": 42, "jobs": 4,
            "params": {"domains": ["disk"], "samples": 50, "h": 0.1, "random_rotations": 2, "figures": 0}})"));
    const auto a = run(c);
    auto       c1 = c;
    c1.jobs       = 1;
    const auto b = run(c1);
    CHECK(a.report.content_hash() == b.report.content_hash());
    CHECK(to_json(a.report)["checks"] == to_json(b.report)["checks"]);
}

TEST_CASE("outputs on disk")
{
    const auto c = parse_config(Json::parse(
        R"({"kind": "spectrum", "params": {"domain": "disk", "h": 0.1, "n_eigs": 5}})"));
    const auto out = run(c);
    const auto dir = std::filesystem::temp_directory_path() / "steklov_harness_test";
    std::filesystem::remove_all(dir);
    emit_outputs(dir, out);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "summary.txt"));
    CHECK(std::filesystem::exists(dir / "tables" / "spectrum.csv"));
    std::ifstream is(dir / "report.json");
    const auto    j = Json::parse(is);
    CHECK(j["kind"] == "spectrum");
    CHECK(summary_text(out.report).find("residual") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("module errors become point errors")
{
    const auto c = parse_config(Json::parse(
        R"({"kind": "graph-limit", "params": {"graph": "complete", "vertices": 3, "eps": [0.3, 0.08]}})"));
    const auto out = run(c);
    CHECK(out.report.point_errors.size() == 1);
}

#pragma once

#include "steklov/fem.hpp"
#include "steklov/geometry.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace steklov
{
/// Part of a triangle where the linear interpolant has one strict sign.
struct NodalPiece
{
    int triangle = 0;
    int sign     = 0;   // +1 or -1
    int domain   = 0;
};

/// Point of the discrete nodal set: a zero vertex (a == b) or the crossing on edge (a, b), a < b.
struct NodalNode
{
    int  a = 0;
    int  b = 0;
    auto operator<=>(const NodalNode&) const = default;
};

struct NodalSegment
{
    NodalNode             from, to;
    std::array< Vec2, 2 > points;
};

struct NodalDecomposition
{
    std::vector< double >       values;        // field with near-zero vertices snapped to 0
    std::vector< int >          vertex_sign;   // -1, 0, +1
    std::vector< NodalPiece >   pieces;
    int                         domain_count = 0;
    std::vector< int >          domain_sign;
    std::vector< NodalSegment > segments;
};

/// Linear-interpolant nodal decomposition; zero_tol is relative to max |field|.
NodalDecomposition decompose_nodal(const Mesh2D& mesh, std::span< const double > field, double zero_tol = 1e-7);

/// Per domain: true when its closure meets a Steklov edge or vertex.
std::vector< bool > boundary_touch_check(const NodalDecomposition& dec, const Mesh2D& mesh);

struct NodalGraphStats
{
    int                cycle_rank       = 0;   // first Betti number of the zero set
    int                nodes            = 0;
    int                edges            = 0;
    int                zero_faces       = 0;   // triangles where the field vanishes identically
    int                components       = 0;
    std::vector< int > boundary_endpoints;   // per boundary loop
    [[nodiscard]] bool endpoints_even() const;
};

NodalGraphStats nodal_graph_stats(const NodalDecomposition& dec, const Mesh2D& mesh);

struct CourantEntry
{
    int  k             = 0;
    int  cluster_first = 0;
    int  cluster_last  = 0;
    bool random        = false;   // random unit combination inside the cluster
    int  domains       = 0;
    int  bound         = 0;
    [[nodiscard]] bool ok() const { return domains <= bound; }
};

struct CourantReport
{
    std::vector< CourantEntry > entries;
    [[nodiscard]] bool          all_ok() const;
};

/// Domain counts of eigenfunctions 0..k_max against k + 1, plus `n_random` random unit
/// combinations inside every cluster [a, b] (bound b + 1).
CourantReport courant_check(const SpectralResult& result, const Mesh2D& mesh, int k_max, double zero_tol = 1e-7,
                            int n_random = 20, std::uint64_t seed = 1);

enum class ProblemKind : std::uint8_t
{
    Steklov,
    SteklovNeumann,
};

std::string_view to_string(ProblemKind kind);
ProblemKind      parse_problem_kind(std::string_view text);

struct MultiplicityEntry
{
    int         k            = 0;
    int         cluster_size = 0;
    int         bound        = 0;
    std::string bound_label;
    int         secondary_bound = -1;   // non-orientable case: the other published constant
    std::string secondary_label;
    [[nodiscard]] int  margin() const { return bound - cluster_size; }
    [[nodiscard]] bool ok() const { return cluster_size <= bound; }
};

struct MultiplicityReport
{
    std::vector< MultiplicityEntry > entries;
    [[nodiscard]] bool               all_ok() const;
};

/// Bound on the multiplicity of sigma_k, k >= 1:
///   orientable, Steklov:         4 gamma + 2k + 1 (disk: 2 for k = 1, 3 for k = 2)
///   disk, Steklov-Neumann:       k + 1
///   non-orientable, Steklov:     4p + 4k + 1, with 4p + 4k + 3 reported alongside
MultiplicityEntry  multiplicity_bound(const SurfaceTopology& topology, ProblemKind kind, int k);
MultiplicityReport multiplicity_bound_check(const SpectralResult& result, const SurfaceTopology& topology,
                                            ProblemKind kind, int k_max);

/// Mesh outline, Steklov edges, sign-colored domains and nodal segments.
void write_nodal_svg(std::ostream& os, const Mesh2D& mesh, const NodalDecomposition& dec);

nlohmann::ordered_json nodal_stats_json(const NodalDecomposition& dec, const Mesh2D& mesh);

} // namespace steklov

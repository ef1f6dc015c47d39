#pragma once

#include "steklov/geometry.hpp"
#include "steklov/graphs.hpp"
#include "steklov/mesher.hpp"
#include "steklov/report.hpp"

#include <string_view>
#include <vector>

namespace steklov
{
enum class EmbeddingStyle : std::uint8_t
{
    ConvexBoundary,   // cycles, inscribed in a circle, straight edges
    Path,             // collinear vertices, quarter-turn circular arcs above the line
    Star,             // center at the origin, straight spokes
};

std::string_view to_string(EmbeddingStyle style);
EmbeddingStyle   parse_embedding_style(std::string_view text);

/// Vertex positions, inward unit normals of the vertex half-disks, and one polyline per edge
/// (from edges[i][0] to edges[i][1]) whose length is the edge length.
struct GraphEmbedding
{
    std::vector< Vec2 >                positions;
    std::vector< Vec2 >                normals;
    std::vector< std::vector< Vec2 > > edge_paths;
};

GraphEmbedding embed_graph(const MetricGraph& g, EmbeddingStyle style);

double polyline_length(const std::vector< Vec2 >& path);

struct ThickeningSpec
{
    MetricGraph    graph;
    GraphEmbedding embedding;
    double         eps      = 0.05;   // tube half-width
    double         c        = 2.0;    // half-disk radius factor
    double         target_h = 0.0;    // 0 = eps / 4
};

/// Throws GeometryError when the half-disks and tubes would collide or leave the construction.
void check_thickening(const ThickeningSpec& spec);

PlanarRegion thickened_region(const ThickeningSpec& spec);
Mesh2D       build_thickened_mesh(const ThickeningSpec& spec);

/// sum_j pi (c eps)^2 / 2 + sum_i (l_i - 2 c eps) 2 eps.
double thickened_area_estimate(const ThickeningSpec& spec);

struct GraphLimitOptions
{
    int      n_eigs          = 0;   // ratios for k = 1..n_eigs; 0 = |S| - 1
    int      elements_across = 8;   // rows across the tube width 2 eps
    unsigned jobs            = 1;
};

/// eps sweep of thickened domains against the graph spectrum.
/// Table "graph_limit": eps, k, sigma, lambda, ratio.
ExperimentReport verify_graph_limit(const std::vector< ThickeningSpec >& family, const GraphLimitOptions& options = {});

} // namespace steklov

#pragma once

#include "steklov/geometry.hpp"

#include <vector>

namespace steklov
{
/// Union of simple polygons to be meshed. Boundary pieces lying on one of `steklov_segments` are
/// tagged Steklov, all others Neumann. `corners` are boundary points kept exactly by resampling.
struct PlanarRegion
{
    std::vector< std::vector< Vec2 > >   parts;   // counterclockwise simple polygons
    std::vector< std::array< Vec2, 2 > > steklov_segments;
    std::vector< Vec2 >                  corners;
};

/// Unstructured triangulation of the union with edge length about h: boundary resampled at
/// spacing <= h, hexagonal interior lattice, Delaunay triangulation with boundary recovery.
Mesh2D mesh_region(const PlanarRegion& region, double h);

/// Counterclockwise polygon of the half-disk {|p - center| <= r, (p - center) . normal >= 0},
/// arc sampled at spacing <= h.
std::vector< Vec2 > half_disk_polygon(Vec2 center, Vec2 normal, double radius, double h);

} // namespace steklov

#pragma once

#include "steklov/geometry.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace steklov
{
/// Plain-text "steklov-mesh v1" format:
///
///     steklov-mesh v1
///     period <p>                  (optional; omitted or 0 for non-periodic meshes)
///     vertices <N>
///     <x> <y>                     (N lines)
///     triangles <T>
///     <a> <b> <c>                 (T lines, counterclockwise, 0-based)
///     boundary_edges <E>
///     <v0> <v1> <tag> <density>   (E lines; tag in {steklov, neumann, dirichlet})
///     weights <T>
///     <w>                         (T lines)
///
/// Reals are written with 17 significant digits so a write/read cycle is lossless.
void   write_mesh(std::ostream& os, const Mesh2D& mesh);
Mesh2D read_mesh(std::istream& is);

void   save_mesh(const std::filesystem::path& path, const Mesh2D& mesh);
Mesh2D load_mesh(const std::filesystem::path& path);

std::string format_real(double v);

} // namespace steklov

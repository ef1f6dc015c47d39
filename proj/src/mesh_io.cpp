#include "steklov/mesh_io.hpp"

#include "steklov/error.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace steklov
{
namespace
{
template < typename T >
T read_value(std::istream& is, const char* what)
{
    T v{};
    if (!(is >> v))
        throw IoError(fmt::format("steklov-mesh: failed to read {}", what));
    return v;
}

std::size_t read_section(std::istream& is, const std::string& name)
{
    const auto word = read_value< std::string >(is, "section name");
    if (word != name)
        throw IoError(fmt::format("steklov-mesh: expected section '{}', found '{}'", name, word));
    return read_value< std::size_t >(is, "section count");
}

double read_real(std::istream& is, const char* what)
{
    // operator>> rejects "inf"/"nan"; parse through strtod for exact round trips of any finite value
    const auto token = read_value< std::string >(is, what);
    char*      end   = nullptr;
    double     v     = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size())
        throw IoError(fmt::format("steklov-mesh: '{}' is not a real number ({})", token, what));
    return v;
}
} // namespace

std::string format_real(double v)
{
    return fmt::format("{:.17g}", v);
}

void write_mesh(std::ostream& os, const Mesh2D& mesh)
{
    os << "steklov-mesh v1\n";
    if (mesh.period_x > 0.0)
        os << "period " << format_real(mesh.period_x) << '\n';
    os << "vertices " << mesh.vertices.size() << '\n';
    for (const auto& v : mesh.vertices)
        os << format_real(v.x) << ' ' << format_real(v.y) << '\n';
    os << "triangles " << mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles)
        os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os << "boundary_edges " << mesh.boundary_edges.size() << '\n';
    for (const auto& e : mesh.boundary_edges)
        os << e.v[0] << ' ' << e.v[1] << ' ' << to_string(e.tag) << ' ' << format_real(e.density) << '\n';
    os << "weights " << mesh.tri_weight.size() << '\n';
    for (double w : mesh.tri_weight)
        os << format_real(w) << '\n';
}

Mesh2D read_mesh(std::istream& is)
{
    std::string header;
    std::getline(is, header);
    if (!header.empty() && header.back() == '\r')
        header.pop_back();
    if (header != "steklov-mesh v1")
        throw IoError(fmt::format("not a steklov-mesh v1 file (header '{}')", header));

    Mesh2D mesh;
    auto   word = read_value< std::string >(is, "section name");
    if (word == "period")
    {
        mesh.period_x = read_real(is, "period");
        word          = read_value< std::string >(is, "section name");
    }
    if (word != "vertices")
        throw IoError(fmt::format("steklov-mesh: expected 'vertices', found '{}'", word));
    const auto nv = read_value< std::size_t >(is, "vertex count");
    mesh.vertices.resize(nv);
    for (auto& v : mesh.vertices)
    {
        v.x = read_real(is, "x");
        v.y = read_real(is, "y");
    }
    mesh.triangles.resize(read_section(is, "triangles"));
    for (auto& t : mesh.triangles)
        for (auto& v : t)
            v = read_value< int >(is, "triangle index");
    mesh.boundary_edges.resize(read_section(is, "boundary_edges"));
    for (auto& e : mesh.boundary_edges)
    {
        e.v[0]    = read_value< int >(is, "edge vertex");
        e.v[1]    = read_value< int >(is, "edge vertex");
        e.tag     = parse_boundary_tag(read_value< std::string >(is, "edge tag"));
        e.density = read_real(is, "edge density");
    }
    mesh.tri_weight.resize(read_section(is, "weights"));
    for (auto& w : mesh.tri_weight)
        w = read_real(is, "weight");
    if (mesh.tri_weight.size() != mesh.triangles.size())
        throw IoError("steklov-mesh: weight count differs from triangle count");
    return mesh;
}

void save_mesh(const std::filesystem::path& path, const Mesh2D& mesh)
{
    std::ofstream os(path);
    if (!os)
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    write_mesh(os, mesh);
    if (!os)
        throw IoError(fmt::format("write to '{}' failed", path.string()));
}

Mesh2D load_mesh(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    return read_mesh(is);
}

} // namespace steklov

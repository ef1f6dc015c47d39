#include "steklov/deformations.hpp"
#include "steklov/error.hpp"
#include "steklov/fem.hpp"
#include "steklov/graphs.hpp"
#include "steklov/harness.hpp"
#include "steklov/mesh_io.hpp"
#include "steklov/nodal.hpp"
#include "steklov/thickening.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <numbers>
#include <optional>

namespace py = pybind11;
using namespace steklov;

namespace
{
Eigen::MatrixXd vertex_array(const Mesh2D& m)
{
    Eigen::MatrixXd out(static_cast< Eigen::Index >(m.num_vertices()), 2);
    for (std::size_t i = 0; i < m.num_vertices(); ++i)
        out.row(static_cast< Eigen::Index >(i)) << m.vertices[i].x, m.vertices[i].y;
    return out;
}

Eigen::MatrixXi triangle_array(const Mesh2D& m)
{
    Eigen::MatrixXi out(static_cast< Eigen::Index >(m.num_triangles()), 3);
    for (std::size_t t = 0; t < m.num_triangles(); ++t)
        for (int k = 0; k < 3; ++k)
            out(static_cast< Eigen::Index >(t), k) = m.triangles[t][k];
    return out;
}

std::vector< double > as_field(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

py::dict nodal_summary(const Mesh2D& mesh, const Eigen::VectorXd& field, double zero_tol)
{
    const auto f     = as_field(field);
    const auto dec   = decompose_nodal(mesh, f, zero_tol);
    const auto st    = nodal_graph_stats(dec, mesh);
    py::dict   out;
    out["domains"]            = dec.domain_count;
    out["domain_sign"]        = dec.domain_sign;
    out["touches_steklov"]    = boundary_touch_check(dec, mesh);
    out["cycle_rank"]         = st.cycle_rank;
    out["boundary_endpoints"] = st.boundary_endpoints;
    out["segments"]           = dec.segments.size();
    return out;
}

std::string run_config_text(const std::string& text)
{
    const auto out = run(parse_config(Json::parse(text)));
    return to_json(out.report).dump();
}
} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Steklov spectra of planar domains";

    py::register_exception< Error >(m, "SteklovError", PyExc_ValueError);

    py::enum_< BoundaryTag >(m, "BoundaryTag")
        .value("Steklov", BoundaryTag::Steklov)
        .value("Neumann", BoundaryTag::Neumann)
        .value("Dirichlet", BoundaryTag::Dirichlet);

    py::class_< Mesh2D >(m, "Mesh")
        .def_property_readonly("vertices", &vertex_array)
        .def_property_readonly("triangles", &triangle_array)
        .def_property_readonly("num_vertices", &Mesh2D::num_vertices)
        .def_property_readonly("num_triangles", &Mesh2D::num_triangles)
        .def("area", [](const Mesh2D& self) { return total_area(self); })
        .def("boundary_length", [](const Mesh2D& self, BoundaryTag tag) { return boundary_length(self, tag); },
             py::arg("tag") = BoundaryTag::Steklov)
        .def("euler_characteristic", [](const Mesh2D& self) { return euler_characteristic(self); })
        .def("content_hash", [](const Mesh2D& self) { return content_hash(self); })
        .def("save", [](const Mesh2D& self, const std::filesystem::path& p) { save_mesh(p, self); })
        .def("__repr__", [](const Mesh2D& self) {
            return "<Mesh " + std::to_string(self.num_vertices()) + " vertices, " + std::to_string(self.num_triangles()) +
                   " triangles>";
        });

    m.def("disk_mesh", &make_disk_mesh, py::arg("radius") = 1.0, py::arg("h") = 0.05);
    m.def("annulus_mesh", &make_annulus_mesh, py::arg("inner_radius"), py::arg("outer_radius"), py::arg("h"));
    m.def("strip_mesh",
          [](double length, double width, double h, bool periodic) { return make_strip_mesh(length, width, h, periodic); },
          py::arg("length"), py::arg("width"), py::arg("h"), py::arg("periodic") = true);
    m.def("mixed_disk_mesh",
          [](double radius, double h, double start, double stop) {
              const double          two_pi = 2.0 * std::numbers::pi;
              std::vector< ArcTag > arcs{{ArcParam::Angle, start, stop, BoundaryTag::Steklov}};
              if (start > 0.0)
                  arcs.push_back({ArcParam::Angle, 0.0, start, BoundaryTag::Neumann});
              if (stop < two_pi)
                  arcs.push_back({ArcParam::Angle, stop, two_pi, BoundaryTag::Neumann});
              return tag_boundary(make_disk_mesh(radius, h), arcs);
          },
          py::arg("radius"), py::arg("h"), py::arg("start"), py::arg("stop"),
          "disk whose boundary is Steklov on the polar angles [start, stop) and Neumann elsewhere");
    m.def("load_mesh", &load_mesh);

    py::class_< SpectralResult >(m, "Spectrum")
        .def_readonly("eigenvalues", &SpectralResult::eigenvalues)
        .def_readonly("boundary_vertices", &SpectralResult::boundary_vertices)
        .def_readonly("extensions", &SpectralResult::extensions)
        .def_property_readonly("cluster_sizes", [](const SpectralResult& r) {
            std::vector< int > out;
            for (const auto& c : r.clusters)
                out.push_back(c.size());
            return out;
        });

    m.def("steklov_spectrum",
          [](const Mesh2D& mesh, int n, std::optional< double > tol) {
              return tol ? steklov_spectrum(mesh, n, *tol) : steklov_spectrum(mesh, n);
          },
          py::arg("mesh"), py::arg("n"), py::arg("cluster_tol") = py::none());
    m.def("spectral_residuals", &spectral_residuals);
    m.def("cylinder_formula", &cylinder_formula, py::arg("lam"), py::arg("eta"));
    m.def("nodal_summary", &nodal_summary, py::arg("mesh"), py::arg("field"), py::arg("zero_tol") = 1e-7);

    py::class_< MetricGraph >(m, "Graph")
        .def(py::init([](int n, std::vector< std::array< int, 2 > > edges, std::vector< double > lengths) {
                 MetricGraph g{n, std::move(edges), std::move(lengths)};
                 g.validate();
                 return g;
             }),
             py::arg("n_vertices"), py::arg("edges"), py::arg("lengths"))
        .def_readonly("n_vertices", &MetricGraph::n_vertices)
        .def_readonly("edges", &MetricGraph::edges)
        .def_readonly("lengths", &MetricGraph::lengths);
    m.def("complete_graph", &complete_graph, py::arg("n_vertices"), py::arg("length") = 1.0);
    m.def("graph_spectrum", [](const MetricGraph& g) { return graph_laplacian_spectrum(g).eigenvalues; });
    m.def("prescribe_spectrum",
          [](const std::vector< double >& targets, double tol, std::uint64_t seed) {
              PrescriptionOptions o;
              o.tol  = tol;
              o.seed = seed;
              return prescribe_spectrum(targets, o).graph;
          },
          py::arg("targets"), py::arg("tol") = 1e-8, py::arg("seed") = 1);
    m.def("thickened_mesh",
          [](const MetricGraph& g, double eps, double c, const std::string& style) {
              return build_thickened_mesh({g, embed_graph(g, parse_embedding_style(style)), eps, c, 0.0});
          },
          py::arg("graph"), py::arg("eps"), py::arg("c") = 2.0, py::arg("style") = "convex");

    m.def("_run_config", &run_config_text, py::call_guard< py::gil_scoped_release >());
}

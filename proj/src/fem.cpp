#include "steklov/fem.hpp"

#include "steklov/error.hpp"
#include "steklov/hash.hpp"
#include "steklov/mesh_io.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include <algorithm>
#include <numbers>

namespace steklov
{
class InteriorSolver
{
public:
    explicit InteriorSolver(const SparseMatrix& k_ii)
    {
        m_ldlt.compute(k_ii);
        if (m_ldlt.info() != Eigen::Success)
            throw FactorizationError("interior block factorization failed");
        const Eigen::VectorXd d = m_ldlt.vectorD();
        if (d.size() > 0)
        {
            const double dmax = d.cwiseAbs().maxCoeff();
            if (!(d.minCoeff() > 1e-12 * dmax))
                throw FactorizationError(
                    "interior block is singular: some region is cut off from every Steklov and Dirichlet vertex "
                    "(or carries zero weight)");
        }
    }

    [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return m_ldlt.solve(rhs); }

private:
    Eigen::SimplicialLDLT< SparseMatrix > m_ldlt;
};

namespace
{
std::vector< int > edge_vertices(const Mesh2D& mesh, BoundaryTag tag)
{
    std::vector< int > out;
    for (const auto& e : mesh.boundary_edges)
        if (e.tag == tag)
        {
            out.push_back(e.v[0]);
            out.push_back(e.v[1]);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}
} // namespace

Eigen::Matrix3d local_stiffness(const std::array< Vec2, 3 >& p, double weight)
{
    const double area = 0.5 * cross(p[1] - p[0], p[2] - p[0]);
    // gradient of barycentric i is rot(p_{i+2} - p_{i+1}) / (2A)
    std::array< Vec2, 3 > g{};
    for (int i = 0; i < 3; ++i)
    {
        const Vec2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
        g[i]         = Vec2{-e.y, e.x};
    }
    Eigen::Matrix3d k;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            k(i, j) = weight * dot(g[i], g[j]) / (4.0 * area);
    return k;
}

StiffnessMatrix assemble_stiffness(const Mesh2D& mesh)
{
    std::vector< Eigen::Triplet< double > > trips;
    trips.reserve(9 * mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    {
        const auto   pts  = mesh.triangle_points(static_cast< int >(t));
        const double area = 0.5 * cross(pts[1] - pts[0], pts[2] - pts[0]);
        const double scale = std::max({norm(pts[1] - pts[0]), norm(pts[2] - pts[1]), norm(pts[0] - pts[2])});
        if (!(area > 1e-14 * scale * scale))
            throw AssemblyError(fmt::format("triangle {} ({}, {}, {}) is degenerate (signed area {})", t,
                                            mesh.triangles[t][0], mesh.triangles[t][1], mesh.triangles[t][2], area));
        const auto k = local_stiffness(pts, mesh.tri_weight[t]);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trips.emplace_back(mesh.triangles[t][i], mesh.triangles[t][j], k(i, j));
    }
    const auto      n = static_cast< Eigen::Index >(mesh.vertices.size());
    StiffnessMatrix out{SparseMatrix(n, n)};
    out.matrix.setFromTriplets(trips.begin(), trips.end());
    return out;
}

BoundaryMass assemble_boundary_mass(const Mesh2D& mesh, BoundaryTag tag)
{
    BoundaryMass out;
    out.vertices = edge_vertices(mesh, tag);
    if (out.vertices.empty())
        throw EmptyBoundaryError(fmt::format("no boundary edges tagged {}", to_string(tag)));
    std::vector< int > local(mesh.vertices.size(), -1);
    for (std::size_t i = 0; i < out.vertices.size(); ++i)
        local[out.vertices[i]] = static_cast< int >(i);

    const auto m = static_cast< Eigen::Index >(out.vertices.size());
    out.matrix   = Eigen::MatrixXd::Zero(m, m);
    for (const auto& e : mesh.boundary_edges)
    {
        if (e.tag != tag)
            continue;
        const double s = e.density * mesh.edge_length(e.v[0], e.v[1]);
        const int    a = local[e.v[0]], b = local[e.v[1]];
        out.matrix(a, a) += s / 3.0;
        out.matrix(b, b) += s / 3.0;
        out.matrix(a, b) += s / 6.0;
        out.matrix(b, a) += s / 6.0;
    }
    return out;
}

std::vector< int > dirichlet_vertices(const Mesh2D& mesh)
{
    return edge_vertices(mesh, BoundaryTag::Dirichlet);
}

std::vector< int > steklov_vertices(const Mesh2D& mesh)
{
    auto       s = edge_vertices(mesh, BoundaryTag::Steklov);
    const auto d = dirichlet_vertices(mesh);
    std::vector< int > out;
    std::set_difference(s.begin(), s.end(), d.begin(), d.end(), std::back_inserter(out));
    return out;
}

Eigen::MatrixXd DtNMatrix::extend(const Eigen::MatrixXd& boundary_values, std::size_t n_vertices) const
{
    if (boundary_values.rows() != static_cast< Eigen::Index >(boundary_vertices.size()))
        throw ParameterError("boundary value count differs from the boundary vertex count");
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast< Eigen::Index >(n_vertices), boundary_values.cols());
    for (std::size_t i = 0; i < boundary_vertices.size(); ++i)
        full.row(boundary_vertices[i]) = boundary_values.row(static_cast< Eigen::Index >(i));
    if (!interior_vertices.empty())
    {
        const Eigen::MatrixXd inner = extension * boundary_values;
        for (std::size_t i = 0; i < interior_vertices.size(); ++i)
            full.row(interior_vertices[i]) = inner.row(static_cast< Eigen::Index >(i));
    }
    return full;
}

DtNMatrix dtn_matrix(const StiffnessMatrix& stiffness, std::span< const int > steklov, std::span< const int > dirichlet)
{
    const auto         n = static_cast< int >(stiffness.matrix.rows());
    std::vector< int > role(n, 0);   // 0 interior, 1 boundary, 2 dirichlet
    for (int v : steklov)
    {
        if (v < 0 || v >= n)
            throw ParameterError("Steklov vertex out of range");
        role[v] = 1;
    }
    for (int v : dirichlet)
    {
        if (v < 0 || v >= n)
            throw ParameterError("Dirichlet vertex out of range");
        if (role[v] == 1)
            throw ParameterError(fmt::format("vertex {} is both Steklov and Dirichlet", v));
        role[v] = 2;
    }
    if (steklov.empty())
        throw EmptyBoundaryError("DtN reduction needs at least one Steklov vertex");

    DtNMatrix out;
    out.boundary_vertices.assign(steklov.begin(), steklov.end());
    out.dirichlet_vertices.assign(dirichlet.begin(), dirichlet.end());
    std::vector< int > local(n, -1);
    for (std::size_t i = 0; i < out.boundary_vertices.size(); ++i)
        local[out.boundary_vertices[i]] = static_cast< int >(i);
    for (int v = 0; v < n; ++v)
        if (role[v] == 0)
        {
            local[v] = static_cast< int >(out.interior_vertices.size());
            out.interior_vertices.push_back(v);
        }

    const auto nb = static_cast< Eigen::Index >(out.boundary_vertices.size());
    const auto ni = static_cast< Eigen::Index >(out.interior_vertices.size());
    out.matrix    = Eigen::MatrixXd::Zero(nb, nb);
    std::vector< Eigen::Triplet< double > > ii, ib;
    for (int col = 0; col < n; ++col)
        for (SparseMatrix::InnerIterator it(stiffness.matrix, col); it; ++it)
        {
            const int row = static_cast< int >(it.row());
            if (role[row] == 2 || role[col] == 2)
                continue;
            if (role[row] == 1 && role[col] == 1)
                out.matrix(local[row], local[col]) += it.value();
            else if (role[row] == 0 && role[col] == 0)
                ii.emplace_back(local[row], local[col], it.value());
            else if (role[row] == 0 && role[col] == 1)
                ib.emplace_back(local[row], local[col], it.value());
        }
    if (ni == 0)
        return out;

    SparseMatrix k_ii(ni, ni), k_ib(ni, nb);
    k_ii.setFromTriplets(ii.begin(), ii.end());
    k_ib.setFromTriplets(ib.begin(), ib.end());
    auto solver   = std::make_shared< InteriorSolver >(k_ii);
    out.extension = -solver->solve(Eigen::MatrixXd(k_ib));
    out.matrix += k_ib.transpose() * out.extension;
    out.interior = std::move(solver);
    return out;
}

DtNMatrix dtn_matrix(const Mesh2D& mesh)
{
    const auto s = steklov_vertices(mesh);
    const auto d = dirichlet_vertices(mesh);
    return dtn_matrix(assemble_stiffness(mesh), s, d);
}

Eigen::MatrixXd restrict_mass(const BoundaryMass& mass, std::span< const int > vertices)
{
    std::vector< Eigen::Index > idx;
    idx.reserve(vertices.size());
    for (int v : vertices)
    {
        auto it = std::lower_bound(mass.vertices.begin(), mass.vertices.end(), v);
        if (it == mass.vertices.end() || *it != v)
            throw ParameterError(fmt::format("vertex {} carries no boundary mass", v));
        idx.push_back(it - mass.vertices.begin());
    }
    const auto      m = static_cast< Eigen::Index >(idx.size());
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            out(i, j) = mass.matrix(idx[i], idx[j]);
    return out;
}

double default_cluster_tol(const Mesh2D& mesh)
{
    const double scale = boundary_length(mesh, BoundaryTag::Steklov) / (2.0 * std::numbers::pi);
    const double rel_h = scale > 0.0 ? max_edge_length(mesh) / scale : 0.0;
    return std::max(1e-3, 2.0 * rel_h * rel_h);
}

const Cluster& SpectralResult::cluster_of(int k) const
{
    for (const auto& c : clusters)
        if (c.contains(k))
            return c;
    throw ParameterError(fmt::format("eigenvalue index {} outside the computed range", k));
}

SpectralResult steklov_spectrum(const Mesh2D& mesh, int n_eigs)
{
    return steklov_spectrum(mesh, n_eigs, default_cluster_tol(mesh));
}

SpectralResult steklov_spectrum(const Mesh2D& mesh, int n_eigs, double cluster_rel_tol)
{
    if (!(cluster_rel_tol > 0.0))
        throw ParameterError("cluster tolerance must be positive");
    const auto steklov = steklov_vertices(mesh);
    if (steklov.empty())
        throw EmptyBoundaryError("mesh has no Steklov vertices");
    if (n_eigs < 1 || n_eigs > static_cast< int >(steklov.size()))
        throw ParameterError(fmt::format("n_eigs = {} outside [1, {}]", n_eigs, steklov.size()));

    const auto dirichlet = dirichlet_vertices(mesh);
    const auto dtn       = dtn_matrix(assemble_stiffness(mesh), steklov, dirichlet);
    const auto mass      = assemble_boundary_mass(mesh, BoundaryTag::Steklov);
    const auto b         = restrict_mass(mass, steklov);

    const Eigen::MatrixXd lambda = 0.5 * (dtn.matrix + dtn.matrix.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver< Eigen::MatrixXd > es(lambda, b, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success)
        throw FactorizationError("generalized eigensolver failed (boundary mass not positive definite?)");

    SpectralResult out;
    out.boundary_vertices = steklov;
    out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n_eigs);
    // clamp the roundoff-level negative value of the constant mode
    for (double& s : out.eigenvalues)
        if (s < 0.0 && s > -1e-10)
            s = 0.0;
    out.boundary_vectors = es.eigenvectors().leftCols(n_eigs);
    for (int k = 0; k < n_eigs; ++k)
    {
        // deterministic sign: largest-magnitude entry positive
        Eigen::Index imax = 0;
        out.boundary_vectors.col(k).cwiseAbs().maxCoeff(&imax);
        if (out.boundary_vectors(imax, k) < 0.0)
            out.boundary_vectors.col(k) *= -1.0;
    }
    out.extensions      = dtn.extend(out.boundary_vectors, mesh.vertices.size());
    out.cluster_rel_tol = cluster_rel_tol;
    out.clusters        = multiplicity_clusters(out.eigenvalues, cluster_rel_tol);

    out.problem.mesh_hash      = content_hash(mesh);
    out.problem.n_vertices     = mesh.vertices.size();
    out.problem.n_triangles    = mesh.triangles.size();
    out.problem.n_steklov      = steklov.size();
    out.problem.n_dirichlet    = dirichlet.size();
    out.problem.steklov_length = boundary_length(mesh, BoundaryTag::Steklov);
    out.problem.has_neumann_edges =
        std::any_of(mesh.boundary_edges.begin(), mesh.boundary_edges.end(),
                    [](const BoundaryEdge& e) { return e.tag == BoundaryTag::Neumann; });
    return out;
}

std::vector< double > spectral_residuals(const Mesh2D& mesh, const SpectralResult& result)
{
    const auto dtn = dtn_matrix(assemble_stiffness(mesh), result.boundary_vertices, dirichlet_vertices(mesh));
    const auto b   = restrict_mass(assemble_boundary_mass(mesh), result.boundary_vertices);
    const Eigen::LLT< Eigen::MatrixXd > llt(b);
    std::vector< double >               out;
    for (std::size_t k = 0; k < result.eigenvalues.size(); ++k)
    {
        const Eigen::VectorXd v = result.boundary_vectors.col(static_cast< Eigen::Index >(k));
        const double          s = result.eigenvalues[k];
        const Eigen::VectorXd r = dtn.matrix * v - s * (b * v);
        // the dual norm of the residual w.r.t. B
        const double r_norm = std::sqrt(r.dot(llt.solve(r)));
        const double v_norm = std::sqrt(v.dot(b * v));
        out.push_back(r_norm / ((1.0 + s) * v_norm));
    }
    return out;
}

double rayleigh_quotient(const Mesh2D& mesh, std::span< const double > field)
{
    if (field.size() != mesh.vertices.size())
        throw ParameterError("field size differs from the vertex count");
    const Eigen::Map< const Eigen::VectorXd > f(field.data(), static_cast< Eigen::Index >(field.size()));
    const auto   k   = assemble_stiffness(mesh);
    const double num = f.dot(k.matrix * f);

    const auto      mass = assemble_boundary_mass(mesh);
    Eigen::VectorXd fb(static_cast< Eigen::Index >(mass.vertices.size()));
    for (std::size_t i = 0; i < mass.vertices.size(); ++i)
        fb(static_cast< Eigen::Index >(i)) = field[mass.vertices[i]];
    const double den = fb.dot(mass.matrix * fb);
    if (!(den > 0.0))
        throw DegenerateInputError("field vanishes on the Steklov boundary (zero boundary norm)");
    return num / den;
}

Eigen::VectorXd harmonic_extension(const Mesh2D& mesh, std::span< const double > boundary_values)
{
    const auto dtn = dtn_matrix(mesh);
    if (boundary_values.size() != dtn.boundary_vertices.size())
        throw ParameterError(fmt::format("expected {} Steklov boundary values, got {}", dtn.boundary_vertices.size(),
                                         boundary_values.size()));
    const Eigen::Map< const Eigen::VectorXd > bv(boundary_values.data(),
                                                 static_cast< Eigen::Index >(boundary_values.size()));
    return dtn.extend(bv, mesh.vertices.size()).col(0);
}

std::vector< Cluster > multiplicity_clusters(std::span< const double > eigenvalues, double rel_tol)
{
    if (!(rel_tol > 0.0))
        throw ParameterError("cluster tolerance must be positive");
    std::vector< Cluster > out;
    for (std::size_t j = 0; j < eigenvalues.size(); ++j)
    {
        const double s = eigenvalues[j];
        if (j > 0 && s - eigenvalues[j - 1] < rel_tol * std::max(1.0, s))
            out.back().last = static_cast< int >(j);
        else
            out.push_back({static_cast< int >(j), static_cast< int >(j)});
    }
    return out;
}

nlohmann::ordered_json to_json(const SpectralResult& result)
{
    nlohmann::ordered_json j;
    j["format"] = "steklov-spectrum v1";
    j["problem"] = {
        {"mesh_hash", fmt::format("{:016x}", result.problem.mesh_hash)},
        {"vertices", result.problem.n_vertices},
        {"triangles", result.problem.n_triangles},
        {"steklov_vertices", result.problem.n_steklov},
        {"dirichlet_vertices", result.problem.n_dirichlet},
        {"steklov_length", format_real(result.problem.steklov_length)},
        {"mixed", result.problem.has_neumann_edges},
    };
    auto& ev = j["eigenvalues"] = nlohmann::ordered_json::array();
    for (double s : result.eigenvalues)
        ev.push_back(format_real(s));
    j["cluster_rel_tol"] = format_real(result.cluster_rel_tol);
    auto& cl = j["clusters"] = nlohmann::ordered_json::array();
    for (const auto& c : result.clusters)
        cl.push_back({{"first", c.first}, {"last", c.last}, {"size", c.size()}});
    return j;
}

} // namespace steklov

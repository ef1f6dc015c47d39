#pragma once

#include "steklov/geometry.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <json.hpp>

#include <memory>
#include <span>
#include <vector>

namespace steklov
{
using SparseMatrix = Eigen::SparseMatrix< double >;

/// P1 Dirichlet-energy matrix over all mesh vertices, each triangle scaled by its weight.
struct StiffnessMatrix
{
    SparseMatrix matrix;
};

/// Consistent P1 mass of the tagged boundary, weighted by the edge density.
/// Row/column i corresponds to mesh vertex `vertices[i]`.
struct BoundaryMass
{
    std::vector< int > vertices;
    Eigen::MatrixXd    matrix;
};

class InteriorSolver;

/// Discrete Dirichlet-to-Neumann operator on a boundary vertex set.
struct DtNMatrix
{
    Eigen::MatrixXd    matrix;              // Lambda, rows ordered like boundary_vertices
    std::vector< int > boundary_vertices;
    std::vector< int > interior_vertices;   // eliminated block (interior + Neumann vertices)
    std::vector< int > dirichlet_vertices;  // held at zero
    Eigen::MatrixXd    extension;           // -K_ii^{-1} K_ib : boundary values -> interior values
    std::shared_ptr< const InteriorSolver > interior;

    /// Full vertex fields whose boundary values are the columns of `boundary_values`.
    [[nodiscard]] Eigen::MatrixXd extend(const Eigen::MatrixXd& boundary_values, std::size_t n_vertices) const;
};

struct Cluster
{
    int first = 0;
    int last  = 0;   // inclusive

    [[nodiscard]] int  size() const { return last - first + 1; }
    [[nodiscard]] bool contains(int k) const { return first <= k && k <= last; }
    friend bool        operator==(const Cluster&, const Cluster&) = default;
};

struct ProblemDescriptor
{
    std::uint64_t mesh_hash         = 0;
    std::size_t   n_vertices        = 0;
    std::size_t   n_triangles       = 0;
    std::size_t   n_steklov         = 0;
    std::size_t   n_dirichlet       = 0;
    double        steklov_length    = 0.0;
    bool          has_neumann_edges = false;
};

struct SpectralResult
{
    std::vector< double >  eigenvalues;        // ascending
    std::vector< int >     boundary_vertices;  // rows of boundary_vectors
    Eigen::MatrixXd        boundary_vectors;   // B-orthonormal columns
    Eigen::MatrixXd        extensions;         // n_vertices x n_eigs harmonic extensions
    std::vector< Cluster > clusters;
    double                 cluster_rel_tol = 0.0;
    ProblemDescriptor      problem;

    [[nodiscard]] const Cluster& cluster_of(int k) const;
};

Eigen::Matrix3d local_stiffness(const std::array< Vec2, 3 >& p, double weight);

StiffnessMatrix assemble_stiffness(const Mesh2D& mesh);
BoundaryMass    assemble_boundary_mass(const Mesh2D& mesh, BoundaryTag tag = BoundaryTag::Steklov);

/// Vertices carrying the Steklov condition: endpoints of Steklov edges, minus Dirichlet vertices.
std::vector< int > steklov_vertices(const Mesh2D& mesh);
/// Endpoints of Dirichlet edges.
std::vector< int > dirichlet_vertices(const Mesh2D& mesh);

DtNMatrix dtn_matrix(const StiffnessMatrix& stiffness, std::span< const int > steklov, std::span< const int > dirichlet);
DtNMatrix dtn_matrix(const Mesh2D& mesh);

/// Mass matrix restricted to `vertices` (which must be a subset of mass.vertices).
Eigen::MatrixXd restrict_mass(const BoundaryMass& mass, std::span< const int > vertices);

/// max(1e-3, 2 * (h_max / l)^2), l being the Steklov length over 2 pi.
double default_cluster_tol(const Mesh2D& mesh);

SpectralResult steklov_spectrum(const Mesh2D& mesh, int n_eigs, double cluster_rel_tol);
SpectralResult steklov_spectrum(const Mesh2D& mesh, int n_eigs);

/// Relative residuals |Lambda v - sigma B v|_B / ((1 + sigma) |v|_B) of every returned pair.
std::vector< double > spectral_residuals(const Mesh2D& mesh, const SpectralResult& result);

double          rayleigh_quotient(const Mesh2D& mesh, std::span< const double > field);
Eigen::VectorXd harmonic_extension(const Mesh2D& mesh, std::span< const double > boundary_values);

std::vector< Cluster > multiplicity_clusters(std::span< const double > eigenvalues, double rel_tol);

/// Canonical report layout; reals are 17-significant-digit strings.
nlohmann::ordered_json to_json(const SpectralResult& result);

} // namespace steklov

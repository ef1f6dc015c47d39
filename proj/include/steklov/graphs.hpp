#pragma once

#include "steklov/error.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace steklov
{
/// Finite simple connected graph with positive edge lengths.
struct MetricGraph
{
    int                                 n_vertices = 0;
    std::vector< std::array< int, 2 > > edges;
    std::vector< double >               lengths;

    /// Throws ValidationError on loops, multi-edges, non-positive lengths or disconnection.
    void validate() const;
    [[nodiscard]] int  num_edges() const { return static_cast< int >(edges.size()); }
    [[nodiscard]] int  cycle_rank() const { return num_edges() - n_vertices + 1; }
    [[nodiscard]] bool is_tree() const { return cycle_rank() == 0; }
};

MetricGraph complete_graph(int n_vertices, double length);
MetricGraph path_graph(const std::vector< double >& lengths);
MetricGraph cycle_graph(const std::vector< double >& lengths);
MetricGraph star_graph(const std::vector< double >& lengths);

struct GraphSpectrum
{
    std::vector< double > eigenvalues;   // ascending, eigenvalues[0] = 0
    Eigen::MatrixXd       vectors;       // orthonormal columns
};

/// Laplacian of q(f) = sum (f(x) - f(y))^2 / l over the edges.
Eigen::MatrixXd graph_laplacian(const MetricGraph& g);
GraphSpectrum   graph_laplacian_spectrum(const MetricGraph& g);

/// d lambda_k / d w_i = (v_k(x_i) - v_k(y_i))^2 with w = 1/l; rows k, columns edges.
/// Valid where lambda_k is simple.
Eigen::MatrixXd eigenvalue_weight_derivatives(const MetricGraph& g);

struct PrescriptionOptions
{
    int           max_iters = 400;    // per start
    double        tol       = 1e-8;   // max relative eigenvalue error
    int           starts    = 8;
    std::uint64_t seed      = 1;
};

struct PrescriptionResult
{
    MetricGraph graph;
    double      max_rel_err = 0.0;
    int         start       = 0;   // index of the successful start
    int         iterations  = 0;
};

/// Raised when no start reaches the tolerance; carries the best iterate.
class OptimizationFailure : public Error
{
public:
    OptimizationFailure(const std::string& what, MetricGraph best, double residual)
        : Error(what), m_best(std::move(best)), m_residual(residual)
    {
    }
    [[nodiscard]] const MetricGraph& best() const { return m_best; }
    [[nodiscard]] double             residual() const { return m_residual; }

private:
    MetricGraph m_best;
    double      m_residual;
};

/// Edge lengths on K_{N+1} whose Laplacian spectrum is (0, a_1, ..., a_N).
PrescriptionResult prescribe_spectrum(std::span< const double > targets, const PrescriptionOptions& options = {});

/// Largest relative error between the nonzero spectrum of g and targets.
double spectrum_error(const MetricGraph& g, std::span< const double > targets);

struct StabilityReport
{
    int                   cluster_first = 0;
    int                   cluster_last  = 0;
    std::vector< double > spreads;            // per perturbation: max - min of the cluster's eigenvalues
    std::vector< double > restored_errors;    // per perturbation: error after re-optimization in the ball
    double                max_spread        = 0.0;
    double                restored_fraction = 0.0;
};

/// Multiplicative length perturbations l_i (1 + magnitude u_i), u_i uniform in [-1, 1]; then
/// re-optimization of the lengths inside the same ball towards the unperturbed spectrum.
StabilityReport stability_probe(const MetricGraph& g, int k, int n_perturbations, double magnitude,
                                std::uint64_t seed = 1, double tol = 1e-8);

/// "steklov-graph v1": header, "vertices N", "edges E", then E lines "v0 v1 length".
void        write_graph(std::ostream& os, const MetricGraph& g);
MetricGraph read_graph(std::istream& is);
void        save_graph(const std::filesystem::path& path, const MetricGraph& g);
MetricGraph load_graph(const std::filesystem::path& path);

} // namespace steklov

#pragma once

#include "steklov/fem.hpp"
#include "steklov/geometry.hpp"
#include "steklov/report.hpp"

#include <functional>
#include <vector>

namespace steklov
{
/// Conformal deformation from density rho (the base mesh edge densities) towards rho_bar >= rho.
/// Energy weight h^{n-2} with h = (rho_bar/rho)^{1/(n-1)} on the Steklov boundary, decaying
/// linearly in distance to 1 at distance eps.
struct DensityFamily
{
    Mesh2D                base;
    std::vector< double > target_density;   // rho_bar per boundary edge (read on Steklov edges only)
    int                   virtual_dim = 3;
};

DensityFamily make_density_family(const Mesh2D& base, const std::function< double(Vec2) >& rho_bar, int virtual_dim = 3);

Mesh2D density_family_at(const DensityFamily& family, double eps);

/// Problem whose limit (eta -> 0) is the Steklov-Neumann problem on U.
/// Energy weight eta^{n-2} off U; Steklov density times eta^{n-1} off the Steklov part of dU.
struct SingularWeightFamily
{
    Mesh2D              base;
    std::vector< bool > in_u;   // per triangle
    int                 virtual_dim = 3;
};

Mesh2D singular_family_at(const SingularWeightFamily& family, double eta);

/// Steklov-Neumann problem on U itself: the eta -> 0 oracle.
Mesh2D singular_family_limit(const SingularWeightFamily& family);

/// sqrt(lambda) * tanh(eta * sqrt(lambda)).
double cylinder_formula(double lambda, double eta);

struct CollarOptions
{
    int    elements_across = 8;     // rows across the collar width
    double h_along         = 0.0;   // element length along the circle; 0 = circle_length / 128
    double cluster_rel_tol = 1e-3;
};

/// Steklov-Neumann on the flat cylinder S^1_L x [0, eta] (Steklov at y = 0), rescaled by 1/eta and
/// compared with (2 pi k / L)^2. Table "collar": eta, k, sigma, reference, abs_err, rel_err.
ExperimentReport collar_convergence_run(double circle_length, const std::vector< double >& widths, int n_eigs,
                                        const CollarOptions& options = {});

/// Eigenvalues of the flat cylinder S^1_L x [0, 2 eta] with both circles Steklov, split into the
/// branches even / odd under y -> 2 eta - y.
struct CylinderBranches
{
    std::vector< double > symmetric;
    std::vector< double > antisymmetric;
};

CylinderBranches cylinder_branches(double circle_length, double eta, int n_eigs, int elements_across = 16,
                                   double h_along = 0.0);

/// Reference symmetric branch 0, t_1, t_1, t_2, t_2, ... with t_k = cylinder_formula((2 pi k / L)^2, eta).
std::vector< double > cylinder_symmetric_reference(double circle_length, double eta, int count);

/// eps sweep of a density family against the direct rho_bar solve on the same mesh.
/// Table "density": eps, k, sigma, reference, abs_err, rel_err; k = 1..n_eigs.
ExperimentReport density_convergence_run(const DensityFamily& family, const std::vector< double >& eps_values,
                                         int n_eigs, unsigned jobs = 1);

/// eta sweep of a singular family against the submesh solve on U.
/// Table "subdomain": eta, k, sigma, reference, abs_err, rel_err; k = 1..n_eigs.
ExperimentReport subdomain_convergence_run(const SingularWeightFamily& family, const std::vector< double >& eta_values,
                                           int n_eigs, unsigned jobs = 1);

/// 2^{-j}, j = j_min..j_max.
std::vector< double > dyadic_sweep(int j_min, int j_max);

/// True when the last `tail` entries never increase by more than `slack` (relative).
bool eventually_decreasing(const std::vector< double >& errors, std::size_t tail = 3, double slack = 1e-9);

} // namespace steklov

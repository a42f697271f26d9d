#pragma once

#include "eigenrank/discrete_operator.h"
#include "eigenrank/eigensolve.h"
#include "eigenrank/products.h"

#include <Eigen/SparseCholesky>
#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace eigenrank {

// Inverse of the discrete -Laplacian by sparse factorization. Dirichlet
// grids use an LDL^T factorization; periodic grids (singular operator) use
// conjugate gradients on the mean-zero subspace and return the mean-zero
// solution.
class GreenSolver {
  public:
    explicit GreenSolver(const DiscreteOperator &laplacian);
    ~GreenSolver();
    GreenSolver(GreenSolver &&) noexcept;
    GreenSolver &operator=(GreenSolver &&) noexcept;

    // Solves -Delta u = rho. On periodic grids rho must already have zero
    // mean; a nonzero mean throws InvalidArgument (singular system).
    GridFunction solve(const GridFunction &rho) const;
    const Grid &grid() const { return m_grid; }

  private:
    struct Impl;
    Grid m_grid;
    std::unique_ptr<Impl> m_impl;
};

// u with -Delta u = rho (mean removed first on periodic grids).
GridFunction green_apply(const GridFunction &rho, const GreenSolver &solver);
// Same through spectral synthesis sum_k <rho, psi_k> psi_k / mu_k; the
// Laplacian basis must be complete.
GridFunction green_apply(const GridFunction &rho, const SpectralBasis &laplacian);

// (ij|kl) = <phi_i phi_j, G(phi_k phi_l)>.
double exact_eri(int i, int j, int k, int l, const SpectralBasis &basis,
                 const GreenSolver &green);

// sum_{m < r} c[i, j, m] c[k, l, m] / mu_m.
double fitted_eri(int i, int j, int k, int l, const ProductCoefficients &coeffs,
                  const SpectralBasis &laplacian, int r);

using Quadruple = std::array<int, 4>;

// Every quadruple when n <= exhaustive_limit, otherwise `samples` seeded draws.
std::vector<Quadruple> eri_quadruples(int n, std::uint64_t seed,
                                      int exhaustive_limit = 12,
                                      int samples = 500);

struct ERIEntry {
    Quadruple idx{};
    double exact{0.0};
    double fitted{0.0};
    double abs_err{0.0};
    // tail_hm1(i, j, r) tail_hm1(k, l, r)
    double bound{0.0};
};

struct ERIResult {
    int n{0};
    int r{0};
    double eps{0.0};
    std::vector<ERIEntry> entries;
    double max_abs_error{0.0};
    double mean_abs_error{0.0};
    // (max-pair tail_hm1(r))^2
    double certificate{0.0};
    int bound_violations{0};
    // max |(ij|kl) - (kl|ij)| over the sample, relative to max |(ij|kl)|.
    double symmetry_error{0.0};
    // per-integral work: quadruples * G vs quadruples * r
    double exact_ops{0.0};
    double fitted_ops{0.0};
    // one-time work: pair Green solves vs the pairs x r x G coefficient build
    double exact_setup_ops{0.0};
    double fitted_setup_ops{0.0};
    double exact_ms{0.0};
    double fitted_ms{0.0};

    double cost_ratio() const { return fitted_ops / exact_ops; }
};

struct ERIOptions {
    double calib{1.0};
    std::uint64_t seed{1};
};

// r = cutoff_hm1(eps, n, max_sup, d, calib), capped at the basis size; exact
// and fitted values on the quadruple sample with the Cauchy-Schwarz bounds.
ERIResult eri_benchmark(int n, double eps, const SpectralBasis &basis_l,
                        const SpectralBasis &basis_lap,
                        const ProductCoefficients &lap_coeffs,
                        const GreenSolver &green, const ERIOptions &options = {});

// Smallest eigenvalue of the exact Coulomb matrix over all pairs i <= j < n,
// divided by its largest absolute eigenvalue. Nonnegative up to roundoff.
double coulomb_matrix_min_relative_eigenvalue(const SpectralBasis &basis, int n,
                                              const GreenSolver &green);

} // namespace eigenrank

#pragma once

#include "eigenrank/coefficients.h"
#include "eigenrank/discrete_operator.h"
#include "eigenrank/grid.h"

#include <cstdint>
#include <vector>

namespace eigenrank {

// Lowest eigenpairs of a DiscreteOperator. Eigenvectors are stored as the
// columns of `vectors` and are orthonormal in the grid inner product, so their
// Euclidean norm is quadrature_weight^(-1/2). Residuals are grid L2 norms of
// M phi - lambda phi.
struct SpectralBasis {
    Grid grid;
    OperatorKind kind{OperatorKind::schrodinger};
    Vec values;
    Mat vectors;
    Vec residuals;
    double tol{0.0};
    bool iterative{false};

    int count() const { return static_cast<int>(values.size()); }
    bool complete() const { return static_cast<std::size_t>(count()) == grid.size(); }
    GridFunction function(int k) const;
};

struct EigenSolveOptions {
    double tol{1e-9};
    std::size_t dense_cap{5000};
    int max_restarts{60};
    std::uint64_t seed{0x5eed};
};

SpectralBasis lowest_eigenpairs(const DiscreteOperator &op, int m,
                                const EigenSolveOptions &options = {});

// Half-open index ranges [first, last) of eigenvalues whose consecutive gaps
// are below 1e-8 (1 + |lambda|).
struct Cluster {
    int first;
    int last;
    int size() const { return last - first; }
};
std::vector<Cluster> clusters(const Vec &values);

// max_{i,j} |<phi_i, phi_j> - delta_ij|
double orthonormality_error(const SpectralBasis &basis);

// Copy of `basis` with columns [first, last) replaced by a seeded random
// orthogonal rotation of themselves. Used to probe degeneracy invariance.
SpectralBasis rotate_cluster(const SpectralBasis &basis, Cluster cluster,
                             std::uint64_t seed);

// Same eigenpairs relabelled with another operator tag.
SpectralBasis retag(SpectralBasis basis, OperatorKind kind);

struct WeylFit {
    double exponent;
    double constant;
    double max_rel_dev;
};

// Least-squares fit log lambda_k = log C + p log k over 1-based k in
// [k_min, k_max].
WeylFit weyl_fit(const SpectralBasis &basis, int dimension, int k_min, int k_max);

// Largest index for which the discrete spectrum tracks the continuum:
// prod_a floor(N_a / 4).
int weyl_cap(const Grid &grid);

struct SupNorms {
    Vec per_k;
    double max_over_n;
};
SupNorms sup_norms(const SpectralBasis &basis, int n);

// Fit of ||phi_k||_inf = C lambda_k^p over 1-based k in [k_min, k_max].
struct HormanderFit {
    double exponent;
    double constant;
    double predicted; // (d - 1) / 4
};
HormanderFit hormander_fit(const SpectralBasis &basis, int dimension, int k_min,
                           int k_max);

// a_min mu_k - v_sup <= lambda_k <= a_max mu_k + v_sup for k < k_max.
struct ComparabilityReport {
    Vec lower_margin; // lambda_k - (a_min mu_k - v_sup)
    Vec upper_margin; // (a_max mu_k + v_sup) - lambda_k
    int violations{0};
    bool passed() const { return violations == 0; }
};
ComparabilityReport comparability_check(const SpectralBasis &basis_l,
                                        const SpectralBasis &basis_lap,
                                        const CoefficientField &field, int k_max);

} // namespace eigenrank

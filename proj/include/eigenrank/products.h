#pragma once

#include "eigenrank/coefficients.h"
#include "eigenrank/discrete_operator.h"
#include "eigenrank/eigensolve.h"

#include <utility>

namespace eigenrank {

// Unordered pairs i <= j are numbered with j outermost:
// index(i, j) = j (j + 1) / 2 + i. The pairs of the first n' < n functions
// therefore form a prefix of the pairs of the first n.
constexpr int pair_count(int n) { return n * (n + 1) / 2; }
constexpr int pair_index(int i, int j) {
    if (i > j)
        std::swap(i, j);
    return j * (j + 1) / 2 + i;
}
std::pair<int, int> pair_at(int p);

// c[i, j, k] = <phi_i phi_j, psi_k> for i <= j < n and k < m.
struct ProductCoefficients {
    int n{0};
    int m{0};
    OperatorKind target{OperatorKind::schrodinger};
    Boundary boundary{Boundary::dirichlet};
    // m equals the node count: Parseval holds exactly.
    bool complete{false};
    // m x pair_count(n); column p holds the coefficients of pair p.
    Mat coeffs;
    Vec product_norms;

    int pairs() const { return pair_count(n); }
    double operator()(int i, int j, int k) const {
        return coeffs(k, pair_index(i, j));
    }
    auto column(int i, int j) const { return coeffs.col(pair_index(i, j)); }
    // Periodic Laplacian coefficients carry the constant mode at k = 0; the
    // Hdot^{-1} pairing ignores it.
    bool skips_constant_mode() const {
        return target == OperatorKind::laplacian && boundary == Boundary::periodic;
    }
};

// The coefficients of the pairs of the first n functions (a column prefix).
ProductCoefficients leading_pairs(const ProductCoefficients &coeffs, int n);

GridFunction product_function(int i, int j, const SpectralBasis &basis);

// Node values of every product phi_i phi_j, i <= j < n, one column per pair.
Mat product_matrix(const SpectralBasis &basis, int n);

ProductCoefficients expansion_coefficients(const SpectralBasis &source,
                                           const SpectralBasis &target, int n,
                                           int m);

// sum_k lambda_k c[i, j, k]^2 with lambda the eigenvalues of the basis the
// coefficients were expanded against.
double quadratic_form_value(int i, int j, const ProductCoefficients &coeffs,
                            const SpectralBasis &target);

// Direct evaluation of <M f, f> through the stencil.
double stencil_quadratic_form(const DiscreteOperator &op, const GridFunction &f);

// Right-hand side of the traced product-rule chain for the first n
// eigenfunctions of L:
//   v_sup S^2 + a_max (2 sqrt((lambda_n + v_sup) / a_min) S)^2,
// S = max_{i < n} ||phi_i||_inf.
double quadratic_form_bound(const SpectralBasis &source,
                            const CoefficientField &field, int n);

struct QuadraticFormChain {
    double bound{0.0};
    double max_value{0.0};
    int violations{0};
    int checked{0};
};
// Checks quadratic_form_value(i, j) <= quadratic_form_bound for every pair.
QuadraticFormChain check_quadratic_form_chain(const ProductCoefficients &coeffs,
                                              const SpectralBasis &source,
                                              const CoefficientField &field);

} // namespace eigenrank

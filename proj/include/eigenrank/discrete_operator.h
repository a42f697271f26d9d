#pragma once

#include "eigenrank/coefficients.h"
#include "eigenrank/grid.h"

#include <Eigen/SparseCore>
#include <string_view>

namespace eigenrank {

using SparseMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

enum class OperatorKind { schrodinger, laplacian };

std::string_view to_string(OperatorKind k);

// Symmetric second-order flux-form discretization of -div(a grad) + V.
struct DiscreteOperator {
    Grid grid;
    OperatorKind kind{OperatorKind::schrodinger};
    SparseMat matrix;
    // min_i (M_ii - sum_{j != i} |M_ij|): lower bound on the spectrum.
    double gershgorin_lower{0.0};
    // max_i (M_ii + sum_{j != i} |M_ij|): upper bound on the spectrum.
    double gershgorin_upper{0.0};

    std::size_t size() const { return grid.size(); }
    GridFunction apply(const GridFunction &u) const;
};

DiscreteOperator assemble_schrodinger(const CoefficientField &field,
                                      const Grid &grid);
DiscreteOperator assemble_laplacian(const Grid &grid);

// Discrete weighted gradient energy sum_faces a_f (D u)_f^2 * weight, i.e. the
// V-free quadratic form <L0 u, u>. With a = 1 this is ||grad u||^2.
double gradient_energy(const CoefficientField &field, const GridFunction &u);
double gradient_norm_squared(const GridFunction &u);

} // namespace eigenrank

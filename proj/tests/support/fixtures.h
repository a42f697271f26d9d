#pragma once

#include "eigenrank/eigensolve.h"
#include "eigenrank/grid.h"

#include <array>
#include <numbers>

namespace fixture {

using eigenrank::Boundary;
using eigenrank::Grid;

inline Grid line(int points, double length = std::numbers::pi,
                 Boundary b = Boundary::dirichlet) {
    const std::array<double, 1> l{length};
    const std::array<int, 1> p{points};
    return eigenrank::make_grid(1, l, p, b);
}

inline Grid square(int points, double length = std::numbers::pi,
                   Boundary b = Boundary::dirichlet) {
    const std::array<double, 2> l{length, length};
    const std::array<int, 2> p{points, points};
    return eigenrank::make_grid(2, l, p, b);
}

inline Grid box(std::array<int, 3> points, std::array<double, 3> lengths,
                Boundary b = Boundary::dirichlet) {
    return eigenrank::make_grid(3, lengths, points, b);
}

// Complete eigenbasis of an operator (dense path).
inline eigenrank::SpectralBasis full_basis(const eigenrank::DiscreteOperator &op) {
    return eigenrank::lowest_eigenpairs(op, static_cast<int>(op.size()));
}

} // namespace fixture

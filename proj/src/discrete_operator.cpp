#include "eigenrank/discrete_operator.h"

#include "eigenrank/error.h"

#include <vector>

namespace eigenrank {

std::string_view to_string(OperatorKind k) {
    return k == OperatorKind::schrodinger ? "schrodinger" : "laplacian";
}

namespace {

constexpr std::ptrdiff_t ghost = -1;

// Calls visit(face_value_index, lower_node, upper_node, axis) for every face;
// ghost nodes outside a Dirichlet box are reported as -1.
template <typename Visit>
void for_each_face(const CoefficientField &field, Visit &&visit) {
    const Grid &grid = field.grid;
    const int d = grid.dimension();
    const bool dirichlet = grid.boundary() == Boundary::dirichlet;
    for (int axis = 0; axis < d; ++axis) {
        std::array<int, 3> extent{1, 1, 1};
        std::size_t total = 1;
        for (int a = 0; a < d; ++a) {
            extent[a] = a == axis ? field.face_count(axis) : grid.points(a);
            total *= static_cast<std::size_t>(extent[a]);
        }
        const int n_axis = grid.points(axis);
        for (std::size_t f = 0; f < total; ++f) {
            std::array<int, 3> idx{0, 0, 0};
            std::size_t rest = f;
            for (int a = 0; a < d; ++a) {
                idx[a] = static_cast<int>(rest % static_cast<std::size_t>(extent[a]));
                rest /= static_cast<std::size_t>(extent[a]);
            }
            std::size_t base = 0;
            for (int a = 0; a < d; ++a)
                if (a != axis)
                    base += static_cast<std::size_t>(idx[a]) * grid.stride(a);
            const auto node = [&](int i) {
                return static_cast<std::ptrdiff_t>(base + static_cast<std::size_t>(i) *
                                                              grid.stride(axis));
            };
            const int fi = idx[axis];
            std::ptrdiff_t lower, upper;
            if (dirichlet) {
                lower = fi == 0 ? ghost : node(fi - 1);
                upper = fi == n_axis ? ghost : node(fi);
            } else {
                lower = node(fi);
                upper = node((fi + 1) % n_axis);
            }
            visit(f, lower, upper, axis);
        }
    }
}

DiscreteOperator assemble(const CoefficientField &field, const Grid &grid,
                          OperatorKind kind) {
    require_same_grid(field.grid, grid, "operator");
    if (field.a_face.size() != static_cast<std::size_t>(grid.dimension()) ||
        static_cast<std::size_t>(field.v_node.size()) != grid.size())
        throw InvalidArgument("operator", "coefficient field does not match grid");

    const auto n = static_cast<Eigen::Index>(grid.size());
    std::vector<Eigen::Triplet<double, int>> triplets;
    triplets.reserve(grid.size() * static_cast<std::size_t>(2 * grid.dimension() + 1) * 2);

    for_each_face(field, [&](std::size_t f, std::ptrdiff_t lo, std::ptrdiff_t up, int axis) {
        const double h = grid.spacing(axis);
        const double c = field.a_face[static_cast<std::size_t>(axis)][static_cast<Eigen::Index>(f)] / (h * h);
        if (lo != ghost)
            triplets.emplace_back(static_cast<int>(lo), static_cast<int>(lo), c);
        if (up != ghost)
            triplets.emplace_back(static_cast<int>(up), static_cast<int>(up), c);
        if (lo != ghost && up != ghost) {
            triplets.emplace_back(static_cast<int>(lo), static_cast<int>(up), -c);
            triplets.emplace_back(static_cast<int>(up), static_cast<int>(lo), -c);
        }
    });
    for (Eigen::Index i = 0; i < n; ++i)
        if (field.v_node[i] != 0.0)
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), field.v_node[i]);

    DiscreteOperator op;
    op.grid = grid;
    op.kind = kind;
    op.matrix.resize(n, n);
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.matrix.makeCompressed();

    Vec diag = Vec::Zero(n);
    Vec off = Vec::Zero(n);
    for (int col = 0; col < op.matrix.outerSize(); ++col)
        for (SparseMat::InnerIterator it(op.matrix, col); it; ++it) {
            if (it.row() == it.col())
                diag[it.row()] += it.value();
            else
                off[it.row()] += std::abs(it.value());
        }
    op.gershgorin_lower = (diag - off).minCoeff();
    op.gershgorin_upper = (diag + off).maxCoeff();
    return op;
}

template <typename Coefficient>
double face_energy(const CoefficientField &field, const GridFunction &u,
                   Coefficient &&coef) {
    require_same_grid(field.grid, u.grid, "operator");
    double sum = 0.0;
    for_each_face(field, [&](std::size_t f, std::ptrdiff_t lo, std::ptrdiff_t up, int axis) {
        const double ulo = lo == ghost ? 0.0 : u.values[lo];
        const double uup = up == ghost ? 0.0 : u.values[up];
        const double grad = (uup - ulo) / u.grid.spacing(axis);
        sum += coef(axis, f) * grad * grad;
    });
    return sum * u.grid.quadrature_weight();
}

} // namespace

GridFunction DiscreteOperator::apply(const GridFunction &u) const {
    require_same_grid(grid, u.grid, "operator");
    return GridFunction(grid, matrix * u.values);
}

DiscreteOperator assemble_schrodinger(const CoefficientField &field, const Grid &grid) {
    return assemble(field, grid, OperatorKind::schrodinger);
}

DiscreteOperator assemble_laplacian(const Grid &grid) {
    return assemble(sample_coefficients(CoefficientSpec::constant(1.0, 0.0), grid), grid,
                    OperatorKind::laplacian);
}

double gradient_energy(const CoefficientField &field, const GridFunction &u) {
    return face_energy(field, u, [&](int axis, std::size_t f) {
        return field.a_face[static_cast<std::size_t>(axis)][static_cast<Eigen::Index>(f)];
    });
}

double gradient_norm_squared(const GridFunction &u) {
    const auto unit = sample_coefficients(CoefficientSpec::constant(1.0, 0.0), u.grid);
    return face_energy(unit, u, [](int, std::size_t) { return 1.0; });
}

} // namespace eigenrank

#include "eigenrank/grid.h"

#include "eigenrank/error.h"

#include <string>

namespace eigenrank {

std::string_view to_string(Boundary b) {
    return b == Boundary::dirichlet ? "dirichlet" : "periodic";
}

Boundary boundary_from_string(std::string_view s) {
    if (s == "dirichlet")
        return Boundary::dirichlet;
    if (s == "periodic")
        return Boundary::periodic;
    throw InvalidArgument("grid", "unknown boundary '" + std::string(s) + "'");
}

Grid make_grid(int dimension, std::span<const double> lengths,
               std::span<const int> points, Boundary boundary) {
    if (dimension < 1 || dimension > Grid::max_dimension)
        throw InvalidArgument("grid", "dimension must be 1, 2 or 3, got " +
                                          std::to_string(dimension));
    if (lengths.size() != static_cast<std::size_t>(dimension) ||
        points.size() != static_cast<std::size_t>(dimension))
        throw InvalidArgument("grid", "need one length and one point count per axis");

    Grid g;
    g.m_dim = dimension;
    g.m_boundary = boundary;
    g.m_weight = 1.0;
    g.m_size = 1;
    for (int a = 0; a < dimension; ++a) {
        if (!(lengths[a] > 0.0))
            throw InvalidArgument("grid", "lengths must be positive");
        if (points[a] < Grid::min_points)
            throw InvalidArgument("grid", "at least " +
                                              std::to_string(Grid::min_points) +
                                              " points per axis are required, got " +
                                              std::to_string(points[a]));
        g.m_points[a] = points[a];
        g.m_lengths[a] = lengths[a];
        g.m_spacing[a] = boundary == Boundary::dirichlet
                             ? lengths[a] / (points[a] + 1)
                             : lengths[a] / points[a];
        g.m_stride[a] = g.m_size;
        g.m_size *= static_cast<std::size_t>(points[a]);
        g.m_weight *= g.m_spacing[a];
    }
    return g;
}

std::array<int, Grid::max_dimension> Grid::multi_index(std::size_t node) const {
    std::array<int, max_dimension> idx{0, 0, 0};
    for (int a = 0; a < m_dim; ++a) {
        idx[a] = static_cast<int>(node % static_cast<std::size_t>(m_points[a]));
        node /= static_cast<std::size_t>(m_points[a]);
    }
    return idx;
}

double Grid::axis_coordinate(int axis, int i) const {
    const double offset = m_boundary == Boundary::dirichlet ? 1.0 : 0.0;
    return (i + offset) * m_spacing[axis];
}

double Grid::coordinate(std::size_t node, int axis) const {
    return axis_coordinate(axis, multi_index(node)[axis]);
}

GridFunction::GridFunction(Grid g, Vec v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != grid.size())
        throw InvalidArgument("grid", "grid function length does not match node count");
}

void require_same_grid(const Grid &a, const Grid &b, const char *module) {
    if (!(a == b))
        throw InvalidArgument(module, "grid mismatch");
}

double inner(const GridFunction &f, const GridFunction &g) {
    require_same_grid(f.grid, g.grid, "grid");
    return f.grid.quadrature_weight() * f.values.dot(g.values);
}

double norm(const GridFunction &f) { return std::sqrt(inner(f, f)); }

} // namespace eigenrank

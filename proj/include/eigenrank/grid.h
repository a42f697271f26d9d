#pragma once

#include <Eigen/Core>
#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace eigenrank {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Boundary { dirichlet, periodic };

std::string_view to_string(Boundary b);
Boundary boundary_from_string(std::string_view s);

// Uniform tensor-product grid on the box [0, L_0] x ... x [0, L_{d-1}].
//
// Dirichlet grids hold interior nodes only, x_i = (i + 1) h with
// h = L / (N + 1); periodic grids hold x_i = i h with h = L / N. Nodes are
// flattened lexicographically with axis 0 fastest. Every node carries the
// same quadrature weight prod(h).
class Grid {
  public:
    static constexpr int max_dimension = 3;
    static constexpr int min_points = 8;
    // Above this node count a d = 3 grid is too large for the dense path.
    static constexpr std::size_t dense_hazard_nodes = 64000;

    Grid() = default;

    int dimension() const { return m_dim; }
    Boundary boundary() const { return m_boundary; }
    int points(int axis) const { return m_points[axis]; }
    double length(int axis) const { return m_lengths[axis]; }
    double spacing(int axis) const { return m_spacing[axis]; }
    double quadrature_weight() const { return m_weight; }
    std::size_t size() const { return m_size; }

    // Stride of `axis` in the flattened node ordering.
    std::size_t stride(int axis) const { return m_stride[axis]; }
    std::array<int, max_dimension> multi_index(std::size_t node) const;
    double coordinate(std::size_t node, int axis) const;
    // Coordinate of node index `i` along one axis.
    double axis_coordinate(int axis, int i) const;

    bool dense_solver_hazard() const {
        return m_dim == 3 && m_size > dense_hazard_nodes;
    }

    friend bool operator==(const Grid &, const Grid &) = default;

  private:
    friend Grid make_grid(int, std::span<const double>, std::span<const int>,
                          Boundary);

    int m_dim{0};
    Boundary m_boundary{Boundary::dirichlet};
    std::array<int, max_dimension> m_points{1, 1, 1};
    std::array<double, max_dimension> m_lengths{0.0, 0.0, 0.0};
    std::array<double, max_dimension> m_spacing{0.0, 0.0, 0.0};
    std::array<std::size_t, max_dimension> m_stride{0, 0, 0};
    double m_weight{0.0};
    std::size_t m_size{0};
};

Grid make_grid(int dimension, std::span<const double> lengths,
               std::span<const int> points, Boundary boundary);

// Node values of a function on a grid.
struct GridFunction {
    Grid grid;
    Vec values;

    GridFunction() = default;
    GridFunction(Grid g, Vec v);
    explicit GridFunction(const Grid &g) : grid(g), values(Vec::Zero(g.size())) {}
};

// Discrete L2 pairing: quadrature_weight * sum_nodes f g.
double inner(const GridFunction &f, const GridFunction &g);
double norm(const GridFunction &f);

// Sample a callable f(x) with x a std::array<double, 3> of coordinates.
template <typename F> GridFunction sample(const Grid &grid, F &&f) {
    GridFunction out(grid);
    for (std::size_t node = 0; node < grid.size(); ++node) {
        std::array<double, Grid::max_dimension> x{0.0, 0.0, 0.0};
        for (int a = 0; a < grid.dimension(); ++a)
            x[a] = grid.coordinate(node, a);
        out.values[static_cast<Eigen::Index>(node)] = f(x);
    }
    return out;
}

void require_same_grid(const Grid &a, const Grid &b, const char *module);

} // namespace eigenrank

#pragma once

#include "eigenrank/grid.h"

#include <cstdint>
#include <string_view>
#include <vector>

namespace eigenrank {

enum class CoefficientKind { constant, harmonic, random_fourier };

std::string_view to_string(CoefficientKind k);
CoefficientKind coefficient_kind_from_string(std::string_view s);

// Description of a(x) and V(x) for L u = -div(a grad u) + V u.
//
//  constant:        a = a0, V = v0
//  harmonic:        a = a0, V = v_scale |x - center|^2, center = box midpoint
//  random_fourier:  a = a0 + delta s_a(x), V = v0 + v_delta s_V(x), where
//                   s(x) is a random cosine series over integer wave vectors
//                   with components in [0, fourier_cutoff], normalized so
//                   |s| <= 1, then clipped to [-1, 1].
struct CoefficientSpec {
    CoefficientKind kind{CoefficientKind::constant};
    double a0{1.0};
    double v0{0.0};
    double v_scale{0.0};
    std::uint64_t seed{0};
    int fourier_cutoff{4};
    double delta{0.0};
    double v_delta{0.0};

    static CoefficientSpec constant(double a0, double v0);
    static CoefficientSpec harmonic(double a0, double v_scale);
    static CoefficientSpec random_fourier(std::uint64_t seed, int cutoff,
                                          double a0, double delta,
                                          double v0 = 0.0, double v_delta = 0.0);

    // Throws InvalidArgument when the spec cannot produce a(x) > 0.
    void validate() const;

    friend bool operator==(const CoefficientSpec &,
                           const CoefficientSpec &) = default;
};

// a(x) sampled at cell faces, V(x) at nodes.
//
// Faces along axis `a` are stored on a face grid whose extent along `a` is
// N_a + 1 (Dirichlet: face f sits between node f - 1 and node f, with ghost
// nodes -1 and N_a) or N_a (periodic: face f sits between node f and
// node f + 1 mod N_a); other axes keep their node counts. Flattening is
// lexicographic, axis 0 fastest.
struct CoefficientField {
    Grid grid;
    std::vector<Vec> a_face; // one array per axis
    Vec v_node;
    double a_min{0.0};
    double a_max{0.0};
    double v_sup{0.0};

    int face_count(int axis) const;
    std::size_t face_index(int axis, std::array<int, Grid::max_dimension> f) const;
};

CoefficientField sample_coefficients(const CoefficientSpec &spec,
                                     const Grid &grid);

} // namespace eigenrank

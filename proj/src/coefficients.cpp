#include "eigenrank/coefficients.h"

#include "eigenrank/error.h"
#include "eigenrank/random.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace eigenrank {

std::string_view to_string(CoefficientKind k) {
    switch (k) {
    case CoefficientKind::constant:
        return "constant";
    case CoefficientKind::harmonic:
        return "harmonic";
    case CoefficientKind::random_fourier:
        return "random_fourier";
    }
    return "constant";
}

CoefficientKind coefficient_kind_from_string(std::string_view s) {
    if (s == "constant")
        return CoefficientKind::constant;
    if (s == "harmonic")
        return CoefficientKind::harmonic;
    if (s == "random_fourier")
        return CoefficientKind::random_fourier;
    throw InvalidArgument("operator", "unknown coefficient kind '" + std::string(s) + "'");
}

CoefficientSpec CoefficientSpec::constant(double a0, double v0) {
    CoefficientSpec s;
    s.kind = CoefficientKind::constant;
    s.a0 = a0;
    s.v0 = v0;
    return s;
}

CoefficientSpec CoefficientSpec::harmonic(double a0, double v_scale) {
    CoefficientSpec s;
    s.kind = CoefficientKind::harmonic;
    s.a0 = a0;
    s.v_scale = v_scale;
    return s;
}

CoefficientSpec CoefficientSpec::random_fourier(std::uint64_t seed, int cutoff,
                                                double a0, double delta, double v0,
                                                double v_delta) {
    CoefficientSpec s;
    s.kind = CoefficientKind::random_fourier;
    s.seed = seed;
    s.fourier_cutoff = cutoff;
    s.a0 = a0;
    s.delta = delta;
    s.v0 = v0;
    s.v_delta = v_delta;
    return s;
}

void CoefficientSpec::validate() const {
    if (!(a0 > 0.0))
        throw InvalidArgument("operator", "a0 must be positive");
    switch (kind) {
    case CoefficientKind::constant:
        if (v0 < 0.0)
            throw InvalidArgument("operator", "v0 must be nonnegative");
        break;
    case CoefficientKind::harmonic:
        if (v_scale < 0.0)
            throw InvalidArgument("operator", "v_scale must be nonnegative");
        break;
    case CoefficientKind::random_fourier:
        if (fourier_cutoff < 0)
            throw InvalidArgument("operator", "fourier cutoff must be nonnegative");
        if (delta < 0.0 || !(delta < a0))
            throw InvalidArgument("operator", "amplitude delta must satisfy 0 <= delta < a0");
        if (v_delta < 0.0)
            throw InvalidArgument("operator", "v_delta must be nonnegative");
        break;
    }
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Random cosine series sum_k c_k cos(2 pi k.x / L + phase_k) / sum_k |c_k| over
// integer wave vectors with components in [0, cutoff], excluding k = 0.
class FourierSeries {
  public:
    FourierSeries(std::uint64_t seed, std::uint64_t stream, int cutoff,
                  const Grid &grid)
        : m_dim(grid.dimension()) {
        const CounterRng rng(seed, stream);
        const int extent = cutoff + 1;
        int total = 1;
        for (int a = 0; a < m_dim; ++a)
            total *= extent;
        std::uint64_t counter = 0;
        double l1 = 0.0;
        for (int idx = 1; idx < total; ++idx) {
            Term t;
            int rest = idx;
            for (int a = 0; a < m_dim; ++a) {
                t.wave[a] = two_pi * (rest % extent) / grid.length(a);
                rest /= extent;
            }
            t.amplitude = rng.uniform(counter++, -1.0, 1.0);
            t.phase = rng.uniform(counter++, 0.0, two_pi);
            l1 += std::abs(t.amplitude);
            m_terms.push_back(t);
        }
        m_scale = l1 > 0.0 ? 1.0 / l1 : 0.0;
    }

    double operator()(const std::array<double, Grid::max_dimension> &x) const {
        double s = 0.0;
        for (const Term &t : m_terms) {
            double arg = t.phase;
            for (int a = 0; a < m_dim; ++a)
                arg += t.wave[a] * x[a];
            s += t.amplitude * std::cos(arg);
        }
        return std::clamp(s * m_scale, -1.0, 1.0);
    }

  private:
    struct Term {
        std::array<double, Grid::max_dimension> wave{0.0, 0.0, 0.0};
        double amplitude{0.0};
        double phase{0.0};
    };
    int m_dim;
    std::vector<Term> m_terms;
    double m_scale{0.0};
};

constexpr std::uint64_t stream_a = 1;
constexpr std::uint64_t stream_v = 2;

} // namespace

int CoefficientField::face_count(int axis) const {
    return grid.boundary() == Boundary::dirichlet ? grid.points(axis) + 1
                                                  : grid.points(axis);
}

std::size_t CoefficientField::face_index(int axis,
                                         std::array<int, Grid::max_dimension> f) const {
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (int a = 0; a < grid.dimension(); ++a) {
        const int extent = a == axis ? face_count(axis) : grid.points(a);
        idx += static_cast<std::size_t>(f[a]) * stride;
        stride *= static_cast<std::size_t>(extent);
    }
    return idx;
}

CoefficientField sample_coefficients(const CoefficientSpec &spec, const Grid &grid) {
    spec.validate();
    const int d = grid.dimension();

    std::function<double(const std::array<double, 3> &)> a_fn;
    std::function<double(const std::array<double, 3> &)> v_fn;
    switch (spec.kind) {
    case CoefficientKind::constant:
        a_fn = [a0 = spec.a0](const auto &) { return a0; };
        v_fn = [v0 = spec.v0](const auto &) { return v0; };
        break;
    case CoefficientKind::harmonic: {
        std::array<double, 3> center{0.0, 0.0, 0.0};
        for (int a = 0; a < d; ++a)
            center[a] = 0.5 * grid.length(a);
        a_fn = [a0 = spec.a0](const auto &) { return a0; };
        v_fn = [scale = spec.v_scale, center, d](const auto &x) {
            double r2 = 0.0;
            for (int a = 0; a < d; ++a)
                r2 += (x[a] - center[a]) * (x[a] - center[a]);
            return scale * r2;
        };
        break;
    }
    case CoefficientKind::random_fourier: {
        FourierSeries sa(spec.seed, stream_a, spec.fourier_cutoff, grid);
        FourierSeries sv(spec.seed, stream_v, spec.fourier_cutoff, grid);
        a_fn = [sa, a0 = spec.a0, delta = spec.delta](const auto &x) {
            return a0 + delta * sa(x);
        };
        v_fn = [sv, v0 = spec.v0, vd = spec.v_delta](const auto &x) {
            return v0 + vd * sv(x);
        };
        break;
    }
    }

    CoefficientField field;
    field.grid = grid;
    field.v_node = sample(grid, v_fn).values;
    field.v_sup = field.v_node.cwiseAbs().maxCoeff();

    field.a_face.resize(static_cast<std::size_t>(d));
    field.a_min = std::numeric_limits<double>::infinity();
    field.a_max = -std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < d; ++axis) {
        std::array<int, 3> extent{1, 1, 1};
        std::size_t total = 1;
        for (int a = 0; a < d; ++a) {
            extent[a] = a == axis ? field.face_count(axis) : grid.points(a);
            total *= static_cast<std::size_t>(extent[a]);
        }
        Vec values(static_cast<Eigen::Index>(total));
        for (std::size_t f = 0; f < total; ++f) {
            std::array<double, 3> x{0.0, 0.0, 0.0};
            std::size_t rest = f;
            for (int a = 0; a < d; ++a) {
                const int i = static_cast<int>(rest % static_cast<std::size_t>(extent[a]));
                rest /= static_cast<std::size_t>(extent[a]);
                // Dirichlet face f lies between nodes f - 1 and f, periodic
                // face f between nodes f and f + 1; both sit at (f + 1/2) h.
                if (a == axis)
                    x[a] = (i + 0.5) * grid.spacing(a);
                else
                    x[a] = grid.axis_coordinate(a, i);
            }
            values[static_cast<Eigen::Index>(f)] = a_fn(x);
        }
        field.a_min = std::min(field.a_min, values.minCoeff());
        field.a_max = std::max(field.a_max, values.maxCoeff());
        field.a_face[static_cast<std::size_t>(axis)] = std::move(values);
    }
    if (!(field.a_min > 0.0))
        throw InvalidArgument("operator", "sampled diffusion coefficient is not positive");
    return field;
}

} // namespace eigenrank

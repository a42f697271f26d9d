#include "eigenrank/eri.h"

#include "eigenrank/error.h"
#include "eigenrank/lowrank.h"
#include "eigenrank/random.h"

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <chrono>
#include <cmath>
#include <variant>

namespace eigenrank {

struct GreenSolver::Impl {
    std::variant<Eigen::SimplicialLDLT<SparseMat>,
                 Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper>>
        solver;
};

GreenSolver::GreenSolver(const DiscreteOperator &laplacian)
    : m_grid(laplacian.grid), m_impl(std::make_unique<Impl>()) {
    if (laplacian.kind != OperatorKind::laplacian)
        throw InvalidArgument("eri", "Green solver needs the Laplacian operator");
    if (m_grid.boundary() == Boundary::dirichlet) {
        auto &ldlt = m_impl->solver.emplace<0>(laplacian.matrix);
        if (ldlt.info() != Eigen::Success)
            throw InvalidArgument("eri", "Laplacian factorization failed");
    } else {
        auto &cg = m_impl->solver.emplace<1>();
        cg.setTolerance(1e-14);
        cg.setMaxIterations(static_cast<Eigen::Index>(10 * m_grid.size()));
        cg.compute(laplacian.matrix);
    }
}

GreenSolver::~GreenSolver() = default;
GreenSolver::GreenSolver(GreenSolver &&) noexcept = default;
GreenSolver &GreenSolver::operator=(GreenSolver &&) noexcept = default;

GridFunction GreenSolver::solve(const GridFunction &rho) const {
    require_same_grid(m_grid, rho.grid, "eri");
    if (auto *ldlt = std::get_if<0>(&m_impl->solver))
        return GridFunction(m_grid, ldlt->solve(rho.values));

    const double mean = rho.values.mean();
    const double scale = std::max(1.0, rho.values.cwiseAbs().maxCoeff());
    if (std::abs(mean) > 1e-12 * scale)
        throw InvalidArgument("eri", "singular periodic solve: right-hand side has mean " +
                                         std::to_string(mean));
    const auto &cg = std::get<1>(m_impl->solver);
    Vec u = cg.solve(rho.values);
    u.array() -= u.mean();
    return GridFunction(m_grid, std::move(u));
}

GridFunction green_apply(const GridFunction &rho, const GreenSolver &solver) {
    if (rho.grid.boundary() == Boundary::dirichlet)
        return solver.solve(rho);
    GridFunction centered = rho;
    centered.values.array() -= centered.values.mean();
    return solver.solve(centered);
}

GridFunction green_apply(const GridFunction &rho, const SpectralBasis &laplacian) {
    require_same_grid(rho.grid, laplacian.grid, "eri");
    if (laplacian.kind != OperatorKind::laplacian || !laplacian.complete())
        throw InvalidArgument("eri", "spectral Green synthesis needs the complete "
                                     "Laplacian eigenbasis");
    const double w = rho.grid.quadrature_weight();
    Vec c = w * (laplacian.vectors.transpose() * rho.values);
    const int skip = rho.grid.boundary() == Boundary::periodic ? 1 : 0;
    for (Eigen::Index k = 0; k < c.size(); ++k)
        c[k] = k < skip ? 0.0 : c[k] / laplacian.values[k];
    return GridFunction(rho.grid, laplacian.vectors * c);
}

double exact_eri(int i, int j, int k, int l, const SpectralBasis &basis,
                 const GreenSolver &green) {
    const GridFunction rho_ij = product_function(i, j, basis);
    const GridFunction rho_kl = product_function(k, l, basis);
    return inner(rho_ij, green_apply(rho_kl, green));
}

double fitted_eri(int i, int j, int k, int l, const ProductCoefficients &coeffs,
                  const SpectralBasis &laplacian, int r) {
    if (coeffs.target != OperatorKind::laplacian || laplacian.kind != OperatorKind::laplacian)
        throw InvalidArgument("eri", "density fitting needs Laplacian coefficients");
    if (r < 0 || r > coeffs.m || r > laplacian.count())
        throw InvalidArgument("eri", "fitting rank out of range");
    for (int idx : {i, j, k, l})
        if (idx < 0 || idx >= coeffs.n)
            throw InvalidArgument("eri", "orbital index out of range");
    const auto a = coeffs.column(i, j);
    const auto b = coeffs.column(k, l);
    const int skip = coeffs.skips_constant_mode() ? 1 : 0;
    double sum = 0.0;
    for (int m = skip; m < r; ++m)
        sum += a[m] * b[m] / laplacian.values[m];
    return sum;
}

std::vector<Quadruple> eri_quadruples(int n, std::uint64_t seed, int exhaustive_limit,
                                      int samples) {
    std::vector<Quadruple> out;
    if (n <= exhaustive_limit) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        out.push_back({i, j, k, l});
        return out;
    }
    const CounterRng rng(seed, 0xe41);
    std::uint64_t counter = 0;
    for (int s = 0; s < samples; ++s) {
        Quadruple q{};
        for (int &idx : q)
            idx = static_cast<int>(rng.bits(counter++) % static_cast<std::uint64_t>(n));
        out.push_back(q);
    }
    return out;
}

namespace {

// Green solve of every pair density, one column per pair.
Mat green_columns(const Mat &densities, const Grid &grid, const GreenSolver &green) {
    Mat u(densities.rows(), densities.cols());
    for (Eigen::Index p = 0; p < densities.cols(); ++p)
        u.col(p) = green_apply(GridFunction(grid, densities.col(p)), green).values;
    return u;
}

} // namespace

ERIResult eri_benchmark(int n, double eps, const SpectralBasis &basis_l,
                        const SpectralBasis &basis_lap,
                        const ProductCoefficients &lap_coeffs, const GreenSolver &green,
                        const ERIOptions &options) {
    using clock = std::chrono::steady_clock;
    require_same_grid(basis_l.grid, basis_lap.grid, "eri");
    if (n < 1 || n > lap_coeffs.n)
        throw InvalidArgument("eri", "n exceeds the computed Laplacian coefficients");
    const Grid &grid = basis_l.grid;
    const double w = grid.quadrature_weight();

    ERIResult res;
    res.n = n;
    res.eps = eps;
    const double max_sup = sup_norms(basis_l, n).max_over_n;
    res.r = std::min(cutoff_hm1(eps, n, max_sup, grid.dimension(), options.calib),
                     lap_coeffs.m);

    const TailTable tails = TailTable::hm1(lap_coeffs, basis_lap);
    res.certificate = std::pow(tails.max_tail(n, res.r), 2);

    const auto quads = eri_quadruples(n, options.seed);
    const int pairs = pair_count(n);

    auto start = clock::now();
    const Mat densities = product_matrix(basis_l, n);
    const Mat potentials = green_columns(densities, grid, green);
    std::vector<double> exact(quads.size()), swapped(quads.size());
    for (std::size_t q = 0; q < quads.size(); ++q) {
        const auto [i, j, k, l] = quads[q];
        const int ij = pair_index(i, j), kl = pair_index(k, l);
        exact[q] = w * densities.col(ij).dot(potentials.col(kl));
        swapped[q] = w * densities.col(kl).dot(potentials.col(ij));
    }
    res.exact_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();

    start = clock::now();
    const int skip = lap_coeffs.skips_constant_mode() ? 1 : 0;
    Mat scaled = lap_coeffs.coeffs.topRows(res.r).leftCols(pairs);
    for (int m = 0; m < res.r; ++m)
        scaled.row(m) *= m < skip ? 0.0 : 1.0 / std::sqrt(basis_lap.values[m]);
    std::vector<double> fitted(quads.size());
    for (std::size_t q = 0; q < quads.size(); ++q) {
        const auto [i, j, k, l] = quads[q];
        fitted[q] = scaled.col(pair_index(i, j)).dot(scaled.col(pair_index(k, l)));
    }
    res.fitted_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();

    double sum_err = 0.0, max_exact = 0.0, max_asym = 0.0;
    for (std::size_t q = 0; q < quads.size(); ++q) {
        const auto [i, j, k, l] = quads[q];
        ERIEntry e;
        e.idx = quads[q];
        e.exact = exact[q];
        e.fitted = fitted[q];
        e.abs_err = std::abs(e.exact - e.fitted);
        e.bound = tails.tail(i, j, res.r) * tails.tail(k, l, res.r);
        if (e.abs_err > e.bound + 1e-12)
            ++res.bound_violations;
        res.max_abs_error = std::max(res.max_abs_error, e.abs_err);
        sum_err += e.abs_err;
        max_exact = std::max(max_exact, std::abs(e.exact));
        max_asym = std::max(max_asym, std::abs(exact[q] - swapped[q]));
        res.entries.push_back(e);
    }
    res.mean_abs_error = quads.empty() ? 0.0 : sum_err / static_cast<double>(quads.size());
    res.symmetry_error = max_exact > 0.0 ? max_asym / max_exact : 0.0;

    const double g = static_cast<double>(grid.size());
    const double nq = static_cast<double>(quads.size());
    res.exact_ops = nq * g;
    res.fitted_ops = nq * res.r;
    res.exact_setup_ops = pairs * g;
    res.fitted_setup_ops = static_cast<double>(pairs) * res.r * g;
    return res;
}

double coulomb_matrix_min_relative_eigenvalue(const SpectralBasis &basis, int n,
                                              const GreenSolver &green) {
    const Mat densities = product_matrix(basis, n);
    const Mat potentials = green_columns(densities, basis.grid, green);
    Mat coulomb = basis.grid.quadrature_weight() * (densities.transpose() * potentials);
    coulomb = 0.5 * (coulomb + coulomb.transpose()).eval();
    const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(coulomb, Eigen::EigenvaluesOnly).eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    return scale > 0.0 ? ev.minCoeff() / scale : 0.0;
}

} // namespace eigenrank

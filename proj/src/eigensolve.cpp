#include "eigenrank/eigensolve.h"

#include "eigenrank/error.h"
#include "eigenrank/random.h"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <lapacke.h>
#include <string>

namespace eigenrank {

GridFunction SpectralBasis::function(int k) const {
    if (k < 0 || k >= count())
        throw InvalidArgument("eigensolve", "eigenvector index out of range");
    return GridFunction(grid, vectors.col(k));
}

std::vector<Cluster> clusters(const Vec &values) {
    std::vector<Cluster> out;
    const int m = static_cast<int>(values.size());
    int first = 0;
    for (int k = 1; k <= m; ++k) {
        if (k == m || values[k] - values[k - 1] >= 1e-8 * (1.0 + std::abs(values[k]))) {
            out.push_back({first, k});
            first = k;
        }
    }
    return out;
}

namespace {

// Unit Euclidean-norm eigenvectors in, grid-normalized basis out.
SpectralBasis finalize(const DiscreteOperator &op, Vec values, Mat unit_vectors,
                       double tol, bool iterative) {
    const Grid &grid = op.grid;
    const double w = grid.quadrature_weight();

    // Re-orthonormalize inside degenerate clusters (two Gram-Schmidt passes).
    for (const Cluster &c : clusters(values)) {
        if (c.size() < 2)
            continue;
        for (int pass = 0; pass < 2; ++pass)
            for (int k = c.first; k < c.last; ++k) {
                for (int q = c.first; q < k; ++q)
                    unit_vectors.col(k) -= unit_vectors.col(q).dot(unit_vectors.col(k)) *
                                           unit_vectors.col(q);
                unit_vectors.col(k).normalize();
            }
    }

    // First component of non-negligible magnitude is made positive.
    for (Eigen::Index k = 0; k < unit_vectors.cols(); ++k) {
        auto v = unit_vectors.col(k);
        const double threshold = 1e-8 * v.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (std::abs(v[i]) > threshold) {
                if (v[i] < 0.0)
                    v = -v;
                break;
            }
    }

    SpectralBasis basis;
    basis.grid = grid;
    basis.kind = op.kind;
    basis.tol = tol;
    basis.iterative = iterative;
    const Mat residual = op.matrix * unit_vectors - unit_vectors * values.asDiagonal();
    basis.residuals = residual.colwise().norm().transpose();
    basis.values = std::move(values);
    basis.vectors = std::move(unit_vectors) / std::sqrt(w);

    const double worst = basis.residuals.size() ? basis.residuals.maxCoeff() : 0.0;
    if (worst > tol)
        throw ConvergenceError("eigenpair residual " + std::to_string(worst) +
                                   " exceeds tolerance " + std::to_string(tol),
                               worst);
    return basis;
}

SpectralBasis dense_solve(const DiscreteOperator &op, int m, double tol) {
    const auto n = static_cast<lapack_int>(op.size());
    Mat a = Mat(op.matrix);
    Vec values(n);
    if (m == n) {
        const lapack_int info =
            LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, values.data());
        if (info != 0)
            throw ConvergenceError("dsyevd failed with info " + std::to_string(info),
                                   std::numeric_limits<double>::infinity());
        return finalize(op, std::move(values), std::move(a), tol, false);
    }
    Mat z(n, m);
    std::vector<lapack_int> support(static_cast<std::size_t>(2 * m));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n,
                                           0.0, 0.0, 1, m, 0.0, &found, values.data(),
                                           z.data(), n, support.data());
    if (info != 0 || found != m)
        throw ConvergenceError("dsyevr failed with info " + std::to_string(info),
                               std::numeric_limits<double>::infinity());
    return finalize(op, values.head(m), std::move(z), tol, false);
}

Mat random_block(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                 std::uint64_t stream) {
    const CounterRng rng(seed, stream);
    Mat x(rows, cols);
    std::uint64_t counter = 0;
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            x(i, j) = rng.uniform(counter++, -1.0, 1.0);
    return x;
}

// Appends the columns of w to the orthonormal basis v after two passes of
// full reorthogonalization; columns that vanish against v are dropped.
Eigen::Index append_orthonormal(Mat &v, Eigen::Index used, Mat w) {
    for (int pass = 0; pass < 2; ++pass)
        w -= v.leftCols(used) * (v.leftCols(used).transpose() * w);
    for (Eigen::Index j = 0; j < w.cols() && used < v.cols(); ++j) {
        Vec x = w.col(j);
        const double before = x.norm();
        for (int pass = 0; pass < 2; ++pass)
            x -= v.leftCols(used) * (v.leftCols(used).transpose() * x);
        const double after = x.norm();
        if (!(after > 1e-10 * before) || after == 0.0)
            continue;
        v.col(used++) = x / after;
    }
    return used;
}

// Block Krylov subspace method on the shift-inverted operator
// (M - sigma I)^{-1} with full reorthogonalization, Rayleigh-Ritz on M and
// thick restarts that keep the lowest Ritz block.
SpectralBasis iterative_solve(const DiscreteOperator &op, int m,
                              const EigenSolveOptions &opt) {
    const auto n = static_cast<Eigen::Index>(op.size());
    const double sigma =
        op.gershgorin_lower - std::max(1.0, 1e-3 * std::abs(op.gershgorin_lower));
    SparseMat shifted = op.matrix;
    for (Eigen::Index i = 0; i < n; ++i)
        shifted.coeffRef(i, i) -= sigma;
    Eigen::SimplicialLDLT<SparseMat> factor(shifted);
    if (factor.info() != Eigen::Success)
        throw ConvergenceError("shift-invert factorization failed",
                               std::numeric_limits<double>::infinity());

    const Eigen::Index block = std::min<Eigen::Index>(n, m + std::max(8, m / 2));
    const Eigen::Index capacity = std::min<Eigen::Index>(n, 3 * block);

    Mat v(n, capacity);
    Eigen::Index used = append_orthonormal(v, 0, random_block(n, block, opt.seed, 0));
    Eigen::Index fresh_first = 0;
    double best = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
        std::uint64_t stream = 1;
        while (used < capacity) {
            const Eigen::Index fresh = used - fresh_first;
            Mat w(n, fresh);
            for (Eigen::Index j = 0; j < fresh; ++j)
                w.col(j) = factor.solve(Vec(v.col(fresh_first + j)));
            const Eigen::Index before = used;
            used = append_orthonormal(v, used, std::move(w));
            if (used == before) {
                // Invariant subspace: pad with random directions.
                used = append_orthonormal(
                    v, used,
                    random_block(n, std::min(block, capacity - used), opt.seed,
                                 1000 + static_cast<std::uint64_t>(restart) * 64 + stream++));
                if (used == before)
                    break;
            }
            fresh_first = before;
        }

        const auto basis = v.leftCols(used);
        Mat h = basis.transpose() * (op.matrix * basis);
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> small(h);
        const Mat ritz = basis * small.eigenvectors().leftCols(m);
        const Vec theta = small.eigenvalues().head(m);
        const Mat residual = op.matrix * ritz - ritz * theta.asDiagonal();
        const double worst = residual.colwise().norm().maxCoeff();
        best = std::min(best, worst);
        if (worst <= opt.tol || used == n)
            return finalize(op, theta, ritz, opt.tol, true);

        const Eigen::Index keep = std::min<Eigen::Index>(block, used);
        Mat kept = basis * small.eigenvectors().leftCols(keep);
        v.leftCols(keep) = kept;
        used = keep;
        fresh_first = 0;
    }
    throw ConvergenceError("iterative eigensolver did not converge within " +
                               std::to_string(opt.max_restarts) + " restarts",
                           best);
}

} // namespace

SpectralBasis lowest_eigenpairs(const DiscreteOperator &op, int m,
                                const EigenSolveOptions &options) {
    if (m < 1 || static_cast<std::size_t>(m) > op.size())
        throw InvalidArgument("eigensolve", "requested " + std::to_string(m) +
                                                " eigenpairs of a " +
                                                std::to_string(op.size()) +
                                                "-node operator");
    if (!(options.tol > 0.0))
        throw InvalidArgument("eigensolve", "tolerance must be positive");
    if (op.size() <= options.dense_cap)
        return dense_solve(op, m, options.tol);
    return iterative_solve(op, m, options);
}

double orthonormality_error(const SpectralBasis &basis) {
    const Mat gram =
        basis.grid.quadrature_weight() * (basis.vectors.transpose() * basis.vectors);
    return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

SpectralBasis rotate_cluster(const SpectralBasis &basis, Cluster cluster,
                             std::uint64_t seed) {
    if (cluster.first < 0 || cluster.last > basis.count() || cluster.size() < 1)
        throw InvalidArgument("eigensolve", "cluster out of range");
    const int s = cluster.size();
    Eigen::HouseholderQR<Mat> qr(random_block(s, s, seed, 77));
    const Mat q = qr.householderQ() * Mat::Identity(s, s);
    SpectralBasis out = basis;
    out.vectors.middleCols(cluster.first, s) = basis.vectors.middleCols(cluster.first, s) * q;
    return out;
}

SpectralBasis retag(SpectralBasis basis, OperatorKind kind) {
    basis.kind = kind;
    return basis;
}

int weyl_cap(const Grid &grid) {
    int cap = 1;
    for (int a = 0; a < grid.dimension(); ++a)
        cap *= grid.points(a) / 4;
    return cap;
}

namespace {

void require_window(const SpectralBasis &basis, int k_min, int k_max) {
    if (k_min < 4)
        throw InvalidArgument("eigensolve", "fit window must start at k >= 4");
    if (k_max > basis.count())
        throw InvalidArgument("eigensolve", "fit window exceeds computed eigenpairs");
    if (k_max > weyl_cap(basis.grid))
        throw InvalidArgument("eigensolve", "fit window exceeds the Weyl regime cap " +
                                                std::to_string(weyl_cap(basis.grid)));
    if (k_max - k_min + 1 < 8)
        throw InvalidArgument("eigensolve", "fit window needs at least 8 eigenvalues");
}

struct LineFit {
    double slope;
    double intercept;
};

LineFit least_squares(const std::vector<double> &x, const std::vector<double> &y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

} // namespace

WeylFit weyl_fit(const SpectralBasis &basis, int /*dimension*/, int k_min, int k_max) {
    require_window(basis, k_min, k_max);
    std::vector<double> x, y;
    for (int k = k_min; k <= k_max; ++k) {
        const double lambda = basis.values[k - 1];
        if (!(lambda > 0.0))
            throw InvalidArgument("eigensolve", "Weyl fit needs positive eigenvalues");
        x.push_back(std::log(static_cast<double>(k)));
        y.push_back(std::log(lambda));
    }
    const LineFit fit = least_squares(x, y);
    WeylFit out{fit.slope, std::exp(fit.intercept), 0.0};
    for (int k = k_min; k <= k_max; ++k) {
        const double model = out.constant * std::pow(static_cast<double>(k), out.exponent);
        out.max_rel_dev = std::max(out.max_rel_dev, std::abs(basis.values[k - 1] - model) / model);
    }
    return out;
}

SupNorms sup_norms(const SpectralBasis &basis, int n) {
    if (n < 1 || n > basis.count())
        throw InvalidArgument("eigensolve", "sup_norms: n out of range");
    SupNorms out;
    out.per_k = basis.vectors.leftCols(n).cwiseAbs().colwise().maxCoeff().transpose();
    out.max_over_n = out.per_k.maxCoeff();
    return out;
}

HormanderFit hormander_fit(const SpectralBasis &basis, int dimension, int k_min,
                           int k_max) {
    require_window(basis, k_min, k_max);
    const SupNorms sup = sup_norms(basis, k_max);
    std::vector<double> x, y;
    for (int k = k_min; k <= k_max; ++k) {
        x.push_back(std::log(basis.values[k - 1]));
        y.push_back(std::log(sup.per_k[k - 1]));
    }
    const LineFit fit = least_squares(x, y);
    return {fit.slope, std::exp(fit.intercept), (dimension - 1) / 4.0};
}

ComparabilityReport comparability_check(const SpectralBasis &basis_l,
                                        const SpectralBasis &basis_lap,
                                        const CoefficientField &field, int k_max) {
    require_same_grid(basis_l.grid, basis_lap.grid, "eigensolve");
    require_same_grid(basis_l.grid, field.grid, "eigensolve");
    if (k_max < 1 || k_max > basis_l.count() || k_max > basis_lap.count())
        throw InvalidArgument("eigensolve", "comparability_check: k_max out of range");
    ComparabilityReport out;
    out.lower_margin.resize(k_max);
    out.upper_margin.resize(k_max);
    for (int k = 0; k < k_max; ++k) {
        const double lambda = basis_l.values[k];
        const double mu = basis_lap.values[k];
        out.lower_margin[k] = lambda - (field.a_min * mu - field.v_sup);
        out.upper_margin[k] = (field.a_max * mu + field.v_sup) - lambda;
        const double slack = -1e-8 * (1.0 + std::abs(lambda));
        if (out.lower_margin[k] < slack || out.upper_margin[k] < slack)
            ++out.violations;
    }
    return out;
}

} // namespace eigenrank

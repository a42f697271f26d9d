#include "eigenrank/lowrank.h"

#include "eigenrank/error.h"

#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <map>
#include <string>

namespace eigenrank {

std::string_view to_string(Norm n) { return n == Norm::l2 ? "l2" : "hm1"; }

Norm norm_from_string(std::string_view s) {
    if (s == "l2")
        return Norm::l2;
    if (s == "hm1")
        return Norm::hm1;
    throw InvalidArgument("lowrank", "unknown norm '" + std::string(s) + "'");
}

namespace {

// Remainder beyond the stored modes, in L2, must be negligible.
void require_complete(const ProductCoefficients &coeffs) {
    if (coeffs.complete)
        return;
    for (int p = 0; p < coeffs.pairs(); ++p) {
        const double kept = coeffs.coeffs.col(p).squaredNorm();
        const double total = coeffs.product_norms[p] * coeffs.product_norms[p];
        if (total - kept > 1e-24)
            throw InvalidArgument("lowrank", "expansion is incomplete: discarded "
                                             "remainder exceeds 1e-12");
    }
}

Vec hm1_weights(const ProductCoefficients &coeffs, const SpectralBasis &laplacian) {
    if (coeffs.target != OperatorKind::laplacian || laplacian.kind != OperatorKind::laplacian)
        throw InvalidArgument("lowrank", "Hdot^{-1} tails need Laplacian coefficients");
    if (laplacian.count() < coeffs.m)
        throw InvalidArgument("lowrank", "too few Laplacian eigenvalues");
    Vec w(coeffs.m);
    for (int k = 0; k < coeffs.m; ++k) {
        if (k == 0 && coeffs.skips_constant_mode()) {
            w[k] = 0.0;
            continue;
        }
        const double mu = laplacian.values[k];
        if (!(mu > 0.0))
            throw InvalidArgument("lowrank", "nonpositive Laplacian eigenvalue " +
                                                 std::to_string(mu) + " at k = " +
                                                 std::to_string(k));
        w[k] = 1.0 / mu;
    }
    return w;
}

void require_pair(const ProductCoefficients &coeffs, int i, int j, int r) {
    if (i < 0 || j < 0 || i >= coeffs.n || j >= coeffs.n)
        throw InvalidArgument("lowrank", "pair index out of range");
    if (r < 0 || r > coeffs.m)
        throw InvalidArgument("lowrank", "r = " + std::to_string(r) +
                                             " exceeds the expansion length " +
                                             std::to_string(coeffs.m));
}

Mat suffix_sums(const ProductCoefficients &coeffs, const Vec &weights) {
    Mat s = Mat::Zero(coeffs.m + 1, coeffs.pairs());
    for (int p = 0; p < coeffs.pairs(); ++p) {
        const auto c = coeffs.coeffs.col(p);
        for (int k = coeffs.m - 1; k >= 0; --k)
            s(k, p) = s(k + 1, p) + weights[k] * c[k] * c[k];
    }
    return s;
}

int clamp_to_int(double x) {
    if (!(x < static_cast<double>(INT_MAX)))
        return INT_MAX;
    return std::max(1, static_cast<int>(std::ceil(x)));
}

} // namespace

double tail_l2(const ProductCoefficients &coeffs, int i, int j, int r) {
    require_pair(coeffs, i, j, r);
    require_complete(coeffs);
    const auto c = coeffs.column(i, j);
    double sum = 0.0;
    for (int k = coeffs.m - 1; k >= r; --k)
        sum += c[k] * c[k];
    return std::sqrt(sum);
}

double tail_hm1(const ProductCoefficients &coeffs, const SpectralBasis &laplacian, int i,
                int j, int r) {
    require_pair(coeffs, i, j, r);
    const Vec w = hm1_weights(coeffs, laplacian);
    require_complete(coeffs);
    const auto c = coeffs.column(i, j);
    double sum = 0.0;
    for (int k = coeffs.m - 1; k >= r; --k)
        sum += w[k] * c[k] * c[k];
    return std::sqrt(sum);
}

TailTable TailTable::l2(const ProductCoefficients &coeffs) {
    require_complete(coeffs);
    return TailTable(Norm::l2, coeffs.n, suffix_sums(coeffs, Vec::Ones(coeffs.m)));
}

TailTable TailTable::hm1(const ProductCoefficients &coeffs, const SpectralBasis &laplacian) {
    const Vec w = hm1_weights(coeffs, laplacian);
    require_complete(coeffs);
    return TailTable(Norm::hm1, coeffs.n, suffix_sums(coeffs, w));
}

double TailTable::tail(int i, int j, int r) const {
    if (i < 0 || j < 0 || i >= m_n || j >= m_n || r < 0 || r > modes())
        throw InvalidArgument("lowrank", "tail lookup out of range");
    return std::sqrt(m_suffix(r, pair_index(i, j)));
}

double TailTable::max_tail(int n, int r) const {
    if (n < 1 || n > m_n || r < 0 || r > modes())
        throw InvalidArgument("lowrank", "max_tail lookup out of range");
    return std::sqrt(m_suffix.row(r).head(pair_count(n)).maxCoeff());
}

int TailTable::empirical_rank(int n, double eps) const {
    if (!(eps > 0.0))
        throw InvalidArgument("lowrank", "eps must be positive");
    int lo = 0, hi = modes();
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (max_tail(n, mid) <= eps)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double aggregate_tail(const TailTable &table, Cluster a, Cluster b, int r) {
    double sum = 0.0;
    for (int i = a.first; i < a.last; ++i)
        for (int j = b.first; j < b.last; ++j) {
            const double t = table.tail(i, j, r);
            sum += t * t;
        }
    return std::sqrt(sum);
}

std::vector<int> geometric_samples(int modes) {
    std::vector<int> out;
    for (int r = 1; r < modes; r *= 2)
        out.push_back(r);
    out.push_back(modes);
    return out;
}

TailCurve max_tail_curve(const TailTable &table, int n, const std::vector<int> &rs) {
    TailCurve curve;
    curve.norm = table.norm();
    curve.n = n;
    for (int r : rs)
        curve.samples.emplace_back(r, table.max_tail(n, r));
    return curve;
}

TailCurve pair_tail_curve(const TailTable &table, int i, int j, const std::vector<int> &rs) {
    TailCurve curve;
    curve.i = i;
    curve.j = j;
    curve.norm = table.norm();
    curve.n = table.n();
    for (int r : rs)
        curve.samples.emplace_back(r, table.tail(i, j, r));
    return curve;
}

LogLogFit fit_loglog(const std::vector<std::pair<double, double>> &xy) {
    double sx = 0, sy = 0;
    int count = 0;
    for (const auto &[x, y] : xy)
        if (x > 0.0 && y > 0.0) {
            sx += std::log(x);
            sy += std::log(y);
            ++count;
        }
    if (count < 2)
        throw InvalidArgument("lowrank", "log-log fit needs two positive samples");
    const double mx = sx / count, my = sy / count;
    double sxx = 0, sxy = 0;
    for (const auto &[x, y] : xy)
        if (x > 0.0 && y > 0.0) {
            const double dx = std::log(x) - mx;
            sxx += dx * dx;
            sxy += dx * (std::log(y) - my);
        }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

double tail_slope(const TailCurve &curve, int r_max) {
    std::vector<std::pair<double, double>> xy;
    for (const auto &[r, t] : curve.samples)
        if (r >= 1 && r <= r_max)
            xy.emplace_back(static_cast<double>(r), t);
    return fit_loglog(xy).slope;
}

int cutoff_l2(double eps, int n, double max_sup, int dimension, double calib) {
    return clamp_to_int(calib * std::pow(max_sup / eps, dimension) * n);
}

int cutoff_hm1(double eps, int n, double max_sup, int dimension, double calib) {
    return clamp_to_int(calib * std::pow(max_sup / eps, 0.5 * dimension) *
                        std::sqrt(static_cast<double>(n)));
}

double predicted_scale(Norm norm, double eps, int n, double max_sup, int dimension) {
    if (norm == Norm::l2)
        return std::pow(max_sup / eps, dimension) * n;
    return std::pow(max_sup / eps, 0.5 * dimension) * std::sqrt(static_cast<double>(n));
}

RankOracle::RankOracle(Mat columns, std::size_t max_entries)
    : m_columns(std::move(columns)) {
    const auto entries = static_cast<std::size_t>(m_columns.rows()) *
                         static_cast<std::size_t>(m_columns.cols());
    if (entries > max_entries)
        throw InvalidArgument("lowrank", "oracle matrix has " + std::to_string(entries) +
                                             " entries, above the cap of " +
                                             std::to_string(max_entries));
    Eigen::BDCSVD<Mat> svd(m_columns, Eigen::ComputeThinU);
    m_basis = svd.matrixU();
    m_singular = svd.singularValues();
}

double RankOracle::max_residual(int k) const {
    if (k < 0 || k > max_rank())
        throw InvalidArgument("lowrank", "oracle rank out of range");
    if (k == 0)
        return m_columns.colwise().norm().maxCoeff();
    const auto u = m_basis.leftCols(k);
    const Mat residual = m_columns - u * (u.transpose() * m_columns);
    return residual.colwise().norm().maxCoeff();
}

int RankOracle::rank(double eps) const {
    if (!(eps > 0.0))
        throw InvalidArgument("lowrank", "eps must be positive");
    int lo = 0, hi = max_rank();
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (max_residual(mid) <= eps)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

Mat oracle_columns_l2(const SpectralBasis &source, int n) {
    return std::sqrt(source.grid.quadrature_weight()) * product_matrix(source, n);
}

Mat oracle_columns_hm1(const ProductCoefficients &coeffs, const SpectralBasis &laplacian,
                       int n) {
    const Vec w = hm1_weights(coeffs, laplacian);
    require_complete(coeffs);
    if (n < 1 || n > coeffs.n)
        throw InvalidArgument("lowrank", "n out of range for the coefficients");
    const int skip = coeffs.skips_constant_mode() ? 1 : 0;
    const int rows = coeffs.m - skip;
    return w.tail(rows).cwiseSqrt().asDiagonal() *
           coeffs.coeffs.block(skip, 0, rows, pair_count(n));
}

int oracle_rank_l2(const SpectralBasis &source, int n, double eps,
                   std::size_t max_entries) {
    return RankOracle(oracle_columns_l2(source, n), max_entries).rank(eps);
}

int oracle_rank_hm1(const ProductCoefficients &coeffs, const SpectralBasis &laplacian,
                    int n, double eps, std::size_t max_entries) {
    return RankOracle(oracle_columns_hm1(coeffs, laplacian, n), max_entries).rank(eps);
}

ScalingReport scaling_report(const ScalingInputs &in, const ScalingConfig &config) {
    using clock = std::chrono::steady_clock;
    const int d = in.source.grid.dimension();
    ScalingReport out;

    std::map<Norm, TailTable> tables;
    for (Norm norm : config.norms)
        tables.emplace(norm, norm == Norm::l2 ? TailTable::l2(in.l2_coeffs)
                                              : TailTable::hm1(in.hm1_coeffs, in.laplacian));

    for (int n : config.n) {
        if (n < 1 || n > in.l2_coeffs.n || n > in.hm1_coeffs.n)
            throw InvalidArgument("lowrank", "sweep n = " + std::to_string(n) +
                                                 " exceeds the computed products");
        const double max_sup = sup_norms(in.source, n).max_over_n;
        for (Norm norm : config.norms) {
            const TailTable &table = tables.at(norm);
            const auto start = clock::now();
            const RankOracle oracle(norm == Norm::l2
                                        ? oracle_columns_l2(in.source, n)
                                        : oracle_columns_hm1(in.hm1_coeffs, in.laplacian, n),
                                    config.oracle_max_entries);
            double setup_ms =
                std::chrono::duration<double, std::milli>(clock::now() - start).count();

            std::vector<int> paper_rs;
            for (double eps : config.eps) {
                const auto cell_start = clock::now();
                RankReport rep;
                rep.n = n;
                rep.eps = eps;
                rep.norm = norm;
                rep.max_sup = max_sup;
                rep.r_paper = norm == Norm::l2
                                  ? cutoff_l2(eps, n, max_sup, d, config.calib_l2)
                                  : cutoff_hm1(eps, n, max_sup, d, config.calib_hm1);
                rep.r_empirical = table.empirical_rank(n, eps);
                rep.r_oracle = oracle.rank(eps);
                rep.implied_constant =
                    rep.r_empirical / predicted_scale(norm, eps, n, max_sup, d);
                rep.ms = std::chrono::duration<double, std::milli>(clock::now() - cell_start)
                             .count() +
                         setup_ms;
                setup_ms = 0.0;
                if (rep.r_paper <= table.modes())
                    paper_rs.push_back(rep.r_paper);
                out.ranks.push_back(rep);
            }

            const std::vector<int> geometric = geometric_samples(table.modes());
            const TailCurve slope_curve = max_tail_curve(table, n, geometric);
            const double envelope = (norm == Norm::l2 ? -1.0 : -2.0) / d;
            out.slopes.push_back({n, norm, tail_slope(slope_curve, table.modes() / 2), envelope});

            std::vector<int> rs = geometric;
            rs.insert(rs.end(), paper_rs.begin(), paper_rs.end());
            std::sort(rs.begin(), rs.end());
            rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
            out.curves.push_back(max_tail_curve(table, n, rs));
        }
    }
    return out;
}

double calibrate(const std::vector<RankReport> &reports, Norm norm) {
    double calib = 0.0;
    for (const RankReport &r : reports)
        if (r.norm == norm)
            calib = std::max(calib, r.implied_constant);
    return calib;
}

} // namespace eigenrank

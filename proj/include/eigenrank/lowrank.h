#pragma once

#include "eigenrank/eigensolve.h"
#include "eigenrank/products.h"

#include <string_view>
#include <utility>
#include <vector>

namespace eigenrank {

enum class Norm { l2, hm1 };

std::string_view to_string(Norm n);
Norm norm_from_string(std::string_view s);

// ||Pi_{>r}(phi_i phi_j)||_{L2}: sqrt(sum_{k >= r} c[i, j, k]^2), k 0-based,
// i.e. the part left after keeping the first r modes.
double tail_l2(const ProductCoefficients &coeffs, int i, int j, int r);

// ||Pi_{>r}(phi_i phi_j)||_{Hdot^{-1}}: sqrt(sum_{k >= r} c^2 / mu_k) with the
// coefficients taken against the Laplacian eigenbasis `laplacian`.
double tail_hm1(const ProductCoefficients &coeffs, const SpectralBasis &laplacian,
                int i, int j, int r);

// Suffix sums of weighted squared coefficients for every pair, so that any
// tail is an O(1) lookup. Row r holds sum_{k >= r} w_k c_k^2.
class TailTable {
  public:
    static TailTable l2(const ProductCoefficients &coeffs);
    static TailTable hm1(const ProductCoefficients &coeffs,
                         const SpectralBasis &laplacian);

    Norm norm() const { return m_norm; }
    int modes() const { return static_cast<int>(m_suffix.rows()) - 1; }
    int n() const { return m_n; }

    double tail(int i, int j, int r) const;
    double tail_squared_pair(int pair, int r) const { return m_suffix(r, pair); }
    // max over pairs i <= j < n.
    double max_tail(int n, int r) const;
    // Smallest r with max_tail(n, r) <= eps.
    int empirical_rank(int n, double eps) const;

  private:
    TailTable(Norm norm, int n, Mat suffix)
        : m_norm(norm), m_n(n), m_suffix(std::move(suffix)) {}

    Norm m_norm;
    int m_n;
    Mat m_suffix;
};

// sqrt(sum over ordered pairs (i, j) in a x b of tail(i, j, r)^2). Invariant
// under orthogonal rotations within either cluster.
double aggregate_tail(const TailTable &table, Cluster a, Cluster b, int r);

struct TailCurve {
    // i = j = -1 marks the max-over-pairs aggregate.
    int i{-1};
    int j{-1};
    Norm norm{Norm::l2};
    int n{0};
    std::vector<std::pair<int, double>> samples;

    bool aggregate() const { return i < 0; }
};

// {1, 2, 4, ...} up to and including `modes`.
std::vector<int> geometric_samples(int modes);

TailCurve max_tail_curve(const TailTable &table, int n, const std::vector<int> &rs);
TailCurve pair_tail_curve(const TailTable &table, int i, int j,
                          const std::vector<int> &rs);

struct LogLogFit {
    double slope;
    double intercept;
};
// Least squares log y = intercept + slope log x over samples with x > 0, y > 0.
LogLogFit fit_loglog(const std::vector<std::pair<double, double>> &xy);

// Slope of the max-pair tail curve over the samples with 1 <= r <= r_max.
double tail_slope(const TailCurve &curve, int r_max);

// ceil(calib (max_sup / eps)^d n), at least 1.
int cutoff_l2(double eps, int n, double max_sup, int dimension, double calib = 1.0);
// ceil(calib (max_sup / eps)^(d/2) sqrt(n)), at least 1.
int cutoff_hm1(double eps, int n, double max_sup, int dimension,
               double calib = 1.0);

// The n-dependence the cutoff formula predicts, without the calibration
// constant; implied constants are r / predicted_scale.
double predicted_scale(Norm norm, double eps, int n, double max_sup,
                       int dimension);

// Optimal-subspace baseline. Columns are the vectors to approximate in a
// Euclidean representation of the target norm; the SVD orders candidate
// subspaces and rank(eps) is the smallest k whose top-k left singular space
// leaves every column with residual <= eps.
class RankOracle {
  public:
    static constexpr std::size_t default_max_entries = 50'000'000;

    explicit RankOracle(Mat columns,
                        std::size_t max_entries = default_max_entries);

    int rank(double eps) const;
    double max_residual(int k) const;
    int max_rank() const { return static_cast<int>(m_basis.cols()); }
    const Vec &singular_values() const { return m_singular; }

  private:
    Mat m_columns;
    Mat m_basis;
    Vec m_singular;
};

// sqrt(weight) * (phi_i phi_j) node values: Euclidean norm = grid L2 norm.
Mat oracle_columns_l2(const SpectralBasis &source, int n);
// Laplacian coefficients scaled by mu_k^{-1/2}: Euclidean norm = Hdot^{-1}.
Mat oracle_columns_hm1(const ProductCoefficients &coeffs,
                       const SpectralBasis &laplacian, int n);

int oracle_rank_l2(const SpectralBasis &source, int n, double eps,
                   std::size_t max_entries = RankOracle::default_max_entries);
int oracle_rank_hm1(const ProductCoefficients &coeffs,
                    const SpectralBasis &laplacian, int n, double eps,
                    std::size_t max_entries = RankOracle::default_max_entries);

struct RankReport {
    int n{0};
    double eps{0.0};
    Norm norm{Norm::l2};
    int r_paper{0};
    int r_empirical{0};
    int r_oracle{0};
    double max_sup{0.0};
    double implied_constant{0.0};
    double ms{0.0};
};

struct SlopeReport {
    int n{0};
    Norm norm{Norm::l2};
    double slope{0.0};
    // -1/d for L2, -2/d for Hdot^{-1}
    double envelope{0.0};
};

struct ScalingInputs {
    const SpectralBasis &source;
    const SpectralBasis &laplacian;
    const ProductCoefficients &l2_coeffs;  // source products vs source basis
    const ProductCoefficients &hm1_coeffs; // source products vs Laplacian basis
};

struct ScalingConfig {
    std::vector<int> n;
    std::vector<double> eps;
    std::vector<Norm> norms{Norm::l2, Norm::hm1};
    double calib_l2{1.0};
    double calib_hm1{1.0};
    std::size_t oracle_max_entries{RankOracle::default_max_entries};
};

struct ScalingReport {
    std::vector<RankReport> ranks;
    std::vector<TailCurve> curves;
    std::vector<SlopeReport> slopes;
};

ScalingReport scaling_report(const ScalingInputs &inputs,
                             const ScalingConfig &config);

// Smallest calibration constant for which the cutoff formula reaches the
// empirical rank in every report of the given norm.
double calibrate(const std::vector<RankReport> &reports, Norm norm);

} // namespace eigenrank

#pragma once

#include "eigenrank/config.h"
#include "eigenrank/eri.h"
#include "eigenrank/lowrank.h"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eigenrank {

enum class Command { spectrum, rank_scan, tail_curves, eri_bench, verify_all };
std::string_view to_string(Command c);
Command command_from_string(std::string_view s);

// Lazily built state shared by every command of one experiment. Each stage is
// computed on first use and cached. When the Schrodinger operator coincides
// with the Laplacian (a = 1, V = 0) one eigensolve serves both.
class Experiment {
  public:
    explicit Experiment(ExperimentConfig config);

    const ExperimentConfig &config() const { return m_config; }
    const Grid &grid() const { return m_grid; }
    const CoefficientField &field();
    const DiscreteOperator &schrodinger();
    const DiscreteOperator &laplacian();
    bool operators_coincide();

    // Complete bases when the node count is within solver.dense_cap,
    // otherwise the lowest solver.m pairs.
    const SpectralBasis &basis_l();
    const SpectralBasis &basis_lap();

    // Products of the first config().max_n() eigenfunctions of L, expanded
    // in the L basis and in the Laplacian basis. Need complete bases.
    const ProductCoefficients &l2_coeffs();
    const ProductCoefficients &hm1_coeffs();
    const GreenSolver &green();

    const ScalingReport &scaling();
    const ERIResult &eri();

    // Wall-clock milliseconds per stage, in the order stages ran.
    const std::vector<std::pair<std::string, double>> &timings() const {
        return m_timings;
    }

  private:
    template <typename F> auto timed(const std::string &stage, F &&f);
    void require_complete(const char *what);

    ExperimentConfig m_config;
    Grid m_grid;
    std::optional<CoefficientField> m_field;
    std::optional<DiscreteOperator> m_schrodinger;
    std::optional<DiscreteOperator> m_laplacian;
    std::optional<bool> m_coincide;
    std::optional<SpectralBasis> m_basis_l;
    std::optional<SpectralBasis> m_basis_lap;
    std::optional<ProductCoefficients> m_l2;
    std::optional<ProductCoefficients> m_hm1;
    std::unique_ptr<GreenSolver> m_green;
    std::optional<ScalingReport> m_scaling;
    std::optional<ERIResult> m_eri;
    std::vector<std::pair<std::string, double>> m_timings;
};

struct CheckResult {
    std::string name; // "module.check"
    bool passed{false};
    double value{0.0};
    double limit{0.0};
    std::string detail;
};

// The invariant suite run by verify-all.
std::vector<CheckResult> invariant_checks(Experiment &experiment);

// Individual checks, exposed for tests.
CheckResult check_eigen_residuals(Experiment &e);
CheckResult check_orthonormality(Experiment &e);
CheckResult check_comparability(Experiment &e);
CheckResult check_quadratic_form_chain(Experiment &e);
CheckResult check_parseval(Experiment &e);
CheckResult check_two_path_quadratic_form(Experiment &e);
CheckResult check_tail_identity(Experiment &e);
CheckResult check_hdot1_identity(Experiment &e);
CheckResult check_oracle_dominance(Experiment &e);
CheckResult check_green_dual_path(Experiment &e);
CheckResult check_eri_certificate(Experiment &e);
CheckResult check_eri_symmetry(Experiment &e);
CheckResult check_coulomb_psd(Experiment &e);

// CSV emitters. Floats use 17 significant digits, indices are 1-based, files
// are written to a temporary name and renamed into place.
void write_spectrum_csv(Experiment &e, const std::filesystem::path &path);
void write_ranks_csv(Experiment &e, const std::filesystem::path &path);
// Per-pair rows for every pair of the largest sweep n, plus the max-over-pairs
// curve of each sweep n as rows with i = 0 and j = n.
void write_tails_csv(Experiment &e, const std::filesystem::path &path);
void write_eri_csv(Experiment &e, const std::filesystem::path &path);

// Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path &path, const std::string &content);

struct RunResult {
    // 0 success, 1 a check failed
    int exit_code{0};
    std::vector<CheckResult> checks;
    std::vector<std::filesystem::path> files;
};

// Runs one command and writes its CSV files plus summary.json into out_dir.
RunResult run(Experiment &experiment, Command command,
              const std::filesystem::path &out_dir);

} // namespace eigenrank

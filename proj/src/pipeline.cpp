#include "eigenrank/pipeline.h"

#include "eigenrank/error.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#ifndef EIGENRANK_VERSION
#define EIGENRANK_VERSION "0.0.0"
#endif

namespace eigenrank {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string_view to_string(Command c) {
    switch (c) {
    case Command::spectrum:
        return "spectrum";
    case Command::rank_scan:
        return "rank-scan";
    case Command::tail_curves:
        return "tail-curves";
    case Command::eri_bench:
        return "eri-bench";
    case Command::verify_all:
        return "verify-all";
    }
    return "?";
}

Command command_from_string(std::string_view s) {
    for (Command c : {Command::spectrum, Command::rank_scan, Command::tail_curves,
                      Command::eri_bench, Command::verify_all})
        if (to_string(c) == s)
            return c;
    throw InvalidArgument("cli", "unknown command '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- Experiment

Experiment::Experiment(ExperimentConfig config)
    : m_config(std::move(config)), m_grid(m_config.make_grid()) {}

template <typename F> auto Experiment::timed(const std::string &stage, F &&f) {
    const auto start = std::chrono::steady_clock::now();
    auto result = f();
    m_timings.emplace_back(stage, std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - start)
                                      .count());
    return result;
}

const CoefficientField &Experiment::field() {
    if (!m_field)
        m_field = sample_coefficients(m_config.coefficients, m_grid);
    return *m_field;
}

const DiscreteOperator &Experiment::schrodinger() {
    if (!m_schrodinger)
        m_schrodinger = assemble_schrodinger(field(), m_grid);
    return *m_schrodinger;
}

const DiscreteOperator &Experiment::laplacian() {
    if (!m_laplacian)
        m_laplacian = assemble_laplacian(m_grid);
    return *m_laplacian;
}

bool Experiment::operators_coincide() {
    if (!m_coincide) {
        const SparseMat diff = schrodinger().matrix - laplacian().matrix;
        m_coincide = diff.norm() == 0.0;
    }
    return *m_coincide;
}

namespace {

int solve_count(const ExperimentConfig &c, const Grid &g) {
    return g.size() <= c.solver.dense_cap ? static_cast<int>(g.size()) : c.solver.m;
}

EigenSolveOptions solve_options(const ExperimentConfig &c) {
    EigenSolveOptions o;
    o.tol = c.solver.tol;
    o.dense_cap = c.solver.dense_cap;
    return o;
}

} // namespace

const SpectralBasis &Experiment::basis_lap() {
    if (!m_basis_lap)
        m_basis_lap = timed("eigensolve_laplacian", [&] {
            return lowest_eigenpairs(laplacian(), solve_count(m_config, m_grid),
                                     solve_options(m_config));
        });
    return *m_basis_lap;
}

const SpectralBasis &Experiment::basis_l() {
    if (!m_basis_l) {
        if (operators_coincide())
            m_basis_l = retag(basis_lap(), OperatorKind::schrodinger);
        else
            m_basis_l = timed("eigensolve_schrodinger", [&] {
                return lowest_eigenpairs(schrodinger(), solve_count(m_config, m_grid),
                                         solve_options(m_config));
            });
    }
    return *m_basis_l;
}

void Experiment::require_complete(const char *what) {
    if (!basis_l().complete() || !basis_lap().complete())
        throw Error("pipeline",
                    std::string(what) + " needs the complete eigenbasis; the grid has " +
                        std::to_string(m_grid.size()) +
                        " nodes, above solver.dense_cap = " +
                        std::to_string(m_config.solver.dense_cap));
}

const ProductCoefficients &Experiment::l2_coeffs() {
    if (!m_l2) {
        require_complete("product expansion");
        m_l2 = timed("products_l2", [&] {
            return expansion_coefficients(basis_l(), basis_l(), m_config.max_n(),
                                          basis_l().count());
        });
    }
    return *m_l2;
}

const ProductCoefficients &Experiment::hm1_coeffs() {
    if (!m_hm1) {
        require_complete("product expansion");
        m_hm1 = timed("products_hm1", [&] {
            return expansion_coefficients(basis_l(), basis_lap(), m_config.max_n(),
                                          basis_lap().count());
        });
    }
    return *m_hm1;
}

const GreenSolver &Experiment::green() {
    if (!m_green)
        m_green = timed("green_factorization",
                        [&] { return std::make_unique<GreenSolver>(laplacian()); });
    return *m_green;
}

const ScalingReport &Experiment::scaling() {
    if (!m_scaling) {
        const ScalingInputs in{basis_l(), basis_lap(), l2_coeffs(), hm1_coeffs()};
        ScalingConfig sc;
        sc.n = m_config.sweep.n;
        sc.eps = m_config.sweep.eps;
        sc.norms = m_config.sweep.norms;
        sc.calib_l2 = m_config.calibration.l2;
        sc.calib_hm1 = m_config.calibration.hm1;
        sc.oracle_max_entries = m_config.oracle_max_entries;
        m_scaling = timed("rank_scan", [&] { return scaling_report(in, sc); });
    }
    return *m_scaling;
}

const ERIResult &Experiment::eri() {
    if (!m_eri) {
        if (!m_config.eri.enabled)
            throw Error("pipeline", "the eri block is disabled in this config");
        ERIOptions opt;
        opt.calib = m_config.calibration.hm1;
        opt.seed = m_config.eri.seed;
        const auto &lap = hm1_coeffs();
        m_eri = timed("eri_benchmark", [&] {
            return eri_benchmark(m_config.eri.n, m_config.eri.eps, basis_l(), basis_lap(),
                                 lap, green(), opt);
        });
    }
    return *m_eri;
}

// -------------------------------------------------------------------- checks

namespace {

CheckResult make_check(std::string name, double value, double limit, bool passed,
                       std::string detail = {}) {
    return {std::move(name), passed, value, limit, std::move(detail)};
}

// Pairs of the largest sweep n (falls back to max_n when the sweep is empty).
int sweep_n_max(const ExperimentConfig &c) {
    return c.sweep.n.empty() ? c.max_n() : c.sweep.n.back();
}

} // namespace

CheckResult check_eigen_residuals(Experiment &e) {
    const double value =
        std::max(e.basis_l().residuals.maxCoeff(), e.basis_lap().residuals.maxCoeff());
    const double limit = e.config().solver.tol;
    return make_check("eigensolve.residuals", value, limit, value <= limit);
}

CheckResult check_orthonormality(Experiment &e) {
    // Over the m requested eigenvectors; the full Gram matrix of a complete
    // basis is cubic in the node count.
    double value = 0.0;
    for (const SpectralBasis *b : {&e.basis_l(), &e.basis_lap()}) {
        const int m = std::min(e.config().solver.m, b->count());
        const auto v = b->vectors.leftCols(m);
        Mat gram = b->grid.quadrature_weight() * (v.transpose() * v);
        gram.diagonal().array() -= 1.0;
        value = std::max(value, gram.cwiseAbs().maxCoeff());
    }
    const double limit = 1e-10;
    return make_check("eigensolve.orthonormality", value, limit, value <= limit);
}

CheckResult check_comparability(Experiment &e) {
    const int k = std::min({e.config().solver.m, e.basis_l().count(), e.basis_lap().count()});
    const ComparabilityReport rep =
        comparability_check(e.basis_l(), e.basis_lap(), e.field(), k);
    char detail[160];
    std::snprintf(detail, sizeof detail, "k <= %d, min lower margin %.3g, min upper margin %.3g",
                  k, rep.lower_margin.minCoeff(), rep.upper_margin.minCoeff());
    return make_check("eigensolve.comparability", rep.violations, 0.0, rep.passed(), detail);
}

CheckResult check_quadratic_form_chain(Experiment &e) {
    double worst = 0.0;
    int violations = 0, checked = 0;
    for (int n : e.config().sweep.n) {
        const QuadraticFormChain chain = check_quadratic_form_chain(
            leading_pairs(e.l2_coeffs(), n), e.basis_l(), e.field());
        worst = std::max(worst, chain.max_value / chain.bound);
        violations += chain.violations;
        checked += chain.checked;
    }
    return make_check("products.eq1_chain", worst, 1.0, violations == 0,
                      std::to_string(violations) + " violations over " +
                          std::to_string(checked) + " pairs");
}

CheckResult check_parseval(Experiment &e) {
    double value = 0.0;
    for (const ProductCoefficients *c : {&e.l2_coeffs(), &e.hm1_coeffs()}) {
        const Vec sums = c->coeffs.colwise().squaredNorm().transpose();
        for (int p = 0; p < c->pairs(); ++p) {
            const double direct = c->product_norms[p] * c->product_norms[p];
            value = std::max(value, std::abs(sums[p] - direct) / std::max(1.0, direct));
        }
    }
    const double limit = 1e-10;
    return make_check("products.parseval", value, limit, value <= limit);
}

CheckResult check_two_path_quadratic_form(Experiment &e) {
    const int n = sweep_n_max(e.config());
    double value = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
            const double spectral = quadratic_form_value(i, j, e.l2_coeffs(), e.basis_l());
            const double stencil =
                stencil_quadratic_form(e.schrodinger(), product_function(i, j, e.basis_l()));
            value = std::max(value, std::abs(spectral - stencil) / std::max(1.0, std::abs(stencil)));
        }
    const double limit = 1e-8;
    return make_check("products.two_path", value, limit, value <= limit);
}

CheckResult check_tail_identity(Experiment &e) {
    const int n = sweep_n_max(e.config());
    const ProductCoefficients &c = e.l2_coeffs();
    const SpectralBasis &b = e.basis_l();
    const TailTable table = TailTable::l2(c);
    double value = -INFINITY;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
            const double q = quadratic_form_value(i, j, c, b);
            const int p = pair_index(i, j);
            for (int r = 0; r < table.modes(); ++r) {
                const double lhs = b.values[r] * table.tail_squared_pair(p, r);
                value = std::max(value, (lhs - q) / (1.0 + std::abs(q)));
            }
        }
    const double limit = 1e-10;
    return make_check("lowrank.tail_identity", value, limit, value <= limit);
}

CheckResult check_hdot1_identity(Experiment &e) {
    const int n = sweep_n_max(e.config());
    double value = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
            const double spectral = quadratic_form_value(i, j, e.hm1_coeffs(), e.basis_lap());
            const double direct = gradient_norm_squared(product_function(i, j, e.basis_l()));
            value = std::max(value, std::abs(spectral - direct) / std::max(1e-300, direct));
        }
    const double limit = 1e-6;
    return make_check("lowrank.hdot1_identity", value, limit, value <= limit);
}

CheckResult check_oracle_dominance(Experiment &e) {
    int worst = std::numeric_limits<int>::min();
    for (const RankReport &r : e.scaling().ranks)
        worst = std::max(worst, r.r_oracle - r.r_empirical);
    return make_check("lowrank.oracle_dominance", worst, 0.0, worst <= 0,
                      "max of r_oracle - r_empirical over the sweep");
}

CheckResult check_green_dual_path(Experiment &e) {
    const int n = std::min(4, e.config().max_n());
    double value = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
            const GridFunction rho = product_function(i, j, e.basis_l());
            const GridFunction a = green_apply(rho, e.green());
            const GridFunction b = green_apply(rho, e.basis_lap());
            value = std::max(value, (a.values - b.values).norm() / b.values.norm());
        }
    const double limit = 1e-8;
    return make_check("eri.green_dual_path", value, limit, value <= limit);
}

CheckResult check_eri_certificate(Experiment &e) {
    const ERIResult &r = e.eri();
    // same absolute roundoff slack as the per-entry bound test
    const bool passed = r.bound_violations == 0 && r.max_abs_error <= r.certificate + 1e-12;
    char detail[160];
    std::snprintf(detail, sizeof detail, "r = %d, max |exact - fitted| = %.3g, certificate %.3g",
                  r.r, r.max_abs_error, r.certificate);
    return make_check("eri.certificate", r.bound_violations, 0.0, passed, detail);
}

CheckResult check_eri_symmetry(Experiment &e) {
    const double value = e.eri().symmetry_error;
    const double limit = 1e-10;
    return make_check("eri.symmetry", value, limit, value <= limit);
}

CheckResult check_coulomb_psd(Experiment &e) {
    const double value = coulomb_matrix_min_relative_eigenvalue(e.basis_l(), e.config().eri.n,
                                                                e.green());
    const double limit = -1e-10;
    return make_check("eri.coulomb_psd", value, limit, value >= limit,
                      "smallest relative eigenvalue of the pair Coulomb matrix");
}

namespace {

using CheckFn = CheckResult (*)(Experiment &);

std::vector<CheckFn> checks_for(Command c, const ExperimentConfig &config) {
    std::vector<CheckFn> spectral = {check_eigen_residuals, check_orthonormality,
                                     check_comparability};
    std::vector<CheckFn> eri = {check_green_dual_path, check_eri_certificate,
                                check_eri_symmetry, check_coulomb_psd};
    switch (c) {
    case Command::spectrum:
        return spectral;
    case Command::rank_scan:
        return {check_parseval, check_oracle_dominance};
    case Command::tail_curves:
        return {check_parseval, check_tail_identity};
    case Command::eri_bench:
        return eri;
    case Command::verify_all: {
        std::vector<CheckFn> all = spectral;
        for (CheckFn f : {check_quadratic_form_chain, check_parseval,
                          check_two_path_quadratic_form, check_tail_identity,
                          check_hdot1_identity, check_oracle_dominance})
            all.push_back(f);
        if (config.eri.enabled)
            all.insert(all.end(), eri.begin(), eri.end());
        return all;
    }
    }
    return {};
}

} // namespace

std::vector<CheckResult> invariant_checks(Experiment &experiment) {
    std::vector<CheckResult> out;
    for (CheckFn f : checks_for(Command::verify_all, experiment.config()))
        out.push_back(f(experiment));
    return out;
}

// ----------------------------------------------------------------------- CSV

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Csv {
  public:
    explicit Csv(std::initializer_list<const char *> header) {
        bool first = true;
        for (const char *h : header) {
            if (!first)
                m_text += ',';
            m_text += h;
            first = false;
        }
        m_text += '\n';
    }

    template <typename... Ts> void row(const Ts &...fields) {
        bool first = true;
        ((append(fields, first)), ...);
        m_text += '\n';
    }

    const std::string &text() const { return m_text; }

  private:
    void append(double x, bool &first) { sep(first), m_text += num(x); }
    void append(int x, bool &first) { sep(first), m_text += std::to_string(x); }
    void append(std::string_view s, bool &first) { sep(first), m_text += s; }
    void sep(bool &first) {
        if (!first)
            m_text += ',';
        first = false;
    }

    std::string m_text;
};

} // namespace

void write_atomic(const fs::path &path, const std::string &content) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("pipeline", "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw Error("pipeline", "write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_spectrum_csv(Experiment &e, const fs::path &path) {
    const SpectralBasis &l = e.basis_l();
    const SpectralBasis &lap = e.basis_lap();
    const int m = std::min({e.config().solver.m, l.count(), lap.count()});
    const SupNorms sup = sup_norms(l, m);
    Csv csv({"k", "lambda_L", "mu_lap", "sup_norm", "residual"});
    for (int k = 0; k < m; ++k)
        csv.row(k + 1, l.values[k], lap.values[k], sup.per_k[k], l.residuals[k]);
    write_atomic(path, csv.text());
}

void write_ranks_csv(Experiment &e, const fs::path &path) {
    Csv csv({"n", "eps", "norm", "r_paper", "r_empirical", "r_oracle", "max_sup",
             "implied_constant", "ms"});
    for (const RankReport &r : e.scaling().ranks)
        csv.row(r.n, r.eps, to_string(r.norm), r.r_paper, r.r_empirical, r.r_oracle,
                r.max_sup, r.implied_constant, e.config().timings_in_csv ? r.ms : 0.0);
    write_atomic(path, csv.text());
}

void write_tails_csv(Experiment &e, const fs::path &path) {
    const ExperimentConfig &c = e.config();
    const int n = sweep_n_max(c);
    Csv csv({"norm", "i", "j", "r", "tail"});
    for (Norm norm : c.sweep.norms) {
        const TailTable table = norm == Norm::l2 ? TailTable::l2(e.l2_coeffs())
                                                 : TailTable::hm1(e.hm1_coeffs(), e.basis_lap());
        const std::vector<int> rs = geometric_samples(table.modes());
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i)
                for (const auto &[r, t] : pair_tail_curve(table, i, j, rs).samples)
                    csv.row(to_string(norm), i + 1, j + 1, r, t);
        for (const TailCurve &curve : e.scaling().curves)
            if (curve.norm == norm)
                for (const auto &[r, t] : curve.samples)
                    csv.row(to_string(norm), 0, curve.n, r, t);
    }
    write_atomic(path, csv.text());
}

void write_eri_csv(Experiment &e, const fs::path &path) {
    Csv csv({"i", "j", "k", "l", "exact", "fitted", "abs_err", "certificate"});
    for (const ERIEntry &en : e.eri().entries)
        csv.row(en.idx[0] + 1, en.idx[1] + 1, en.idx[2] + 1, en.idx[3] + 1, en.exact, en.fitted,
                en.abs_err, en.bound);
    write_atomic(path, csv.text());
}

// ------------------------------------------------------------------- summary

namespace {

ojson spectrum_summary(Experiment &e) {
    const SpectralBasis &l = e.basis_l();
    const SpectralBasis &lap = e.basis_lap();
    const int d = e.grid().dimension();
    const int k_max = std::min({e.config().solver.m, weyl_cap(e.grid()), l.count()});
    ojson out;
    out["eigenpairs"] = l.count();
    out["iterative"] = l.iterative || lap.iterative;
    out["max_residual"] = std::max(l.residuals.maxCoeff(), lap.residuals.maxCoeff());
    out["weyl_range"] = {4, k_max};
    if (k_max - 4 + 1 >= 8) {
        const WeylFit wl = weyl_fit(l, d, 4, k_max);
        const WeylFit wm = weyl_fit(lap, d, 4, k_max);
        out["weyl_L"] = {{"exponent", wl.exponent}, {"predicted", 2.0 / d},
                         {"constant", wl.constant}, {"max_rel_dev", wl.max_rel_dev}};
        out["weyl_laplacian"] = {{"exponent", wm.exponent}, {"predicted", 2.0 / d},
                                 {"constant", wm.constant}, {"max_rel_dev", wm.max_rel_dev}};
        const HormanderFit h = hormander_fit(l, d, 4, k_max);
        out["sup_norm_growth"] = {
            {"exponent", h.exponent}, {"constant", h.constant}, {"predicted", h.predicted}};
    } else {
        out["weyl_L"] = nullptr;
        out["weyl_laplacian"] = nullptr;
        out["sup_norm_growth"] = nullptr;
    }
    const CoefficientField &f = e.field();
    out["coefficient_bounds"] = {{"a_min", f.a_min}, {"a_max", f.a_max}, {"v_sup", f.v_sup}};
    return out;
}

ojson rank_summary(Experiment &e) {
    const ScalingReport &s = e.scaling();
    ojson out;
    ojson slopes = ojson::array();
    for (const SlopeReport &sl : s.slopes)
        slopes.push_back({{"n", sl.n},
                          {"norm", std::string(to_string(sl.norm))},
                          {"slope", sl.slope},
                          {"envelope", sl.envelope},
                          {"within_envelope", sl.slope <= sl.envelope + 0.1}});
    out["tail_slopes"] = slopes;
    ojson ratios = ojson::array();
    for (const RankReport &a : s.ranks)
        if (a.norm == Norm::hm1)
            for (const RankReport &b : s.ranks)
                if (b.norm == Norm::l2 && b.n == a.n && b.eps == a.eps)
                    ratios.push_back({{"n", a.n},
                                      {"eps", a.eps},
                                      {"r_hm1", a.r_empirical},
                                      {"r_l2", b.r_empirical},
                                      {"ratio", static_cast<double>(a.r_empirical) /
                                                    std::max(1, b.r_empirical)}});
    out["hm1_over_l2"] = ratios;
    return out;
}

ojson eri_summary(Experiment &e) {
    const ERIResult &r = e.eri();
    return {{"n", r.n},
            {"eps", r.eps},
            {"r", r.r},
            {"quadruples", r.entries.size()},
            {"exact_ops", r.exact_ops},
            {"fitted_ops", r.fitted_ops},
            {"cost_ratio", r.cost_ratio()},
            {"exact_setup_ops", r.exact_setup_ops},
            {"fitted_setup_ops", r.fitted_setup_ops},
            {"exact_ms", r.exact_ms},
            {"fitted_ms", r.fitted_ms},
            {"max_abs_error", r.max_abs_error},
            {"mean_abs_error", r.mean_abs_error},
            {"certificate", r.certificate},
            {"eps_squared", r.eps * r.eps},
            {"within_eps_squared", r.max_abs_error <= r.eps * r.eps},
            {"bound_violations", r.bound_violations},
            {"symmetry_error", r.symmetry_error}};
}

} // namespace

RunResult run(Experiment &e, Command command, const fs::path &out_dir) {
    RunResult result;
    const ExperimentConfig &c = e.config();
    ojson summary;
    summary["tool"] = "eigenrank";
    summary["version"] = EIGENRANK_VERSION;
    summary["command"] = std::string(to_string(command));
    summary["config"] = to_json(c);

    ojson warnings = ojson::array();
    if (e.grid().dense_solver_hazard())
        warnings.push_back("3D grid with more than 64000 nodes: dense eigensolves are "
                           "impractical, use the iterative path");
    summary["grid"] = {{"nodes", e.grid().size()},
                       {"quadrature_weight", e.grid().quadrature_weight()}};

    auto emit = [&](const char *name, void (*writer)(Experiment &, const fs::path &)) {
        const fs::path p = out_dir / name;
        writer(e, p);
        result.files.push_back(p);
    };

    const bool all = command == Command::verify_all;
    if (all || command == Command::spectrum) {
        emit("spectrum.csv", write_spectrum_csv);
        summary["spectrum"] = spectrum_summary(e);
    }
    if (all || command == Command::rank_scan) {
        emit("ranks.csv", write_ranks_csv);
        summary["rank_scan"] = rank_summary(e);
    }
    if (all || command == Command::tail_curves)
        emit("tails.csv", write_tails_csv);
    if ((all && c.eri.enabled) || command == Command::eri_bench) {
        emit("eri.csv", write_eri_csv);
        summary["eri"] = eri_summary(e);
    }

    ojson calibration = {{"calib_l2", c.calibration.l2}, {"calib_hm1", c.calibration.hm1}};
    if (summary.contains("rank_scan")) {
        calibration["fitted_calib_l2"] = calibrate(e.scaling().ranks, Norm::l2);
        calibration["fitted_calib_hm1"] = calibrate(e.scaling().ranks, Norm::hm1);
    }
    summary["calibration"] = calibration;

    for (CheckFn f : checks_for(command, c))
        result.checks.push_back(f(e));
    ojson checks = ojson::object();
    bool passed = true;
    for (const CheckResult &ch : result.checks) {
        checks[ch.name] = {{"passed", ch.passed}, {"value", ch.value}, {"limit", ch.limit}};
        if (!ch.detail.empty())
            checks[ch.name]["detail"] = ch.detail;
        passed = passed && ch.passed;
    }
    summary["checks"] = checks;
    summary["all_passed"] = passed;
    summary["warnings"] = warnings;

    ojson timings = ojson::object();
    for (const auto &[stage, ms] : e.timings())
        timings[stage] = ms;
    summary["timings_ms"] = timings;

    const fs::path sp = out_dir / "summary.json";
    write_atomic(sp, summary.dump(2) + "\n");
    result.files.push_back(sp);
    result.exit_code = passed ? 0 : 1;
    return result;
}

} // namespace eigenrank

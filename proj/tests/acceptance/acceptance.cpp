// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Presets run one after another so each large eigenbasis is
// solved once and released before the next preset starts.

#include "eigenrank/error.h"
#include "eigenrank/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace eigenrank;
namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t) {
    return std::chrono::duration<double>(clock_type::now() - t).count();
}

struct Outcome {
    int id;
    bool passed;
    std::string line;
};

std::vector<Outcome> outcomes;

template <typename... Args>
void report(int id, bool passed, const char *title, const char *fmt, Args... args) {
    char detail[512];
    std::snprintf(detail, sizeof detail, fmt, args...);
    const std::string line = std::string(passed ? "PASS" : "FAIL") + "  criterion " +
                             std::to_string(id) + ": " + title + " | " + detail;
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    outcomes.push_back({id, passed, line});
}

// Partial results of criteria spread over several presets.
struct Accumulator {
    bool passed{true};
    std::string detail;
    void add(bool ok, const std::string &d) {
        passed = passed && ok;
        detail += (detail.empty() ? "" : "; ") + d;
    }
};

template <typename... Args> std::string fmt(const char *f, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const SlopeReport &slope_for(const ScalingReport &s, int n, Norm norm) {
    for (const SlopeReport &r : s.slopes)
        if (r.n == n && r.norm == norm)
            return r;
    throw Error("acceptance", "missing slope report");
}

const RankReport &rank_for(const ScalingReport &s, int n, double eps, Norm norm) {
    for (const RankReport &r : s.ranks)
        if (r.n == n && r.eps == eps && r.norm == norm)
            return r;
    throw Error("acceptance", "missing rank report");
}

ExperimentConfig preset_with(const std::string &name, std::vector<int> n,
                             std::vector<double> eps) {
    ExperimentConfig c = preset(name);
    c.sweep.n = std::move(n);
    c.sweep.eps = std::move(eps);
    return c;
}

Accumulator c2, c3, c5;
double c5_seconds = 0.0;

void criterion_2_part(Experiment &e, const char *name) {
    const QuadraticFormChain chain = check_quadratic_form_chain(
        leading_pairs(e.l2_coeffs(), 16), e.basis_l(), e.field());
    c2.add(chain.violations == 0,
           std::string(name) + ": " + std::to_string(chain.violations) + " violations / " +
               std::to_string(chain.checked) +
               fmt(" pairs, max form %.4g <= bound %.4g", chain.max_value, chain.bound));
}

void criterion_3_part(Experiment &e, const char *name) {
    const CheckResult tail = check_tail_identity(e);
    const CheckResult h1 = check_hdot1_identity(e);
    c3.add(tail.passed && h1.passed,
           std::string(name) + fmt(": tail slack %.2e (<= 1e-10), Hdot1 rel err %.2e (<= 1e-6)",
                                   tail.value, h1.value));
}

void criterion_5_part(Experiment &e, const char *name, clock_type::time_point start) {
    const ScalingReport &s = e.scaling();
    const int d = e.grid().dimension();
    const SlopeReport &l2 = slope_for(s, 16, Norm::l2);
    const SlopeReport &hm1 = slope_for(s, 16, Norm::hm1);
    const bool ok = l2.slope <= -1.0 / d + 0.1 && hm1.slope <= -2.0 / d + 0.1;
    c5_seconds += seconds_since(start);
    c5.add(ok, std::string(name) + fmt(": L2 %.3f (<= %.2f), Hdot-1 %.3f (<= %.2f)", l2.slope,
                                       -1.0 / d + 0.1, hm1.slope, -2.0 / d + 0.1));
}

void flat_1d() {
    std::printf("-- flat-1d\n");
    const ExperimentConfig cfg = preset_with("flat-1d", {8, 16, 32}, {1e-2, 1e-3, 1e-6});

    { // criterion 1
        const auto start = clock_type::now();
        const Grid g = cfg.make_grid();
        const CoefficientField field = sample_coefficients(cfg.coefficients, g);
        const DiscreteOperator op = assemble_schrodinger(field, g);
        EigenSolveOptions opt;
        opt.tol = cfg.solver.tol;
        const SpectralBasis b = lowest_eigenpairs(op, cfg.solver.m, opt);
        const double secs = seconds_since(start);
        const double h = g.spacing(0);
        double worst = 0.0;
        for (int k = 1; k <= b.count(); ++k) {
            const double s = std::sin(k * h / 2.0);
            const double exact = 4.0 / (h * h) * s * s;
            worst = std::max(worst, std::abs(b.values[k - 1] - exact) / exact);
        }
        const double ortho = orthonormality_error(b);
        report(1, worst <= 1e-9 && ortho <= 1e-10 && secs < 10.0 && b.count() == 64,
               "discrete spectrum exactness (flat-1d, m = 64)",
               "max rel eigenvalue error %.2e (<= 1e-9), orthonormality %.2e (<= 1e-10), "
               "%.2f s (< 10 s)",
               worst, ortho, secs);
    }

    const auto start = clock_type::now();
    Experiment e(cfg);
    criterion_5_part(e, "flat-1d", start);
    criterion_2_part(e, "flat-1d");
    criterion_3_part(e, "flat-1d");

    { // criterion 4
        std::vector<double> ns, rs;
        bool bounded = true;
        std::string ranks;
        for (int n : {8, 16, 32}) {
            const int r = rank_for(e.scaling(), n, 1e-6, Norm::l2).r_oracle;
            bounded = bounded && r <= 2 * n - 1;
            ns.push_back(n);
            rs.push_back(r);
            ranks += (ranks.empty() ? "" : ", ") + std::to_string(r) + " (n=" +
                     std::to_string(n) + ", 2n-1=" + std::to_string(2 * n - 1) + ")";
        }
        const double mx = (ns[0] + ns[1] + ns[2]) / 3, my = (rs[0] + rs[1] + rs[2]) / 3;
        double sxy = 0, sxx = 0;
        for (int i = 0; i < 3; ++i) {
            sxy += (ns[i] - mx) * (rs[i] - my);
            sxx += (ns[i] - mx) * (ns[i] - mx);
        }
        const double slope = sxy / sxx;
        report(4, bounded && slope <= 2.1, "d = 1 oracle rank growth (eps = 1e-6, L2)",
               "r_oracle %s; linear-fit slope %.3f (<= 2.1)", ranks.c_str(), slope);
    }

    { // criterion 10
        const fs::path base = fs::temp_directory_path() / "eigenrank-acceptance";
        fs::remove_all(base);
        int codes[2];
        for (int run_id = 0; run_id < 2; ++run_id) {
            Experiment fresh(preset("flat-1d"));
            codes[run_id] = run(fresh, Command::verify_all, base / std::to_string(run_id)).exit_code;
        }
        bool same = true;
        int files = 0;
        for (const char *f : {"spectrum.csv", "ranks.csv", "tails.csv", "eri.csv"}) {
            const std::string a = slurp(base / "0" / f), b = slurp(base / "1" / f);
            same = same && !a.empty() && a == b;
            ++files;
        }
        report(10, same && codes[0] == 0 && codes[1] == 0,
               "reproducibility (verify-all twice on flat-1d)",
               "%d CSV files bitwise %s; exit codes %d, %d", files,
               same ? "identical" : "DIFFERENT", codes[0], codes[1]);
        fs::remove_all(base);
    }
}

// Clusters lying entirely inside the first n indices.
std::vector<Cluster> whole_clusters(const Vec &values, int n) {
    std::vector<Cluster> out;
    for (const Cluster &c : clusters(values))
        if (c.last <= n)
            out.push_back(c);
    return out;
}

void criterion_9(Experiment &e) {
    const int n = 16;
    const SpectralBasis &b = e.basis_l();
    const auto cl = whole_clusters(b.values, n);
    // lambda = 1^2 + 2^2 is the second cluster of the flat square
    const Cluster target = cl.at(1);
    const SpectralBasis rot = rotate_cluster(b, target, 2024);
    const SpectralBasis rot_lap = retag(rot, OperatorKind::laplacian);

    const ProductCoefficients l2_rot = expansion_coefficients(rot, rot, n, rot.count());
    const ProductCoefficients hm1_rot = expansion_coefficients(rot, rot_lap, n, rot.count());
    const ProductCoefficients l2 = leading_pairs(e.l2_coeffs(), n);
    const ProductCoefficients hm1 = leading_pairs(e.hm1_coeffs(), n);

    const TailTable t_l2 = TailTable::l2(l2), t_l2r = TailTable::l2(l2_rot);
    const TailTable t_h = TailTable::hm1(hm1, e.basis_lap()), t_hr = TailTable::hm1(hm1_rot, rot_lap);

    // r snapped to cluster boundaries so the truncation is rotation invariant
    std::vector<int> rs;
    const auto all = clusters(b.values);
    for (int r : geometric_samples(b.count())) {
        int snapped = 0;
        for (const Cluster &c : all)
            if (c.first <= r)
                snapped = c.first;
        rs.push_back(snapped);
    }

    double tail_change = 0.0;
    for (const Cluster &a : cl)
        for (const Cluster &c : cl)
            for (int r : rs) {
                tail_change = std::max(tail_change, std::abs(aggregate_tail(t_l2, a, c, r) -
                                                             aggregate_tail(t_l2r, a, c, r)));
                tail_change = std::max(tail_change, std::abs(aggregate_tail(t_h, a, c, r) -
                                                             aggregate_tail(t_hr, a, c, r)));
            }

    int rank_change = 0;
    std::string ranks;
    for (double eps : {1e-2, 1e-3}) {
        const int a = oracle_rank_l2(b, n, eps), ar = oracle_rank_l2(rot, n, eps);
        const int h = oracle_rank_hm1(hm1, e.basis_lap(), n, eps);
        const int hr = oracle_rank_hm1(hm1_rot, rot_lap, n, eps);
        rank_change = std::max({rank_change, std::abs(a - ar), std::abs(h - hr)});
        ranks += fmt("%seps %.0e: L2 %d->%d, Hdot-1 %d->%d", ranks.empty() ? "" : "; ", eps, a,
                     ar, h, hr);
    }
    report(9, tail_change <= 1e-8 && rank_change == 0,
           "degeneracy invariance (flat-2d, cluster lambda = 1^2 + 2^2)",
           "cluster [%d, %d) lambda %.6f; max aggregate-tail change %.2e (<= 1e-8); oracle %s",
           target.first, target.last, b.values[target.first], tail_change, ranks.c_str());
}

void flat_2d() {
    std::printf("-- flat-2d\n");
    const auto start = clock_type::now();
    Experiment e(preset_with("flat-2d", {8, 16}, {1e-2, 1e-3}));
    criterion_5_part(e, "flat-2d", start);
    criterion_3_part(e, "flat-2d");

    { // criterion 6
        bool ok = true;
        std::string detail;
        for (double eps : {1e-2, 1e-3}) {
            const int h = rank_for(e.scaling(), 16, eps, Norm::hm1).r_empirical;
            const int l = rank_for(e.scaling(), 16, eps, Norm::l2).r_empirical;
            ok = ok && h <= l;
            detail += fmt("%seps %.0e: r_hm1 %d, r_l2 %d, ratio %.3f", detail.empty() ? "" : "; ",
                          eps, h, l, static_cast<double>(h) / l);
        }
        report(6, ok, "Hdot-1 rank below L2 rank (flat-2d, n = 16)", "%s", detail.c_str());
    }

    { // criterion 8
        const ERIResult &r = e.eri();
        double secs = 0.0;
        for (const auto &[stage, ms] : e.timings())
            if (stage == "eigensolve_laplacian" || stage == "products_hm1" ||
                stage == "green_factorization" || stage == "eri_benchmark")
                secs += ms / 1000.0;
        const bool ok = r.n == 8 && r.eps == 1e-2 && r.bound_violations == 0 &&
                        r.max_abs_error <= r.eps * r.eps && r.cost_ratio() < 0.1 && secs < 120.0;
        report(8, ok, "ERI certificate (flat-2d, n = 8, eps = 1e-2)",
               "r = %d, %zu quadruples, %d bound violations, max |exact - fitted| %.2e "
               "(<= eps^2 = %.0e), fitted/exact ops %.4f (< 0.1), %.1f s (< 120 s)",
               r.r, r.entries.size(), r.bound_violations, r.max_abs_error, r.eps * r.eps,
               r.cost_ratio(), secs);
    }

    criterion_9(e);
}

void random_2d() {
    std::printf("-- random-2d\n");
    const auto start = clock_type::now();
    Experiment e(preset_with("random-2d", {16}, {1e-2, 1e-3}));
    criterion_5_part(e, "random-2d", start);
    criterion_2_part(e, "random-2d");
    criterion_3_part(e, "random-2d");

    { // criterion 7
        const CoefficientField &f = e.field();
        const ComparabilityReport rep = comparability_check(e.basis_l(), e.basis_lap(), f, 64);
        const bool band = f.a_min >= 0.7 && f.a_max <= 1.3 && f.v_sup <= 0.5;
        report(7, rep.passed() && band, "comparability sandwich (random-2d, k <= 64)",
               "%d violations; a in [%.3f, %.3f], |V|_inf %.3f; min lower margin %.3e, "
               "min upper margin %.3e",
               rep.violations, f.a_min, f.a_max, f.v_sup, rep.lower_margin.minCoeff(),
               rep.upper_margin.minCoeff());
    }
}

} // namespace

int main() {
    const auto start = clock_type::now();
    try {
        flat_1d();
        flat_2d();
        random_2d();
    } catch (const std::exception &e) {
        std::printf("FAIL  acceptance run aborted: %s\n", e.what());
        return 1;
    }
    report(2, c2.passed, "traced product-rule chain (flat-1d, random-2d, n = 16)", "%s",
           c2.detail.c_str());
    report(3, c3.passed, "tail identity and Hdot1 identity", "%s", c3.detail.c_str());
    report(5, c5.passed && c5_seconds < 300.0,
           "tail decay envelopes (n = 16, r geometric up to G/2)", "%s; %.1f s (< 300 s)",
           c5.detail.c_str(), c5_seconds);

    std::sort(outcomes.begin(), outcomes.end(),
              [](const Outcome &a, const Outcome &b) { return a.id < b.id; });
    int failed = 0;
    std::printf("\n== summary (%.1f s)\n", seconds_since(start));
    for (const Outcome &o : outcomes) {
        std::printf("%s\n", o.line.c_str());
        failed += o.passed ? 0 : 1;
    }
    std::printf("%zu criteria, %d failed\n", outcomes.size(), failed);
    return failed == 0 ? 0 : 1;
}

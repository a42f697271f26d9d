#include "eigenrank/config.h"

#include "eigenrank/error.h"
#include "eigenrank/eigensolve.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numbers>
#include <regex>
#include <sstream>

namespace eigenrank {

using json = nlohmann::json;

namespace {

int line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Best-effort line of a dotted field path: each key is searched after the
// position of its parent.
int line_of_field(std::string_view text, const std::string &path) {
    std::size_t pos = 0;
    std::stringstream ss(path);
    std::string part;
    bool found = false;
    while (std::getline(ss, part, '.')) {
        const auto bracket = part.find('[');
        const std::string key = "\"" + part.substr(0, bracket) + "\"";
        const auto hit = text.find(key, pos);
        if (hit == std::string_view::npos)
            break;
        pos = hit;
        found = true;
    }
    return found ? line_of_offset(text, pos) : 0;
}

class Reader {
  public:
    Reader(const json &doc, std::string_view text) : m_doc(doc), m_text(text) {}

    [[noreturn]] void fail(const std::string &field, const std::string &what) const {
        throw ConfigError(field, what, line_of_field(m_text, field));
    }

    const json *find(const json &obj, const std::string &key) const {
        const auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

    const json &object(const json &parent, const std::string &key,
                       const std::string &path) const {
        const json *v = find(parent, key);
        if (!v)
            fail(path, "missing required block");
        if (!v->is_object())
            fail(path, "must be an object");
        return *v;
    }

    double number(const json &v, const std::string &path) const {
        if (!v.is_number())
            fail(path, "must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            fail(path, "must be finite");
        return x;
    }

    double number(const json &obj, const std::string &key, const std::string &path,
                  double fallback) const {
        const json *v = find(obj, key);
        return v ? number(*v, path) : fallback;
    }

    int integer(const json &v, const std::string &path) const {
        if (!v.is_number_integer())
            fail(path, "must be an integer");
        return v.get<int>();
    }

    int integer(const json &obj, const std::string &key, const std::string &path,
                int fallback) const {
        const json *v = find(obj, key);
        return v ? integer(*v, path) : fallback;
    }

    std::string string(const json &v, const std::string &path) const {
        if (!v.is_string())
            fail(path, "must be a string");
        return v.get<std::string>();
    }

    // A length is a number or a multiple of pi written "pi", "2pi", "0.5*pi".
    double length(const json &v, const std::string &path) const {
        if (v.is_number())
            return number(v, path);
        if (v.is_string()) {
            static const std::regex pattern(R"(^\s*([0-9]*\.?[0-9]+)?\s*\*?\s*pi\s*$)");
            std::smatch match;
            const std::string s = v.get<std::string>();
            if (std::regex_match(s, match, pattern)) {
                const double factor = match[1].matched ? std::stod(match[1].str()) : 1.0;
                return factor * std::numbers::pi;
            }
        }
        fail(path, "must be a number or a multiple of pi such as \"2pi\"");
    }

    const json &array(const json &obj, const std::string &key, const std::string &path) const {
        const json *v = find(obj, key);
        if (!v)
            fail(path, "missing required field");
        if (!v->is_array() || v->empty())
            fail(path, "must be a non-empty array");
        return *v;
    }

  private:
    const json &m_doc;
    std::string_view m_text;
};

std::string indexed(const std::string &path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

ExperimentConfig read(const json &doc, std::string_view text) {
    const Reader rd(doc, text);
    if (!doc.is_object())
        rd.fail("", "config document must be a JSON object");

    ExperimentConfig cfg;
    if (const json *name = rd.find(doc, "name"))
        cfg.name = rd.string(*name, "name");

    const json &grid = rd.object(doc, "grid", "grid");
    {
        const json *d = rd.find(grid, "dimension");
        if (!d)
            rd.fail("grid.dimension", "missing required field");
        cfg.grid.dimension = rd.integer(*d, "grid.dimension");
        if (cfg.grid.dimension < 1 || cfg.grid.dimension > 3)
            rd.fail("grid.dimension", "must be 1, 2 or 3");
        const json &lengths = rd.array(grid, "lengths", "grid.lengths");
        const json &points = rd.array(grid, "points", "grid.points");
        if (lengths.size() != static_cast<std::size_t>(cfg.grid.dimension))
            rd.fail("grid.lengths", "needs one entry per axis");
        if (points.size() != static_cast<std::size_t>(cfg.grid.dimension))
            rd.fail("grid.points", "needs one entry per axis");
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            const double l = rd.length(lengths[i], indexed("grid.lengths", i));
            if (!(l > 0.0))
                rd.fail(indexed("grid.lengths", i), "must be positive");
            cfg.grid.lengths.push_back(l);
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            const int p = rd.integer(points[i], indexed("grid.points", i));
            if (p < Grid::min_points)
                rd.fail(indexed("grid.points", i), "must be at least 8");
            cfg.grid.points.push_back(p);
        }
        const std::string boundary =
            rd.find(grid, "boundary") ? rd.string(grid["boundary"], "grid.boundary")
                                      : "dirichlet";
        if (boundary != "dirichlet" && boundary != "periodic")
            rd.fail("grid.boundary", "must be \"dirichlet\" or \"periodic\"");
        cfg.grid.boundary = boundary_from_string(boundary);
    }

    const json &coef = rd.object(doc, "coefficients", "coefficients");
    {
        const json *kind = rd.find(coef, "kind");
        if (!kind)
            rd.fail("coefficients.kind", "missing required field");
        const std::string k = rd.string(*kind, "coefficients.kind");
        CoefficientSpec &s = cfg.coefficients;
        if (k == "constant") {
            s = CoefficientSpec::constant(rd.number(coef, "a0", "coefficients.a0", 1.0),
                                          rd.number(coef, "v0", "coefficients.v0", 0.0));
        } else if (k == "harmonic") {
            s = CoefficientSpec::harmonic(
                rd.number(coef, "a0", "coefficients.a0", 1.0),
                rd.number(coef, "v_scale", "coefficients.v_scale", 1.0));
        } else if (k == "random_fourier") {
            const json *seed = rd.find(coef, "seed");
            if (!seed || !seed->is_number_unsigned())
                rd.fail("coefficients.seed", "random_fourier needs a nonnegative integer seed");
            s = CoefficientSpec::random_fourier(
                seed->get<std::uint64_t>(),
                rd.integer(coef, "fourier_cutoff", "coefficients.fourier_cutoff", 4),
                rd.number(coef, "a0", "coefficients.a0", 1.0),
                rd.number(coef, "delta", "coefficients.delta", 0.3),
                rd.number(coef, "v0", "coefficients.v0", 0.0),
                rd.number(coef, "v_delta", "coefficients.v_delta", 0.0));
        } else {
            rd.fail("coefficients.kind",
                    "must be \"constant\", \"harmonic\" or \"random_fourier\"");
        }
        if (!(s.a0 > 0.0))
            rd.fail("coefficients.a0", "must be positive");
        if (s.kind == CoefficientKind::constant && s.v0 < 0.0)
            rd.fail("coefficients.v0", "must be nonnegative");
        if (s.kind == CoefficientKind::harmonic && s.v_scale < 0.0)
            rd.fail("coefficients.v_scale", "must be nonnegative");
        if (s.kind == CoefficientKind::random_fourier) {
            if (s.delta < 0.0 || !(s.delta < s.a0))
                rd.fail("coefficients.delta", "must satisfy 0 <= delta < a0");
            if (s.fourier_cutoff < 0)
                rd.fail("coefficients.fourier_cutoff", "must be nonnegative");
            if (s.v_delta < 0.0)
                rd.fail("coefficients.v_delta", "must be nonnegative");
        }
    }

    const json &solver = rd.object(doc, "solver", "solver");
    {
        const json *m = rd.find(solver, "m");
        if (!m)
            rd.fail("solver.m", "missing required field");
        cfg.solver.m = rd.integer(*m, "solver.m");
        cfg.solver.tol = rd.number(solver, "tol", "solver.tol", 1e-9);
        if (!(cfg.solver.tol > 0.0))
            rd.fail("solver.tol", "must be positive");
        const int cap = rd.integer(solver, "dense_cap", "solver.dense_cap", 5000);
        if (cap < 1)
            rd.fail("solver.dense_cap", "must be positive");
        cfg.solver.dense_cap = static_cast<std::size_t>(cap);
    }

    const json &sweep = rd.object(doc, "sweep", "sweep");
    {
        const json &ns = rd.array(sweep, "n", "sweep.n");
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const int n = rd.integer(ns[i], indexed("sweep.n", i));
            if (n < 1)
                rd.fail(indexed("sweep.n", i), "must be at least 1");
            cfg.sweep.n.push_back(n);
        }
        const json &eps = rd.array(sweep, "eps", "sweep.eps");
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const double e = rd.number(eps[i], indexed("sweep.eps", i));
            if (!(e > 0.0))
                rd.fail(indexed("sweep.eps", i), "must be positive, got " + eps[i].dump());
            cfg.sweep.eps.push_back(e);
        }
        std::sort(cfg.sweep.eps.begin(), cfg.sweep.eps.end(), std::greater<>());
        cfg.sweep.eps.erase(std::unique(cfg.sweep.eps.begin(), cfg.sweep.eps.end()),
                            cfg.sweep.eps.end());
        std::sort(cfg.sweep.n.begin(), cfg.sweep.n.end());
        cfg.sweep.n.erase(std::unique(cfg.sweep.n.begin(), cfg.sweep.n.end()),
                          cfg.sweep.n.end());
        if (rd.find(sweep, "norms")) {
            cfg.sweep.norms.clear();
            const json &norms = rd.array(sweep, "norms", "sweep.norms");
            for (std::size_t i = 0; i < norms.size(); ++i) {
                const std::string s = rd.string(norms[i], indexed("sweep.norms", i));
                if (s != "l2" && s != "hm1")
                    rd.fail(indexed("sweep.norms", i), "must be \"l2\" or \"hm1\"");
                const Norm nm = norm_from_string(s);
                if (std::find(cfg.sweep.norms.begin(), cfg.sweep.norms.end(), nm) ==
                    cfg.sweep.norms.end())
                    cfg.sweep.norms.push_back(nm);
            }
        }
    }

    if (const json *eri = rd.find(doc, "eri")) {
        if (!eri->is_object())
            rd.fail("eri", "must be an object");
        if (const json *en = rd.find(*eri, "enabled")) {
            if (!en->is_boolean())
                rd.fail("eri.enabled", "must be a boolean");
            cfg.eri.enabled = en->get<bool>();
        }
        cfg.eri.n = rd.integer(*eri, "n", "eri.n", cfg.eri.n);
        if (cfg.eri.n < 1)
            rd.fail("eri.n", "must be at least 1");
        cfg.eri.eps = rd.number(*eri, "eps", "eri.eps", cfg.eri.eps);
        if (!(cfg.eri.eps > 0.0))
            rd.fail("eri.eps", "must be positive");
        if (const json *seed = rd.find(*eri, "seed")) {
            if (!seed->is_number_unsigned())
                rd.fail("eri.seed", "must be a nonnegative integer");
            cfg.eri.seed = seed->get<std::uint64_t>();
        }
    }

    if (const json *cal = rd.find(doc, "calibration")) {
        if (!cal->is_object())
            rd.fail("calibration", "must be an object");
        cfg.calibration.l2 = rd.number(*cal, "calib_l2", "calibration.calib_l2", 1.0);
        cfg.calibration.hm1 = rd.number(*cal, "calib_hm1", "calibration.calib_hm1", 1.0);
        if (!(cfg.calibration.l2 > 0.0))
            rd.fail("calibration.calib_l2", "must be positive");
        if (!(cfg.calibration.hm1 > 0.0))
            rd.fail("calibration.calib_hm1", "must be positive");
    }

    if (const json *out = rd.find(doc, "output")) {
        if (out->is_string()) {
            cfg.output_dir = out->get<std::string>();
        } else if (out->is_object()) {
            if (const json *dir = rd.find(*out, "directory"))
                cfg.output_dir = rd.string(*dir, "output.directory");
            if (const json *t = rd.find(*out, "timings_in_csv")) {
                if (!t->is_boolean())
                    rd.fail("output.timings_in_csv", "must be a boolean");
                cfg.timings_in_csv = t->get<bool>();
            }
        } else {
            rd.fail("output", "must be a directory string or an object");
        }
    }

    try {
        cfg.validate();
    } catch (const ConfigError &e) {
        throw ConfigError(e.field(), e.detail(), line_of_field(text, e.field()));
    }
    return cfg;
}

} // namespace

Grid ExperimentConfig::make_grid() const {
    return eigenrank::make_grid(grid.dimension, grid.lengths, grid.points, grid.boundary);
}

int ExperimentConfig::max_n() const {
    int n = sweep.n.empty() ? 1 : *std::max_element(sweep.n.begin(), sweep.n.end());
    if (eri.enabled)
        n = std::max(n, eri.n);
    return n;
}

void ExperimentConfig::validate() const {
    const Grid g = make_grid();
    const int cap = weyl_cap(g);
    if (solver.m < 1 || static_cast<std::size_t>(solver.m) > g.size())
        throw ConfigError("solver.m", "must lie in [1, node count]");
    if (solver.m > cap)
        throw ConfigError("solver.m", "m = " + std::to_string(solver.m) +
                                          " exceeds the Weyl regime cap " + std::to_string(cap));
    for (std::size_t i = 0; i < sweep.n.size(); ++i)
        if (sweep.n[i] > solver.m)
            throw ConfigError("sweep.n", "n = " + std::to_string(sweep.n[i]) +
                                             " exceeds solver.m = " + std::to_string(solver.m));
    if (eri.enabled && eri.n > solver.m)
        throw ConfigError("eri.n", "exceeds solver.m");
    for (double e : sweep.eps)
        if (!(e > 0.0))
            throw ConfigError("sweep.eps", "values must be positive");
}

ExperimentConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        const int line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError("", std::string("syntax error: ") + e.what(), line);
    }
    return read(doc, text);
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::ordered_json to_json(const ExperimentConfig &c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["grid"] = {{"dimension", c.grid.dimension},
                 {"lengths", c.grid.lengths},
                 {"points", c.grid.points},
                 {"boundary", std::string(to_string(c.grid.boundary))}};
    nlohmann::ordered_json coef;
    coef["kind"] = std::string(to_string(c.coefficients.kind));
    coef["a0"] = c.coefficients.a0;
    switch (c.coefficients.kind) {
    case CoefficientKind::constant:
        coef["v0"] = c.coefficients.v0;
        break;
    case CoefficientKind::harmonic:
        coef["v_scale"] = c.coefficients.v_scale;
        break;
    case CoefficientKind::random_fourier:
        coef["seed"] = c.coefficients.seed;
        coef["fourier_cutoff"] = c.coefficients.fourier_cutoff;
        coef["delta"] = c.coefficients.delta;
        coef["v0"] = c.coefficients.v0;
        coef["v_delta"] = c.coefficients.v_delta;
        break;
    }
    j["coefficients"] = coef;
    j["solver"] = {{"m", c.solver.m}, {"tol", c.solver.tol}, {"dense_cap", c.solver.dense_cap}};
    std::vector<std::string> norms;
    for (Norm n : c.sweep.norms)
        norms.emplace_back(to_string(n));
    j["sweep"] = {{"n", c.sweep.n}, {"eps", c.sweep.eps}, {"norms", norms}};
    j["eri"] = {{"enabled", c.eri.enabled}, {"n", c.eri.n}, {"eps", c.eri.eps}, {"seed", c.eri.seed}};
    j["calibration"] = {{"calib_l2", c.calibration.l2}, {"calib_hm1", c.calibration.hm1}};
    j["output"] = {{"directory", c.output_dir.string()}, {"timings_in_csv", c.timings_in_csv}};
    return j;
}

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig c;
    c.name = std::string(name);
    c.output_dir = std::filesystem::path("out") / c.name;
    const double pi = std::numbers::pi;
    if (name == "flat-1d" || name == "harmonic-1d") {
        c.grid = {1, {pi}, {512}, Boundary::dirichlet};
        c.coefficients = name == "flat-1d" ? CoefficientSpec::constant(1.0, 0.0)
                                           : CoefficientSpec::harmonic(1.0, 1.0);
        c.solver.m = 64;
        c.sweep.n = {8, 16, 32};
        c.sweep.eps = name == "flat-1d" ? std::vector<double>{1e-2, 1e-3, 1e-6}
                                        : std::vector<double>{1e-2, 1e-3};
        c.eri = {true, 8, 1e-3, 1};
    } else if (name == "flat-2d" || name == "random-2d") {
        c.grid = {2, {pi, pi}, {64, 64}, Boundary::dirichlet};
        c.coefficients = name == "flat-2d"
                             ? CoefficientSpec::constant(1.0, 0.0)
                             : CoefficientSpec::random_fourier(7, 4, 1.0, 0.3, 0.25, 0.25);
        c.solver.m = 64;
        c.sweep.n = {8, 16};
        c.sweep.eps = {1e-2, 1e-3};
        c.eri = {true, 8, 1e-2, 1};
    } else {
        throw ConfigError("", "unknown preset '" + std::string(name) + "'");
    }
    c.validate();
    return c;
}

std::vector<std::string> preset_names() {
    return {"flat-1d", "flat-2d", "harmonic-1d", "random-2d"};
}

} // namespace eigenrank

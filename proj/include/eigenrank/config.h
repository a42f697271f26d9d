#pragma once

#include "eigenrank/coefficients.h"
#include "eigenrank/grid.h"
#include "eigenrank/lowrank.h"

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace eigenrank {

struct ExperimentConfig {
    std::string name{"experiment"};

    struct GridBlock {
        int dimension{1};
        std::vector<double> lengths;
        std::vector<int> points;
        Boundary boundary{Boundary::dirichlet};
    } grid;

    CoefficientSpec coefficients;

    struct SolverBlock {
        int m{32};
        double tol{1e-9};
        std::size_t dense_cap{5000};
    } solver;

    struct SweepBlock {
        std::vector<int> n;
        std::vector<double> eps; // descending
        std::vector<Norm> norms{Norm::l2, Norm::hm1};
    } sweep;

    struct EriBlock {
        bool enabled{true};
        int n{8};
        double eps{1e-2};
        std::uint64_t seed{1};
    } eri;

    struct CalibrationBlock {
        double l2{1.0};
        double hm1{1.0};
    } calibration;

    std::filesystem::path output_dir{"out"};
    // Wall-clock columns make CSVs non-reproducible; off by default.
    bool timings_in_csv{false};
    std::size_t oracle_max_entries{RankOracle::default_max_entries};

    Grid make_grid() const;
    // Largest n used by any sweep cell or the ERI benchmark.
    int max_n() const;
    // Checks every cross-field invariant; throws ConfigError.
    void validate() const;
};

// Parses and validates a JSON config document. Syntax errors carry the line
// and column; semantic errors name the offending field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path &path);

nlohmann::ordered_json to_json(const ExperimentConfig &config);

// Built-in configurations: flat-1d, flat-2d, harmonic-1d, random-2d.
ExperimentConfig preset(std::string_view name);
std::vector<std::string> preset_names();

} // namespace eigenrank

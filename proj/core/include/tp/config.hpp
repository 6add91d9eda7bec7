#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tp/charts.hpp"

namespace tp {

// Parsed experiment configuration; flat key-value text with [sections].
struct ExperimentSpec {
    std::string command;

    // [domain]
    int periods = 32;
    int points = 256;
    int slow_periods = 8;
    int slow_points = 64;

    // [sh]
    double eps = 1e-3;
    double h_fast = 0.05;
    std::map<int, cdouble> nu;

    // [model]
    int order = 5;
    int theta = 1;
    double h_slow = 0.005;

    // [sections]
    SectionSpec sections{};

    // [ic]
    std::string ic_family = "roll"; // roll | gaussian | random
    double amplitude = 0.05;
    double ic_center = 0.0;
    double ic_width = 10.0;

    // [experiment]
    std::string experiment = "dynamic_error";
    std::vector<double> eps_list{4e-3, 2e-3, 1e-3, 5e-4};
    std::vector<double> delta_list{0.2, 0.15, 0.1, 0.07};
    std::vector<double> r_list{0.4, 0.3, 0.2, 0.15, 0.1};
    double threshold = 1e-2;
    std::string delay_mode = "full";
    double t_end = -1.0; // simulate horizon; < 0 means (rho_in + rho_out)/eps

    // [run] / [output]
    std::uint64_t seed = 1;
    int workers = 0; // 0: hardware concurrency
    std::string out_dir = "out";

    std::uint64_t spec_hash = 0;
    std::vector<std::string> warnings;

    Grid1D fast_grid() const { return Grid1D(periods, points); }
    Grid1D slow_grid() const { return Grid1D(slow_periods, slow_points); }
};

// Parses the config file (empty path or file: all defaults). Unknown keys and
// out-of-domain values raise config_error naming the key / constraint.
ExperimentSpec parse_config(const std::string& path, const std::string& command);
ExperimentSpec parse_config_text(const std::string& text, const std::string& command);

std::uint64_t fnv1a_hash(const std::string& bytes);

struct RunManifest {
    std::uint64_t spec_hash = 0;
    std::string code_version;
    std::string command;
    std::string started_utc, finished_utc;
    std::vector<std::pair<std::string, std::string>> run_status; // (run id, status)
    std::vector<std::string> emitted_files;

    void write(const std::string& path) const;
};

extern const char* kCodeVersion;

} // namespace tp

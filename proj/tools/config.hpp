#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <drivebrake/experiments.hpp>

namespace drivebrake::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Params params{0.5, 0.5, 0.5};
    Grid1D grid{Grid1D::desk()};
    std::string ic_protocol{"figure"};  // figure, appendix, none or custom
    std::vector<Block> custom_blocks;
    DriftSpec drift;
    double nagylaki_n0{1.0};
    std::vector<double> snapshot_times;  // empty: final time only
    double raster_interval{1.0};
    bool write_pgm{true};
    std::filesystem::path out_dir{"out"};
    std::uint64_t seed{20240601};
    Thresholds thresholds;
    PhaseOptions phase;
    std::vector<double> sweep_a, sweep_b;

    // Protocol blocks depend on the grid, so they are built here.
    InitialCondition initial_condition() const;
    Scenario scenario() const;
};

// key = value lines, '#' starts a comment. Errors carry "<source>:<line>".
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

}  // namespace drivebrake::cli

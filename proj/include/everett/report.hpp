#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "everett/errors.hpp"

namespace everett {

inline constexpr const char* kVersion = "0.1.0";

/// Bad experiment configuration; maps to the usage exit code at the CLI.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

struct ExperimentConfig {
    enum class Command { born, classes, residual, cat, complement, invariance };
    enum class Format { json, csv };

    Command command = Command::born;
    /// Outcome measures |C_i|^2; renormalized on load, with a warning when
    /// they are off by more than 1e-6.
    std::vector<double> coeffs{0.5, 0.5};
    std::int64_t n = 16;
    double epsilon = 0.05;
    double a_sq = 0.5;
    std::uint64_t seed = 0;
    Format format = Format::json;
    std::string out_path;  // empty writes to stdout
};

const char* command_name(ExperimentConfig::Command command);
const char* format_name(ExperimentConfig::Format format);

struct Report {
    nlohmann::json document;
    std::string csv;
    std::vector<std::string> warnings;
};

/// Runs one experiment. Throws ConfigError for invalid configuration and
/// ObstructionError when the requested construction cannot exist.
Report run_experiment(const ExperimentConfig& config);

/// The bytes to write for the requested format.
std::string render(const Report& report, ExperimentConfig::Format format);

/// The N values a sweep command reports: powers of two below n, then n.
std::vector<std::int64_t> sweep_points(std::int64_t n);

}  // namespace everett

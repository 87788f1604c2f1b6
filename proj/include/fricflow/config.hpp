#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fricflow/timestepper.hpp"

namespace fricflow {

// Thresholds and sweep parameters of the verification subcommands. Every
// key is optional in the [verify] section; defaults are the values below.
struct VerifySettings {
    double energy_identity_tol = 1e-10;

    double complementarity_tol = 1e-12;
    double pressure_identity_tol = 1e-12;
    double delta_tol = 1e-8;

    int stationary_n = 16;
    std::vector<double> eps_values{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    double eps_reference = 1e-5;
    double eps_rate_min_slope = 0.45;

    double dirichlet_g_factor = 1e4;
    double dirichlet_trace_ratio = 1e-3;
    double dirichlet_h1_rel = 1e-2;
    double neumann_h1_rel = 1e-8;

    std::vector<int> convergence_meshes{4, 8, 16};
    double convergence_l2_rate = 2.7;
    double convergence_h1_rate = 1.8;
    double convergence_g = 1e4;

    int random_samples = 1000;
};

struct ParsedConfig {
    RunConfig run;
    VerifySettings verify;
};

// Carries every problem found in the file, one message per entry, each
// naming [section].key and the line when there is one.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    std::vector<std::string> errors;
};

// INI-style text: `[section]` headers, `key = value` lines, `#` or `;`
// comments. Throws ConfigError listing all problems, std::runtime_error if
// the file cannot be read.
ParsedConfig parse_config(const std::string& path);
ParsedConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

const char* to_string(ProblemKind k);
const char* to_string(ConvectionTreatment c);

}  // namespace fricflow

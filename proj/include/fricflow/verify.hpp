#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fricflow/config.hpp"
#include "fricflow/timestepper.hpp"

namespace fricflow {

struct CheckLine {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::string title;
    std::vector<CheckLine> checks;
    std::vector<std::string> notes;  // informational lines, no verdict
    bool passed() const;
    void add(const std::string& name, bool ok, const std::string& detail);
};

// printf-style helper for report details
std::string strf(const char* fmt, ...);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Observed order between consecutive entries: log(e_k / e_{k+1}) / log(h_k / h_{k+1}).
std::vector<double> pairwise_rates(const std::vector<double>& h, const std::vector<double>& e);

// L2 and H1 (full) distance between a discrete velocity and an exact field,
// integrated with a high-order rule.
struct FieldError {
    double l2 = 0.0;
    double h1 = 0.0;
};
FieldError velocity_error(const Discretization& disc, const Vector& u, const std::function<Vec2(const Vec2&)>& exact,
                          const std::function<Mat2(const Vec2&)>& exact_grad);

// Random samples of the regularized law, eps in [1e-6, 1] and |z|/eps in
// [1e-4, 1e6]: bounds on rho, alpha, beta and a finite-difference check of
// alpha = grad rho.
struct RegularizationSampleReport {
    int samples = 0;
    int bound_violations = 0;  // |rho - |z|| > eps
    int alpha_norm_violations = 0;
    int alpha_sign_violations = 0;
    int beta_violations = 0;
    double min_beta_quadratic = 0.0;
    double max_gradient_error = 0.0;
};
RegularizationSampleReport sample_regularization(int samples, std::uint64_t seed);

// max |a1~(w; v, v)| / |v|_H1^2 over random coefficient vectors.
double sample_skew_ratio(const Discretization& disc, int samples, std::uint64_t seed);

// Load h used by every stationary solve built from a run config: the
// [initial] field when mode = stationary, else [force] at t = 0, else a
// unit vortex.
VectorFieldSpec stationary_load_spec(const RunConfig& cfg);

// The verification subcommands. Each builds its own meshes and problems from
// the parsed file; thresholds come from cfg.verify.
VerifyReport verify_energy(const ParsedConfig& cfg, std::uint64_t seed);
VerifyReport verify_complementarity(const ParsedConfig& cfg, std::uint64_t seed);
VerifyReport verify_eps_rate(const ParsedConfig& cfg);
VerifyReport verify_limits(const ParsedConfig& cfg);
VerifyReport verify_convergence(const ParsedConfig& cfg);

// Continuation over cfg.verify.eps_values down to eps_reference on the run
// mesh; informational checks only (Newton convergence, shrinking increments).
struct StationaryStudy {
    VerifyReport report;
    ContinuationResult continuation;
    std::shared_ptr<const Discretization> disc;
    std::vector<double> eps;
};
StationaryStudy stationary_study(const ParsedConfig& cfg, int n);

// Final-time L2 velocity error of runs with each dt against a run with
// dt_ref; the config's T is kept.
struct TemporalStudy {
    std::vector<double> dts;
    std::vector<double> errors;
    double order = 0.0;
};
TemporalStudy temporal_convergence(const RunConfig& cfg, const std::vector<double>& dts, double dt_ref);

}  // namespace fricflow

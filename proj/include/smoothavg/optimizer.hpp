#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "smoothavg/kernel.hpp"
#include "smoothavg/whittaker.hpp"

namespace smoothavg {

struct MinimizeOptions {
    double alpha = 2.0;
    double beta = 1.0;
    int M = 6;                 // coefficients c_0..c_M
    int max_iter = 500;
    std::uint64_t seed = 0;
    bool nonnegative = false;  // adds lambda * (negativity mass / mass)^2
    double lambda = 1e3;
    double initial_step = 0.1;
};

struct MinimizeResult {
    std::vector<double> best_coeffs;
    double best_objective = 0.0;
    double best_J = 0.0;
    double negativity = 0.0;   // negativity mass / L1 mass of the best kernel
    std::vector<double> trace; // best-so-far objective, one entry per iteration
    int iterations = 0;
    int evaluations = 0;
    int restarts = 0;
};

/// Cosine coefficients c_0..c_M of a compact kernel's base shape.
std::vector<double> project_cosine(const KernelSpec& k, int M);

/// c_0 = 1 plus Gaussian c_1..c_M with standard deviation 0.3 / m.
std::vector<double> random_start(int M, std::uint64_t seed);

/// Objective at a coefficient vector; +inf for zero or uncertified kernels.
double objective(const std::vector<double>& c, const MinimizeOptions& opt);

/// Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2),
/// restarted once from the best vertex if the simplex collapses early.
MinimizeResult minimize(const std::vector<double>& start, const MinimizeOptions& opt);
MinimizeResult minimize(const KernelSpec& start, const MinimizeOptions& opt);

struct ProbeReport {
    double alpha = 0.0;
    EvenPerturbation direction;
    std::vector<double> eps_grid;
    std::vector<double> J_values;
    double J0 = 0.0;
    double one_sided_slope = 0.0;
    double margin = 0.0;       // stability_verify(direction, alpha).margin
    bool certified = true;
};

std::vector<double> default_eps_grid();

/// J(chi + eps f) along N seeded unit-l2 directions with M + 1 coefficients.
/// Non-integer alpha must pass certify(alpha, 50) first.
std::vector<ProbeReport> probe_local_min(double alpha, int N, const std::vector<double>& eps_grid, std::uint64_t seed,
                                         int M = 6, unsigned threads = 0);

/// The same probe along one given direction.
ProbeReport probe_direction(double alpha, const EvenPerturbation& f, const std::vector<double>& eps_grid);

nlohmann::json to_json(const MinimizeResult& r);
nlohmann::json to_json(const ProbeReport& r);

}  // namespace smoothavg

#pragma once

// The uncertainty functional
//
//   J(u) = || |xi|^beta u^ ||_inf^alpha * || |x|^alpha u ||_1^beta / ||u||_1^(alpha+beta),
//
// which is invariant under u -> c u(x / L).  Also: kernel comparison across
// alpha and the smoothing bound ||(u*f)'||_2 <= 2 pi ||xi u^||_inf ||f||_2.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "smoothavg/kernel.hpp"
#include "smoothavg/spectral.hpp"

namespace smoothavg {

struct UncertaintyReport {
    double alpha = 0.0;
    double beta = 0.0;
    SupNormResult supnorm;
    double moment_val = 0.0;
    double l1_val = 0.0;
    double J = 0.0;

    bool certified() const { return supnorm.certified(); }
};

double compose_J(double sup, double moment_val, double l1_val, double alpha, double beta);

/// Throws PreconditionError (alpha <= 0, beta <= 1/2) or DomainError (zero kernel).
UncertaintyReport uncertainty(const KernelSpec& k, double alpha, double beta,
                              std::optional<double> cutoff = {});

/// Max relative deviation of J over `trials` transforms with (c, L) drawn
/// log-uniformly from [0.1, 10]^2.
double invariance_audit(const KernelSpec& k, double alpha, double beta, int trials, std::uint64_t seed);

struct SweepRow {
    double alpha;
    double J_a;
    double J_b;
};

struct CrossoverResult {
    std::optional<double> alpha_star;
    std::vector<std::pair<double, double>> brackets;  // sign-change brackets from the pre-scan
    std::vector<SweepRow> sweep;                       // the 64-point pre-scan
};

/// Root of J_A(alpha) - J_B(alpha) on [alpha_lo, alpha_hi] by bisection to
/// width 1e-4.  More than one sign change in the pre-scan is a
/// PreconditionError listing the brackets.
CrossoverResult compare_crossover(const KernelSpec& a, const KernelSpec& b, double alpha_lo, double alpha_hi,
                                  double beta);

/// The same search for arbitrary curves J_A(alpha), J_B(alpha).
CrossoverResult compare_crossover(const std::function<double(double)>& J_a, const std::function<double(double)>& J_b,
                                  double alpha_lo, double alpha_hi);

struct SmoothingResult {
    double lhs = 0.0;        // || (u*f)' ||_2, discrete
    double rhs = 0.0;        // 2 pi || xi u^ ||_inf || f ||_2
    double ratio = 0.0;
    double signal_norm = 0.0;
    SupNormResult supnorm;
};

/// Discrete check of the smoothing bound for a signal sampled at spacing h.
/// The kernel is sampled on the same grid (trapezoid end weights), the
/// convolution is zero-padded, the derivative is a central difference.
SmoothingResult smoothing_bound(const KernelSpec& k, std::span<const double> signal, double h);

/// Hann-windowed cos(2 pi xi0 x), n samples at spacing h: concentrates the
/// signal's energy at +-xi0.
std::vector<double> concentrated_signal(double xi0, double h, std::size_t n);

nlohmann::json to_json(const UncertaintyReport& r);
nlohmann::json to_json(const SmoothingResult& r);

}  // namespace smoothavg

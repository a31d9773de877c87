#pragma once

// Fourier transforms under u^(xi) = int u(x) exp(-2 pi i xi x) dx and the
// weighted sup-norm sup_xi |xi|^beta |u^(xi)|.

#include <optional>
#include <string>

#include <json.hpp>

#include "smoothavg/kernel.hpp"

namespace smoothavg {

enum class SupStatus { certified, uncertified, unbounded_risk };

std::string status_name(SupStatus s);

struct SupNormResult {
    double beta = 1.0;
    double value = 0.0;
    double argmax_xi = 0.0;
    double search_cutoff = 0.0;
    double tail_bound = 0.0;   // +inf under unbounded_risk
    long long grid_points = 0;
    SupStatus status = SupStatus::uncertified;
    // value is the limit |xi|^beta |u^| -> value as xi -> inf rather than an attained maximum
    bool asymptotic = false;

    bool certified() const { return status == SupStatus::certified; }
};

struct SupOptions {
    double points_per_unit = 64.0;
    double refine_rel_tol = 1e-10;
    // number of cutoff doublings tried when the tail bound is still above the value
    int max_extensions = 6;
};

/// sin(pi x) and cos(pi x) with exact reduction of x modulo 2.
double sin_pi(double x);
double cos_pi(double x);

/// Transform of the base shape (amplitude 1, dilation 1).
double base_fourier(const KernelSpec& k, double eta);

/// u^(xi); real because every kernel is even.
double fourier(const KernelSpec& k, double xi);

/// max(50, 20 / beta) in units of the kernel's natural frequency scale 1 / dilation.
double default_cutoff(const KernelSpec& k, double beta);

/// Upper bound on sup_{xi >= cutoff} |xi|^beta |u^(xi)|, or nullopt when the
/// kernel's regularity does not control that tail (unbounded risk).
std::optional<double> tail_bound(const KernelSpec& k, double beta, double cutoff);

/// Grid scan on [0, cutoff] with golden-section refinement of every local
/// maximum, plus a tail certificate.  Throws PreconditionError for beta <= 1/2.
SupNormResult weighted_sup(const KernelSpec& k, double beta, std::optional<double> cutoff = {},
                           const SupOptions& opt = {});

nlohmann::json to_json(const SupNormResult& r);

struct PlancherelPair {
    double real_space = 0.0;   // int f g dx
    double spectral = 0.0;     // int_{-cutoff}^{cutoff} f^ g^ dxi
    double tail_bound = 0.0;   // bound on the omitted |xi| > cutoff part
};

/// Self-test of the transform: both routes of int f g.  Compact kernels only.
PlancherelPair plancherel_check(const KernelSpec& f, const KernelSpec& g, double cutoff);

}  // namespace smoothavg

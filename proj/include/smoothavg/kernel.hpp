#pragma once

// Even averaging kernels u(x) = amplitude * b(x / dilation), where the base
// shape b is one of a few analytic families on [-1/2, 1/2] (or the Gaussian).

#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace smoothavg {

enum class Family { characteristic, gaussian, power, cosine_series, sampled };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Kernel description.
///
/// Base shapes:
///   characteristic  b(y) = 1 on [-1/2, 1/2]
///   gaussian        b(y) = exp(-pi y^2), params empty
///   power           b(y) = max(0, 1 - |2y|^p), params = {p}
///   cosine_series   b(y) = sum_m c_m cos(2 pi m y) on [-1/2, 1/2], params = {c_0..c_M}
///   sampled         params = values at n equispaced nodes on [-1/2, 1/2], linear interpolation
///
/// Every family carries amplitude and dilation, so v(x) = c u(x / L) stays in
/// the family it came from.  support_radius is dilation / 2 for the compact
/// families and +inf for the Gaussian.
struct KernelSpec {
    Family family = Family::characteristic;
    std::vector<double> params;
    double support_radius = 0.5;
    bool nonnegative = false;
    double amplitude = 1.0;
    double dilation = 1.0;

    bool compact() const { return family != Family::gaussian; }
};

struct ScaleTransform {
    double amplitude = 1.0;  // c > 0
    double dilation = 1.0;   // L > 0
};

inline constexpr std::size_t kSampledDefaultPoints = (1u << 14) + 1;

KernelSpec characteristic();
KernelSpec gaussian();
KernelSpec power(double p);
KernelSpec cosine_series(std::vector<double> coeffs, bool nonnegative = false);
KernelSpec sampled(std::vector<double> values);

/// Throws PreconditionError when the description is inconsistent: bad family
/// parameters, non-positive dilation, asymmetric samples, or a nonnegative
/// flag that fails on a 4096-point grid.
void validate(const KernelSpec& k);

/// Base shape b at y (no amplitude/dilation).
double base_value(const KernelSpec& k, double y);

double evaluate(const KernelSpec& k, double x);
double l1_norm(const KernelSpec& k);
double moment(const KernelSpec& k, double alpha);
KernelSpec apply_scale(const KernelSpec& k, const ScaleTransform& t);

/// Resample the base shape on n equispaced nodes (compact families only).
KernelSpec to_sampled(const KernelSpec& k, std::size_t n = kSampledDefaultPoints);

/// Total variation of u over the real line, jumps at the support boundary included.
double total_variation(const KernelSpec& k);

/// Total variation of u' when u is continuous on the real line; negative if u
/// has a jump (the second-order envelope is then unavailable) or u' is unbounded.
double derivative_variation(const KernelSpec& k);

/// Integral of max(0, -u).
double negativity_mass(const KernelSpec& k);

/// u(R-) at the right support boundary, i.e. the jump height there.
double boundary_value(const KernelSpec& k);

nlohmann::json to_json(const KernelSpec& k);
KernelSpec kernel_from_json(const nlohmann::json& j);

/// Inline syntax: "characteristic", "gaussian", "power:2", "cosine:1,0.5,0.1".
KernelSpec parse_kernel(const std::string& text);

}  // namespace smoothavg

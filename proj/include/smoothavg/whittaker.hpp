#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

namespace smoothavg {

/// f(x) = sum_m c_m cos(2 pi m x) on [-1/2, 1/2], zero outside.
struct EvenPerturbation {
    std::vector<double> coeffs;

    double operator()(double x) const;
};

/// Gaussian coefficients c_0..c_M, unit l2 norm.
EvenPerturbation random_perturbation(int M, std::mt19937_64& rng);

/// f^(k - 1/2) from the closed-form overlap of each cosine with the half-integer wave.
double hat_half_integer(const EvenPerturbation& f, int k);

/// f^ at any xi, by the same overlap formula.
double hat(const EvenPerturbation& f, double xi);

struct HatSamples {
    std::vector<double> values;  // f^(k - 1/2), k = 1..K
    int K = 0;
};

HatSamples sample_half_integers(const EvenPerturbation& f, int K);

struct Reconstruction {
    double value = 0.0;
    double trunc_estimate = 0.0;
};

/// sum over nodes +-(k - 1/2), k <= K, of f^(node) sinc(xi - node).
Reconstruction shannon_reconstruct(const HatSamples& s, double xi);

/// max{ sup_n (2n+1/2) f^(2n+1/2), -inf_n (2n+3/2) f^(2n+3/2) } over n <= k_max,
/// together with the common limit sum_m c_m (-1)^m / pi of both branches.
double max_hat(const EvenPerturbation& f, int k_max);

/// (alpha+1)/(alpha pi) int (1 - |2x|^alpha) f(x) dx.
double lemma_rhs(const EvenPerturbation& f, double alpha);

struct StabilityResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

StabilityResult stability_verify(const EvenPerturbation& f, double alpha, int k_max = 1000);

struct SumIdentities {
    double alpha = 0.0;
    int K = 0;
    int K_alt = 0;                  // terms in the alternating sum
    double zeta4_partial = 0.0;
    double zeta4_tail = 0.0;        // int_{K+1/2}^inf (2x-1)^-4 dx
    double zeta4_target = 0.0;
    double alt_sum_partial = 0.0;   // 4 sum a_k (-1)^(k+1) / (2k-1)
    double alt_sum_tail = 0.0;      // fitted power-law tail plus quadrature noise
    double alt_sum_target = 0.0;
};

/// The alternating sum uses K_alt = min(K, alt_cap) quadrature coefficients.
SumIdentities sum_identities(double alpha, int K, unsigned threads = 0, int alt_cap = 1000);

nlohmann::json to_json(const EvenPerturbation& f);
EvenPerturbation perturbation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StabilityResult& r);
nlohmann::json to_json(const SumIdentities& s);

}  // namespace smoothavg

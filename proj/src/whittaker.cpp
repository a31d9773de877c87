#include "smoothavg/whittaker.hpp"

#include <cmath>
#include <numbers>

#include "smoothavg/errors.hpp"
#include "smoothavg/hypergeom.hpp"
#include "smoothavg/parallel.hpp"
#include "smoothavg/quadrature.hpp"
#include "smoothavg/spectral.hpp"

namespace smoothavg {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) { return x == 0.0 ? 1.0 : sin_pi(x) / (kPi * x); }

double parity(long n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double EvenPerturbation::operator()(double x) const {
    if (std::abs(x) > 0.5) return 0.0;
    double s = 0.0;
    for (std::size_t m = 0; m < coeffs.size(); ++m) s += coeffs[m] * cos_pi(2.0 * static_cast<double>(m) * x);
    return s;
}

EvenPerturbation random_perturbation(int M, std::mt19937_64& rng) {
    if (M < 0) throw PreconditionError("random_perturbation: M must be >= 0");
    std::normal_distribution<double> gauss(0.0, 1.0);
    EvenPerturbation f;
    f.coeffs.resize(static_cast<std::size_t>(M) + 1);
    double norm = 0.0;
    for (double& c : f.coeffs) {
        c = gauss(rng);
        norm += c * c;
    }
    norm = std::sqrt(norm);
    for (double& c : f.coeffs) c /= norm;
    return f;
}

double hat_half_integer(const EvenPerturbation& f, int k) {
    if (k < 1) throw PreconditionError("hat_half_integer: k must be >= 1");
    const double eta = k - 0.5;
    quad::CompensatedSum s;
    for (std::size_t m = 0; m < f.coeffs.size(); ++m) {
        const double md = static_cast<double>(m);
        s.add(f.coeffs[m] * parity(static_cast<long>(m) + k + 1) * eta / (kPi * (eta - md) * (eta + md)));
    }
    return s.value();
}

double hat(const EvenPerturbation& f, double xi) {
    quad::CompensatedSum s;
    for (std::size_t m = 0; m < f.coeffs.size(); ++m) {
        const double md = static_cast<double>(m);
        const double overlap = m == 0 ? sinc(xi) : 0.5 * (sinc(xi - md) + sinc(xi + md));
        s.add(f.coeffs[m] * overlap);
    }
    return s.value();
}

HatSamples sample_half_integers(const EvenPerturbation& f, int K) {
    if (K < 1) throw PreconditionError("sample_half_integers: K must be >= 1");
    HatSamples s;
    s.K = K;
    s.values.resize(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) s.values[static_cast<std::size_t>(k - 1)] = hat_half_integer(f, k);
    return s;
}

Reconstruction shannon_reconstruct(const HatSamples& s, double xi) {
    Reconstruction r;
    if (s.K < 1 || s.values.size() != static_cast<std::size_t>(s.K)) throw PreconditionError("shannon_reconstruct: bad samples");
    quad::CompensatedSum sum;
    double envelope = 0.0;
    for (int k = s.K; k >= 1; --k) {
        const double node = k - 0.5;
        const double v = s.values[static_cast<std::size_t>(k - 1)];
        sum.add(v * sinc(xi - node));
        sum.add(v * sinc(xi + node));
        if (2 * k > s.K) envelope = std::max(envelope, std::abs(v) * node);
    }
    r.value = sum.value();
    // samples ~ C/k against sinc ~ 1/(pi |xi - k|), both sides
    const double gap = static_cast<double>(s.K) - 0.5 - std::abs(xi);
    r.trunc_estimate = gap > 0.5 ? 2.0 * envelope / (kPi * gap) : std::numeric_limits<double>::infinity();
    return r;
}

double max_hat(const EvenPerturbation& f, int k_max) {
    if (k_max < 8) throw PreconditionError("max_hat: k_max must be >= 8");
    double S = 0.0;
    for (std::size_t m = 0; m < f.coeffs.size(); ++m) S += f.coeffs[m] * parity(static_cast<long>(m));
    double best = S / kPi;
    for (int n = 0; n <= k_max; ++n) {
        const double up = 2.0 * n + 0.5, down = 2.0 * n + 1.5;
        best = std::max(best, up * hat_half_integer(f, 2 * n + 1));
        best = std::max(best, -down * hat_half_integer(f, 2 * n + 2));
    }
    return best;
}

double lemma_rhs(const EvenPerturbation& f, double alpha) {
    if (!(alpha > 0.0)) throw PreconditionError("lemma_rhs: alpha must be positive");
    const double freq = std::max<double>(1.0, static_cast<double>(f.coeffs.size()) - 1.0);
    auto g = [&](double x) { return (1.0 - std::pow(2.0 * x, alpha)) * f(x); };
    const double half = quad::integrate_oscillatory(g, 0.0, 0.5, freq).value;
    return (alpha + 1.0) / (alpha * kPi) * 2.0 * half;
}

StabilityResult stability_verify(const EvenPerturbation& f, double alpha, int k_max) {
    StabilityResult r;
    r.lhs = max_hat(f, k_max);
    r.rhs = lemma_rhs(f, alpha);
    r.margin = r.lhs - r.rhs;
    return r;
}

SumIdentities sum_identities(double alpha, int K, unsigned threads, int alt_cap) {
    if (!(alpha > 0.0)) throw PreconditionError("sum_identities: alpha must be positive");
    if (K < 10) throw PreconditionError("sum_identities: K must be >= 10");
    if (alt_cap < 10) throw PreconditionError("sum_identities: alt_cap must be >= 10");
    SumIdentities s;
    s.alpha = alpha;
    s.K = K;

    quad::CompensatedSum z;
    for (int k = K; k >= 1; --k) z.add(std::pow(2.0 * k - 1.0, -4.0));
    s.zeta4_partial = z.value();
    s.zeta4_tail = 1.0 / (6.0 * std::pow(2.0 * K, 3.0));
    s.zeta4_target = std::pow(kPi, 4) / 96.0;

    const int Ka = std::min(K, alt_cap);
    s.K_alt = Ka;
    std::vector<double> terms(static_cast<std::size_t>(Ka));
    for_each_index(terms.size(), threads, [&](std::size_t i) {
        const int k = static_cast<int>(i) + 1;
        terms[i] = 4.0 * a_k_quadrature(alpha, k) * parity(k + 1) / (2.0 * k - 1.0);
    });
    quad::CompensatedSum a;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) a.add(*it);
    s.alt_sum_partial = a.value();
    s.alt_sum_target = alpha * kPi / (alpha + 1.0);

    // |t_k| ~ C k^-p fitted between K/2 and K, tail <= int_K^inf C x^-p dx
    const int k1 = Ka / 2, k2 = Ka;
    const double t1 = std::abs(terms[static_cast<std::size_t>(k1 - 1)]);
    const double t2 = std::abs(terms[static_cast<std::size_t>(k2 - 1)]);
    double tail = 0.0;
    if (t1 > 0.0 && t2 > 0.0) {
        const double p = std::log(t1 / t2) / std::log(static_cast<double>(k2) / k1);
        tail = p > 1.0 ? t2 * Ka / (p - 1.0) : std::numeric_limits<double>::infinity();
    }
    // quadrature noise: absolute 1e-13 per coefficient
    double noise = 0.0;
    for (int k = 1; k <= Ka; ++k) noise += 4e-13 / (2.0 * k - 1.0);
    s.alt_sum_tail = tail + noise;
    return s;
}

nlohmann::json to_json(const EvenPerturbation& f) { return {{"coeffs", f.coeffs}}; }

EvenPerturbation perturbation_from_json(const nlohmann::json& j) {
    EvenPerturbation f;
    if (j.is_array())
        f.coeffs = j.get<std::vector<double>>();
    else if (j.is_object() && j.contains("coeffs"))
        f.coeffs = j.at("coeffs").get<std::vector<double>>();
    else
        throw PreconditionError("perturbation JSON must be an array or an object with \"coeffs\"");
    if (f.coeffs.empty()) throw PreconditionError("perturbation needs at least one coefficient");
    return f;
}

nlohmann::json to_json(const StabilityResult& r) { return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}}; }

nlohmann::json to_json(const SumIdentities& s) {
    return {{"alpha", s.alpha},
            {"K", s.K},
            {"K_alt", s.K_alt},
            {"zeta4", {{"partial", s.zeta4_partial}, {"tail", s.zeta4_tail}, {"corrected", s.zeta4_partial + s.zeta4_tail},
                       {"target", s.zeta4_target}}},
            {"alt_sum", {{"partial", s.alt_sum_partial}, {"tail_estimate", s.alt_sum_tail}, {"target", s.alt_sum_target},
                         {"deviation", std::abs(s.alt_sum_target - s.alt_sum_partial)}}}};
}

}  // namespace smoothavg

#include "smoothavg/functional.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "smoothavg/errors.hpp"
#include "smoothavg/quadrature.hpp"

namespace smoothavg {

namespace {

constexpr double kPi = std::numbers::pi;

void check_exponents(double alpha, double beta) {
    if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive");
    if (!(beta > 0.5)) throw PreconditionError("beta must exceed 1/2");
}

}  // namespace

double compose_J(double sup, double moment_val, double l1_val, double alpha, double beta) {
    return std::pow(sup, alpha) * std::pow(moment_val, beta) / std::pow(l1_val, alpha + beta);
}

UncertaintyReport uncertainty(const KernelSpec& k, double alpha, double beta, std::optional<double> cutoff) {
    check_exponents(alpha, beta);
    validate(k);
    UncertaintyReport r;
    r.alpha = alpha;
    r.beta = beta;
    r.l1_val = l1_norm(k);
    if (!(r.l1_val > 0.0)) throw DomainError("uncertainty: kernel has zero L1 norm");
    r.moment_val = moment(k, alpha);
    r.supnorm = weighted_sup(k, beta, cutoff);
    r.J = compose_J(r.supnorm.value, r.moment_val, r.l1_val, alpha, beta);
    return r;
}

double invariance_audit(const KernelSpec& k, double alpha, double beta, int trials, std::uint64_t seed) {
    if (trials < 1) throw PreconditionError("invariance_audit: trials must be >= 1");
    const double base = uncertainty(k, alpha, beta).J;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logu(std::log(0.1), std::log(10.0));
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const double c = std::exp(logu(rng));
        const double L = std::exp(logu(rng));
        const double J = uncertainty(apply_scale(k, {c, L}), alpha, beta).J;
        worst = std::max(worst, std::abs(J - base) / base);
    }
    return worst;
}

CrossoverResult compare_crossover(const KernelSpec& a, const KernelSpec& b, double alpha_lo, double alpha_hi,
                                  double beta) {
    if (!(alpha_lo > 0.0) || !(alpha_hi > alpha_lo)) throw PreconditionError("compare_crossover: need 0 < alpha_lo < alpha_hi");
    if (!(beta > 0.5)) throw PreconditionError("beta must exceed 1/2");
    validate(a);
    validate(b);
    // sup-norm and mass do not depend on alpha
    const double sup_a = weighted_sup(a, beta).value, sup_b = weighted_sup(b, beta).value;
    const double l1_a = l1_norm(a), l1_b = l1_norm(b);
    if (!(l1_a > 0.0) || !(l1_b > 0.0)) throw DomainError("compare_crossover: kernel has zero L1 norm");
    return compare_crossover([&](double al) { return compose_J(sup_a, moment(a, al), l1_a, al, beta); },
                             [&](double al) { return compose_J(sup_b, moment(b, al), l1_b, al, beta); }, alpha_lo,
                             alpha_hi);
}

CrossoverResult compare_crossover(const std::function<double(double)>& J_a, const std::function<double(double)>& J_b,
                                  double alpha_lo, double alpha_hi) {
    if (!(alpha_hi > alpha_lo)) throw PreconditionError("compare_crossover: need alpha_lo < alpha_hi");
    CrossoverResult out;
    constexpr int kScan = 64;
    double prev_alpha = 0.0, prev_g = 0.0;
    bool have_prev = false;
    for (int i = 0; i < kScan; ++i) {
        const double al = alpha_lo + (alpha_hi - alpha_lo) * i / (kScan - 1);
        const double ja = J_a(al), jb = J_b(al);
        out.sweep.push_back({al, ja, jb});
        const double gv = ja - jb;
        if (gv == 0.0) continue;
        if (have_prev && (gv > 0.0) != (prev_g > 0.0)) out.brackets.emplace_back(prev_alpha, al);
        prev_alpha = al;
        prev_g = gv;
        have_prev = true;
    }
    if (out.brackets.size() > 1) {
        std::ostringstream os;
        os << "compare_crossover: " << out.brackets.size() << " sign changes in brackets";
        for (const auto& [lo, hi] : out.brackets) os << " [" << lo << ", " << hi << "]";
        throw PreconditionError(os.str());
    }
    if (out.brackets.empty()) return out;

    auto [lo, hi] = out.brackets.front();
    const bool lo_positive = J_a(lo) - J_b(lo) > 0.0;
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        const double gm = J_a(mid) - J_b(mid);
        if (gm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((gm > 0.0) == lo_positive)
            lo = mid;
        else
            hi = mid;
    }
    out.alpha_star = 0.5 * (lo + hi);
    return out;
}

SmoothingResult smoothing_bound(const KernelSpec& k, std::span<const double> signal, double h) {
    if (signal.empty()) throw DomainError("smoothing_bound: empty signal");
    if (!(h > 0.0)) throw PreconditionError("smoothing_bound: spacing must be positive");
    if (h > k.dilation / 64.0) throw PreconditionError("smoothing_bound: spacing does not resolve the kernel (need h <= dilation/64)");
    validate(k);

    const double R = k.compact() ? k.support_radius : 8.0 * k.dilation;
    const auto J = static_cast<long>(std::floor(R / h + 1e-9));
    std::vector<double> taps(2 * J + 1);
    for (long j = -J; j <= J; ++j) {
        double w = h * evaluate(k, static_cast<double>(j) * h);
        if (k.compact() && std::abs(std::abs(static_cast<double>(j) * h) - R) <= 1e-9 * h) w *= 0.5;
        taps[j + J] = w;
    }

    const std::size_t n = signal.size();
    const std::size_t len = n + taps.size() - 1;
    std::vector<double> conv(len, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double fi = signal[i];
        if (fi == 0.0) continue;
        for (std::size_t t = 0; t < taps.size(); ++t) conv[i + t] += taps[t] * fi;
    }

    // central differences over the zero-padded sequence, one extra sample each side
    quad::CompensatedSum d2;
    for (long i = -1; i <= static_cast<long>(len); ++i) {
        const double right = (i + 1 < static_cast<long>(len) && i + 1 >= 0) ? conv[i + 1] : 0.0;
        const double left = (i - 1 >= 0 && i - 1 < static_cast<long>(len)) ? conv[i - 1] : 0.0;
        const double d = (right - left) / (2.0 * h);
        d2.add(d * d);
    }
    quad::CompensatedSum f2;
    for (double v : signal) f2.add(v * v);

    SmoothingResult r;
    r.signal_norm = std::sqrt(h * f2.value());
    if (!(r.signal_norm > 0.0)) throw DomainError("smoothing_bound: signal has zero energy");
    r.lhs = std::sqrt(h * d2.value());
    r.supnorm = weighted_sup(k, 1.0);
    r.rhs = 2.0 * kPi * r.supnorm.value * r.signal_norm;
    r.ratio = r.lhs / r.rhs;
    return r;
}

std::vector<double> concentrated_signal(double xi0, double h, std::size_t n) {
    if (n < 2) throw PreconditionError("concentrated_signal: need at least two samples");
    std::vector<double> f(n);
    const double centre = 0.5 * static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1)));
        f[i] = w * std::cos(2.0 * kPi * xi0 * (static_cast<double>(i) - centre) * h);
    }
    return f;
}

nlohmann::json to_json(const UncertaintyReport& r) {
    return {{"alpha", r.alpha}, {"beta", r.beta},       {"supnorm", to_json(r.supnorm)},
            {"moment", r.moment_val}, {"l1", r.l1_val}, {"J", r.J}};
}

nlohmann::json to_json(const SmoothingResult& r) {
    return {{"lhs", r.lhs},
            {"rhs", r.rhs},
            {"ratio", r.ratio},
            {"signal_norm", r.signal_norm},
            {"supnorm", to_json(r.supnorm)}};
}

}  // namespace smoothavg

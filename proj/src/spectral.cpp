#include "smoothavg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "smoothavg/errors.hpp"
#include "smoothavg/quadrature.hpp"

namespace smoothavg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;
constexpr double kCertifyTol = 1e-10;

const quad::Options kQuad{1e-12, 40};

KernelSpec base_of(const KernelSpec& k) {
    KernelSpec b = k;
    b.amplitude = 1.0;
    b.dilation = 1.0;
    b.support_radius = k.compact() ? 0.5 : kInf;
    return b;
}

double sinc(double t) {
    if (std::abs(t) < 1e-4) {
        const double z = kPi * t;
        return 1.0 - z * z / 6.0 + z * z * z * z / 120.0;
    }
    return sin_pi(t) / (kPi * t);
}

// (2 sin z - 2 z cos z) / z^3 with z = pi eta
double power2_fourier(double eta) {
    const double z = kPi * std::abs(eta);
    if (z < 1.0) {
        // sum_n (-1)^n z^{2n} / (2n)! * 2 / ((2n+1)(2n+3))
        double term = 1.0;
        double s = 0.0;
        for (int n = 0; n < 30; ++n) {
            if (n > 0) term *= -z * z / ((2.0 * n - 1.0) * (2.0 * n));
            s += term * 2.0 / ((2.0 * n + 1.0) * (2.0 * n + 3.0));
        }
        return s;
    }
    const double e = std::abs(eta);
    return (2.0 * sin_pi(e) - 2.0 * z * cos_pi(e)) / (z * z * z);
}

double cosine_fourier(std::span<const double> c, double eta) {
    const double s = sin_pi(eta);
    double total = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        if (c[m] == 0.0) continue;
        const double md = static_cast<double>(m);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        auto shifted = [&](double t) {
            // sinc(t) where sin(pi t) = (-1)^m sin(pi eta)
            if (std::abs(t) < 0.5) return sinc(t);
            return sign * s / (kPi * t);
        };
        total += c[m] * 0.5 * (shifted(eta - md) + shifted(eta + md));
    }
    return total;
}

double sampled_fourier(std::span<const double> v, double eta) {
    static const quad::Rule rule = quad::gauss_legendre(4);
    const std::size_t n = v.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    const double w = 2.0 * kPi * eta;
    quad::CompensatedSum total;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double a = -0.5 + static_cast<double>(i) * h;
        double b = a + h;
        if (b <= 0.0) continue;
        a = std::max(a, 0.0);
        const double ya = -0.5 + static_cast<double>(i) * h;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double y = mid + half * rule.nodes[q];
            const double val = v[i] + (v[i + 1] - v[i]) * (y - ya) / h;
            s += rule.weights[q] * val * std::cos(w * y);
        }
        total.add(s * half);
    }
    return 2.0 * total.value();
}

double power_fourier_quadrature(double p, double eta) {
    auto f = [&](double y) { return (1.0 - std::pow(2.0 * y, p)) * cos_pi(2.0 * eta * y); };
    // y = s^2 on the first panel tames the y^p endpoint singularity
    const double b1 = std::min(0.5, 1.0 / (8.0 * std::max(eta, 1.0)));
    auto g = [&](double s) { return 2.0 * s * f(s * s); };
    const double first = quad::integrate(g, 0.0, std::sqrt(b1), kQuad).value;
    if (b1 >= 0.5) return 2.0 * first;
    return 2.0 * (first + quad::integrate_oscillatory(f, b1, 0.5, eta, kQuad).value);
}

// jump of the base shape at y = 1/2
double base_boundary(const KernelSpec& base) { return boundary_value(base); }

std::optional<double> min_opt(std::optional<double> a, std::optional<double> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

// Integration-by-parts envelopes |u^(eta)| <= V/(2 pi eta) and V'/(4 pi^2 eta^2),
// turned into bounds on sup_{eta >= X} eta^beta |u^|.
std::optional<double> variation_tail(const KernelSpec& base, double beta, double X) {
    std::optional<double> out;
    if (beta <= 1.0) out = std::pow(X, beta - 1.0) * total_variation(base) / (2.0 * kPi);
    const double dv = derivative_variation(base);
    if (dv >= 0.0 && beta <= 2.0) out = min_opt(out, std::pow(X, beta - 2.0) * dv / (4.0 * kPi * kPi));
    return out;
}

// For b = sum c_m cos(2 pi m y) on [-1/2, 1/2]:
//   eta u^(eta) = sin(pi eta) / pi * G(eta),  G = S + sum_m d_m / (eta^2 - m^2),
//   S = sum c_m (-1)^m, d_m = c_m (-1)^m m^2.
// With t = 1/eta^2, G = S + D1 t + R(t), |R| <= t^2 sum |d_m| m^2 / (1 - M^2 t).
std::optional<double> cosine_tail(const KernelSpec& base, double beta, double X) {
    const auto& c = base.params;
    const double M = static_cast<double>(c.size() - 1);
    if (X * X < 2.0 * M * M || X <= 0.0) return variation_tail(base, beta, X);
    double S = 0.0, D1 = 0.0, Dabs = 0.0, D2 = 0.0, scale = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        const double m2 = static_cast<double>(m * m);
        S += sign * c[m];
        D1 += sign * c[m] * m2;
        Dabs += std::abs(c[m]) * m2;
        D2 += std::abs(c[m]) * m2 * m2;
        scale += std::abs(c[m]);
    }
    const double t = 1.0 / (X * X);
    const double shrink = 1.0 - M * M * t;
    if (std::abs(S) > 1e-14 * scale) {
        if (beta > 1.0) return std::nullopt;
        const double supG = std::max(std::abs(S), std::abs(S + D1 * t)) + t * t * D2 / shrink;
        return std::pow(X, beta - 1.0) * supG / kPi;
    }
    if (beta > 3.0) return std::nullopt;
    return std::pow(X, beta - 3.0) * Dabs / shrink / kPi;
}

std::optional<double> base_tail(const KernelSpec& base, double beta, double X) {
    switch (base.family) {
        case Family::gaussian: {
            const double peak = std::sqrt(beta / (2.0 * kPi));
            if (X >= peak) return std::pow(X, beta) * std::exp(-kPi * X * X);
            return std::pow(peak, beta) * std::exp(-kPi * peak * peak);
        }
        case Family::characteristic:
            if (beta > 1.0) return std::nullopt;
            return std::pow(X, beta - 1.0) / kPi;
        case Family::power:
        case Family::sampled: return variation_tail(base, beta, X);
        case Family::cosine_series: return cosine_tail(base, beta, X);
    }
    return std::nullopt;
}

// lim sup_{eta -> inf} eta^beta |u^(eta)| in base units (beta == 1 with a boundary jump)
double base_asymptote(const KernelSpec& base, double beta) {
    if (beta != 1.0) return 0.0;
    if (base.family == Family::gaussian || base.family == Family::power) return 0.0;
    return std::abs(base_boundary(base)) / kPi;
}

template <class G>
double golden_max(G&& g, double a, double b, double rel_tol, double& arg) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < 200; ++it) {
        if (b - a <= rel_tol * std::max(std::abs(0.5 * (a + b)), 1e-300)) break;
        if (gc >= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    if (gc >= gd) {
        arg = c;
        return gc;
    }
    arg = d;
    return gd;
}

}  // namespace

std::string status_name(SupStatus s) {
    switch (s) {
        case SupStatus::certified: return "CERTIFIED";
        case SupStatus::uncertified: return "UNCERTIFIED";
        case SupStatus::unbounded_risk: return "UNBOUNDED-RISK";
    }
    return "UNKNOWN";
}

namespace {

// x = n/2 + t with |t| <= 1/4; returns n modulo 4
int reduce_half(double x, double& t) {
    const double r = std::fmod(x, 2.0);
    const double n = std::nearbyint(2.0 * r);
    t = r - 0.5 * n;
    return (static_cast<int>(n) % 4 + 4) % 4;
}

}  // namespace

double sin_pi(double x) {
    double t = 0.0;
    switch (reduce_half(x, t)) {
        case 0: return std::sin(kPi * t);
        case 1: return std::cos(kPi * t);
        case 2: return -std::sin(kPi * t);
        default: return -std::cos(kPi * t);
    }
}

double cos_pi(double x) {
    double t = 0.0;
    switch (reduce_half(x, t)) {
        case 0: return std::cos(kPi * t);
        case 1: return -std::sin(kPi * t);
        case 2: return -std::cos(kPi * t);
        default: return std::sin(kPi * t);
    }
}

double base_fourier(const KernelSpec& k, double eta) {
    eta = std::abs(eta);
    switch (k.family) {
        case Family::characteristic: return sinc(eta);
        case Family::gaussian: return std::exp(-kPi * eta * eta);
        case Family::power:
            if (k.params[0] == 2.0) return power2_fourier(eta);
            return power_fourier_quadrature(k.params[0], eta);
        case Family::cosine_series: return cosine_fourier(k.params, eta);
        case Family::sampled: return sampled_fourier(k.params, eta);
    }
    return 0.0;
}

double fourier(const KernelSpec& k, double xi) {
    return k.amplitude * k.dilation * base_fourier(k, k.dilation * xi);
}

double default_cutoff(const KernelSpec& k, double beta) {
    return std::max(50.0, 20.0 / beta) / k.dilation;
}

std::optional<double> tail_bound(const KernelSpec& k, double beta, double cutoff) {
    const KernelSpec base = base_of(k);
    const auto b = base_tail(base, beta, k.dilation * cutoff);
    if (!b) return std::nullopt;
    return k.amplitude * std::pow(k.dilation, 1.0 - beta) * *b;
}

SupNormResult weighted_sup(const KernelSpec& k, double beta, std::optional<double> cutoff, const SupOptions& opt) {
    if (!(beta > 0.5)) throw PreconditionError("weighted_sup: beta must exceed 1/2");
    double X = cutoff ? *cutoff : default_cutoff(k, beta);
    if (!(X > 0.0) || !std::isfinite(X)) throw PreconditionError("weighted_sup: cutoff must be positive and finite");

    const double step = 1.0 / (opt.points_per_unit * k.dilation);
    auto g = [&](double xi) { return std::pow(xi, beta) * std::abs(fourier(k, xi)); };

    std::vector<double> vals;
    SupNormResult r;
    r.beta = beta;
    bool have_best = false;

    auto consider = [&](double value, double arg) {
        if (!have_best || value > r.value * (1.0 + kTieTol)) {
            r.value = value;
            r.argmax_xi = arg;
            have_best = true;
        }
    };

    // refine the local maximum at grid index i (neighbours clipped to the grid)
    auto refine = [&](std::size_t i, std::size_t last) {
        const double lo = static_cast<double>(i == 0 ? 0 : i - 1) * step;
        const double hi = static_cast<double>(std::min(i + 1, last)) * step;
        double arg = static_cast<double>(i) * step;
        double best = vals[i];
        double garg = arg;
        const double gv = golden_max(g, lo, hi, opt.refine_rel_tol, garg);
        if (gv > best) {
            best = gv;
            arg = garg;
        }
        consider(best, arg);
    };

    std::size_t scanned_to = 0;  // last index whose local-max status is settled
    auto scan_to = [&](double upper) {
        const auto last = static_cast<std::size_t>(std::ceil(upper / step - 1e-9));
        const std::size_t first = vals.size();
        vals.resize(last + 1);
        for (std::size_t i = first; i <= last; ++i) vals[i] = g(static_cast<double>(i) * step);
        // interior maxima, then the right end as a one-sided candidate
        for (std::size_t i = std::max<std::size_t>(scanned_to, 1); i < last; ++i)
            if (vals[i] > 0.0 && vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]) refine(i, last);
        scanned_to = last;
        return last;
    };

    std::size_t last = scan_to(X);
    auto close_out = [&]() {
        // right boundary counts as a local max of the scanned window
        if (last >= 1 && vals[last] >= vals[last - 1]) {
            double arg = static_cast<double>(last) * step;
            double v = vals[last];
            double garg = arg;
            const double gv = golden_max(g, static_cast<double>(last - 1) * step, arg, opt.refine_rel_tol, garg);
            if (gv > v) {
                v = gv;
                arg = garg;
            }
            consider(v, arg);
        }
    };

    const KernelSpec base = base_of(k);
    auto evaluate_tail = [&]() -> std::optional<double> { return tail_bound(k, beta, X); };

    for (int ext = 0;; ++ext) {
        SupNormResult saved = r;
        bool saved_have = have_best;
        close_out();
        const double asym = k.amplitude * std::pow(k.dilation, 1.0 - beta) * base_asymptote(base, beta);
        r.asymptotic = false;
        if (asym > r.value * (1.0 + kTieTol)) {
            r.value = asym;
            r.argmax_xi = X;
            r.asymptotic = true;
        }
        const auto tail = evaluate_tail();
        r.search_cutoff = X;
        r.grid_points = static_cast<long long>(vals.size());
        if (!tail) {
            r.tail_bound = kInf;
            r.status = SupStatus::unbounded_risk;
            break;
        }
        r.tail_bound = *tail;
        r.status = (*tail <= r.value * (1.0 + kCertifyTol)) ? SupStatus::certified : SupStatus::uncertified;
        if (r.certified() || ext >= opt.max_extensions) break;
        const auto next_tail = tail_bound(k, beta, 2.0 * X);
        if (!next_tail || *next_tail >= 0.999 * *tail) break;
        // undo the boundary candidate: the old right end becomes interior
        r = saved;
        have_best = saved_have;
        X *= 2.0;
        last = scan_to(X);
    }
    return r;
}

nlohmann::json to_json(const SupNormResult& r) {
    nlohmann::json j;
    j["beta"] = r.beta;
    j["value"] = r.value;
    j["argmax_xi"] = r.argmax_xi;
    j["search_cutoff"] = r.search_cutoff;
    if (std::isfinite(r.tail_bound))
        j["tail_bound"] = r.tail_bound;
    else
        j["tail_bound"] = nullptr;
    j["grid_points"] = r.grid_points;
    j["status"] = status_name(r.status);
    j["asymptotic"] = r.asymptotic;
    return j;
}

PlancherelPair plancherel_check(const KernelSpec& f, const KernelSpec& g, double cutoff) {
    if (!f.compact() || !g.compact()) throw PreconditionError("plancherel_check: kernels must have finite support");
    if (!(cutoff > 0.0)) throw PreconditionError("plancherel_check: cutoff must be positive");
    PlancherelPair out;

    std::vector<double> br{0.0, std::min(f.support_radius, g.support_radius)};
    auto prod = [&](double x) { return evaluate(f, x) * evaluate(g, x); };
    out.real_space = 2.0 * quad::integrate_panels(prod, std::span<const double>(br), kQuad).value;

    auto spec = [&](double xi) { return fourier(f, xi) * fourier(g, xi); };
    const double freq = f.support_radius + g.support_radius;
    out.spectral = 2.0 * quad::integrate_oscillatory(spec, 0.0, cutoff, freq, kQuad).value;

    // envelopes c xi^-p for each factor; pick the tighter one at the cutoff
    auto envelope = [&](const KernelSpec& k) {
        double c = total_variation(k) / (2.0 * kPi);
        double p = 1.0;
        const double dv = derivative_variation(k);
        if (dv >= 0.0) {
            const double c2 = dv / (4.0 * kPi * kPi);
            if (c2 / (cutoff * cutoff) < c / cutoff) {
                c = c2;
                p = 2.0;
            }
        }
        return std::pair{c, p};
    };
    const auto [cf, pf] = envelope(f);
    const auto [cg, pg] = envelope(g);
    out.tail_bound = 2.0 * cf * cg * std::pow(cutoff, 1.0 - pf - pg) / (pf + pg - 1.0);
    return out;
}

}  // namespace smoothavg

#include "smoothavg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "smoothavg/errors.hpp"
#include "smoothavg/quadrature.hpp"

namespace smoothavg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kNonnegGrid = 4096;
constexpr int kVariationGrid = 1 << 14;
constexpr int kRootGrid = 4096;

const quad::Options kQuad{1e-12, 40};

double cosine_base(std::span<const double> c, double y) {
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) s += c[m] * std::cos(2.0 * kPi * static_cast<double>(m) * y);
    return s;
}

double cosine_base_derivative(std::span<const double> c, double y) {
    double s = 0.0;
    for (std::size_t m = 1; m < c.size(); ++m) {
        const double w = 2.0 * kPi * static_cast<double>(m);
        s -= c[m] * w * std::sin(w * y);
    }
    return s;
}

double sampled_base(std::span<const double> v, double y) {
    const std::size_t n = v.size();
    const double t = (y + 0.5) * static_cast<double>(n - 1);
    if (t <= 0.0) return v.front();
    if (t >= static_cast<double>(n - 1)) return v.back();
    const auto i = static_cast<std::size_t>(t);
    const double frac = t - static_cast<double>(i);
    if (i + 1 >= n) return v.back();
    return v[i] + frac * (v[i + 1] - v[i]);
}

double sampled_node(std::size_t i, std::size_t n) {
    return -0.5 + static_cast<double>(i) / static_cast<double>(n - 1);
}

// Break points on [0, 1/2] such that b keeps one sign on every panel.
std::vector<double> half_line_breaks(const KernelSpec& k) {
    std::vector<double> br{0.0};
    auto add_root = [&](double lo, double hi, auto&& f) {
        double flo = f(lo);
        for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        br.push_back(0.5 * (lo + hi));
    };
    if (k.family == Family::cosine_series) {
        auto f = [&](double y) { return cosine_base(k.params, y); };
        double prev = f(0.0);
        for (int i = 1; i <= kRootGrid; ++i) {
            const double y = 0.5 * i / kRootGrid;
            const double cur = f(y);
            if ((prev < 0 && cur > 0) || (prev > 0 && cur < 0)) add_root(0.5 * (i - 1) / kRootGrid, y, f);
            prev = cur;
        }
    } else if (k.family == Family::sampled) {
        const auto& v = k.params;
        const std::size_t n = v.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double y0 = sampled_node(i, n), y1 = sampled_node(i + 1, n);
            if (y1 <= 0.0) continue;
            const double a = std::max(y0, 0.0);
            if (a > br.back()) br.push_back(a);
            const double v0 = v[i], v1 = v[i + 1];
            if ((v0 < 0 && v1 > 0) || (v0 > 0 && v1 < 0)) {
                const double r = y0 + (y1 - y0) * v0 / (v0 - v1);
                if (r > br.back() && r < y1) br.push_back(r);
            }
        }
    }
    if (br.back() < 0.5) br.push_back(0.5);
    return br;
}

// 2 * int_0^{1/2} y^alpha * g(b(y)) dy for the compact families.
template <class G>
double half_line_integral(const KernelSpec& k, double alpha, G&& g) {
    const std::vector<double> br = half_line_breaks(k);
    auto integrand = [&](double y) {
        const double w = alpha == 0.0 ? 1.0 : std::pow(y, alpha);
        return w * g(base_value(k, y));
    };
    if (alpha == std::floor(alpha)) return 2.0 * quad::integrate_panels(integrand, std::span<const double>(br), kQuad).value;
    // y = s^2 on the first panel tames the y^alpha endpoint singularity
    auto substituted = [&](double s) { return 2.0 * s * integrand(s * s); };
    const double first = quad::integrate(substituted, 0.0, std::sqrt(br[1]), kQuad).value;
    const double rest = quad::integrate_panels(integrand, std::span<const double>(br).subspan(1), kQuad).value;
    return 2.0 * (first + rest);
}

// Exact integral of |piecewise-linear interpolant| over [-1/2, 1/2].
double sampled_abs_integral(std::span<const double> v) {
    const std::size_t n = v.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    quad::CompensatedSum s;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = v[i], b = v[i + 1];
        if ((a >= 0 && b >= 0) || (a <= 0 && b <= 0)) {
            s.add(0.5 * h * std::abs(a + b));
        } else {
            s.add(0.5 * h * (a * a + b * b) / (std::abs(a) + std::abs(b)));
        }
    }
    return s.value();
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::characteristic: return "characteristic";
        case Family::gaussian: return "gaussian";
        case Family::power: return "power";
        case Family::cosine_series: return "cosine_series";
        case Family::sampled: return "sampled";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    if (name == "characteristic" || name == "box") return Family::characteristic;
    if (name == "gaussian") return Family::gaussian;
    if (name == "power") return Family::power;
    if (name == "cosine_series" || name == "cosine") return Family::cosine_series;
    if (name == "sampled") return Family::sampled;
    throw PreconditionError("unknown kernel family '" + name + "'");
}

KernelSpec characteristic() { return {Family::characteristic, {}, 0.5, true, 1.0, 1.0}; }

KernelSpec gaussian() { return {Family::gaussian, {}, kInf, true, 1.0, 1.0}; }

KernelSpec power(double p) {
    KernelSpec k{Family::power, {p}, 0.5, true, 1.0, 1.0};
    validate(k);
    return k;
}

KernelSpec cosine_series(std::vector<double> coeffs, bool nonnegative) {
    KernelSpec k{Family::cosine_series, std::move(coeffs), 0.5, nonnegative, 1.0, 1.0};
    validate(k);
    return k;
}

KernelSpec sampled(std::vector<double> values) {
    KernelSpec k{Family::sampled, std::move(values), 0.5, false, 1.0, 1.0};
    validate(k);
    return k;
}

void validate(const KernelSpec& k) {
    auto fail = [](const std::string& msg) { throw PreconditionError("invalid kernel: " + msg); };
    if (!(k.dilation > 0.0) || !std::isfinite(k.dilation)) fail("dilation must be positive and finite");
    if (!(k.amplitude > 0.0) || !std::isfinite(k.amplitude)) fail("amplitude must be positive and finite");
    for (double p : k.params)
        if (!std::isfinite(p)) fail("non-finite parameter");
    switch (k.family) {
        case Family::characteristic:
        case Family::gaussian:
            if (!k.params.empty()) fail(family_name(k.family) + " takes no params");
            break;
        case Family::power:
            if (k.params.size() != 1 || !(k.params[0] > 0.0)) fail("power needs one positive exponent");
            break;
        case Family::cosine_series:
            if (k.params.empty()) fail("cosine_series needs at least one coefficient");
            break;
        case Family::sampled: {
            const auto& v = k.params;
            if (v.size() < 2) fail("sampled needs at least two values");
            double scale = 0.0;
            for (double x : v) scale = std::max(scale, std::abs(x));
            for (std::size_t i = 0; i < v.size() / 2; ++i)
                if (std::abs(v[i] - v[v.size() - 1 - i]) > 1e-12 * scale) fail("sampled values must be symmetric");
            break;
        }
    }
    if (k.compact()) {
        if (std::abs(k.support_radius - 0.5 * k.dilation) > 1e-12 * k.dilation)
            fail("support_radius must equal dilation / 2");
    } else if (!std::isinf(k.support_radius)) {
        fail("gaussian support_radius must be infinite");
    }
    if (k.nonnegative && k.compact()) {
        for (int i = 0; i <= kNonnegGrid; ++i) {
            const double y = 0.5 * i / kNonnegGrid;
            if (base_value(k, y) < -1e-14) {
                std::ostringstream os;
                os << "flagged nonnegative but u(" << y * k.dilation << ") < 0";
                fail(os.str());
            }
        }
    }
}

double base_value(const KernelSpec& k, double y) {
    y = std::abs(y);
    if (k.family == Family::gaussian) return std::exp(-kPi * y * y);
    if (y > 0.5) return 0.0;
    switch (k.family) {
        case Family::characteristic: return 1.0;
        case Family::power: return 1.0 - std::pow(2.0 * y, k.params[0]);
        case Family::cosine_series: return cosine_base(k.params, y);
        case Family::sampled: return sampled_base(k.params, y);
        case Family::gaussian: break;
    }
    return 0.0;
}

double evaluate(const KernelSpec& k, double x) { return k.amplitude * base_value(k, x / k.dilation); }

double l1_norm(const KernelSpec& k) {
    double base = 0.0;
    switch (k.family) {
        case Family::characteristic:
        case Family::gaussian: base = 1.0; break;
        case Family::power: base = k.params[0] / (k.params[0] + 1.0); break;
        case Family::cosine_series: base = half_line_integral(k, 0.0, [](double b) { return std::abs(b); }); break;
        case Family::sampled: base = sampled_abs_integral(k.params); break;
    }
    return k.amplitude * k.dilation * base;
}

double moment(const KernelSpec& k, double alpha) {
    if (!(alpha > 0.0)) throw PreconditionError("moment: alpha must be positive");
    double base = 0.0;
    switch (k.family) {
        case Family::characteristic: base = std::pow(2.0, -alpha) / (alpha + 1.0); break;
        case Family::gaussian:
            base = std::tgamma(0.5 * (alpha + 1.0)) / std::pow(kPi, 0.5 * (alpha + 1.0));
            break;
        case Family::power: {
            const double p = k.params[0];
            base = std::pow(2.0, -alpha) * (1.0 / (alpha + 1.0) - 1.0 / (alpha + p + 1.0));
            break;
        }
        case Family::cosine_series:
        case Family::sampled: base = half_line_integral(k, alpha, [](double b) { return std::abs(b); }); break;
    }
    return k.amplitude * std::pow(k.dilation, alpha + 1.0) * base;
}

KernelSpec apply_scale(const KernelSpec& k, const ScaleTransform& t) {
    if (!(t.amplitude > 0.0) || !(t.dilation > 0.0))
        throw PreconditionError("apply_scale: amplitude and dilation must be positive");
    KernelSpec out = k;
    out.amplitude *= t.amplitude;
    out.dilation *= t.dilation;
    out.support_radius = k.compact() ? 0.5 * out.dilation : kInf;
    return out;
}

KernelSpec to_sampled(const KernelSpec& k, std::size_t n) {
    if (!k.compact()) throw PreconditionError("to_sampled: kernel has unbounded support");
    if (n < 2) throw PreconditionError("to_sampled: need at least two nodes");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = base_value(k, sampled_node(i, n));
    // mirror to make the samples exactly symmetric
    for (std::size_t i = 0; i < n / 2; ++i) v[n - 1 - i] = v[i];
    KernelSpec out{Family::sampled, std::move(v), k.support_radius, false, k.amplitude, k.dilation};
    return out;
}

double total_variation(const KernelSpec& k) {
    double base = 0.0;
    switch (k.family) {
        case Family::characteristic:
        case Family::gaussian:
        case Family::power: base = 2.0; break;
        case Family::cosine_series: {
            double prev = cosine_base(k.params, -0.5);
            base = std::abs(prev);
            for (int i = 1; i <= kVariationGrid; ++i) {
                const double cur = cosine_base(k.params, -0.5 + static_cast<double>(i) / kVariationGrid);
                base += std::abs(cur - prev);
                prev = cur;
            }
            base += std::abs(prev);
            break;
        }
        case Family::sampled: {
            const auto& v = k.params;
            base = std::abs(v.front()) + std::abs(v.back());
            for (std::size_t i = 0; i + 1 < v.size(); ++i) base += std::abs(v[i + 1] - v[i]);
            break;
        }
    }
    return k.amplitude * base;
}

double derivative_variation(const KernelSpec& k) {
    double base = -1.0;
    switch (k.family) {
        case Family::characteristic: break;
        case Family::gaussian: base = 4.0 * std::sqrt(2.0 * kPi) * std::exp(-0.5); break;
        case Family::power:
            if (k.params[0] >= 1.0) base = 8.0 * k.params[0];
            break;
        case Family::cosine_series: {
            double scale = 0.0;
            for (double c : k.params) scale += std::abs(c);
            if (std::abs(boundary_value(k)) > 1e-14 * scale * k.amplitude) break;
            // u' vanishes at +-1/2 (sin(pi m) = 0), so only interior variation counts
            base = 0.0;
            double prev = cosine_base_derivative(k.params, -0.5);
            for (int i = 1; i <= kVariationGrid; ++i) {
                const double cur = cosine_base_derivative(k.params, -0.5 + static_cast<double>(i) / kVariationGrid);
                base += std::abs(cur - prev);
                prev = cur;
            }
            break;
        }
        case Family::sampled: {
            const auto& v = k.params;
            if (v.front() != 0.0 || v.back() != 0.0) break;
            const double h = 1.0 / static_cast<double>(v.size() - 1);
            double prev_slope = (v[1] - v[0]) / h;
            base = std::abs(prev_slope);
            for (std::size_t i = 1; i + 1 < v.size(); ++i) {
                const double s = (v[i + 1] - v[i]) / h;
                base += std::abs(s - prev_slope);
                prev_slope = s;
            }
            base += std::abs(prev_slope);
            break;
        }
    }
    if (base < 0.0) return -1.0;
    return k.amplitude / k.dilation * base;
}

double negativity_mass(const KernelSpec& k) {
    if (k.family != Family::cosine_series && k.family != Family::sampled) return 0.0;
    const double base = half_line_integral(k, 0.0, [](double b) { return std::max(0.0, -b); });
    return k.amplitude * k.dilation * base;
}

double boundary_value(const KernelSpec& k) {
    switch (k.family) {
        case Family::characteristic: return k.amplitude;
        case Family::cosine_series: {
            double s = 0.0;
            for (std::size_t m = 0; m < k.params.size(); ++m) s += (m % 2 == 0 ? 1.0 : -1.0) * k.params[m];
            return k.amplitude * s;
        }
        case Family::sampled: return k.amplitude * k.params.back();
        case Family::gaussian:
        case Family::power: return 0.0;
    }
    return 0.0;
}

nlohmann::json to_json(const KernelSpec& k) {
    nlohmann::json j;
    j["family"] = family_name(k.family);
    j["params"] = k.params;
    if (k.compact())
        j["support_radius"] = k.support_radius;
    else
        j["support_radius"] = "inf";
    j["nonnegative"] = k.nonnegative;
    j["amplitude"] = k.amplitude;
    j["dilation"] = k.dilation;
    return j;
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family")) throw PreconditionError("kernel JSON needs a 'family' field");
    KernelSpec k;
    k.family = family_from_name(j.at("family").get<std::string>());
    if (j.contains("params")) k.params = j.at("params").get<std::vector<double>>();
    k.nonnegative = j.value("nonnegative", false);
    k.amplitude = j.value("amplitude", 1.0);
    const bool has_radius = j.contains("support_radius") && j.at("support_radius").is_number();
    if (j.contains("dilation")) {
        k.dilation = j.at("dilation").get<double>();
    } else if (has_radius && k.compact()) {
        k.dilation = 2.0 * j.at("support_radius").get<double>();
    }
    if (k.compact())
        k.support_radius = has_radius ? j.at("support_radius").get<double>() : 0.5 * k.dilation;
    else
        k.support_radius = kInf;
    validate(k);
    return k;
}

KernelSpec parse_kernel(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                params.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw PreconditionError("bad kernel parameter '" + item + "' in '" + text + "'");
            }
        }
    }
    const Family f = family_from_name(name);
    KernelSpec k;
    switch (f) {
        case Family::characteristic: k = characteristic(); break;
        case Family::gaussian: k = gaussian(); break;
        case Family::power:
            if (params.size() != 1) throw PreconditionError("power kernel needs exactly one exponent, e.g. power:2");
            k = power(params[0]);
            break;
        case Family::cosine_series: k = cosine_series(params); break;
        case Family::sampled: k = sampled(params); break;
    }
    if (!params.empty() && (f == Family::characteristic || f == Family::gaussian))
        throw PreconditionError(name + " takes no parameters");
    return k;
}

}  // namespace smoothavg

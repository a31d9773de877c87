#pragma once

// Adaptive Gauss-Legendre quadrature with interval bisection.
//
// A panel is accepted when the n-point rule on the whole panel and the sum of
// the rules on its two halves agree to the panel's share of the absolute
// tolerance (or to the roundoff floor of the panel).  Panels that still fail at
// max_depth are accepted but poison the result: integrate() then throws a
// NumericalError carrying the achieved error estimate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "smoothavg/errors.hpp"

namespace smoothavg::quad {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes from Newton iteration on P_n.
Rule gauss_legendre(int n);

/// The rule shared by all adaptive routines (10 points).
const Rule& default_rule();

struct Options {
    double abs_tol = 1e-12;
    int max_depth = 40;
};

struct Result {
    double value = 0.0;
    double error = 0.0;      // sum of accepted |whole - halves| estimates
    int depth = 0;           // deepest bisection used
    bool converged = true;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

template <class F>
inline double apply_rule(const Rule& rule, F& f, double a, double b, double& abs_mass) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = rule.weights[i] * f(mid + half * rule.nodes[i]);
        s += v;
        m += std::abs(v);
    }
    abs_mass = m * std::abs(half);
    return s * half;
}

struct Panel {
    double a, b, whole, tol;
    int depth;
};

}  // namespace detail

/// Adaptive integration of f over [a, b] without throwing; inspect Result::converged.
template <class F>
Result integrate_raw(F&& f, double a, double b, const Options& opt = {}) {
    Result res;
    if (a == b) return res;
    const Rule& rule = default_rule();
    constexpr double roundoff = 64.0 * std::numeric_limits<double>::epsilon();

    CompensatedSum total;
    CompensatedSum err;
    std::vector<detail::Panel> stack;
    double mass = 0.0;
    stack.push_back({a, b, detail::apply_rule(rule, f, a, b, mass), opt.abs_tol, 0});
    while (!stack.empty()) {
        const detail::Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        double ml = 0.0, mr = 0.0;
        const double left = detail::apply_rule(rule, f, p.a, mid, ml);
        const double right = detail::apply_rule(rule, f, mid, p.b, mr);
        const double diff = std::abs(p.whole - (left + right));
        res.depth = std::max(res.depth, p.depth);
        if (diff <= p.tol || diff <= roundoff * (ml + mr) || p.depth >= opt.max_depth) {
            if (diff > p.tol && diff > roundoff * (ml + mr)) res.converged = false;
            total.add(left);
            total.add(right);
            err.add(diff);
            continue;
        }
        // right pushed first so the left half is summed first (deterministic order)
        stack.push_back({mid, p.b, right, 0.5 * p.tol, p.depth + 1});
        stack.push_back({p.a, mid, left, 0.5 * p.tol, p.depth + 1});
    }
    res.value = total.value();
    res.error = err.value();
    return res;
}

/// Adaptive integration over consecutive panels [b0,b1], [b1,b2], ...; the
/// tolerance is shared in proportion to panel width.
template <class F>
Result integrate_panels_raw(F&& f, std::span<const double> breaks, const Options& opt = {}) {
    Result res;
    if (breaks.size() < 2) return res;
    const double span = std::abs(breaks.back() - breaks.front());
    CompensatedSum total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Options local = opt;
        local.abs_tol = span > 0 ? opt.abs_tol * std::abs(breaks[i + 1] - breaks[i]) / span : opt.abs_tol;
        const Result r = integrate_raw(f, breaks[i], breaks[i + 1], local);
        total.add(r.value);
        res.error += r.error;
        res.depth = std::max(res.depth, r.depth);
        res.converged = res.converged && r.converged;
    }
    res.value = total.value();
    return res;
}

inline void throw_if_failed(const Result& r, const char* what) {
    if (!r.converged) throw NumericalError(what, r.error);
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    Result r = integrate_raw(f, a, b, opt);
    throw_if_failed(r, "adaptive quadrature did not converge");
    return r;
}

template <class F>
Result integrate_panels(F&& f, std::span<const double> breaks, const Options& opt = {}) {
    Result r = integrate_panels_raw(f, breaks, opt);
    throw_if_failed(r, "adaptive quadrature did not converge");
    return r;
}

/// Break points splitting [a, b] into panels no wider than 1/(8 frequency), i.e.
/// at least eight panels per period of cos(2 pi frequency x).
std::vector<double> oscillatory_breaks(double a, double b, double frequency);

/// Integral of f(x) over [a, b] where f oscillates like cos(2 pi frequency x).
template <class F>
Result integrate_oscillatory(F&& f, double a, double b, double frequency, const Options& opt = {}) {
    const std::vector<double> br = oscillatory_breaks(a, b, frequency);
    return integrate_panels(f, std::span<const double>(br), opt);
}

}  // namespace smoothavg::quad

#include "smoothavg/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "smoothavg/errors.hpp"
#include "smoothavg/functional.hpp"
#include "smoothavg/hypergeom.hpp"
#include "smoothavg/parallel.hpp"
#include "smoothavg/quadrature.hpp"
#include "smoothavg/spectral.hpp"

namespace smoothavg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::vector<double>;

Point lerp(const Point& a, const Point& b, double t) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
}

double diameter(const std::vector<Point>& s) {
    double d = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        for (std::size_t j = 0; j < s[i].size(); ++j) d = std::max(d, std::abs(s[i][j] - s[0][j]));
    return d;
}

bool integer_alpha(double alpha) { return alpha == std::round(alpha) && alpha >= 2.0 && alpha <= 6.0; }

}  // namespace

std::vector<double> project_cosine(const KernelSpec& k, int M) {
    if (M < 0) throw PreconditionError("project_cosine: M must be >= 0");
    if (k.family == Family::cosine_series) {
        std::vector<double> c = k.params;
        c.resize(static_cast<std::size_t>(M) + 1, 0.0);
        return c;
    }
    if (!k.compact()) throw PreconditionError("project_cosine: start kernel must be compactly supported");
    std::vector<double> c(static_cast<std::size_t>(M) + 1);
    for (int m = 0; m <= M; ++m) {
        auto g = [&](double y) { return base_value(k, y) * cos_pi(2.0 * m * y); };
        const double half = quad::integrate_oscillatory(g, 0.0, 0.5, std::max(1, m)).value;
        c[static_cast<std::size_t>(m)] = (m == 0 ? 2.0 : 4.0) * half;
    }
    return c;
}

std::vector<double> random_start(int M, std::uint64_t seed) {
    if (M < 0) throw PreconditionError("random_start: M must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> c(static_cast<std::size_t>(M) + 1, 0.0);
    c[0] = 1.0;
    for (int m = 1; m <= M; ++m) c[static_cast<std::size_t>(m)] = 0.3 / m * gauss(rng);
    return c;
}

double objective(const std::vector<double>& c, const MinimizeOptions& opt) {
    if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; })) return kInf;
    try {
        const KernelSpec k = cosine_series(c);
        const UncertaintyReport r = uncertainty(k, opt.alpha, opt.beta);
        if (!r.certified() || !std::isfinite(r.J)) return kInf;
        double val = r.J;
        if (opt.nonnegative) {
            const double neg = negativity_mass(k) / r.l1_val;
            val += opt.lambda * neg * neg;
        }
        return val;
    } catch (const DomainError&) {
        return kInf;
    } catch (const NumericalError&) {
        return kInf;
    }
}

MinimizeResult minimize(const std::vector<double>& start, const MinimizeOptions& opt) {
    if (opt.M < 0) throw PreconditionError("minimize: M must be >= 0");
    if (opt.max_iter < 0) throw PreconditionError("minimize: max_iter must be >= 0");
    if (!(opt.alpha > 0.0)) throw PreconditionError("minimize: alpha must be positive");
    if (!(opt.beta > 0.5)) throw PreconditionError("minimize: beta must exceed 1/2");
    const std::size_t n = static_cast<std::size_t>(opt.M) + 1;
    Point x0 = start;
    x0.resize(n, 0.0);

    MinimizeResult res;
    auto f = [&](const Point& p) {
        ++res.evaluations;
        return objective(p, opt);
    };
    const double f0 = f(x0);
    if (!std::isfinite(f0)) throw PreconditionError("minimize: start kernel is not evaluable");

    std::mt19937_64 rng(opt.seed);
    std::vector<Point> simplex;
    std::vector<double> fv;
    auto build = [&](const Point& base, double fbase) {
        simplex.assign(1, base);
        fv.assign(1, fbase);
        for (std::size_t i = 0; i < n; ++i) {
            Point p = base;
            const double step = opt.initial_step * std::max(std::abs(base[i]), 0.1);
            p[i] += (rng() & 1u) ? step : -step;
            simplex.push_back(p);
            fv.push_back(f(p));
        }
    };
    build(x0, f0);

    Point best = x0;
    double fbest = f0;
    std::vector<std::size_t> order(n + 1);
    for (int it = 0; it < opt.max_iter; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        {
            std::vector<Point> s2;
            std::vector<double> f2;
            for (std::size_t i : order) {
                s2.push_back(simplex[i]);
                f2.push_back(fv[i]);
            }
            simplex.swap(s2);
            fv.swap(f2);
        }
        if (fv[0] < fbest) {
            fbest = fv[0];
            best = simplex[0];
        }

        const bool flat = std::isfinite(fv[n]) && std::abs(fv[n] - fv[0]) <= 1e-15 * std::abs(fv[0]);
        if (diameter(simplex) < 1e-10 || flat) {
            if (res.restarts >= 1) {
                res.trace.push_back(fbest);
                res.iterations = it + 1;
                break;
            }
            ++res.restarts;
            build(best, fbest);
            res.trace.push_back(fbest);
            continue;
        }

        Point centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
        const Point& worst = simplex[n];

        const Point xr = lerp(centroid, worst, -1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            const Point xe = lerp(centroid, worst, -2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            const Point xc = outside ? lerp(centroid, xr, 0.5) : lerp(centroid, worst, 0.5);
            const double fc = f(xc);
            if (fc < (outside ? fr : fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    simplex[i] = lerp(simplex[0], simplex[i], 0.5);
                    fv[i] = f(simplex[i]);
                }
            }
        }
        for (std::size_t i = 0; i <= n; ++i)
            if (fv[i] < fbest) {
                fbest = fv[i];
                best = simplex[i];
            }
        res.trace.push_back(fbest);
        res.iterations = it + 1;
    }

    res.best_coeffs = best;
    res.best_objective = fbest;
    const KernelSpec k = cosine_series(best);
    const UncertaintyReport r = uncertainty(k, opt.alpha, opt.beta);
    res.best_J = r.J;
    res.negativity = negativity_mass(k) / r.l1_val;
    return res;
}

MinimizeResult minimize(const KernelSpec& start, const MinimizeOptions& opt) {
    return minimize(project_cosine(start, opt.M), opt);
}

std::vector<double> default_eps_grid() { return {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}; }

ProbeReport probe_direction(double alpha, const EvenPerturbation& f, const std::vector<double>& eps_grid) {
    if (eps_grid.empty()) throw PreconditionError("probe: empty eps grid");
    if (eps_grid.front() < 1e-6 || eps_grid.back() > 0.1) throw PreconditionError("probe: eps grid must lie in [1e-6, 0.1]");
    if (!std::is_sorted(eps_grid.begin(), eps_grid.end(), std::less_equal<double>()) ||
        std::adjacent_find(eps_grid.begin(), eps_grid.end()) != eps_grid.end())
        throw PreconditionError("probe: eps grid must be strictly increasing");
    if (f.coeffs.empty()) throw PreconditionError("probe: empty direction");

    ProbeReport r;
    r.alpha = alpha;
    r.direction = f;
    r.eps_grid = eps_grid;
    const UncertaintyReport base = uncertainty(cosine_series({1.0}), alpha, 1.0);
    r.J0 = base.J;
    r.certified = base.certified();
    for (double eps : eps_grid) {
        std::vector<double> c = f.coeffs;
        for (double& v : c) v *= eps;
        c[0] += 1.0;
        const UncertaintyReport u = uncertainty(cosine_series(c), alpha, 1.0);
        r.certified = r.certified && u.certified();
        r.J_values.push_back(u.J);
    }
    r.one_sided_slope = (r.J_values.front() - r.J0) / eps_grid.front();
    r.margin = stability_verify(f, alpha).margin;
    return r;
}

std::vector<ProbeReport> probe_local_min(double alpha, int N, const std::vector<double>& eps_grid, std::uint64_t seed,
                                         int M, unsigned threads) {
    if (N < 1) throw PreconditionError("probe: N must be >= 1");
    if (M < 0) throw PreconditionError("probe: M must be >= 0");
    if (!(alpha > 0.0)) throw PreconditionError("probe: alpha must be positive");
    if (!integer_alpha(alpha)) {
        const SignCertificate c = certify(alpha, 50, threads);
        if (c.verdict != Verdict::pass && c.verdict != Verdict::pass_all_k)
            throw PreconditionError("probe: alpha outside 2..6 must pass the sign certificate first");
    }
    std::mt19937_64 rng(seed);
    std::vector<EvenPerturbation> dirs;
    for (int i = 0; i < N; ++i) dirs.push_back(random_perturbation(M, rng));
    std::vector<ProbeReport> out(dirs.size());
    for_each_index(dirs.size(), threads, [&](std::size_t i) { out[i] = probe_direction(alpha, dirs[i], eps_grid); });
    return out;
}

nlohmann::json to_json(const MinimizeResult& r) {
    return {{"best_coeffs", r.best_coeffs}, {"best_objective", r.best_objective},
            {"best_J", r.best_J},           {"negativity", r.negativity},
            {"iterations", r.iterations},   {"evaluations", r.evaluations},
            {"restarts", r.restarts},       {"trace", r.trace}};
}

nlohmann::json to_json(const ProbeReport& r) {
    return {{"alpha", r.alpha},
            {"direction", r.direction.coeffs},
            {"eps_grid", r.eps_grid},
            {"J_values", r.J_values},
            {"J0", r.J0},
            {"one_sided_slope", r.one_sided_slope},
            {"lemma_margin", r.margin},
            {"certified", r.certified}};
}

}  // namespace smoothavg

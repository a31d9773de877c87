#include "smoothavg/hypergeom.hpp"

#include <mpfr.h>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "smoothavg/errors.hpp"
#include "smoothavg/parallel.hpp"
#include "smoothavg/quadrature.hpp"
#include "smoothavg/spectral.hpp"

namespace smoothavg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxTerms = 100000;

class Mpf {
public:
    explicit Mpf(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
    ~Mpf() { mpfr_clear(v_); }
    Mpf(const Mpf&) = delete;
    Mpf& operator=(const Mpf&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

bool nonpositive_integer(double b) { return b <= 0.0 && b == std::floor(b); }

// natural log of the largest term magnitude, scanned in double precision
double peak_log_term(double a, double b1, double b2, double x) {
    const double lx = std::log(std::abs(x));
    double lt = 0.0, peak = 0.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        if (a + n == 0.0) break;
        const double lr = std::log(std::abs(a + n)) + lx - std::log(std::abs(b1 + n)) - std::log(std::abs(b2 + n)) -
                          std::log(n + 1.0);
        lt += lr;
        peak = std::max(peak, lt);
        if (lr < 0.0 && lt < peak - 60.0) break;
    }
    return peak;
}

template <class SetX>
SeriesValue sum_series(double a, double b1, double b2, double x_approx, SetX&& set_x) {
    if (nonpositive_integer(b1) || nonpositive_integer(b2))
        throw PreconditionError("eval_1F2: lower parameters must not be nonpositive integers");
    if (x_approx == 0.0) return {1.0, 0.0, 1, 53};

    const double peak = peak_log_term(a, b1, b2, x_approx);
    const double digits = std::max(0.0, peak / std::log(10.0)) + 40.0;
    const auto bits = static_cast<mpfr_prec_t>(std::ceil(digits * std::log2(10.0))) + 64;

    Mpf x(bits), sum(bits), term(bits), next(bits), t(bits), den(bits), ratio(bits), thresh(bits);
    set_x(x.get());
    mpfr_set_ui(sum.get(), 0, MPFR_RNDN);
    mpfr_set_ui(term.get(), 1, MPFR_RNDN);

    SeriesValue out;
    out.precision_bits = static_cast<int>(bits);
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (int n = 0;; ++n) {
        if (n >= kMaxTerms) throw NumericalError("eval_1F2: series did not converge within 1e5 terms", 0.0);
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        out.terms_used = n + 1;
        if (a + n == 0.0) {
            out.trunc_bound = 0.0;
            break;
        }
        // next = term (a+n) x / ((b1+n)(b2+n)(n+1))
        mpfr_set_d(t.get(), a, MPFR_RNDN);
        mpfr_add_ui(t.get(), t.get(), static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_mul(next.get(), term.get(), t.get(), MPFR_RNDN);
        mpfr_mul(next.get(), next.get(), x.get(), MPFR_RNDN);
        mpfr_set_d(den.get(), b1, MPFR_RNDN);
        mpfr_add_ui(den.get(), den.get(), static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_set_d(t.get(), b2, MPFR_RNDN);
        mpfr_add_ui(t.get(), t.get(), static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_mul(den.get(), den.get(), t.get(), MPFR_RNDN);
        mpfr_mul_ui(den.get(), den.get(), static_cast<unsigned long>(n) + 1, MPFR_RNDN);
        mpfr_div(next.get(), next.get(), den.get(), MPFR_RNDN);

        mpfr_div(ratio.get(), next.get(), term.get(), MPFR_RNDN);
        const double r = std::abs(mpfr_get_d(ratio.get(), MPFR_RNDU));
        mpfr_abs(thresh.get(), sum.get(), MPFR_RNDN);
        mpfr_mul_d(thresh.get(), thresh.get(), 1e-16, MPFR_RNDN);
        if (r < 1.0 && r <= prev_ratio && mpfr_cmpabs(next.get(), thresh.get()) < 0) {
            out.trunc_bound = std::abs(mpfr_get_d(next.get(), MPFR_RNDU)) / (1.0 - r);
            ++out.terms_used;
            mpfr_add(sum.get(), sum.get(), next.get(), MPFR_RNDN);
            break;
        }
        prev_ratio = r;
        mpfr_swap(term.get(), next.get());
    }
    const double rounding = std::exp(peak + std::log(static_cast<double>(out.terms_used)) +
                                     (2.0 - static_cast<double>(bits)) * std::log(2.0));
    out.trunc_bound += rounding;
    out.value = mpfr_get_d(sum.get(), MPFR_RNDN);
    return out;
}

// sign(J_k) = (-1)^(k+1) whenever A(q pi) > |B|, where the closed form is
// ((-1)^(k+1) A(q pi) + B) / (D (q pi)^alpha), q = 2k - 1.
struct ClosedForm {
    std::vector<double> A;  // ascending coefficients in y = q pi
    double B;
    double D;
};

const ClosedForm& closed_form(int alpha) {
    static const std::array<ClosedForm, 5> table{{
        {{1.0}, 0.0, 1.0},
        {{0.0, 1.0}, -2.0, 1.0},
        {{-8.0, 0.0, 1.0}, 0.0, 4.0 / 3.0},
        {{0.0, -24.0, 0.0, 1.0}, 48.0, 2.0},
        {{384.0, 0.0, -48.0, 0.0, 1.0}, 0.0, 16.0 / 5.0},
    }};
    if (alpha < 2 || alpha > 6) throw DomainError("a_k_closed: alpha must be an integer in 2..6");
    return table[static_cast<std::size_t>(alpha - 2)];
}

double horner(const std::vector<double>& c, double y) {
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * y + *it;
    return s;
}

std::optional<int> integer_alpha(double alpha) {
    if (alpha == std::round(alpha) && alpha >= 2.0 && alpha <= 6.0) return static_cast<int>(alpha);
    return std::nullopt;
}

}  // namespace

SeriesValue eval_1F2(double a, double b1, double b2, double x) {
    return sum_series(a, b1, b2, x, [x](mpfr_ptr m) { mpfr_set_d(m, x, MPFR_RNDN); });
}

SeriesValue a_k_hyper(double alpha, int k) {
    if (!(alpha > 0.0)) throw PreconditionError("a_k_hyper: alpha must be positive");
    if (k < 1) throw PreconditionError("a_k_hyper: k must be >= 1");
    const double q = 2.0 * k - 1.0;
    const double x_approx = -kPi * kPi * q * q / 16.0;
    return sum_series(0.5 * (1.0 + alpha), 1.5, 0.5 * (3.0 + alpha), x_approx, [q](mpfr_ptr m) {
        mpfr_const_pi(m, MPFR_RNDN);
        mpfr_mul_d(m, m, q, MPFR_RNDN);
        mpfr_sqr(m, m, MPFR_RNDN);
        mpfr_div_ui(m, m, 16, MPFR_RNDN);
        mpfr_neg(m, m, MPFR_RNDN);
    });
}

double a_k_closed(int alpha, int k) {
    const ClosedForm& cf = closed_form(alpha);
    if (k < 1) throw PreconditionError("a_k_closed: k must be >= 1");
    const double y = kPi * (2.0 * k - 1.0);
    const double s = (k % 2 == 1) ? 1.0 : -1.0;
    return (s * horner(cf.A, y) + cf.B) / (cf.D * std::pow(y, alpha));
}

double a_k_quadrature(double alpha, int k) {
    if (!(alpha > 0.0)) throw PreconditionError("a_k_quadrature: alpha must be positive");
    if (k < 1) throw PreconditionError("a_k_quadrature: k must be >= 1");
    const double q = 2.0 * k - 1.0;
    auto f = [alpha, q](double x) { return (1.0 - std::pow(2.0 * x, alpha)) * cos_pi(q * x); };
    quad::Options opt;
    opt.abs_tol = 1e-12;
    return 2.0 * quad::integrate_oscillatory(f, 0.0, 0.5, 0.5 * q, opt).value;
}

double ibp_prefactor(double alpha, int k) {
    if (k < 1) throw PreconditionError("ibp_prefactor: k must be >= 1");
    return std::pow(2.0, alpha + 1.0) * alpha / (kPi * (2.0 * k - 1.0));
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::pass_all_k: return "PASS-ALL-K";
        case Verdict::fail: return "FAIL";
        case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

bool closed_form_sign_all_k(int alpha, int* checked_to) {
    const ClosedForm& cf = closed_form(alpha);
    std::vector<double> p = cf.A;
    p[0] -= std::abs(cf.B);
    const double lead = p.back();
    if (!(lead > 0.0)) return false;
    // Cauchy bound: every real root of p lies below R
    double R = 1.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) R = std::max(R, 1.0 + std::abs(p[i] / lead));
    // below R check s A(y) + B against the sign s of each k explicitly
    int q = 1;
    for (; kPi * q <= R; q += 2) {
        const double s = (q % 4 == 1) ? 1.0 : -1.0;
        if (!(s * (s * horner(cf.A, kPi * q) + cf.B) > 0.0)) return false;
    }
    if (checked_to) *checked_to = q - 2 > 0 ? q - 2 : 1;
    return true;
}

SignCertificate certify(double alpha, int K, unsigned threads) {
    if (!(alpha > 0.0)) throw PreconditionError("certify: alpha must be positive");
    if (K < 1) throw PreconditionError("certify: K must be >= 1");
    SignCertificate c;
    c.alpha = alpha;
    c.K = K;
    c.values.resize(static_cast<std::size_t>(K));
    for_each_index(c.values.size(), threads,
                   [&](std::size_t i) { c.values[i] = a_k_hyper(alpha, static_cast<int>(i) + 1); });

    c.verdict = Verdict::pass;
    for (int k = 1; k <= K; ++k) {
        const SeriesValue& v = c.values[static_cast<std::size_t>(k - 1)];
        if (!v.sign_certified()) {
            c.verdict = Verdict::inconclusive;
            c.bad_k = k;
            break;
        }
        const bool want_positive = (k % 2 == 1);
        if ((v.value > 0.0) != want_positive) {
            c.verdict = Verdict::fail;
            c.bad_k = k;
            break;
        }
    }

    if (const auto ia = integer_alpha(alpha)) {
        bool agrees = true;
        for (int k = 1; k <= K && agrees; ++k) {
            const SeriesValue& v = c.values[static_cast<std::size_t>(k - 1)];
            if (v.sign_certified() && ((v.value > 0.0) != (a_k_closed(*ia, k) > 0.0))) {
                agrees = false;
                if (c.verdict == Verdict::pass || (c.bad_k && *c.bad_k > k)) {
                    c.verdict = Verdict::inconclusive;
                    c.bad_k = k;
                }
            }
        }
        c.closed_form_agrees = agrees;
        int checked = 0;
        if (c.verdict == Verdict::pass && agrees && closed_form_sign_all_k(*ia, &checked)) {
            c.verdict = Verdict::pass_all_k;
            c.all_k_checked_to = checked;
        }
    }
    return c;
}

nlohmann::json to_json(const SeriesValue& v) {
    return {{"value", v.value},
            {"trunc_bound", v.trunc_bound},
            {"terms_used", v.terms_used},
            {"precision_bits", v.precision_bits}};
}

nlohmann::json to_json(const SignCertificate& c) {
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        const SeriesValue& v = c.values[i];
        nlohmann::json row = to_json(v);
        row["k"] = static_cast<int>(i) + 1;
        row["sign"] = !v.sign_certified() ? "?" : (v.value > 0.0 ? "+" : "-");
        values.push_back(std::move(row));
    }
    nlohmann::json j{{"alpha", c.alpha}, {"K", c.K}, {"verdict", verdict_name(c.verdict)}, {"values", values}};
    j["bad_k"] = c.bad_k ? nlohmann::json(*c.bad_k) : nlohmann::json(nullptr);
    if (c.closed_form_agrees) j["closed_form_agrees"] = *c.closed_form_agrees;
    if (c.all_k_checked_to) j["all_k_checked_to_q"] = *c.all_k_checked_to;
    return j;
}

}  // namespace smoothavg

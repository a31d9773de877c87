#pragma once

// 1F2 series with a certified truncation bound, the coefficients
//
//   a_k = int_{-1/2}^{1/2} (1 - |2x|^alpha) cos(2 pi (k - 1/2) x) dx
//
// in three forms (series, closed form of the inner sine integral, quadrature)
// and the alternating sign-pattern certificate.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace smoothavg {

struct SeriesValue {
    double value = 0.0;
    double trunc_bound = 0.0;   // truncation tail plus rounding
    int terms_used = 0;
    int precision_bits = 53;

    bool sign_certified() const { return std::abs(value) > trunc_bound; }
};

/// 1F2(a; b1, b2; x).  Terms follow the ratio recurrence in MPFR at a
/// precision sized to the largest term.  Throws PreconditionError when b1 or
/// b2 is a nonpositive integer, NumericalError past 1e5 terms.
SeriesValue eval_1F2(double a, double b1, double b2, double x);

/// 1F2((1+alpha)/2; 3/2, (3+alpha)/2; -pi^2 (2k-1)^2 / 16), argument formed in MPFR.
SeriesValue a_k_hyper(double alpha, int k);

/// int_0^{1/2} x^(alpha-1) sin(2 pi (k - 1/2) x) dx in closed form, alpha in 2..6.
double a_k_closed(int alpha, int k);

/// The cosine integral by oscillation-aware quadrature.
double a_k_quadrature(double alpha, int k);

/// 2^(alpha+1) alpha / (2 pi (k - 1/2)): a_k_quadrature = ibp_prefactor * inner sine integral.
double ibp_prefactor(double alpha, int k);

enum class Verdict { pass, pass_all_k, fail, inconclusive };
std::string verdict_name(Verdict v);

struct SignCertificate {
    double alpha = 0.0;
    int K = 0;
    std::vector<SeriesValue> values;     // k = 1..K
    Verdict verdict = Verdict::inconclusive;
    std::optional<int> bad_k;            // first failing or inconclusive k
    std::optional<bool> closed_form_agrees;  // integer alpha in 2..6 only
    std::optional<int> all_k_checked_to;     // explicit check bound behind the all-k upgrade
};

/// Requires K >= 1.  threads = 0 uses all cores.
SignCertificate certify(double alpha, int K, unsigned threads = 0);

/// true when the closed form for integer alpha has sign (-1)^(k+1) for every k >= 1.
/// `checked_to` receives the largest q = 2k-1 tested explicitly below the root bound.
bool closed_form_sign_all_k(int alpha, int* checked_to = nullptr);

nlohmann::json to_json(const SeriesValue& v);
nlohmann::json to_json(const SignCertificate& c);

}  // namespace smoothavg

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "smoothavg/errors.hpp"
#include "smoothavg/quadrature.hpp"
#include "smoothavg/spectral.hpp"

using namespace smoothavg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;

double quad_fourier(const KernelSpec& k, double xi) {
    auto f = [&](double x) { return evaluate(k, x) * std::cos(2 * kPi * xi * x); };
    const double R = k.compact() ? k.support_radius : 8.0 * k.dilation;
    return 2.0 * quad::integrate_oscillatory(f, 0.0, R, std::max(1.0, std::abs(xi))).value;
}
}  // namespace

TEST_CASE("transforms agree with direct quadrature", "[spectral]") {
    const std::vector<KernelSpec> ks{characteristic(), gaussian(), power(2.0), power(1.5),
                                     cosine_series({1.0, 0.4, -0.2}), apply_scale(power(2.0), {2.0, 3.0}),
                                     to_sampled(power(3.0), 1025)};
    for (const auto& k : ks)
        for (double xi : {0.0, 0.25, 0.5, 1.3, 2.5, 7.75}) CHECK_THAT(fourier(k, xi), WithinAbs(quad_fourier(k, xi), 1e-10));
}

TEST_CASE("transform closed forms", "[spectral]") {
    CHECK_THAT(fourier(characteristic(), 0.5), WithinRel(2.0 / kPi, 1e-15));
    CHECK_THAT(fourier(characteristic(), 1.5), WithinRel(-2.0 / (3.0 * kPi), 1e-15));
    CHECK_THAT(fourier(gaussian(), 1.0), WithinRel(std::exp(-kPi), 1e-15));
    CHECK(fourier(characteristic(), 3.0) == 0.0);
    CHECK_THAT(sin_pi(1e6 + 0.5), WithinAbs(1.0, 1e-15));
    CHECK_THAT(cos_pi(-3.0), WithinAbs(-1.0, 1e-15));
}

TEST_CASE("weighted sup of the characteristic kernel", "[spectral]") {
    const SupNormResult r = weighted_sup(characteristic(), 1.0);
    CHECK(r.certified());
    CHECK_THAT(r.value, WithinAbs(1.0 / kPi, 1e-12));
    CHECK_THAT(r.argmax_xi - std::floor(r.argmax_xi), WithinAbs(0.5, 1e-9));
    CHECK(r.tail_bound <= r.value * (1 + 1e-10));
}

TEST_CASE("weighted sup of the Gaussian is attained at sqrt(beta / 2 pi)", "[spectral]") {
    for (double beta : {0.75, 1.0, 2.0, 3.0}) {
        const double xs = std::sqrt(beta / (2 * kPi));
        const SupNormResult r = weighted_sup(gaussian(), beta);
        CHECK(r.certified());
        CHECK_THAT(r.value, WithinRel(std::pow(xs, beta) * std::exp(-kPi * xs * xs), 1e-10));
        CHECK_THAT(r.argmax_xi, WithinAbs(xs, 1e-6));
    }
}

TEST_CASE("weighted sup of the quadratic power kernel", "[spectral]") {
    // value from an independent 40-digit root-finding oracle
    const SupNormResult r = weighted_sup(power(2.0), 1.0);
    CHECK(r.certified());
    CHECK_THAT(r.value, WithinRel(0.27768196922223386, 1e-9));
    CHECK_THAT(r.argmax_xi, WithinAbs(0.66258621258219238, 1e-6));
}

TEST_CASE("sup-norm scaling law", "[spectral][property]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> logu(std::log(0.1), std::log(10.0));
    for (const KernelSpec& k : {characteristic(), gaussian(), power(2.0)}) {
        const double base = weighted_sup(k, 1.0).value;
        for (int t = 0; t < 5; ++t) {
            const double c = std::exp(logu(rng)), L = std::exp(logu(rng));
            const SupNormResult s = weighted_sup(apply_scale(k, {c, L}), 1.0);
            CHECK(s.certified());
            CHECK_THAT(s.value, WithinRel(c * base, 1e-9));
        }
    }
}

TEST_CASE("status for rough kernels with beta above one", "[spectral]") {
    const SupNormResult r = weighted_sup(characteristic(), 1.5);
    CHECK(r.status == SupStatus::unbounded_risk);
    CHECK(status_name(r.status) == "UNBOUNDED-RISK");
    CHECK_THROWS_AS(weighted_sup(characteristic(), 0.5), PreconditionError);
    CHECK(weighted_sup(power(2.0), 1.5).certified());
}

TEST_CASE("cosine series with a boundary jump has the asymptote S / pi", "[spectral]") {
    const KernelSpec k = cosine_series({1.0, 0.1});
    const SupNormResult r = weighted_sup(k, 1.0);
    CHECK(r.certified());
    CHECK(r.value >= 0.9 / kPi - 1e-12);
}

TEST_CASE("Plancherel self-test", "[spectral]") {
    const auto p = plancherel_check(power(2.0), cosine_series({1.0, 0.3}), 200.0);
    CHECK(std::abs(p.real_space - p.spectral) <= p.tail_bound + 1e-9);
    const auto q = plancherel_check(power(2.0), power(3.0), 200.0);
    CHECK(std::abs(q.real_space - q.spectral) <= q.tail_bound + 1e-9);
}

TEST_CASE("sup result serialises", "[spectral]") {
    const auto j = to_json(weighted_sup(characteristic(), 1.0));
    CHECK(j.at("status") == "CERTIFIED");
    CHECK(j.contains("tail_bound"));
}

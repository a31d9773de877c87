#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "smoothavg/errors.hpp"
#include "smoothavg/hypergeom.hpp"

using namespace smoothavg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("1F2 at zero is exactly one", "[hypergeom]") {
    for (double a : {0.5, 1.5, 3.0}) {
        const SeriesValue v = eval_1F2(a, 1.5, 2.5, 0.0);
        CHECK(v.value == 1.0);
        CHECK(v.trunc_bound == 0.0);
        CHECK(v.terms_used >= 1);
    }
}

TEST_CASE("1F2 against independent values", "[hypergeom]") {
    // 24 / pi^3 from the first coefficient at alpha = 2
    const SeriesValue v = eval_1F2(1.5, 1.5, 2.5, -kPi * kPi / 16);
    CHECK_THAT(v.value, WithinRel(24.0 / std::pow(kPi, 3), 1e-14));
    CHECK(v.trunc_bound < 1e-15);
    const SeriesValue w = eval_1F2(1.5, 1.5, 2.5, -kPi * kPi / 16 * 9);
    CHECK(w.value < 0.0);
    CHECK_THAT(w.value, WithinRel(-0.02866803060728843483, 1e-12));
    // 40-digit oracle values
    CHECK_THAT(a_k_hyper(1.5, 3).value, WithinRel(0.01161454986401922492, 1e-12));
    CHECK_THAT(a_k_hyper(3.0, 7).value, WithinRel(0.0008934992094052162073, 1e-11));
    CHECK_THAT(a_k_hyper(2.5, 12).value, WithinRel(-0.0001229593375394293173, 1e-10));
    CHECK_THAT(a_k_hyper(1.0, 2).value, WithinRel(0.09006327434874468573, 1e-12));
}

TEST_CASE("1F2 terminating and positive arguments", "[hypergeom]") {
    // a = -2 terminates: 1 + (-2) x / (b1 b2) + (-2)(-1) x^2 / (b1 (b1+1) b2 (b2+1) 2)
    const double x = 0.7, b1 = 1.5, b2 = 2.5;
    const double expect = 1 - 2 * x / (b1 * b2) + 2 * x * x / (b1 * (b1 + 1) * b2 * (b2 + 1) * 2);
    const SeriesValue v = eval_1F2(-2.0, b1, b2, x);
    CHECK_THAT(v.value, WithinRel(expect, 1e-15));
    CHECK(v.terms_used == 3);
    CHECK_THROWS_AS(eval_1F2(1.0, 0.0, 1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(eval_1F2(1.0, 1.0, -3.0, 1.0), PreconditionError);
}

TEST_CASE("truncation bounds stay below the values", "[hypergeom][property]") {
    for (double a : {1.0, 1.5, 2.0, 2.5, 4.0, 6.0})
        for (int k : {1, 5, 25, 100, 200}) {
            const SeriesValue v = a_k_hyper(a, k);
            CHECK(v.trunc_bound >= 0.0);
            CHECK(v.sign_certified());
        }
}

TEST_CASE("signs of the first coefficients", "[hypergeom]") {
    CHECK(a_k_hyper(2, 1).value > 0.0);
    CHECK(a_k_hyper(2, 2).value < 0.0);
}

TEST_CASE("closed forms of the inner sine integral", "[hypergeom]") {
    CHECK_THAT(a_k_closed(2, 1), WithinRel(1.0 / (kPi * kPi), 1e-15));
    CHECK_THAT(a_k_closed(3, 1), WithinRel((kPi - 2) / std::pow(kPi, 3), 1e-14));
    CHECK_THAT(a_k_closed(3, 1), WithinRel(0.0368181147759388, 1e-12));
    CHECK_THAT(a_k_closed(4, 1), WithinRel(0.75 * (kPi * kPi - 8) / std::pow(kPi, 4), 1e-14));
    CHECK_THAT(a_k_closed(4, 1), WithinRel(0.0143949942036473, 1e-12));
    // symbolic integration at k = 1, 2
    CHECK_THAT(a_k_closed(5, 1), WithinRel(0.00589513219823812, 1e-12));
    CHECK_THAT(a_k_closed(5, 2), WithinRel(-0.00378532629864050, 1e-12));
    CHECK_THAT(a_k_closed(6, 1), WithinRel(0.00249251286346780, 1e-12));
    CHECK_THAT(a_k_closed(6, 2), WithinRel(-0.00178820882491055, 1e-12));
    CHECK_THROWS_AS(a_k_closed(7, 1), DomainError);
    CHECK_THROWS_AS(a_k_closed(1, 1), DomainError);
}

TEST_CASE("quadrature coefficients at alpha = 2", "[hypergeom]") {
    CHECK_THAT(a_k_quadrature(2, 1), WithinRel(16 / std::pow(kPi, 3), 1e-12));
    CHECK_THAT(a_k_quadrature(2, 2), WithinRel(-16 / (27 * std::pow(kPi, 3)), 1e-11));
    CHECK_THAT(a_k_quadrature(2, 3), WithinRel(16 / (125 * std::pow(kPi, 3)), 1e-11));
    for (int k = 1; k <= 50; ++k) {
        const double expect = 16 / std::pow(kPi, 3) * (k % 2 ? 1 : -1) / std::pow(2 * k - 1, 3);
        CHECK_THAT(a_k_quadrature(2, k), WithinRel(expect, 1e-9));
    }
}

TEST_CASE("integration-by-parts chain", "[hypergeom][property]") {
    for (int a = 2; a <= 6; ++a)
        for (int k = 1; k <= 50; ++k)
            CHECK_THAT(a_k_quadrature(a, k), WithinRel(ibp_prefactor(a, k) * a_k_closed(a, k), 1e-9));
}

TEST_CASE("series and quadrature differ by the constant alpha / (alpha + 1)", "[hypergeom][property]") {
    for (int a = 2; a <= 6; ++a) {
        const double c1 = a_k_hyper(a, 1).value / (a_k_closed(a, 1) * ibp_prefactor(a, 1));
        CHECK_THAT(c1, WithinRel((a + 1.0) / a, 1e-10));
        for (int k = 2; k <= 30; ++k)
            CHECK_THAT(a_k_hyper(a, k).value / (a_k_closed(a, k) * ibp_prefactor(a, k)), WithinRel(c1, 1e-8));
    }
}

TEST_CASE("series and quadrature share signs", "[hypergeom][property]") {
    for (double a : {1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0})
        for (int k = 1; k <= 30; ++k) {
            const SeriesValue v = a_k_hyper(a, k);
            if (v.sign_certified()) CHECK((v.value > 0) == (a_k_quadrature(a, k) > 0));
        }
}

TEST_CASE("sign certificates", "[hypergeom]") {
    const SignCertificate c2 = certify(2, 100);
    CHECK(c2.verdict == Verdict::pass_all_k);
    CHECK(verdict_name(c2.verdict) == "PASS-ALL-K");
    CHECK(c2.values.size() == 100);
    CHECK(c2.closed_form_agrees.value_or(false));

    const SignCertificate c1 = certify(1, 10);
    CHECK(c1.verdict == Verdict::fail);
    CHECK(c1.bad_k == 2);

    const SignCertificate c15 = certify(1.5, 50);
    CHECK(c15.verdict == Verdict::fail);

    // non-integer alpha above two: evidence up to K only
    const SignCertificate c19 = certify(1.9, 30);
    CHECK(c19.verdict == Verdict::pass);
    CHECK_FALSE(c19.closed_form_agrees);

    CHECK_THROWS_AS(certify(2, 0), PreconditionError);
    CHECK_THROWS_AS(certify(0, 5), PreconditionError);
}

TEST_CASE("all-k argument for integer alpha", "[hypergeom]") {
    for (int a = 2; a <= 6; ++a) {
        int q = 0;
        CHECK(closed_form_sign_all_k(a, &q));
        CHECK(q >= 1);
    }
}

TEST_CASE("certificate is independent of the thread count", "[hypergeom]") {
    const SignCertificate a = certify(3, 40, 1);
    const SignCertificate b = certify(3, 40, 4);
    CHECK(to_json(a) == to_json(b));
}

TEST_CASE("certificate JSON lists every k", "[hypergeom]") {
    const auto j = to_json(certify(4, 5));
    CHECK(j.at("verdict") == "PASS-ALL-K");
    REQUIRE(j.at("values").size() == 5);
    CHECK(j.at("values")[1].at("sign") == "-");
    CHECK(j.at("values")[2].at("k") == 3);
}

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "smoothavg/errors.hpp"
#include "smoothavg/kernel.hpp"

using namespace smoothavg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("closed-form masses", "[kernel]") {
    CHECK_THAT(l1_norm(characteristic()), WithinRel(1.0, 1e-15));
    CHECK_THAT(l1_norm(gaussian()), WithinRel(1.0, 1e-15));
    CHECK_THAT(l1_norm(power(2.0)), WithinRel(2.0 / 3.0, 1e-15));
    CHECK_THAT(l1_norm(cosine_series({1.0})), WithinRel(1.0, 1e-12));
    CHECK_THAT(l1_norm(cosine_series({1.0, 0.5})), WithinRel(1.0, 1e-12));
}

TEST_CASE("moments match closed forms", "[kernel]") {
    for (double a : {0.5, 1.0, 2.0, 3.5, 6.0}) {
        CHECK_THAT(moment(characteristic(), a), WithinRel(std::pow(2.0, -a) / (a + 1.0), 1e-14));
        CHECK_THAT(moment(gaussian(), a), WithinRel(std::tgamma((a + 1) / 2) / std::pow(kPi, (a + 1) / 2), 1e-14));
        // the cosine series with c = {1} is the characteristic kernel
        CHECK_THAT(moment(cosine_series({1.0}), a), WithinRel(std::pow(2.0, -a) / (a + 1.0), 1e-10));
        // sampled kernel of the power shape: linear interpolation error only
        CHECK_THAT(moment(to_sampled(power(2.0)), a), WithinRel(moment(power(2.0), a), 1e-6));
    }
    CHECK_THAT(moment(gaussian(), 2.0), WithinRel(1.0 / (2.0 * kPi), 1e-14));
}

TEST_CASE("scaling laws of mass and moment", "[kernel][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logu(std::log(0.1), std::log(10.0));
    for (const KernelSpec& k : {characteristic(), gaussian(), power(2.0), cosine_series({1.0, 0.3, -0.1})}) {
        for (int t = 0; t < 10; ++t) {
            const double c = std::exp(logu(rng)), L = std::exp(logu(rng)), a = 1.0 + t * 0.5;
            const KernelSpec s = apply_scale(k, {c, L});
            CHECK_THAT(l1_norm(s), WithinRel(c * L * l1_norm(k), 1e-10));
            CHECK_THAT(moment(s, a), WithinRel(c * std::pow(L, a + 1) * moment(k, a), 1e-10));
            CHECK_THAT(evaluate(s, 0.1 * L), WithinRel(c * evaluate(k, 0.1), 1e-14));
        }
    }
}

TEST_CASE("evaluation and support", "[kernel]") {
    CHECK(evaluate(characteristic(), 0.49) == 1.0);
    CHECK(evaluate(characteristic(), 0.51) == 0.0);
    CHECK_THAT(evaluate(gaussian(), 1.0), WithinRel(std::exp(-kPi), 1e-15));
    CHECK_THAT(evaluate(power(2.0), 0.25), WithinRel(0.75, 1e-15));
    CHECK_THAT(evaluate(cosine_series({1.0, 0.5}), 0.0), WithinRel(1.5, 1e-15));
    CHECK(evaluate(cosine_series({1.0, 0.5}), 0.6) == 0.0);
    const KernelSpec wide = apply_scale(characteristic(), {2.0, 4.0});
    CHECK(wide.support_radius == 2.0);
    CHECK(evaluate(wide, 1.9) == 2.0);
    CHECK(std::isinf(gaussian().support_radius));
}

TEST_CASE("evenness of every family", "[kernel][property]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (const KernelSpec& k : {characteristic(), gaussian(), power(1.5), cosine_series({1.0, -0.2, 0.05}),
                                to_sampled(power(3.0), 257)}) {
        for (int i = 0; i < 50; ++i) {
            const double x = u(rng);
            CHECK(evaluate(k, x) == evaluate(k, -x));
        }
    }
}

TEST_CASE("validation rejects inconsistent descriptions", "[kernel]") {
    CHECK_THROWS_AS(validate(power(-1.0)), PreconditionError);
    CHECK_THROWS_AS(validate(cosine_series({})), PreconditionError);
    CHECK_THROWS_AS(validate(sampled({1.0, 2.0, 3.0})), PreconditionError);
    CHECK_THROWS_AS(validate(cosine_series({0.0, 1.0}, true)), PreconditionError);
    KernelSpec k = characteristic();
    k.dilation = 0.0;
    CHECK_THROWS_AS(validate(k), PreconditionError);
    CHECK_THROWS_AS(apply_scale(characteristic(), {-1.0, 1.0}), PreconditionError);
    CHECK_THROWS_AS(moment(characteristic(), 0.0), PreconditionError);
    CHECK_NOTHROW(validate(cosine_series({1.0, 0.5}, true)));
}

TEST_CASE("negativity mass and boundary jump", "[kernel]") {
    CHECK(negativity_mass(characteristic()) == 0.0);
    // 1 + 2 cos(2 pi y) is negative where cos < -1/2, i.e. |y| > 1/3
    const double expect = 2.0 * (-(0.5 - 1.0 / 3.0) - (0.0 - std::sin(2 * kPi / 3) / kPi));
    CHECK_THAT(negativity_mass(cosine_series({1.0, 2.0})), WithinRel(expect, 1e-9));
    CHECK(boundary_value(characteristic()) == 1.0);
    CHECK_THAT(boundary_value(cosine_series({1.0, 0.25})), WithinAbs(0.75, 1e-15));
    CHECK(boundary_value(power(2.0)) == 0.0);
}

TEST_CASE("variation of the analytic families", "[kernel]") {
    CHECK_THAT(total_variation(characteristic()), WithinRel(2.0, 1e-14));
    CHECK_THAT(total_variation(power(2.0)), WithinRel(2.0, 1e-14));
    CHECK_THAT(total_variation(apply_scale(gaussian(), {3.0, 2.0})), WithinRel(6.0, 1e-14));
    CHECK(derivative_variation(characteristic()) < 0.0);
    CHECK_THAT(derivative_variation(power(2.0)), WithinRel(16.0, 1e-14));
}

TEST_CASE("json and inline syntax round trip", "[kernel]") {
    for (const KernelSpec& k : {characteristic(), gaussian(), power(2.0), cosine_series({1.0, 0.5}),
                                apply_scale(power(3.0), {2.0, 0.5})}) {
        const KernelSpec back = kernel_from_json(to_json(k));
        CHECK(back.family == k.family);
        CHECK(back.params == k.params);
        CHECK(back.amplitude == k.amplitude);
        CHECK(back.dilation == k.dilation);
        CHECK(back.support_radius == k.support_radius);
    }
    CHECK(parse_kernel("box").family == Family::characteristic);
    CHECK(parse_kernel("power:2").params == std::vector<double>{2.0});
    CHECK(parse_kernel("cosine:1,0.5").params == std::vector<double>{1.0, 0.5});
    CHECK_THROWS_AS(parse_kernel("triangle"), PreconditionError);
    CHECK_THROWS_AS(parse_kernel("power:x"), PreconditionError);
    CHECK_THROWS_AS(parse_kernel("gaussian:1"), PreconditionError);
}

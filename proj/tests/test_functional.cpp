#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "smoothavg/errors.hpp"
#include "smoothavg/functional.hpp"

using namespace smoothavg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;

double J_char(double a) { return std::pow(2 * kPi, -a) / (a + 1); }
}  // namespace

TEST_CASE("J of the characteristic kernel", "[functional]") {
    for (int a = 1; a <= 6; ++a) {
        const UncertaintyReport r = uncertainty(characteristic(), a, 1.0);
        CHECK(r.certified());
        CHECK_THAT(r.J, WithinRel(J_char(a), 1e-8));
    }
    CHECK_THAT(uncertainty(characteristic(), 2, 1).J, WithinRel(8.4433e-3, 1e-4));
    CHECK_THAT(uncertainty(characteristic(), 3, 1).J, WithinRel(1.0078604510374840e-3, 1e-8));
}

TEST_CASE("J of the Gaussian", "[functional]") {
    // e^-1 / (4 pi^2) = 9.31849510429307556e-3 (40-digit oracle)
    CHECK_THAT(uncertainty(gaussian(), 2, 1).J, WithinRel(9.31849510429307556e-3, 1e-9));
    for (double a : {1.0, 1.5, 3.0}) {
        const double expect = std::pow(2 * kPi * std::exp(1.0), -a / 2) * std::tgamma((a + 1) / 2) * std::pow(kPi, -(a + 1) / 2);
        CHECK_THAT(uncertainty(gaussian(), a, 1).J, WithinRel(expect, 1e-9));
    }
}

TEST_CASE("J of the quadratic power kernel", "[functional]") {
    // sup 0.27768196922223387 from a root-finding oracle; moment and mass exact
    CHECK_THAT(uncertainty(power(2.0), 4, 1).J, WithinRel(1.612460134059061e-4, 1e-8));
}

TEST_CASE("J is composed exactly from its parts", "[functional][property]") {
    for (const KernelSpec& k : {characteristic(), gaussian(), power(3.0), cosine_series({1.0, 0.2})}) {
        const UncertaintyReport r = uncertainty(k, 2.5, 1.0);
        CHECK(r.J == compose_J(r.supnorm.value, r.moment_val, r.l1_val, 2.5, 1.0));
        CHECK(r.J > 0.0);
    }
}

TEST_CASE("J floor over the built-in families", "[functional][property]") {
    for (int a = 1; a <= 6; ++a)
        for (const KernelSpec& k : {gaussian(), power(1.0), power(2.0), power(4.0), cosine_series({1.0, 0.3}),
                                    to_sampled(power(2.0), 2049)})
            CHECK(uncertainty(k, a, 1.0).J >= 0.5 * J_char(a));
}

TEST_CASE("preconditions of the functional", "[functional]") {
    CHECK_THROWS_AS(uncertainty(characteristic(), 0.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(uncertainty(characteristic(), 2.0, 0.5), PreconditionError);
    CHECK_THROWS_AS(uncertainty(cosine_series({0.0}), 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(invariance_audit(characteristic(), 2, 1, 0, 1), PreconditionError);
}

TEST_CASE("uncertified sup is flagged, not hidden", "[functional]") {
    const UncertaintyReport r = uncertainty(characteristic(), 2.0, 1.5);
    CHECK_FALSE(r.certified());
    CHECK(to_json(r).at("supnorm").at("status") == "UNBOUNDED-RISK");
}

TEST_CASE("invariance under amplitude and dilation", "[functional][property]") {
    CHECK(invariance_audit(characteristic(), 2, 1, 10, 1) <= 1e-8);
    CHECK(invariance_audit(gaussian(), 2, 1, 10, 1) <= 1e-8);
    CHECK(invariance_audit(power(2.0), 4, 1, 10, 7) <= 1e-8);
    for (double a : {1.0, 2.0, 4.0})
        for (const KernelSpec& k : {characteristic(), gaussian(), power(2.0), power(3.0), cosine_series({1.0, 0.25})})
            CHECK(invariance_audit(k, a, 1.0, 5, 42) <= 1e-8);
}

TEST_CASE("crossover of characteristic and Gaussian", "[functional]") {
    const CrossoverResult r = compare_crossover(characteristic(), gaussian(), 1.0, 2.0, 1.0);
    REQUIRE(r.alpha_star);
    CHECK(*r.alpha_star >= 1.30);
    CHECK(*r.alpha_star <= 1.45);
    // closed-form root 1.37491671186828 (40-digit oracle), bisection width 1e-4
    CHECK_THAT(*r.alpha_star, WithinAbs(1.37491671186828, 1e-4));
    CHECK(r.sweep.size() == 64);
    CHECK(r.brackets.size() == 1);
    CHECK(r.sweep.back().J_a < r.sweep.back().J_b);
    CHECK(uncertainty(characteristic(), 2, 1).J < uncertainty(gaussian(), 2, 1).J);
}

TEST_CASE("crossover of identical kernels is NONE", "[functional]") {
    const CrossoverResult r = compare_crossover(characteristic(), characteristic(), 1.0, 2.0, 1.0);
    CHECK_FALSE(r.alpha_star);
    CHECK(r.brackets.empty());
}

TEST_CASE("crossover rejects several sign changes", "[functional]") {
    CHECK_THROWS_AS(compare_crossover(characteristic(), gaussian(), 2.0, 1.0, 1.0), PreconditionError);
    auto two_roots = [](double a) { return (a - 1.2) * (a - 1.8); };
    auto zero = [](double) { return 0.0; };
    try {
        compare_crossover(two_roots, zero, 1.0, 2.0);
        FAIL("expected a diagnostic");
    } catch (const PreconditionError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("2 sign changes") != std::string::npos);
        CHECK(msg.find('[') != std::string::npos);
    }
    const CrossoverResult one = compare_crossover([](double a) { return a * a; }, [](double) { return 2.0; }, 1.0, 2.0);
    REQUIRE(one.alpha_star);
    CHECK_THAT(*one.alpha_star, WithinAbs(std::sqrt(2.0), 1e-4));
}

TEST_CASE("smoothing bound is sharp at the argmax frequency", "[functional]") {
    const double h = 1.0 / 256.0;
    const auto f = concentrated_signal(0.5, h, 25600);
    const SmoothingResult r = smoothing_bound(characteristic(), f, h);
    CHECK(r.ratio >= 0.95);
    CHECK(r.ratio <= 1.02);
}

TEST_CASE("smoothing bound holds for noise and spikes", "[functional][property]") {
    const double h = 1.0 / 128.0;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    for (const KernelSpec& k : {characteristic(), gaussian(), power(2.0)}) {
        for (int t = 0; t < 20; ++t) {
            std::vector<double> s(4096);
            for (double& v : s) v = g(rng);
            CHECK(smoothing_bound(k, s, h).ratio <= 1.02);
        }
        std::vector<double> spike(1024, 0.0);
        spike[512] = 1.0;
        CHECK(smoothing_bound(k, spike, h).ratio <= 1.02);
    }
}

TEST_CASE("smoothing bound preconditions", "[functional]") {
    CHECK_THROWS_AS(smoothing_bound(characteristic(), std::vector<double>{}, 0.01), DomainError);
    CHECK_THROWS_AS(smoothing_bound(characteristic(), std::vector<double>(10, 1.0), 0.1), PreconditionError);
    CHECK_THROWS_AS(smoothing_bound(characteristic(), std::vector<double>(10, 0.0), 0.01), DomainError);
}

#include <doctest.h>

#include <cmath>

#include "jgw/branching.hpp"
#include "jgw/errors.hpp"
#include "oracles.hpp"

using namespace jgw;

namespace {

const GenerationLaw kAapl{JanardanParams(2.637, 1.1765)};
const GenerationLaw kDal{JanardanParams::poisson(0.7575)};
const GenerationLaw kSq{JanardanParams::poisson(1.4994)};

std::vector<GenerationLaw> law_grid() {
    std::vector<GenerationLaw> out;
    for (double lambda : {0.5, 1.0, 1.3802, 2.637, 4.0}) {
        for (double frac : {0.05, 0.4, 0.8, 1.0}) out.emplace_back(JanardanParams(lambda, lambda * frac));
    }
    return out;
}

}  // namespace

TEST_CASE("generation law caches equal recomputation") {
    for (const auto& law : law_grid()) {
        CHECK(law.mu() == mean(law.offspring()));
        CHECK(law.sigma2() == variance(law.offspring()));
    }
}

TEST_CASE("iterate_pgf examples") {
    CHECK(iterate_pgf(kAapl, 0, 0.37) == 0.37);
    const double two_step = std::exp(-0.7575 * (1.0 - std::exp(-0.7575)));
    CHECK(iterate_pgf(kDal, 2, 0.0) == doctest::Approx(two_step).epsilon(1e-13));
    CHECK(two_step == doctest::Approx(0.6687).epsilon(1e-4));
    CHECK(iterate_pgf(kAapl, 3, 0.0) == doctest::Approx(0.1196).epsilon(2e-3));
    CHECK_THROWS_AS(iterate_pgf(kAapl, 1, 1.5), DomainError);
}

TEST_CASE("extinction sequence matches iterate_pgf") {
    const auto seq = extinction_sequence(kAapl, 6);
    REQUIRE(seq.size() == 6);
    CHECK(seq[0] == 0.0);
    for (std::size_t n = 0; n < seq.size(); ++n) CHECK(seq[n] == doctest::Approx(iterate_pgf(kAapl, n, 0.0)));
    CHECK(seq[1] == doctest::Approx(0.0717).epsilon(2e-3));
    CHECK(seq[2] == doctest::Approx(0.1040).epsilon(2e-3));
    CHECK(seq[4] == doctest::Approx(0.1275).epsilon(2e-3));
}

TEST_CASE("semigroup property") {
    for (const auto& law : law_grid()) {
        for (double s : {0.0, 0.3, 0.9}) {
            for (auto [a, b] : {std::pair{1u, 2u}, std::pair{3u, 4u}, std::pair{0u, 5u}}) {
                CHECK(std::abs(iterate_pgf(law, a + b, s) - iterate_pgf(law, a, iterate_pgf(law, b, s))) < 1e-12);
            }
        }
    }
}

TEST_CASE("expected_size and variance_size") {
    CHECK(expected_size(kAapl, 0) == 1.0);
    CHECK(expected_size(kAapl, 2) == doctest::Approx(1.6907 * 1.6907).epsilon(1e-3));
    const GenerationLaw critical(JanardanParams(1.5, g_threshold(1.5)));
    CHECK(expected_size(critical, 1'000'000) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(variance_size(kAapl, 0) == 0.0);
    CHECK(variance_size(critical, 4) == doctest::Approx(4.0 * critical.sigma2()));
    // sigma^2 mu^n (mu^n - 1) / (mu (mu - 1)) at n = 2 reduces to sigma^2 mu (mu + 1)
    const double mu = kAapl.mu();
    CHECK(variance_size(kAapl, 2) == doctest::Approx(kAapl.sigma2() * mu * (mu + 1.0)));
    CHECK(variance_size(kAapl, 2) == doctest::Approx(4.8256).epsilon(1e-4));
    CHECK(variance_size(kAapl, 1) == doctest::Approx(kAapl.sigma2()));
}

TEST_CASE("extinction_probability examples") {
    CHECK(extinction_probability(kDal) == 1.0);
    const GenerationLaw critical(JanardanParams(1.5, g_threshold(1.5)));
    if (critical.mu() <= 1.0) CHECK(extinction_probability(critical) == 1.0);

    const double sq_oracle = oracle::smallest_fixed_point([](double s) { return std::exp(-1.4994 * (1.0 - s)); });
    CHECK(extinction_probability(kSq) == doctest::Approx(sq_oracle).epsilon(1e-10));
    CHECK(std::abs(extinction_probability(kSq) - 0.4177) < 1e-3);

    const double q = extinction_probability(kAapl);
    CHECK(std::abs(q - 0.137) < 0.002);
    CHECK(q >= std::exp(-2.637));
    CHECK(q < 1.0);
}

TEST_CASE("extinction_probability reports non-convergence") {
    ExtinctionOptions options;
    options.max_iter = 3;
    try {
        extinction_probability(kAapl, options);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.last_iterate() == doctest::Approx(iterate_pgf(kAapl, 3, 0.0)));
        CHECK(e.last_step() > 0.0);
        CHECK(e.kind() == ErrorKind::Numeric);
    }
}

TEST_CASE("monotone convergence and fixed-point residual on a law grid") {
    const ExtinctionOptions options;
    for (const auto& law : law_grid()) {
        const double q = extinction_probability(law, options);
        if (law.mu() <= 1.0) {
            CHECK(q == 1.0);
            continue;
        }
        CHECK(std::abs(law.pgf(q) - q) < 10.0 * options.tol);
        const double oracle_q = oracle::smallest_fixed_point([&](double s) { return law.pgf(s); });
        CHECK(q == doctest::Approx(oracle_q).epsilon(1e-9));
        double prev = 0.0;
        for (std::uint64_t n = 0; n <= 200; ++n) {
            const double v = iterate_pgf(law, n, 0.0);
            CHECK(v >= prev);
            CHECK(v <= q + 1e-12);
            prev = v;
        }
    }
}

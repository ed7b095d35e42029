#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "uqr/constructions.hpp"
#include "uqr/semigroup.hpp"

using namespace uqr;

TEST_CASE("word parameters compose right to left") {
    const auto spec = SemigroupSpec::power_type({Stretch(2, 0.3), Stretch(3, -0.5)});
    const auto w = word_params(spec, {0, 1});  // g1 after g2
    CHECK(w.d == 6);
    CHECK(w.loglambda == doctest::Approx(0.3 + 2 * -0.5));
    CHECK_THROWS_AS(word_params(spec, {}), InvalidParameter);

    Rng rng(41);
    for (int i = 0; i < 50; ++i) {
        const auto x = oracle::point_at_radius(rng, 3, std::exp(rng.uniform(-0.3, 0.3)));
        const auto lhs = apply_word(spec, {0, 1}, x).coords();
        const auto rhs = spec.power_map(0)(spec.power_map(1)(x)).coords();
        CHECK((lhs - rhs).norm() < 1e-9 * rhs.norm());
    }
}

TEST_CASE("ring family: word radii of length <= 2") {
    const double a = 4.0;
    const auto spec = ring_semigroup(a);
    // Radius of f_{d,lambda} is exp(ln lambda / (1 - d)); words of two degree-2 maps
    // have d = 4 and ln lambda = l_i + 2 l_j.
    const double lf = 0.0, lg = -std::log(a);
    std::vector<double> expected;
    for (double l : {lf, lg}) expected.push_back(std::exp(-l));
    for (double li : {lf, lg})
        for (double lj : {lf, lg}) expected.push_back(std::exp(-(li + 2 * lj) / 3));
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end(),
                               [](double x, double y) { return std::abs(x - y) < 1e-12; }),
                   expected.end());
    const auto radii = word_julia_radii(spec, 2);
    REQUIRE(radii.size() == expected.size());
    for (std::size_t i = 0; i < radii.size(); ++i) CHECK(radii[i] == doctest::Approx(expected[i]).epsilon(1e-12));

    const auto words = enumerate_words(spec, 3);
    CHECK(words.size() == 2 + 4 + 8);
    for (const auto& w : words) {
        CHECK(w.radius >= 1.0 - 1e-12);
        CHECK(w.radius <= a + 1e-12);
    }
    const auto ring = julia_ring_estimate(spec, 10);
    CHECK(ring.lo == doctest::Approx(1.0));
    CHECK(ring.hi == doctest::Approx(a));
    CHECK_THROWS_AS(enumerate_words(spec, 20, 1000), BudgetExceeded);
    CHECK_THROWS_AS(ring_semigroup(1.0), InvalidParameter);
}

TEST_CASE("word radii of random power-type semigroups lie between generator radii") {
    Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Stretch> gens;
        for (int i = 0; i < 3; ++i) gens.emplace_back(2 + static_cast<long>(rng.index(3)), rng.uniform(-3, 3));
        const auto spec = SemigroupSpec::power_type(gens);
        const auto [lo, hi] = spec.generator_radius_range();
        for (const auto& w : enumerate_words(spec, 4)) {
            CHECK(w.radius >= lo * (1 - 1e-12));
            CHECK(w.radius <= hi * (1 + 1e-12));
        }
    }
}

TEST_CASE("backward orbit: every point maps to the root along its word") {
    const auto spec = ring_semigroup(4.0);
    Eigen::VectorXd x(3);
    x << 2.4, 0.0, 3.2;
    const Point root(x);
    const auto orbit = backward_orbit(spec, root, 2, 1000);
    CHECK(orbit.points.size() == 1 + 8 + 64);
    CHECK_FALSE(orbit.truncated);
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        CHECK(static_cast<int>(orbit.words[i].size()) == orbit.depths[i]);
        const auto y = apply_word(spec, orbit.words[i], orbit.points[i]);
        CHECK((y.coords() - x).norm() < 1e-8);
        const double r = orbit.points[i].norm();
        CHECK(r >= 1.0 - 1e-9);
        CHECK(r <= 4.0 + 1e-9);
    }
    const auto cut = backward_orbit(spec, root, 3, 100);
    CHECK(cut.truncated);
    CHECK(cut.points.size() == 100);
    CHECK_THROWS_AS(backward_orbit(spec, Point::origin(3), 2, 10), InvalidParameter);
}

TEST_CASE("classification of points off the ring") {
    const auto spec = ring_semigroup(4.0);
    Rng rng(43);
    for (int i = 0; i < 20; ++i) {
        const auto inner = oracle::point_at_radius(rng, 3, rng.uniform(0.01, 0.9));
        const auto outer = oracle::point_at_radius(rng, 3, rng.uniform(4.5, 100));
        CHECK(classify_point(spec, inner, 16, 7).verdict == Verdict::attracted);
        CHECK(classify_point(spec, outer, 16, 7).verdict == Verdict::escaping);
    }
    CHECK(to_string(Verdict::inconclusive) == "inconclusive");
    CHECK_THROWS_AS(classify_point(spec, oracle::point_at_radius(rng, 3, 0.5), 0, 7), InvalidParameter);
}

TEST_CASE("invariance harness accepts the true ring and rejects a wrong one") {
    Rng rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = rng.uniform(1.5, 10.0);
        const auto spec = ring_semigroup(a);
        std::vector<Point> julia, fatou;
        for (int i = 0; i < 30; ++i) {
            julia.push_back(oracle::point_at_radius(rng, 3, std::exp(rng.uniform(0, std::log(a)))));
            fatou.push_back(oracle::point_at_radius(rng, 3, rng.uniform(0.05, 0.95)));
            fatou.push_back(oracle::point_at_radius(rng, 3, a * rng.uniform(1.05, 20)));
        }
        const auto ok = invariance_check(spec, ring_description(spec), julia, fatou);
        CHECK(ok.passed);
        CHECK(ok.decomposition_holds);
        CHECK(ok.julia_preimages_checked == julia.size() * 2 * 4);

        const auto wrong = invariance_check(spec, RadialJuliaDescription::ring(1.0, std::sqrt(a)), julia, fatou);
        CHECK_FALSE(wrong.passed);
        CHECK_FALSE(wrong.decomposition_holds);
    }
}

TEST_CASE("radial descriptions") {
    RadialJuliaDescription d{{{0.0, 1.0}, {1.0 + 1e-14, 2.0}, {3.0, 4.0}}};
    CHECK(d.merged(1e-12).log_intervals.size() == 2);
    CHECK(d.contains(std::exp(0.5), 0.0));
    CHECK_FALSE(d.contains(std::exp(2.5), 1e-9));
    CHECK(RadialJuliaDescription::sphere(2.0).contains(2.0, 1e-12));
    CHECK_THROWS_AS(RadialJuliaDescription::ring(2.0, 1.0), InvalidParameter);
}

TEST_CASE("semigroup construction errors") {
    CHECK_THROWS_AS(SemigroupSpec({}), InvalidParameter);
    CHECK_THROWS_AS(SemigroupSpec::power_type({Stretch(2, 0)}, 3, {"a", "b"}), InvalidParameter);
    const auto chain = build_necklace(36);
    const SemigroupSpec ifs_spec({IfsGenerator{chain.system()}});
    CHECK_FALSE(ifs_spec.power_type());
    CHECK_THROWS_AS(ifs_spec.power_map(0), UnsupportedOperation);
    CHECK(ifs_spec.julia_system().size() == 36);
    CHECK_THROWS_AS(ring_semigroup(4.0).julia_system(), UnsupportedOperation);
}

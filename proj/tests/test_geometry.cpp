#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uqr/geometry.hpp"

using namespace uqr;

namespace {

Point P(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return Point(v);
}

Mobius random_mobius(Rng& rng, int dim) {
    Mobius m(dim);
    for (int k = 0; k < 4; ++k) {
        switch (rng.index(3)) {
            case 0: m.push(Reflection<double>{rng.unit_vector(dim), rng.uniform(-1, 1)}); break;
            case 1: m.push(Inversion<double>{oracle::random_point(rng, dim).coords(), rng.uniform(0.5, 2)}); break;
            default: {
                const Eigen::MatrixXd q = Eigen::MatrixXd::Random(dim, dim).householderQr().householderQ();
                m.push(Similarity<double>{rng.uniform(0.5, 2), q, oracle::random_point(rng, dim).coords()});
            }
        }
    }
    return m;
}

}  // namespace

TEST_CASE("chordal distance agrees with the stereographic chord") {
    Rng rng(11);
    for (int dim : {2, 3}) {
        for (int i = 0; i < 300; ++i) {
            const auto x = oracle::random_point(rng, dim, -10, 10);
            const auto y = oracle::random_point(rng, dim, -10, 10);
            const auto z = oracle::random_point(rng, dim, -10, 10);
            CHECK(chordal_distance(x, y) == doctest::Approx(oracle::chordal(x, y)).epsilon(1e-12));
            CHECK(chordal_distance(x, y) == doctest::Approx(chordal_distance(y, x)));
            CHECK(chordal_distance(x, y) <= 1.0);
            CHECK(chordal_distance(x, z) <= chordal_distance(x, y) + chordal_distance(y, z) + 1e-14);
            const auto inf = Point::infinity(dim);
            CHECK(chordal_distance(x, inf) == doctest::Approx(oracle::chordal(x, inf)).epsilon(1e-12));
        }
        CHECK(chordal_distance(Point::origin(dim), Point::infinity(dim)) == doctest::Approx(1.0));
        CHECK(chordal_distance(Point::infinity(dim), Point::infinity(dim)) == 0.0);
    }
}

TEST_CASE("non-finite coordinates are rejected") {
    Eigen::VectorXd v(2);
    v << 1.0, std::nan("");
    CHECK_THROWS_AS(Point{v}, InvalidParameter);
}

TEST_CASE("normalized radius is chi / sqrt(1 - chi^2)") {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const auto c = oracle::random_point(rng, 3);
        const auto x = oracle::random_point(rng, 3);
        const double chi = oracle::chordal(c, x);
        CHECK(normalized_radius(c, x) == doctest::Approx(chi / std::sqrt(1 - chi * chi)).epsilon(1e-9));
    }
    CHECK(std::isinf(normalized_radius(P({1, 0}), P({-1, 0}))));  // antipodal pair
    CHECK(normalized_radius(Point::infinity(2), P({0, 2})) == doctest::Approx(0.5));
}

TEST_CASE("primitives: involutions, inverses and fixed points") {
    Rng rng(13);
    const Reflection<double> r{P({1, 1, 0}).coords(), 0.7};
    const Inversion<double> inv{P({0.5, -1, 2}).coords(), 1.5};
    for (int i = 0; i < 100; ++i) {
        const auto x = oracle::random_point(rng, 3);
        CHECK((apply(r, apply(r, x)).coords() - x.coords()).norm() < 1e-12);
        CHECK((apply(inv, apply(inv, x)).coords() - x.coords()).norm() < 1e-9);
    }
    CHECK(apply(inv, Point::infinity(3)).coords() == inv.center);
    CHECK(apply(inv, Point(inv.center)).is_infinity());

    const Eigen::MatrixXd q = Eigen::MatrixXd::Random(3, 3).householderQr().householderQ();
    const Similarity<double> s{0.3, q, P({1, 2, 3}).coords()};
    const auto fp = s.fixed_point();
    CHECK((s.apply(fp) - fp).norm() < 1e-12);
    const auto x = oracle::random_point(rng, 3).coords();
    CHECK((s.inverse().apply(s.apply(x)) - x).norm() < 1e-12);
    CHECK((s.after(s).apply(x) - s.apply(s.apply(x))).norm() < 1e-12);
}

TEST_CASE("invalid primitives are rejected") {
    Mobius m(3);
    CHECK_THROWS_AS(m.push(Inversion<double>{P({0, 0, 0}).coords(), 0.0}), InvalidParameter);
    CHECK_THROWS_AS(m.push(Reflection<double>{P({0, 0, 0}).coords(), 1.0}), InvalidParameter);
    CHECK_THROWS_AS(m.push(Similarity<double>{1.0, 2 * Eigen::MatrixXd::Identity(3, 3), P({0, 0, 0}).coords()}),
                    InvalidParameter);
    CHECK_THROWS_AS(m.push(Inversion<double>{P({0, 0}).coords(), 1.0}), InvalidParameter);
}

TEST_CASE("Mobius maps preserve the cross-ratio-type invariant and invert formally") {
    // |a-b||c-d| / (|a-c||b-d|) in chordal form is Mobius invariant.
    auto ratio = [](const Point& a, const Point& b, const Point& c, const Point& d) {
        return oracle::chordal(a, b) * oracle::chordal(c, d) / (oracle::chordal(a, c) * oracle::chordal(b, d));
    };
    Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = random_mobius(rng, 3);
        const auto mi = m.inverse();
        const auto a = oracle::random_point(rng, 3), b = oracle::random_point(rng, 3);
        const auto c = oracle::random_point(rng, 3), d = oracle::random_point(rng, 3);
        CHECK(ratio(m(a), m(b), m(c), m(d)) == doctest::Approx(ratio(a, b, c, d)).epsilon(1e-7));
        CHECK(oracle::chordal(mi(m(a)), a) < 1e-9);
        const auto n = random_mobius(rng, 3);
        CHECK(oracle::chordal((n * m)(a), n(m(a))) < 1e-12);
        CHECK(oracle::chordal(m.then(n)(a), n(m(a))) < 1e-12);
    }
}

TEST_CASE("ball images match sampled boundary images") {
    Rng rng(15);
    for (int trial = 0; trial < 60; ++trial) {
        const auto m = random_mobius(rng, 3);
        const GeneralizedBall<double> b{oracle::random_point(rng, 3).coords(), rng.uniform(0.2, 1.0),
                                        rng.index(2) == 1};
        GeneralizedBall<double> img;
        try {
            img = image(m, b);
        } catch (const DomainError&) {
            continue;  // boundary passes through an inversion centre
        }
        for (int k = 0; k < 20; ++k) {
            const Point on(Eigen::VectorXd(b.center + b.radius * rng.unit_vector(3)));
            const auto y = m(on);
            if (y.is_infinity()) continue;
            CHECK((y.coords() - img.center).norm() == doctest::Approx(img.radius).epsilon(1e-6));
        }
        // An interior point of b lands in the image set.
        const Point inside = b.exterior ? Point::infinity(3) : Point(b.center);
        CHECK(img.contains(m(inside), 1e-9 * std::max(1.0, img.radius)));
    }
}

TEST_CASE("lipschitz bound dominates sampled difference quotients") {
    Rng rng(16);
    for (int trial = 0; trial < 40; ++trial) {
        Mobius m(3);
        m.push(Inversion<double>{P({0, 0, 0}).coords(), rng.uniform(0.5, 2)});
        m.push(Similarity<double>::scaling(3, rng.uniform(0.5, 2)));
        const GeneralizedBall<double> b{P({3, 0, 0}).coords(), rng.uniform(0.5, 2.5), false};
        const double L = lipschitz_bound(m, b);
        for (int k = 0; k < 50; ++k) {
            const Point x(Eigen::VectorXd(b.center + rng.uniform(0, b.radius) * rng.unit_vector(3)));
            const Point y(Eigen::VectorXd(b.center + rng.uniform(0, b.radius) * rng.unit_vector(3)));
            const double q = (m(x).coords() - m(y).coords()).norm() / (x.coords() - y.coords()).norm();
            CHECK(q <= L * (1 + 1e-12));
        }
    }
    Mobius inv(3);
    inv.push(Inversion<double>{P({0, 0, 0}).coords(), 1.0});
    CHECK(std::isinf(lipschitz_bound(inv, GeneralizedBall<double>{P({0.5, 0, 0}).coords(), 1.0, false})));
}

TEST_CASE("ball exchange involution swaps inside and outside") {
    const auto m = build_ball_exchange_involution(P({1, 1}), 0.5);
    CHECK(m(P({1, 1})).is_infinity());
    const auto y = m(P({1.2, 1}));
    CHECK((y.coords() - P({1, 1}).coords()).norm() == doctest::Approx(1.25));
    CHECK_THROWS_AS(build_ball_exchange_involution(Point::infinity(2), 1.0), InvalidParameter);
}

TEST_CASE("round annuli") {
    const RoundAnnulus<double> a(P({0, 0}), 1.0, std::exp(2.0));
    CHECK(annulus_modulus(a) == doctest::Approx(2.0));
    CHECK_THROWS_AS(RoundAnnulus<double>(P({0, 0}), 2.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(RoundAnnulus<double>(P({0, 0}), 0.0, 1.0), InvalidParameter);
    const auto c = RoundAnnulus<double>::from_chordal(P({0, 0}), 0.6, 0.8);
    CHECK(c.inner() == doctest::Approx(0.75));
    CHECK(c.outer() == doctest::Approx(4.0 / 3.0));
    CHECK_THROWS_AS(RoundAnnulus<double>::from_chordal(P({0, 0}), 0.5, 1.0), InvalidParameter);
}

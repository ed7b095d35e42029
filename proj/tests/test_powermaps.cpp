#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uqr/powermaps.hpp"

using namespace uqr;

TEST_CASE("Julia sphere radius") {
    for (long d : {2, 3, 4, 7})
        for (double lambda : {0.01, 0.25, 1.0, 3.0, 100.0})
            CHECK(julia_radius(Stretch::with_lambda(d, lambda)) ==
                  doctest::Approx(oracle::fixed_radius(d, lambda)).epsilon(1e-12));
    CHECK(julia_radius(Stretch::with_lambda(2, 0.25)) == doctest::Approx(4.0));
    CHECK_THROWS_AS(julia_radius(Stretch(-2, 0.0)), InvalidParameter);
    CHECK_THROWS_AS(Stretch(1, 0.0), InvalidParameter);
    CHECK_THROWS_AS(Stretch::with_lambda(2, 0.0), InvalidParameter);
}

TEST_CASE("stretch composition matches composing the linear maps") {
    const ZorichMap<double> h(3);
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const Stretch a(2 + static_cast<long>(rng.index(3)), rng.uniform(-2, 2));
        const Stretch b(2 + static_cast<long>(rng.index(3)), rng.uniform(-2, 2));
        const auto x = oracle::random_point(rng, 3).coords();
        const auto lhs = apply_stretch(h, stretch_compose(a, b), x);
        const auto rhs = apply_stretch(h, a, apply_stretch(h, b, x));
        CHECK((lhs - rhs).norm() < 1e-12 * (1 + rhs.norm()));
        CHECK((apply_inverse_stretch(h, a, apply_stretch(h, a, x)) - x).norm() < 1e-12);
    }
    CHECK_THROWS_AS(stretch_compose(Stretch(1LL << 40, 0), Stretch(1LL << 40, 0)), BudgetExceeded);
}

TEST_CASE("planar power map is lambda z^d") {
    Rng rng(32);
    for (int d : {2, 3, 4}) {
        for (double lambda : {0.5, 2.0}) {
            const PowerMap<double> f(Stretch::with_lambda(d, lambda), ZorichMap<double>(2));
            for (int i = 0; i < 100; ++i) {
                const auto y = oracle::random_point(rng, 2, -2, 2);
                const auto w = oracle::complex_power({y.coords()[0], y.coords()[1]}, d, lambda);
                const auto fy = f(y).coords();
                CHECK(std::abs(std::complex<double>(fy[0], fy[1]) - w) < 1e-11 * (1 + std::abs(w)));
            }
        }
    }
}

TEST_CASE("spatial power map: modulus law, semiconjugacy and Julia sphere") {
    Rng rng(33);
    const ZorichMap<double> h(3);
    for (int d : {2, 3, 4}) {
        for (double lambda : {0.25, 1.0, 4.0}) {
            const Stretch p = Stretch::with_lambda(d, lambda);
            const PowerMap<double> f(p, h);
            const double rJ = julia_radius(p);
            for (int i = 0; i < 50; ++i) {
                const double r = std::exp(rng.uniform(-1, 1));
                const auto y = oracle::point_at_radius(rng, 3, r);
                CHECK(f(y).coords().norm() == doctest::Approx(lambda * std::pow(r, d)).epsilon(1e-10));
                CHECK(f(oracle::point_at_radius(rng, 3, rJ)).coords().norm() == doctest::Approx(rJ).epsilon(1e-10));
                CHECK(branch_independence_defect(f, y) < 1e-9);
                Eigen::VectorXd x(3);
                x << rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-0.5, 0.5);
                const auto lhs = f(Point(h.eval(x))).coords();
                const auto rhs = h.eval(apply_stretch(h, p, x));
                CHECK((lhs - rhs).norm() < 1e-9 * rhs.norm());
            }
        }
    }
}

TEST_CASE("composition of power maps is the power map of the composed stretch") {
    Rng rng(34);
    const ZorichMap<double> h(3);
    const PowerMap<double> f(Stretch::with_lambda(2, 0.5), h), g(Stretch::with_lambda(3, 2.0), h);
    const PowerMap<double> fg(stretch_compose(f.params(), g.params()), h);
    for (int i = 0; i < 100; ++i) {
        const auto y = oracle::point_at_radius(rng, 3, std::exp(rng.uniform(-0.5, 0.5)));
        const auto a = f(g(y)).coords(), b = fg(y).coords();
        CHECK((a - b).norm() < 1e-9 * b.norm());
    }
}

TEST_CASE("zero and infinity") {
    const ZorichMap<double> h(3);
    const PowerMap<double> f(Stretch::with_lambda(2, 1.0), h);
    CHECK(f(Point::origin(3)).coords().norm() == 0.0);
    CHECK(f(Point::infinity(3)).is_infinity());
    const PowerMap<double> g(Stretch(-2, 0.0), h);
    CHECK(g(Point::origin(3)).is_infinity());
    CHECK(g(Point::infinity(3)).coords().norm() == 0.0);
    // Overflow is clamped rather than producing non-finite coordinates.
    Eigen::VectorXd big(3);
    big << 1e200, 0, 0;
    CHECK(f(Point(big)).is_infinity());
    CHECK_THROWS_AS(branch_independence_defect(f, Point::origin(3)), DomainError);
}

TEST_CASE("preimages: d^{n-1} distinct points mapping back") {
    Rng rng(35);
    for (int dim : {2, 3}) {
        for (int d : {2, 3, 4}) {
            const PowerMap<double> f(Stretch::with_lambda(d, 1.5), ZorichMap<double>(dim));
            for (int i = 0; i < 20; ++i) {
                const auto y = oracle::point_at_radius(rng, dim, std::exp(rng.uniform(-1, 1)));
                const auto pre = preimages(f, y);
                CHECK(pre.size() == static_cast<std::size_t>(dim == 2 ? d : d * d));
                for (const auto& x : pre)
                    CHECK((f(x).coords() - y.coords()).norm() < 1e-9 * y.coords().norm());
                for (std::size_t a = 0; a < pre.size(); ++a)
                    for (std::size_t b = a + 1; b < pre.size(); ++b)
                        CHECK((pre[a].coords() - pre[b].coords()).norm() > 1e-6);
            }
        }
    }
    const PowerMap<double> f(Stretch::with_lambda(2, 1.0), ZorichMap<double>(3));
    CHECK_THROWS_AS(preimages(f, Point::infinity(3)), DomainError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "oracles.hpp"
#include "uqr/zorich.hpp"

using namespace uqr;

namespace {

Eigen::VectorXd V(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

}  // namespace

TEST_CASE("planar Zorich map is the complex exponential") {
    const ZorichMap<double> h(2);
    Rng rng(21);
    for (int i = 0; i < 200; ++i) {
        Eigen::VectorXd x(2);
        x << rng.uniform(-3, 3), rng.uniform(-20, 20);
        const auto w = std::exp(std::complex<double>(x[0], x[1]));
        const auto y = h.eval(x);
        CHECK(y[0] == doctest::Approx(w.real()).epsilon(1e-12));
        CHECK(y[1] == doctest::Approx(w.imag()).epsilon(1e-12));
        const auto back = h.eval(h.inverse(y, BranchIndex{static_cast<std::int64_t>(rng.index(7)) - 3, 0, false}));
        CHECK((back - y).norm() < 1e-12 * y.norm());
    }
}

TEST_CASE("spatial Zorich map: modulus, periods and symmetry") {
    const ZorichMap<double> h(3);
    Rng rng(22);
    for (int i = 0; i < 300; ++i) {
        const auto x = V(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3, 3));
        const auto y = h.eval(x);
        CHECK(y.norm() == doctest::Approx(std::exp(x[2])).epsilon(1e-12));
        CHECK((h.eval(x + V(2, 0, 0)) - y).norm() < 1e-12 * y.norm());
        CHECK((h.eval(x + V(0, 2, 0)) - y).norm() < 1e-12 * y.norm());
        // Half-turn about the vertical line through an integer lattice point.
        const auto p = V(std::floor(rng.uniform(-3, 3)), std::floor(rng.uniform(-3, 3)), 0);
        const auto turned = V(2 * p[0] - x[0], 2 * p[1] - x[1], x[2]);
        CHECK((h.eval(turned) - y).norm() < 1e-10 * y.norm());
    }
}

TEST_CASE("translation by (1,1,0) is not a deck transformation") {
    // It rotates the image by pi about the vertical axis instead.
    const ZorichMap<double> h(3);
    const auto x = V(0.3, 0.1, 0.0);
    const auto y = h.eval(x);
    const auto z = h.eval(x + V(1, 1, 0));
    CHECK((z - y).norm() > 0.5);
    CHECK(z[0] == doctest::Approx(-y[0]));
    CHECK(z[1] == doctest::Approx(-y[1]));
    CHECK(z[2] == doctest::Approx(y[2]));
}

TEST_CASE("fundamental square covers the upper hemisphere") {
    const ZorichMap<double> h(3);
    Rng rng(23);
    for (int i = 0; i < 500; ++i) {
        const auto y = h.eval(V(rng.uniform(0, 1), rng.uniform(0, 1), 0.0));
        CHECK(y[2] >= -1e-15);
        CHECK(y.norm() == doctest::Approx(1.0));
    }
    CHECK((h.eval(V(0.5, 0.5, 0)) - V(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("every inverse branch is a right inverse") {
    const ZorichMap<double> h(3);
    Rng rng(24);
    for (int i = 0; i < 500; ++i) {
        const auto y = oracle::point_at_radius(rng, 3, std::exp(rng.uniform(-5, 5)));
        const BranchIndex b{static_cast<std::int64_t>(rng.index(9)) - 4, static_cast<std::int64_t>(rng.index(9)) - 4,
                            rng.index(2) == 1};
        const auto x = zorich_inverse(h, y, b);
        CHECK((h.eval(x) - y.coords()).norm() < 1e-10 * y.coords().norm());
    }
}

TEST_CASE("domain and dimension errors") {
    const ZorichMap<double> h(3);
    CHECK_THROWS_AS(h.inverse(V(0, 0, 0)), DomainError);
    CHECK_THROWS_AS(zorich_inverse(h, Point::infinity(3)), DomainError);
    CHECK_THROWS_AS(h.eval(Eigen::VectorXd::Zero(2)), InvalidParameter);
    CHECK_THROWS_AS(ZorichMap<double>(4), InvalidParameter);
}

TEST_CASE("long double instantiation agrees with double") {
    const ZorichMap<long double> hl(3);
    const ZorichMap<double> h(3);
    Eigen::Matrix<long double, Eigen::Dynamic, 1> xl(3);
    xl << 0.37L, -1.21L, 0.4L;
    const auto yl = hl.eval(xl);
    const auto y = h.eval(V(0.37, -1.21, 0.4));
    for (int i = 0; i < 3; ++i) CHECK(static_cast<double>(yl[i]) == doctest::Approx(y[i]).epsilon(1e-14));
}

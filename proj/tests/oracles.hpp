#pragma once

// Independent reference computations for the tests: nothing here calls the
// library routine it is used to check.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "uqr/geometry.hpp"
#include "uqr/random.hpp"

namespace oracle {

inline uqr::Point random_point(uqr::Rng& rng, int dim, double lo = -3.0, double hi = 3.0) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.uniform(lo, hi);
    return uqr::Point(v);
}

/// Point with |x| = r in a random direction.
inline uqr::Point point_at_radius(uqr::Rng& rng, int dim, double r) {
    return uqr::Point(Eigen::VectorXd(r * rng.unit_vector(dim)));
}

/// Inverse stereographic projection onto the unit sphere of R^{n+1}.
inline Eigen::VectorXd lift(const uqr::Point& p) {
    const int n = p.dim();
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n + 1);
    if (p.is_infinity()) {
        s[n] = 1.0;
        return s;
    }
    const auto& x = p.coords();
    const double q = x.squaredNorm();
    s.head(n) = 2.0 * x / (1.0 + q);
    s[n] = (q - 1.0) / (1.0 + q);
    return s;
}

/// Chordal distance as half the chord between the lifted points.
inline double chordal(const uqr::Point& a, const uqr::Point& b) { return 0.5 * (lift(a) - lift(b)).norm(); }

/// Root of sum r_i^s = 1 by Newton's method in long double.
inline long double moran_root(const std::vector<double>& ratios) {
    long double s = 0.5L;
    for (int it = 0; it < 200; ++it) {
        long double g = -1.0L, dg = 0.0L;
        for (double r : ratios) {
            const long double t = std::pow(static_cast<long double>(r), s);
            g += t;
            dg += t * std::log(static_cast<long double>(r));
        }
        const long double step = g / dg;
        s -= step;
        if (std::fabs(step) < 1e-18L) break;
    }
    return s;
}

/// Fixed sphere radius of |y| -> lambda |y|^d by bisection on log r.
inline double fixed_radius(long d, double lambda) {
    double lo = -200.0, hi = 200.0;
    auto g = [&](double t) { return std::log(lambda) + static_cast<double>(d - 1) * t; };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

inline std::complex<double> complex_power(std::complex<double> z, int d, double lambda) {
    std::complex<double> w = lambda;
    for (int i = 0; i < d; ++i) w *= z;
    return w;
}

}  // namespace oracle

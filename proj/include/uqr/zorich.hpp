#pragma once

// Zorich-type strongly automorphic map h: R^3 -> R^3 \ {0}, and its planar
// analogue h = exp for n = 2.
//
// n = 3: the base square [0,1]^2 goes to the upper unit hemisphere by
//   u' = 2u-1, v' = 2v-1, s = max(|u'|,|v'|),
//   psi(u,v) = (sin(pi s/2) (u',v')/|(u',v')|, cos(pi s/2)),
// centre -> north pole, boundary -> equator. x1 and x2 are folded into [0,1]
// by reflections in the integer planes; the image is flipped to the lower
// hemisphere when the total number of folds is odd. Finally h(x) = e^{x3} psi.
//
// The automorphism group consists of translations by 2Z^2 and half-turns
// x_h -> 2p - x_h about integer points p; every fibre is one orbit.
//
// n = 2: h(a, b) = e^a (cos b, sin b); the group is b -> b + 2 pi k.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "uqr/error.hpp"
#include "uqr/geometry.hpp"

namespace uqr {

/// Selects a preimage branch: x_h -> (parity ? -x_h : x_h) + period * (m1, m2).
/// For n = 2 only m1 is used (shift of the angle by 2 pi m1).
struct BranchIndex {
    std::int64_t m1 = 0;
    std::int64_t m2 = 0;
    bool parity = false;
};

/// Rigid motion acting on the horizontal coordinates only:
/// x_h -> (half_turn ? -x_h : x_h) + shift_h. The radial entry of `shift` is
/// ignored.
template <typename Scalar>
struct HorizontalMotion {
    Vec<Scalar> shift;
    bool half_turn = false;
};

template <typename Scalar>
class ZorichMap {
public:
    explicit ZorichMap(int dim = 3) : dim_(dim) {
        if (dim != 2 && dim != 3) throw InvalidParameter("Zorich map is implemented for n = 2, 3");
    }

    int dim() const { return dim_; }

    /// Coordinate carrying ln|h(x)|.
    int radial_axis() const { return dim_ == 2 ? 0 : 2; }

    /// Translation period of the automorphism lattice along each horizontal axis.
    Scalar period() const { return dim_ == 2 ? Scalar(2) * std::numbers::pi_v<Scalar> : Scalar(2); }

    Vec<Scalar> eval(const Vec<Scalar>& x) const {
        check_dim(x);
        using std::cos;
        using std::exp;
        using std::sin;
        if (dim_ == 2) {
            Vec<Scalar> y(2);
            const Scalar r = exp(x[0]);
            y << r * cos(x[1]), r * sin(x[1]);
            return y;
        }
        const auto [u, ku] = fold(x[0]);
        const auto [v, kv] = fold(x[1]);
        Vec<Scalar> w = hemisphere(u, v);
        if (((ku + kv) % 2 + 2) % 2 == 1) w[2] = -w[2];
        return exp(x[2]) * w;
    }

    /// Point of h^{-1}(y) on the requested branch.
    Vec<Scalar> inverse(const Vec<Scalar>& y, const BranchIndex& branch = {}) const {
        check_dim(y);
        using std::atan2;
        using std::log;
        const Scalar r = y.norm();
        if (!(r > Scalar(0)) || !std::isfinite(static_cast<double>(r)))
            throw DomainError("Zorich inverse is undefined at 0 and infinity");
        if (dim_ == 2) {
            Vec<Scalar> x(2);
            x << log(r), atan2(y[1], y[0]) + period() * Scalar(branch.m1);
            return x;
        }
        const Vec<Scalar> w = y / r;
        const Scalar horiz = std::hypot(w[0], w[1]);
        const Scalar s = Scalar(2) / std::numbers::pi_v<Scalar> * atan2(horiz, std::abs(w[2]));
        const Scalar m = std::max(std::abs(w[0]), std::abs(w[1]));
        Scalar up(0), vp(0);
        if (m > Scalar(0)) {
            up = s * w[0] / m;
            vp = s * w[1] / m;
        }
        Scalar u = (up + Scalar(1)) / Scalar(2);
        const Scalar v = (vp + Scalar(1)) / Scalar(2);
        // Lower hemisphere: the base square shifted by e1 carries one fold.
        if (w[2] < Scalar(0)) u = Scalar(2) - u;
        Vec<Scalar> x(3);
        x << u, v, log(r);
        return apply(branch_motion(branch), x);
    }

    Vec<Scalar> apply(const HorizontalMotion<Scalar>& g, Vec<Scalar> x) const {
        for (int i = 0; i < dim_; ++i) {
            if (i == radial_axis()) continue;
            if (g.half_turn) x[i] = -x[i];
            x[i] += g.shift[i];
        }
        return x;
    }

    HorizontalMotion<Scalar> branch_motion(const BranchIndex& b) const {
        HorizontalMotion<Scalar> g{Vec<Scalar>::Zero(dim_), false};
        if (dim_ == 2) {
            g.shift[1] = period() * Scalar(b.m1);
        } else {
            g.shift[0] = period() * Scalar(b.m1);
            g.shift[1] = period() * Scalar(b.m2);
            g.half_turn = b.parity;
        }
        return g;
    }

private:
    void check_dim(const Vec<Scalar>& x) const {
        if (x.size() != dim_) throw InvalidParameter("point dimension does not match the Zorich map");
    }

    // Triangle wave into [0,1] and the number of the unit cell.
    static std::pair<Scalar, std::int64_t> fold(Scalar t) {
        using std::floor;
        const Scalar k = floor(t);
        Scalar f = t - k;
        const auto ki = static_cast<std::int64_t>(k);
        if ((ki % 2 + 2) % 2 == 1) f = Scalar(1) - f;
        return {f, ki};
    }

    static Vec<Scalar> hemisphere(Scalar u, Scalar v) {
        using std::cos;
        using std::sin;
        const Scalar up = Scalar(2) * u - Scalar(1);
        const Scalar vp = Scalar(2) * v - Scalar(1);
        const Scalar s = std::max(std::abs(up), std::abs(vp));
        const Scalar angle = std::numbers::pi_v<Scalar> * s / Scalar(2);
        Vec<Scalar> w(3);
        if (s == Scalar(0)) {
            w << Scalar(0), Scalar(0), Scalar(1);
            return w;
        }
        const Scalar k = sin(angle) / std::hypot(up, vp);
        w << k * up, k * vp, cos(angle);
        return w;
    }

    int dim_;
};

template <typename Scalar>
Vec<Scalar> zorich_eval(const ZorichMap<Scalar>& h, const Vec<Scalar>& x) {
    return h.eval(x);
}

template <typename Scalar>
Vec<Scalar> zorich_inverse(const ZorichMap<Scalar>& h, const SpherePoint<Scalar>& y, const BranchIndex& b = {}) {
    if (y.is_infinity()) throw DomainError("Zorich inverse is undefined at infinity");
    return h.inverse(y.coords(), b);
}

/// |h(g(x)) − h(x)|; vanishes for elements of the automorphism group.
template <typename Scalar>
Scalar automorphy_defect(const ZorichMap<Scalar>& h, const Vec<Scalar>& x, const HorizontalMotion<Scalar>& g) {
    return (h.eval(h.apply(g, x)) - h.eval(x)).norm();
}

}  // namespace uqr

#pragma once

// Power-type maps f_{d,λ} defined through the Schröder equation
// f∘h = h∘A_{d,λ}, where A_{d,λ} multiplies every coordinate by d and adds
// ln λ on the radial axis of h.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "uqr/error.hpp"
#include "uqr/geometry.hpp"
#include "uqr/zorich.hpp"

namespace uqr {

/// Stretch A_{d,λ}, with λ kept as ln λ.
template <typename Scalar>
struct StretchParams {
    std::int64_t d = 2;
    Scalar loglambda{0};

    StretchParams() = default;
    StretchParams(std::int64_t degree, Scalar log_lambda) : d(degree), loglambda(log_lambda) {
        if (d > -2 && d < 2) throw InvalidParameter("stretch degree must satisfy |d| >= 2");
        if (!std::isfinite(static_cast<double>(loglambda))) throw InvalidParameter("ln(lambda) must be finite");
    }

    static StretchParams with_lambda(std::int64_t degree, Scalar lambda) {
        if (!(lambda > Scalar(0))) throw InvalidParameter("lambda must be positive");
        using std::log;
        return StretchParams(degree, log(lambda));
    }

    Scalar lambda() const {
        using std::exp;
        return exp(loglambda);
    }

    friend bool operator==(const StretchParams&, const StretchParams&) = default;
};

using Stretch = StretchParams<double>;

/// A_{d1,λ1} ∘ A_{d2,λ2} = A_{d1 d2, λ1 λ2^{d1}}.
template <typename Scalar>
StretchParams<Scalar> stretch_compose(const StretchParams<Scalar>& outer, const StretchParams<Scalar>& inner) {
    std::int64_t d = 0;
    if (__builtin_mul_overflow(outer.d, inner.d, &d)) throw BudgetExceeded("composed degree overflows 64 bits");
    return StretchParams<Scalar>(d, outer.loglambda + Scalar(outer.d) * inner.loglambda);
}

/// Radius of the Julia sphere of f_{d,λ}: λ^{1/(1−d)}.
template <typename Scalar>
Scalar julia_radius(const StretchParams<Scalar>& p) {
    if (p.d <= 1) throw InvalidParameter("julia_radius requires d >= 2");
    using std::exp;
    return exp(p.loglambda / Scalar(1 - p.d));
}

template <typename Scalar>
Vec<Scalar> apply_stretch(const ZorichMap<Scalar>& h, const StretchParams<Scalar>& p, const Vec<Scalar>& x) {
    Vec<Scalar> y = Scalar(p.d) * x;
    y[h.radial_axis()] += p.loglambda;
    return y;
}

template <typename Scalar>
Vec<Scalar> apply_inverse_stretch(const ZorichMap<Scalar>& h, const StretchParams<Scalar>& p, Vec<Scalar> y) {
    y[h.radial_axis()] -= p.loglambda;
    return y / Scalar(p.d);
}

template <typename Scalar>
class PowerMap;

template <typename Scalar>
Scalar branch_independence_defect(const PowerMap<Scalar>& f, const SpherePoint<Scalar>& y);

/// f_{d,λ}. Construction checks on a few fixed points that the Schröder
/// solution does not depend on the chosen branch of h^{-1}.
template <typename Scalar>
class PowerMap {
public:
    PowerMap(StretchParams<Scalar> params, ZorichMap<Scalar> h) : params_(params), h_(h) {
        for (const auto& y : probe_points()) {
            if (!(branch_independence_defect(*this, y) < Scalar(1e-9)))
                throw ConstructionFailed("Schröder solution is branch dependent for this (d, lambda)");
        }
    }

    const StretchParams<Scalar>& params() const { return params_; }
    const ZorichMap<Scalar>& zorich() const { return h_; }
    int dim() const { return h_.dim(); }

    SpherePoint<Scalar> operator()(const SpherePoint<Scalar>& y) const { return eval(y, BranchIndex{}); }

    /// f(y) computed through the given branch of h^{-1}. 0 and ∞ are fixed
    /// for d > 0 and swapped for d < 0; results outside floating range are
    /// clamped to 0 or ∞.
    SpherePoint<Scalar> eval(const SpherePoint<Scalar>& y, const BranchIndex& branch) const {
        const int n = h_.dim();
        const bool zero = !y.is_infinity() && y.coords().norm() == Scalar(0);
        if (zero || y.is_infinity()) {
            const bool to_infinity = (params_.d > 0) == y.is_infinity();
            return to_infinity ? SpherePoint<Scalar>::infinity(n) : SpherePoint<Scalar>::origin(n);
        }
        using std::log;
        const Scalar log_r = Scalar(params_.d) * log(y.coords().norm()) + params_.loglambda;
        const Scalar limit = log(std::numeric_limits<Scalar>::max()) - Scalar(1);
        if (log_r > limit) return SpherePoint<Scalar>::infinity(n);
        if (log_r < -limit) return SpherePoint<Scalar>::origin(n);
        const Vec<Scalar> z = h_.inverse(y.coords(), branch);
        return SpherePoint<Scalar>(h_.eval(apply_stretch(h_, params_, z)));
    }

private:
    std::vector<SpherePoint<Scalar>> probe_points() const {
        std::vector<SpherePoint<Scalar>> pts;
        const int n = h_.dim();
        const Scalar raw[][3] = {{0.3, -0.7, 0.4}, {-1.2, 0.5, -0.9}, {0.05, 0.9, 1.7}, {2.0, -0.3, -0.2}};
        for (const auto& r : raw) {
            Vec<Scalar> v(n);
            for (int i = 0; i < n; ++i) v[i] = r[i];
            pts.emplace_back(v);
        }
        return pts;
    }

    StretchParams<Scalar> params_;
    ZorichMap<Scalar> h_;
};

template <typename Scalar>
SpherePoint<Scalar> power_eval(const PowerMap<Scalar>& f, const SpherePoint<Scalar>& y) {
    return f(y);
}

/// Relative spread of h(A(z)) over a fundamental set of branches z of
/// h^{-1}(y). Near zero exactly when A G A^{-1} ⊂ G on this fibre.
template <typename Scalar>
Scalar branch_independence_defect(const PowerMap<Scalar>& f, const SpherePoint<Scalar>& y) {
    if (y.is_infinity() || y.coords().norm() == Scalar(0))
        throw DomainError("branch defect is undefined at 0 and infinity");
    const auto& h = f.zorich();
    const Vec<Scalar> ref = h.eval(apply_stretch(h, f.params(), h.inverse(y.coords())));
    std::vector<BranchIndex> branches;
    if (h.dim() == 2) {
        for (std::int64_t k = -2; k <= 2; ++k) branches.push_back({k, 0, false});
    } else {
        for (int parity = 0; parity < 2; ++parity)
            for (std::int64_t a = -1; a <= 1; ++a)
                for (std::int64_t b = -1; b <= 1; ++b) branches.push_back({a, b, parity == 1});
    }
    Scalar defect(0);
    for (const auto& br : branches) {
        const Vec<Scalar> v = h.eval(apply_stretch(h, f.params(), h.inverse(y.coords(), br)));
        defect = std::max(defect, (v - ref).norm());
    }
    return defect / ref.norm();
}

/// All x with f(x) = y: h(A^{-1}(z)) for z ranging over h^{-1}(y) modulo
/// A G A^{-1}, i.e. |d|^{n-1} lattice offsets. Near-duplicates are merged.
template <typename Scalar>
std::vector<SpherePoint<Scalar>> preimages(const PowerMap<Scalar>& f, const SpherePoint<Scalar>& y) {
    if (y.is_infinity() || y.coords().norm() == Scalar(0))
        throw DomainError("preimages of 0 and infinity are the fixed points themselves");
    const auto& h = f.zorich();
    const std::int64_t d = std::abs(f.params().d);
    const Vec<Scalar> z0 = h.inverse(y.coords());
    std::vector<SpherePoint<Scalar>> out;
    const Scalar radius = std::exp((std::log(y.coords().norm()) - f.params().loglambda) / Scalar(f.params().d));
    auto push_unique = [&](Vec<Scalar> x) {
        for (const auto& p : out)
            if ((p.coords() - x).norm() <= Scalar(1e-9) * radius) return;
        out.emplace_back(std::move(x));
    };
    const std::int64_t second = h.dim() == 2 ? 1 : d;
    for (std::int64_t a = 0; a < d; ++a) {
        for (std::int64_t b = 0; b < second; ++b) {
            const Vec<Scalar> z = h.apply(h.branch_motion({a, b, false}), z0);
            push_unique(h.eval(apply_inverse_stretch(h, f.params(), z)));
        }
    }
    return out;
}

}  // namespace uqr

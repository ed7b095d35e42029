#pragma once

// Points of the n-sphere R^n ∪ {∞}, the chordal metric, Möbius maps stored as
// stacks of primitive reflections/inversions/similarities, and round annuli.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "uqr/error.hpp"

namespace uqr {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A point of S^n. Either finite coordinates or the distinguished point ∞.
template <typename Scalar>
class SpherePoint {
public:
    SpherePoint() = default;

    explicit SpherePoint(Vec<Scalar> coords) : coords_(std::move(coords)), dim_(static_cast<int>(coords_.size())) {
        if (dim_ == 0) throw InvalidParameter("sphere point needs at least one coordinate");
        if (!coords_.allFinite()) throw InvalidParameter("finite sphere point has non-finite coordinates");
    }

    static SpherePoint infinity(int dim) {
        SpherePoint p;
        p.infinite_ = true;
        p.dim_ = dim;
        return p;
    }

    static SpherePoint origin(int dim) { return SpherePoint(Vec<Scalar>::Zero(dim)); }

    bool is_infinity() const { return infinite_; }
    int dim() const { return dim_; }

    const Vec<Scalar>& coords() const {
        if (infinite_) throw DomainError("the point at infinity has no coordinates");
        return coords_;
    }

    Scalar norm() const {
        return infinite_ ? std::numeric_limits<Scalar>::infinity() : coords_.norm();
    }

    friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.coords_ == b.coords_;
    }

private:
    Vec<Scalar> coords_;
    bool infinite_ = false;
    int dim_ = 0;
};

using Point = SpherePoint<double>;

/// χ(x,y) = |x−y| / sqrt((1+|x|²)(1+|y|²)), χ(x,∞) = 1/sqrt(1+|x|²).
template <typename Scalar>
Scalar chordal_distance(const SpherePoint<Scalar>& x, const SpherePoint<Scalar>& y) {
    using std::sqrt;
    if (x.is_infinity() && y.is_infinity()) return Scalar(0);
    if (x.is_infinity()) return Scalar(1) / sqrt(Scalar(1) + y.coords().squaredNorm());
    if (y.is_infinity()) return Scalar(1) / sqrt(Scalar(1) + x.coords().squaredNorm());
    const Scalar d = (x.coords() - y.coords()).norm();
    const Scalar chi = d / sqrt((Scalar(1) + x.coords().squaredNorm()) * (Scalar(1) + y.coords().squaredNorm()));
    return chi > Scalar(1) ? Scalar(1) : chi;
}

/// Euclidean norm of the image of `p` under a chordal isometry of the sphere
/// sending `center` to 0. Equals χ/sqrt(1−χ²); ∞ for antipodal pairs.
template <typename Scalar>
Scalar normalized_radius(const SpherePoint<Scalar>& center, const SpherePoint<Scalar>& p) {
    using std::sqrt;
    constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
    if (center.is_infinity() && p.is_infinity()) return Scalar(0);
    if (center.is_infinity()) {
        const Scalar r = p.coords().norm();
        return r == Scalar(0) ? inf : Scalar(1) / r;
    }
    if (p.is_infinity()) {
        const Scalar r = center.coords().norm();
        return r == Scalar(0) ? inf : Scalar(1) / r;
    }
    const auto& c = center.coords();
    const auto& x = p.coords();
    const Scalar den = Scalar(1) + Scalar(2) * c.dot(x) + c.squaredNorm() * x.squaredNorm();
    if (den <= Scalar(0)) return inf;
    return (c - x).norm() / sqrt(den);
}

// ---------------------------------------------------------------------------
// Möbius primitives

/// Reflection in the hyperplane {x : x·normal = offset}.
template <typename Scalar>
struct Reflection {
    Vec<Scalar> normal;
    Scalar offset{};
};

/// Inversion in the sphere ∂B(center, radius).
template <typename Scalar>
struct Inversion {
    Vec<Scalar> center;
    Scalar radius{};
};

/// x ↦ scale · orthogonal · x + translation.
template <typename Scalar>
struct Similarity {
    Scalar scale{1};
    Mat<Scalar> orthogonal;
    Vec<Scalar> translation;

    static Similarity identity(int n) { return {Scalar(1), Mat<Scalar>::Identity(n, n), Vec<Scalar>::Zero(n)}; }
    static Similarity scaling(int n, Scalar s) { return {s, Mat<Scalar>::Identity(n, n), Vec<Scalar>::Zero(n)}; }
    static Similarity translation_by(Vec<Scalar> t) {
        const auto n = static_cast<int>(t.size());
        return {Scalar(1), Mat<Scalar>::Identity(n, n), std::move(t)};
    }

    int dim() const { return static_cast<int>(translation.size()); }

    Vec<Scalar> apply(const Vec<Scalar>& x) const { return scale * (orthogonal * x) + translation; }

    Similarity inverse() const {
        Mat<Scalar> qt = orthogonal.transpose();
        Vec<Scalar> t = -(qt * translation) / scale;
        return {Scalar(1) / scale, std::move(qt), std::move(t)};
    }

    /// (*this)∘inner
    Similarity after(const Similarity& inner) const {
        return {scale * inner.scale, orthogonal * inner.orthogonal, apply(inner.translation)};
    }

    /// Unique fixed point of a contracting similarity.
    Vec<Scalar> fixed_point() const {
        const int n = dim();
        Mat<Scalar> a = Mat<Scalar>::Identity(n, n) - scale * orthogonal;
        return a.partialPivLu().solve(translation);
    }
};

template <typename Scalar>
using MobiusPrimitive = std::variant<Reflection<Scalar>, Inversion<Scalar>, Similarity<Scalar>>;

namespace detail {

template <typename Scalar>
void validate(const Reflection<Scalar>& r) {
    if (!(r.normal.norm() > Scalar(0))) throw InvalidParameter("reflection normal must be nonzero");
    if (!r.normal.allFinite() || !std::isfinite(static_cast<double>(r.offset)))
        throw InvalidParameter("reflection data must be finite");
}

template <typename Scalar>
void validate(const Inversion<Scalar>& inv) {
    if (!(inv.radius > Scalar(0))) throw InvalidParameter("inversion radius must be positive");
    if (!inv.center.allFinite()) throw InvalidParameter("inversion center must be finite");
}

template <typename Scalar>
void validate(const Similarity<Scalar>& s) {
    if (!(s.scale > Scalar(0))) throw InvalidParameter("similarity scale must be positive");
    const int n = s.dim();
    if (s.orthogonal.rows() != n || s.orthogonal.cols() != n)
        throw InvalidParameter("similarity orthogonal part has wrong shape");
    const Scalar err = (s.orthogonal.transpose() * s.orthogonal - Mat<Scalar>::Identity(n, n)).norm();
    if (!(err < Scalar(1e-9))) throw InvalidParameter("similarity linear part is not orthogonal");
}

template <typename Scalar>
int dim_of(const MobiusPrimitive<Scalar>& p) {
    return std::visit(
        [](const auto& q) -> int {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, Reflection<Scalar>>) return static_cast<int>(q.normal.size());
            else if constexpr (std::is_same_v<T, Inversion<Scalar>>) return static_cast<int>(q.center.size());
            else return q.dim();
        },
        p);
}

}  // namespace detail

template <typename Scalar>
SpherePoint<Scalar> apply(const Reflection<Scalar>& r, const SpherePoint<Scalar>& x) {
    if (x.is_infinity()) return x;
    const Vec<Scalar> n = r.normal.normalized();
    const Scalar off = r.offset / r.normal.norm();
    return SpherePoint<Scalar>(x.coords() - Scalar(2) * (x.coords().dot(n) - off) * n);
}

template <typename Scalar>
SpherePoint<Scalar> apply(const Inversion<Scalar>& inv, const SpherePoint<Scalar>& x) {
    if (x.is_infinity()) return SpherePoint<Scalar>(inv.center);
    const Vec<Scalar> v = x.coords() - inv.center;
    const Scalar d2 = v.squaredNorm();
    if (d2 == Scalar(0)) return SpherePoint<Scalar>::infinity(x.dim());
    return SpherePoint<Scalar>(inv.center + (inv.radius * inv.radius / d2) * v);
}

template <typename Scalar>
SpherePoint<Scalar> apply(const Similarity<Scalar>& s, const SpherePoint<Scalar>& x) {
    if (x.is_infinity()) return x;
    return SpherePoint<Scalar>(s.apply(x.coords()));
}

template <typename Scalar>
MobiusPrimitive<Scalar> inverse(const MobiusPrimitive<Scalar>& p) {
    if (const auto* s = std::get_if<Similarity<Scalar>>(&p)) return s->inverse();
    return p;  // reflections and inversions are involutions
}

/// A Möbius transformation of R^n ∪ {∞} as an ordered stack of primitives;
/// the first primitive is applied first.
template <typename Scalar>
class MobiusMap {
public:
    explicit MobiusMap(int dim = 0) : dim_(dim) {}

    MobiusMap(int dim, std::vector<MobiusPrimitive<Scalar>> stack) : dim_(dim) {
        for (auto& p : stack) push(std::move(p));
    }

    static MobiusMap identity(int dim) { return MobiusMap(dim); }

    MobiusMap& push(MobiusPrimitive<Scalar> p) {
        std::visit([](const auto& q) { detail::validate(q); }, p);
        if (detail::dim_of<Scalar>(p) != dim_) throw InvalidParameter("primitive dimension mismatch");
        stack_.push_back(std::move(p));
        return *this;
    }

    int dim() const { return dim_; }
    const std::vector<MobiusPrimitive<Scalar>>& primitives() const { return stack_; }

    SpherePoint<Scalar> operator()(const SpherePoint<Scalar>& x) const {
        SpherePoint<Scalar> y = x;
        for (const auto& p : stack_) y = std::visit([&](const auto& q) { return uqr::apply(q, y); }, p);
        return y;
    }

    /// Formal inverse: reversed stack of inverted primitives.
    MobiusMap inverse() const {
        MobiusMap inv(dim_);
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) inv.stack_.push_back(uqr::inverse(*it));
        return inv;
    }

    /// The map x ↦ next(this(x)).
    MobiusMap then(const MobiusMap& next) const {
        if (next.dim_ != dim_) throw InvalidParameter("Möbius dimension mismatch");
        MobiusMap out = *this;
        out.stack_.insert(out.stack_.end(), next.stack_.begin(), next.stack_.end());
        return out;
    }

    /// Composition (a*b)(x) = a(b(x)).
    friend MobiusMap operator*(const MobiusMap& a, const MobiusMap& b) { return b.then(a); }

private:
    int dim_;
    std::vector<MobiusPrimitive<Scalar>> stack_;
};

using Mobius = MobiusMap<double>;

template <typename Scalar>
SpherePoint<Scalar> mobius_apply(const MobiusMap<Scalar>& m, const SpherePoint<Scalar>& x) {
    return m(x);
}

/// Inversion in ∂B(center, radius): swaps the ball with its complement.
template <typename Scalar>
MobiusMap<Scalar> build_ball_exchange_involution(const SpherePoint<Scalar>& center, Scalar radius) {
    if (center.is_infinity()) throw InvalidParameter("ball center must be finite");
    if (!(radius > Scalar(0))) throw InvalidParameter("ball radius must be positive");
    MobiusMap<Scalar> m(center.dim());
    m.push(Inversion<Scalar>{center.coords(), radius});
    return m;
}

// ---------------------------------------------------------------------------
// Generalized balls: open Euclidean balls or complements of closed balls.

template <typename Scalar>
struct GeneralizedBall {
    Vec<Scalar> center;
    Scalar radius{};
    bool exterior = false;  // true: {|x−c| > r} ∪ {∞}

    int dim() const { return static_cast<int>(center.size()); }

    bool contains(const SpherePoint<Scalar>& p, Scalar tol = Scalar(0)) const {
        if (p.is_infinity()) return exterior;
        const Scalar d = (p.coords() - center).norm();
        return exterior ? d > radius - tol : d < radius + tol;
    }

    /// True when `inner` lies inside this set, up to `tol` (negative tol
    /// demands a margin).
    bool contains(const GeneralizedBall& inner, Scalar tol = Scalar(0)) const {
        const Scalar d = (inner.center - center).norm();
        if (!exterior && !inner.exterior) return d + inner.radius <= radius + tol;
        if (exterior && !inner.exterior) return d >= inner.radius + radius - tol;
        if (exterior && inner.exterior) return d + radius <= inner.radius + tol;
        return false;
    }

    /// Euclidean diameter; infinite for exterior balls.
    Scalar diameter() const {
        return exterior ? std::numeric_limits<Scalar>::infinity() : Scalar(2) * radius;
    }
};

template <typename Scalar>
GeneralizedBall<Scalar> image(const Reflection<Scalar>& r, const GeneralizedBall<Scalar>& b) {
    const auto c = uqr::apply(r, SpherePoint<Scalar>(b.center));
    return {c.coords(), b.radius, b.exterior};
}

template <typename Scalar>
GeneralizedBall<Scalar> image(const Similarity<Scalar>& s, const GeneralizedBall<Scalar>& b) {
    return {s.apply(b.center), s.scale * b.radius, b.exterior};
}

template <typename Scalar>
GeneralizedBall<Scalar> image(const Inversion<Scalar>& inv, const GeneralizedBall<Scalar>& b) {
    const Vec<Scalar> v = b.center - inv.center;
    const Scalar dist = v.norm();
    const Scalar gap = dist * dist - b.radius * b.radius;
    if (std::abs(gap) <= Scalar(1e-14) * (dist * dist + b.radius * b.radius))
        throw DomainError("inversion center lies on the ball boundary; image is a half-space");
    const Scalar r2 = inv.radius * inv.radius;
    // Kind flips when the inversion center lies inside the closed ball.
    return {inv.center + (r2 / gap) * v, r2 * b.radius / std::abs(gap), gap < Scalar(0) ? !b.exterior : b.exterior};
}

template <typename Scalar>
GeneralizedBall<Scalar> image(const MobiusMap<Scalar>& m, GeneralizedBall<Scalar> b) {
    for (const auto& p : m.primitives()) b = std::visit([&](const auto& q) { return image(q, b); }, p);
    return b;
}

/// Upper bound for the Euclidean Lipschitz constant of `m` on the ball `b`.
template <typename Scalar>
Scalar lipschitz_bound(const MobiusMap<Scalar>& m, GeneralizedBall<Scalar> b) {
    constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
    Scalar bound(1);
    for (const auto& p : m.primitives()) {
        if (const auto* s = std::get_if<Similarity<Scalar>>(&p)) {
            bound *= s->scale;
        } else if (const auto* inv = std::get_if<Inversion<Scalar>>(&p)) {
            const Scalar d = (b.center - inv->center).norm();
            const Scalar clearance = b.exterior ? b.radius - d : d - b.radius;
            if (!(clearance > Scalar(0))) return inf;
            bound *= inv->radius * inv->radius / (clearance * clearance);
        }
        b = std::visit([&](const auto& q) { return image(q, b); }, p);
    }
    return bound;
}

// ---------------------------------------------------------------------------
// Round annuli

/// {x : r < |x − center| < s}. Chordal annuli are stored after the isometric
/// normalization that sends their center to 0.
template <typename Scalar>
class RoundAnnulus {
public:
    RoundAnnulus(SpherePoint<Scalar> center, Scalar inner, Scalar outer)
        : center_(std::move(center)), inner_(inner), outer_(outer) {
        if (!(inner > Scalar(0)) || !(outer > inner) || !std::isfinite(static_cast<double>(outer)))
            throw InvalidParameter("round annulus needs 0 < r < s < inf");
    }

    /// Annulus {r < χ(·, center) < s} in chordal radii, normalized to a
    /// Euclidean annulus about 0.
    static RoundAnnulus from_chordal(const SpherePoint<Scalar>& center, Scalar chordal_inner, Scalar chordal_outer) {
        using std::sqrt;
        if (!(chordal_inner > Scalar(0)) || !(chordal_outer > chordal_inner) || !(chordal_outer < Scalar(1)))
            throw InvalidParameter("chordal annulus needs 0 < r < s < 1");
        auto radius = [](Scalar t) { return t / sqrt(Scalar(1) - t * t); };
        return RoundAnnulus(center, radius(chordal_inner), radius(chordal_outer));
    }

    const SpherePoint<Scalar>& center() const { return center_; }
    Scalar inner() const { return inner_; }
    Scalar outer() const { return outer_; }

private:
    SpherePoint<Scalar> center_;
    Scalar inner_;
    Scalar outer_;
};

template <typename Scalar>
Scalar annulus_modulus(const RoundAnnulus<Scalar>& a) {
    using std::log;
    return log(a.outer() / a.inner());
}

}  // namespace uqr

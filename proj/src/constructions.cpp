#include "uqr/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uqr/parallel.hpp"

namespace uqr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Similarity<double> affine_1d(double scale, double shift) {
    Similarity<double> s = Similarity<double>::scaling(1, scale);
    s.translation[0] = shift;
    return s;
}

}  // namespace

SemigroupSpec ring_semigroup(double a, int dim) {
    if (!(a > 1.0) || !std::isfinite(a)) throw InvalidParameter("ring parameter a must exceed 1");
    return SemigroupSpec::power_type({Stretch(2, 0.0), Stretch(2, -std::log(a))}, dim, {"f", "g"});
}

CantorShellSystem cantor_shell_system(int N) {
    if (N < 2) throw InvalidParameter("Cantor shell needs N >= 2");
    if (N > 60) throw InvalidParameter("Cantor shell degree 2^N must fit in 64 bits");
    CantorShellSystem cs;
    cs.N = N;
    const double ln2 = std::log(2.0);
    for (int k = 1; k < N; ++k) {
        const double scale = std::ldexp(1.0, -k);
        cs.maps.push_back(affine_1d(scale, 1.0 - std::ldexp(1.0, 1 - k)));
        cs.ratios.push_back(scale);
        const std::int64_t d = std::int64_t{1} << k;
        cs.generators.emplace_back(d, static_cast<double>(2 - d) * ln2);
        cs.labels.push_back("p" + std::to_string(k));
    }
    const double scale = std::ldexp(1.0, -N);
    cs.maps.push_back(affine_1d(scale, 1.0 - scale));
    cs.ratios.push_back(scale);
    const std::int64_t d = std::int64_t{1} << N;
    cs.generators.emplace_back(d, static_cast<double>(1 - d) * ln2);
    cs.labels.push_back("q" + std::to_string(N));
    return cs;
}

double cantor_shell_fixed_point(int k) {
    if (k < 1) throw InvalidParameter("k must be positive");
    const double p = std::ldexp(1.0, k);
    return (p - 2.0) / (p - 1.0);
}

double cantor_shell_dimension(int N, int n) {
    if (n < 2) throw InvalidParameter("ambient dimension must be at least 2");
    const auto cs = cantor_shell_system(N);
    return static_cast<double>(n - 1) + similarity_dimension(cs.ratios);
}

// ---------------------------------------------------------------------------

Vec3 SolidTorus::core_point(double t) const {
    return center + R * (std::cos(t) * axis_a + std::sin(t) * axis_b);
}

double SolidTorus::core_distance(const Vec3& p) const {
    const Vec3 v = p - center;
    const Vec3 n = normal();
    const double h = v.dot(n);
    const double w = (v - h * n).norm();
    return std::hypot(w - R, h);
}

SolidTorus region_image(const ContractionMap<double>& m, const SolidTorus& t) {
    const auto* s = std::get_if<Similarity<double>>(&m);
    if (!s || s->dim() != 3) throw UnsupportedOperation("solid tori are transformed by 3-d similarities only");
    SolidTorus out;
    out.center = s->apply(t.center);
    out.axis_a = s->orthogonal * t.axis_a;
    out.axis_b = s->orthogonal * t.axis_b;
    out.R = s->scale * t.R;
    out.rho = s->scale * t.rho;
    return out;
}

bool region_within(const SolidTorus& outer, const SolidTorus& inner) {
    constexpr int samples = 512;
    for (int i = 0; i < samples; ++i) {
        const Vec3 p = inner.core_point(kTwoPi * i / samples);
        if (outer.core_distance(p) + inner.rho > outer.rho * (1.0 + 1e-12)) return false;
    }
    return true;
}

PeriodicCurve circle_curve(const Vec3& center, const Vec3& a, const Vec3& b, double r) {
    return {[=](double t) -> Vec3 { return center + r * (std::cos(kTwoPi * t) * a + std::sin(kTwoPi * t) * b); },
            [=](double t) -> Vec3 {
                return kTwoPi * r * (-std::sin(kTwoPi * t) * a + std::cos(kTwoPi * t) * b);
            }};
}

PeriodicCurve core_curve(const SolidTorus& t) {
    return circle_curve(t.center, t.axis_a, t.axis_b, t.R);
}

double linking_number(const PeriodicCurve& c1, const PeriodicCurve& c2, int resolution) {
    if (resolution < 8) throw InvalidParameter("linking quadrature needs at least 8 nodes per curve");
    std::vector<Vec3> p1(resolution), d1(resolution), p2(resolution), d2(resolution);
    for (int i = 0; i < resolution; ++i) {
        const double t = static_cast<double>(i) / resolution;
        p1[i] = c1.point(t);
        d1[i] = c1.tangent(t);
        p2[i] = c2.point(t);
        d2[i] = c2.tangent(t);
    }
    double sum = 0.0;
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            const Vec3 r = p1[i] - p2[j];
            const double dist = r.norm();
            if (dist < 1e-9) throw InvalidParameter("curves intersect; linking number undefined");
            sum += d1[i].cross(d2[j]).dot(r) / (dist * dist * dist);
        }
    }
    const double h = 1.0 / resolution;
    return sum * h * h / (4.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------

void check_necklace_count(int m) {
    if (m < 4) throw InvalidParameter("m must be an even perfect square (m >= 4)");
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    if (d * d != m || d % 2 != 0) throw InvalidParameter("m must be an even perfect square");
}

TorusChain layout_necklace(int m, const NecklaceGeometry& g) {
    check_necklace_count(m);
    if (!(g.parent_R > 0.0) || !(g.parent_rho > 0.0) || !(g.parent_rho < g.parent_R))
        throw InvalidParameter("parent torus needs 0 < rho < R");
    TorusChain chain;
    chain.m = m;
    chain.parent = SolidTorus{Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), g.parent_R, g.parent_rho};
    const double ring = g.ring_factor * g.parent_R * std::sin(std::numbers::pi / m);
    const double scale = ring / g.parent_R;
    for (int j = 0; j < m; ++j) {
        const double theta = kTwoPi * j / m;
        const Vec3 radial(std::cos(theta), std::sin(theta), 0.0);
        const Vec3 tangent(-std::sin(theta), std::cos(theta), 0.0);
        SolidTorus child;
        child.center = g.parent_R * radial;
        // Alternate the link plane: tangent-radial, then tangent-vertical.
        child.axis_a = tangent;
        child.axis_b = j % 2 == 0 ? radial : Vec3(Vec3::UnitZ());
        child.R = ring;
        child.rho = scale * g.parent_rho;
        chain.children.push_back(child);

        Similarity<double> phi;
        phi.scale = scale;
        phi.orthogonal.resize(3, 3);
        phi.orthogonal.col(0) = child.axis_a;
        phi.orthogonal.col(1) = child.axis_b;
        phi.orthogonal.col(2) = child.axis_a.cross(child.axis_b);
        phi.translation = child.center;
        chain.maps.push_back(phi);
    }
    return chain;
}

namespace {

double sampled_core_distance(const SolidTorus& s, const SolidTorus& t, int resolution) {
    std::vector<Vec3> a(resolution), b(resolution);
    for (int i = 0; i < resolution; ++i) {
        a[i] = s.core_point(kTwoPi * i / resolution);
        b[i] = t.core_point(kTwoPi * i / resolution);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : a)
        for (const auto& q : b) best = std::min(best, (p - q).squaredNorm());
    return std::sqrt(best);
}

}  // namespace

NecklaceReport validate_necklace(const TorusChain& chain, int resolution) {
    NecklaceReport rep;
    const int m = static_cast<int>(chain.children.size());
    const auto& kids = chain.children;

    // Containment: every core sample plus the tube stays inside the parent.
    rep.containment_margin = std::numeric_limits<double>::infinity();
    for (const auto& c : kids) {
        for (int i = 0; i < resolution; ++i) {
            const double dist = chain.parent.core_distance(c.core_point(kTwoPi * i / resolution));
            rep.containment_margin = std::min(rep.containment_margin, chain.parent.rho - dist - c.rho);
        }
    }
    rep.contained = rep.containment_margin > 0.0;
    if (!rep.contained) rep.failures.push_back("containment: a child leaves the parent torus");

    struct PairResult {
        int i, j;
        double gap;
        double lk;
    };
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    std::vector<PairResult> results(pairs.size());
    parallel_for(pairs.size(), default_threads(), [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const auto& s = kids[i];
        const auto& t = kids[j];
        const double centre_gap = (s.center - t.center).norm() - s.R - t.R;
        PairResult r{i, j, 0.0, 0.0};
        if (centre_gap > 0.0) {
            // Disjoint bounding balls: the spanning disc of one core misses
            // the other core, so the cores are unlinked.
            r.gap = centre_gap - s.rho - t.rho;
            r.lk = 0.0;
        } else {
            r.gap = sampled_core_distance(s, t, resolution) - s.rho - t.rho;
            r.lk = r.gap > -s.rho - t.rho + 1e-9 ? linking_number(core_curve(s), core_curve(t), resolution) : 0.0;
        }
        results[k] = r;
    });

    rep.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& r : results) {
        rep.min_gap = std::min(rep.min_gap, r.gap);
        const int sep = std::abs(r.i - r.j);
        const bool consecutive = sep == 1 || sep == m - 1;
        if (consecutive)
            rep.consecutive_lk_error = std::max(rep.consecutive_lk_error, std::abs(std::abs(r.lk) - 1.0));
        else
            rep.nonconsecutive_lk_max = std::max(rep.nonconsecutive_lk_max, std::abs(r.lk));
    }
    if (m < 2) rep.min_gap = 0.0;
    rep.disjoint = rep.min_gap > 1e-3;
    if (!rep.disjoint) rep.failures.push_back("disjointness: two children come closer than 1e-3");
    rep.linking_ok = m >= 2 && rep.consecutive_lk_error < 1e-2 && rep.nonconsecutive_lk_max < 1e-2;
    if (!rep.linking_ok) rep.failures.push_back("linking: children do not form the Hopf-linked necklace pattern");
    return rep;
}

TorusChain build_necklace(int m, const NecklaceGeometry& geometry) {
    TorusChain chain = layout_necklace(m, geometry);
    chain.report = validate_necklace(chain);
    if (!chain.report.passed()) {
        std::string msg = "necklace m=" + std::to_string(m) + " failed validation:";
        for (const auto& f : chain.report.failures) msg += " " + f + ";";
        throw ConstructionFailed(msg);
    }
    return chain;
}

TorusChain build_necklace(int m, double parentR, double parentrho) {
    NecklaceGeometry g;
    g.parent_R = parentR;
    g.parent_rho = parentrho;
    return build_necklace(m, g);
}

std::vector<SolidTorus> necklace_stage(const TorusChain& chain, int k) {
    return deterministic_stage(chain.system(), chain.parent, k);
}

// ---------------------------------------------------------------------------

TrapSystem build_trap(int d, const Point& x0, const std::vector<Point>& xi, double a, double b) {
    if (d < 2) throw InvalidParameter("trap needs degree d >= 2");
    if (static_cast<int>(xi.size()) != d) throw InvalidParameter("trap needs exactly d preimage centres");
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidParameter("radii a, b must be positive");
    if (!(2.0 * b < a)) throw InvalidParameter("trap radii must satisfy 2b < a");
    if (x0.is_infinity()) throw InvalidParameter("trap centre must be finite");
    std::vector<Point> all{x0};
    for (const auto& p : xi) {
        if (p.is_infinity() || p.dim() != x0.dim()) throw InvalidParameter("trap centres must be finite and share a dimension");
        all.push_back(p);
    }
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if ((all[i].coords() - all[j].coords()).norm() < 2.0 * a)
                throw InvalidParameter("balls B(x_i, a) must be pairwise disjoint");

    const int n = x0.dim();
    const Mobius involution = build_ball_exchange_involution(x0, b);
    const GeneralizedBall<double> witness{x0.coords(), b, true};
    std::vector<GeneralizedBall<double>> targets;
    for (const auto& p : xi) targets.push_back({p.coords(), b, false});

    std::vector<Mobius> translations, branches;
    std::vector<ContractionMap<double>> members;
    for (const auto& p : xi) {
        Mobius tau(n);
        tau.push(Similarity<double>::translation_by(x0.coords() - p.coords()));
        translations.push_back(tau);
        const Mobius branch = involution.then(tau.inverse());
        branches.push_back(branch);
        double ratio = 0.0;
        for (const auto& ball : targets) ratio = std::max(ratio, lipschitz_bound(branch, ball));
        members.emplace_back(MobiusContraction<double>{branch, witness, ratio});
    }
    return TrapSystem{d, x0, xi, a, b, involution, std::move(translations), std::move(branches),
                      ContractiveSystem<double>(std::move(members))};
}

}  // namespace uqr

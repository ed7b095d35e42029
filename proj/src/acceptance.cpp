#include "uqr/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <set>
#include <sstream>

#include <boost/rational.hpp>

#include "uqr/constructions.hpp"
#include "uqr/ifs.hpp"
#include "uqr/perfectness.hpp"
#include "uqr/powermaps.hpp"
#include "uqr/random.hpp"
#include "uqr/semigroup.hpp"
#include "uqr/zorich.hpp"

namespace uqr {

namespace {

constexpr std::uint64_t kSeed = 20240611;

using Clock = std::chrono::steady_clock;
using Rational = boost::rational<long long>;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Point random_point(Rng& rng, int dim, double rlo, double rhi) {
    const double r = rng.uniform(rlo, rhi);
    return Point(Eigen::VectorXd(r * rng.unit_vector(dim)));
}

Point log_uniform_point(Rng& rng, int dim, double rlo, double rhi) {
    const double r = std::exp(rng.uniform(std::log(rlo), std::log(rhi)));
    return Point(Eigen::VectorXd(r * rng.unit_vector(dim)));
}

struct Pair {
    std::int64_t d;
    double lambda;
};

const std::vector<Pair>& radial_pairs() {
    static const std::vector<Pair> pairs{{2, 0.25}, {2, 1.0}, {2, 4.0}, {3, 0.25}, {3, 1.0}, {3, 4.0}};
    return pairs;
}

// 1. |f(y)| = λ|y|^d.
CriterionResult radial_law() {
    constexpr double kTol = 1e-9;
    constexpr std::size_t kPoints = 10000;
    constexpr double kMaxSeconds = 5.0;
    const auto start = Clock::now();
    double worst = 0.0;
    for (std::size_t p = 0; p < radial_pairs().size(); ++p) {
        const auto [d, lambda] = radial_pairs()[p];
        const PowerMap<double> f(Stretch::with_lambda(d, lambda), ZorichMap<double>(3));
        Rng rng(stream_seed(kSeed, 100 + p));
        for (std::size_t i = 0; i < kPoints; ++i) {
            const Point y = random_point(rng, 3, 0.1, 10.0);
            const double expect = lambda * std::pow(y.norm(), static_cast<double>(d));
            worst = std::max(worst, std::abs(f(y).norm() - expect) / expect);
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return {1, "radial law", worst < kTol && secs < kMaxSeconds,
            "max rel err " + fmt("%.3g", worst) + " (tol 1e-9), " + fmt("%.2f", secs) + " s (limit 5 s)"};
}

// 2. n = 2 reduces to λ z^d.
CriterionResult planar_oracle() {
    constexpr double kTol = 1e-9;
    constexpr std::size_t kPoints = 1000;
    double worst = 0.0;
    for (std::size_t p = 0; p < radial_pairs().size(); ++p) {
        const auto [d, lambda] = radial_pairs()[p];
        const PowerMap<double> f(Stretch::with_lambda(d, lambda), ZorichMap<double>(2));
        Rng rng(stream_seed(kSeed, 200 + p));
        for (std::size_t i = 0; i < kPoints; ++i) {
            const Point y = random_point(rng, 2, 0.1, 10.0);
            const std::complex<double> z(y.coords()[0], y.coords()[1]);
            std::complex<double> w = lambda;
            for (std::int64_t k = 0; k < d; ++k) w *= z;
            const auto fy = f(y).coords();
            worst = std::max(worst, std::abs(std::complex<double>(fy[0], fy[1]) - w));
        }
    }
    return {2, "planar oracle", worst < kTol, "sup |f(z) - lambda z^d| = " + fmt("%.3g", worst) + " (tol 1e-9)"};
}

// 3. Every branch of h^{-1} gives the same value.
CriterionResult branch_independence() {
    constexpr double kTol = 1e-9;
    constexpr std::size_t kPoints = 1000;
    double worst = 0.0;
    for (std::size_t p = 0; p < radial_pairs().size(); ++p) {
        const auto [d, lambda] = radial_pairs()[p];
        const PowerMap<double> f(Stretch::with_lambda(d, lambda), ZorichMap<double>(3));
        Rng rng(stream_seed(kSeed, 300 + p));
        for (std::size_t i = 0; i < kPoints; ++i)
            worst = std::max(worst, branch_independence_defect(f, random_point(rng, 3, 0.1, 10.0)));
    }
    return {3, "branch independence", worst < kTol, "max defect " + fmt("%.3g", worst) + " (tol 1e-9)"};
}

// Radius separating escaping from attracted orbits along a fixed ray.
double escape_radius_by_bisection(const PowerMap<double>& f) {
    Eigen::VectorXd u(3);
    u << 0.3, -0.5, 0.8;
    u.normalize();
    auto escapes = [&](double logr) {
        Point p(Eigen::VectorXd(std::exp(logr) * u));
        for (int step = 0; step < 400; ++step) {
            p = f(p);
            const double r = p.norm();
            if (r > 1e100) return true;
            if (r < 1e-100) return false;
        }
        return p.norm() > std::exp(logr);
    };
    double lo = std::log(1e-3), hi = std::log(1e3);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (escapes(mid) ? hi : lo) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

// 4. Julia sphere radius.
CriterionResult julia_sphere() {
    constexpr double kTol = 1e-6;
    double worst_formula = 0.0, worst_closed = 0.0;
    int pairs = 0;
    for (std::int64_t d : {2, 3, 4}) {
        for (double lambda : {0.25, 1.0, 4.0}) {
            const auto params = Stretch::with_lambda(d, lambda);
            const PowerMap<double> f(params, ZorichMap<double>(3));
            const double bisect = escape_radius_by_bisection(f);
            const double expect = std::pow(lambda, 1.0 / (1.0 - static_cast<double>(d)));
            worst_formula = std::max(worst_formula, std::abs(bisect - expect) / expect);
            worst_closed = std::max(worst_closed, std::abs(julia_radius(params) - bisect) / bisect);
            ++pairs;
        }
    }
    return {4, "julia sphere", pairs == 9 && worst_formula < kTol && worst_closed < kTol,
            std::to_string(pairs) + " pairs; bisection vs lambda^(1/(1-d)) " + fmt("%.3g", worst_formula) +
                ", julia_radius vs bisection " + fmt("%.3g", worst_closed) + " (tol 1e-6)"};
}

// 5. Ring example with a = 4.
CriterionResult ring_example() {
    constexpr int kMaxLen = 12;
    constexpr double kRadiusSlack = 1e-12;
    constexpr double kOrbitTol = 1e-12;
    constexpr int kDepth = 6;
    constexpr std::size_t kPoints = 1000;
    constexpr std::size_t kWordBudget = 16;
    const double log4 = std::log(4.0);
    const auto spec = ring_semigroup(4.0);
    std::ostringstream detail;
    bool ok = true;

    const auto radii = word_julia_radii(spec, kMaxLen);
    bool in_ring = true;
    double max_gap = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double t = std::log(radii[i]);
        if (t < -kRadiusSlack || t > log4 + kRadiusSlack) in_ring = false;
        if (i > 0) max_gap = std::max(max_gap, t - std::log(radii[i - 1]));
    }
    const double gap_limit = 2.0 * log4 / (std::ldexp(1.0, kMaxLen) - 1.0);
    ok = ok && in_ring && max_gap <= gap_limit * (1.0 + 1e-9);
    detail << radii.size() << " radii " << (in_ring ? "in" : "NOT in") << " [1,4], max log-gap " << fmt("%.4g", max_gap)
           << " (limit " << fmt("%.4g", gap_limit) << ")";

    Eigen::VectorXd u(3);
    u << 0.6, 0.0, 0.8;
    const auto orbit = backward_orbit(spec, Point(Eigen::VectorXd(4.0 * u)), kDepth, std::size_t{1} << 20);
    std::set<long> hit;
    double orbit_err = 0.0;
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        if (orbit.depths[i] != kDepth) continue;
        const double e = std::log(orbit.points[i].norm()) / log4 * 64.0;
        const long j = std::lround(e);
        orbit_err = std::max(orbit_err, std::abs(e - j) * log4 / 64.0);
        hit.insert(j);
    }
    const bool all_j = hit.size() == 64 && *hit.begin() == 1 && *hit.rbegin() == 64;
    ok = ok && !orbit.truncated && all_j && orbit_err < kOrbitTol;
    detail << "; depth-6 orbit hits " << hit.size() << "/64 radii 4^(j/64), log err " << fmt("%.3g", orbit_err);

    std::size_t attracted = 0, escaping = 0;
    Rng rng(stream_seed(kSeed, 500));
    for (std::size_t i = 0; i < kPoints; ++i) {
        const Point inner = log_uniform_point(rng, 3, 1e-3, 0.99);
        const Point outer = log_uniform_point(rng, 3, 4.01, 1e3);
        if (classify_point(spec, inner, kWordBudget, stream_seed(kSeed, 2 * i)).verdict == Verdict::attracted)
            ++attracted;
        if (classify_point(spec, outer, kWordBudget, stream_seed(kSeed, 2 * i + 1)).verdict == Verdict::escaping)
            ++escaping;
    }
    ok = ok && attracted == kPoints && escaping == kPoints;
    detail << "; attracted " << attracted << "/" << kPoints << ", escaping " << escaping << "/" << kPoints;
    return {5, "ring example", ok, detail.str()};
}

// 6. Word radii fill [0, log 4] in log-radius.
CriterionResult closure_of_member_julia_sets() {
    constexpr int kMaxLen = 12;
    const double log4 = std::log(4.0);
    const double limit = std::ldexp(log4, -10);
    const auto radii = word_julia_radii(ring_semigroup(4.0), kMaxLen);
    std::vector<double> t;
    for (double r : radii) t.push_back(std::log(r));
    std::sort(t.begin(), t.end());
    double h = std::max(t.front(), log4 - t.back());
    for (std::size_t i = 1; i < t.size(); ++i) h = std::max(h, 0.5 * (t[i] - t[i - 1]));
    for (double v : t) h = std::max(h, std::max(-v, v - log4));
    return {6, "closure of member Julia sets", h < limit,
            "Hausdorff distance " + fmt("%.4g", h) + " (limit 2^-10 log 4 = " + fmt("%.4g", limit) + ")"};
}

// 7. Moran equation.
CriterionResult moran_solver() {
    const double s1 = similarity_dimension(std::vector<double>{0.5, 0.25});
    const double s2 = similarity_dimension(std::vector<double>{1.0 / 3.0, 1.0 / 3.0});
    const double s3 = similarity_dimension(std::vector<double>{0.5, 0.5});
    const double e1 = std::abs(s1 - std::log2((1.0 + std::sqrt(5.0)) / 2.0));
    const double e2 = std::abs(s2 - std::log(2.0) / std::log(3.0));
    const double e3 = std::abs(s3 - 1.0);
    return {7, "moran solver", e1 < 1e-9 && e2 < 1e-9 && e3 < 1e-12,
            "errors " + fmt("%.2g", e1) + ", " + fmt("%.2g", e2) + " (tol 1e-9), " + fmt("%.2g", e3) + " (tol 1e-12)"};
}

// Exact value of a finite double as a fraction.
Rational to_rational(double x) {
    int exp = 0;
    const double m = std::frexp(x, &exp);
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    int shift = exp - 53;
    while (mant != 0 && mant % 2 == 0 && shift < 0) {
        mant /= 2;
        ++shift;
    }
    if (shift >= 0) return Rational(mant * (1LL << shift));
    if (shift < -62) throw DomainError("value not representable as a 64-bit fraction");
    return Rational(mant, 1LL << -shift);
}

// 8. Cantor shell fixed points and dimension.
CriterionResult cantor_shell() {
    std::ostringstream detail;
    bool exact = true;
    double worst_log = 0.0;
    const auto cs = cantor_shell_system(11);
    for (int k = 1; k <= 10; ++k) {
        const auto& phi = cs.maps[k - 1];
        const Rational s = to_rational(phi.scale);
        const Rational t = to_rational(phi.translation[0]);
        const Rational fixed = t / (Rational(1) - s);
        const long long p = 1LL << k;
        if (fixed != Rational(p - 2, p - 1)) exact = false;
        const double c = static_cast<double>(p - 2) / static_cast<double>(p - 1);
        worst_log = std::max(worst_log, std::abs(std::log2(julia_radius(cs.generators[k - 1])) - c));
    }
    bool increasing = true;
    double prev = -1.0, s20 = 0.0;
    for (int N = 2; N <= 20; ++N) {
        const double s = similarity_dimension(cantor_shell_system(N).ratios);
        if (!(s > prev)) increasing = false;
        prev = s;
        if (N == 20) s20 = s;
    }
    detail << "fixed points " << (exact ? "exact" : "NOT exact") << " for k<=10, log2 julia radius err "
           << fmt("%.2g", worst_log) << " (tol 1e-12); s(N) " << (increasing ? "increasing" : "NOT increasing")
           << ", s(20) = " << fmt("%.9f", s20) << " (> 0.999)";
    return {8, "cantor shell", exact && worst_log < 1e-12 && increasing && s20 > 0.999, detail.str()};
}

// 9. Default m = 16 necklace.
CriterionResult necklace() {
    constexpr int kM = 16;
    std::ostringstream detail;
    bool ok = true;
    try {
        const auto chain = build_necklace(kM);
        const auto& r = chain.report;
        detail << "m=16 min gap " << fmt("%.4g", r.min_gap) << ", containment margin "
               << fmt("%.4g", r.containment_margin) << ", consecutive |lk| err " << fmt("%.2g", r.consecutive_lk_error)
               << ", non-consecutive max " << fmt("%.2g", r.nonconsecutive_lk_max);
        for (int k = 1; k <= 3; ++k) {
            const auto stage = necklace_stage(chain, k);
            const auto expect = static_cast<std::size_t>(std::pow(16.0, k));
            if (stage.size() != expect) ok = false;
        }
        detail << "; stage counts " << (ok ? "16^k" : "WRONG");
    } catch (const ConstructionFailed& e) {
        ok = false;
        const auto report = validate_necklace(layout_necklace(kM));
        detail << e.what() << " (min gap " << fmt("%.4g", report.min_gap) << ", containment margin "
               << fmt("%.4g", report.containment_margin) << ")";
    }
    int rejected = 0;
    for (int m : {6, 9}) {
        try {
            check_necklace_count(m);
        } catch (const InvalidParameter&) {
            ++rejected;
        }
    }
    ok = ok && rejected == 2;
    detail << "; m in {6,9} rejected " << rejected << "/2";
    return {9, "necklace", ok, detail.str()};
}

// 10. Conformal trap with d = 2.
CriterionResult trap() {
    constexpr int kStages = 6;
    constexpr std::size_t kPoints = 10000;
    std::ostringstream detail;
    bool ok = true;
    Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
    const auto sys = build_trap(2, Point::origin(3), {Point(Eigen::VectorXd(4.0 * e1)), Point(Eigen::VectorXd(-4.0 * e1))},
                                1.0, 0.4);
    const double q = sys.system.max_ratio();
    double prev_diam = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kStages; ++k) {
        const auto stage = deterministic_stage(sys.system, sys.seed_region(), k);
        bool disjoint = stage.size() == (std::size_t{1} << k);
        double diam = 0.0;
        for (std::size_t i = 0; i < stage.size(); ++i) {
            diam = std::max(diam, stage[i].diameter());
            for (std::size_t j = i + 1; j < stage.size(); ++j)
                if ((stage[i].center - stage[j].center).norm() <= stage[i].radius + stage[j].radius) disjoint = false;
        }
        if (!disjoint) ok = false;
        if (k > 1 && !(diam <= q * prev_diam * (1.0 + 1e-12))) ok = false;
        prev_diam = diam;
    }
    detail << "stages 1.." << kStages << " have 2^k disjoint balls " << (ok ? "with" : "WITHOUT")
           << " diameters decaying by ratio " << fmt("%.4g", q);

    const auto sample = chaos_game(sys.system, kPoints, 64, kSeed);
    std::size_t inside = 0, trapped = 0;
    for (const auto& p : sample.points) {
        bool in_any = false;
        for (const auto& x : sys.xi)
            if (!p.is_infinity() && (p.coords() - x.coords()).norm() < sys.b) in_any = true;
        if (in_any) ++inside;
        if (sys.trap_ball().contains(p)) ++trapped;
    }
    ok = ok && inside == kPoints && trapped == 0;
    detail << "; chaos game " << inside << "/" << kPoints << " in U B(x_i,b), " << trapped << " in B(x0,b)";

    bool rejected = false;
    try {
        build_trap(2, Point::origin(3), {Point(Eigen::VectorXd(4.0 * e1)), Point(Eigen::VectorXd(-4.0 * e1))}, 1.0, 0.6);
    } catch (const InvalidParameter&) {
        rejected = true;
    }
    ok = ok && rejected;
    detail << "; b=0.6, a=1 " << (rejected ? "rejected" : "NOT rejected");
    return {10, "conformal trap", ok, detail.str()};
}

// 11. Bounded versus unbounded separating moduli.
CriterionResult perfectness_contrast() {
    const double limit = std::log(4.0) + 0.1;
    auto on_axis = [](const std::vector<double>& xs) {
        std::vector<Point> pts;
        for (double x : xs) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(3);
            v[0] = x;
            pts.emplace_back(v);
        }
        return pts;
    };
    std::vector<double> geometric{0.0}, doubly{0.0};
    for (int k = 0; k <= 6; ++k) geometric.push_back(std::pow(4.0, -k));
    for (int k = 0; k <= 5; ++k) doubly.push_back(std::ldexp(1.0, -(1 << k)));
    const double a = uniform_perfectness_estimate(on_axis(geometric));
    const double b = uniform_perfectness_estimate(on_axis(doubly));
    return {11, "perfectness contrast", a <= limit && b > 10.0,
            "geometric max modulus " + fmt("%.6f", a) + " (<= log 4 + 0.1), doubly exponential " + fmt("%.4f", b) +
                " (> 10)"};
}

// 12. Dilatation of matrix powers.
CriterionResult dilatation() {
    Eigen::Matrix3d M = Eigen::Vector3d(2.0, 1.0, 1.0).asDiagonal();
    const auto seq = dilatation_sequence(M, 15);
    bool exact = seq.size() == 15;
    for (int k = 1; k <= 15 && exact; ++k)
        if (seq[k - 1] != std::ldexp(1.0, 2 * k)) exact = false;
    Rng rng(stream_seed(kSeed, 1200));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        Eigen::Matrix3d A;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) A(r, c) = rng.normal();
        const Eigen::Matrix3d Q = Eigen::HouseholderQR<Eigen::Matrix3d>(A).householderQ();
        const double scale = std::exp(rng.uniform(-2.0, 2.0));
        worst = std::max(worst, matrix_dilatation(scale * Q).K - 1.0);
    }
    return {12, "dilatation divergence", exact && worst < 1e-12,
            std::string("K(diag(2,1,1)^k) ") + (exact ? "= 4^k exactly" : "!= 4^k") + " for k<=15; scalar*orthogonal K-1 <= " +
                fmt("%.2g", worst) + " (tol 1e-12)"};
}

// 13. f_{2,1} has degree 4.
CriterionResult preimage_degree() {
    constexpr std::size_t kPoints = 100;
    const PowerMap<double> f(Stretch(2, 0.0), ZorichMap<double>(3));
    Rng rng(stream_seed(kSeed, 1300));
    std::size_t right_count = 0;
    double forward = 0.0, radial = 0.0;
    for (std::size_t i = 0; i < kPoints; ++i) {
        const Point y = random_point(rng, 3, 0.1, 10.0);
        const auto pre = preimages(f, y);
        if (pre.size() == 4) ++right_count;
        for (const auto& x : pre) {
            forward = std::max(forward, (f(x).coords() - y.coords()).norm() / y.norm());
            radial = std::max(radial, std::abs(x.norm() - std::sqrt(y.norm())) / std::sqrt(y.norm()));
        }
    }
    return {13, "preimage degree", right_count == kPoints && forward < 1e-8 && radial < 1e-12,
            std::to_string(right_count) + "/" + std::to_string(kPoints) + " points with 4 preimages; forward err " +
                fmt("%.2g", forward) + " (tol 1e-8), radius err " + fmt("%.2g", radial) + " (tol 1e-12)"};
}

// 14. Hölder constant of z^2.
CriterionResult holder() {
    constexpr std::size_t kPairs = 1000000;
    const SphereMap square = [](const Point& p) {
        if (p.is_infinity()) return p;
        const std::complex<double> z(p.coords()[0], p.coords()[1]);
        const auto w = z * z;
        Eigen::VectorXd v(2);
        v << w.real(), w.imag();
        return Point(v);
    };
    const auto est = holder_constant_estimate(square, 2, 1.0, kPairs, kSeed);
    return {14, "holder estimator", est.estimate >= 1.9 && est.estimate <= 2.0,
            "estimate " + fmt("%.9f", est.estimate) + " over 10^6 pairs (window [1.9, 2.0])"};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_result) {
    const std::vector<std::pair<std::string, std::function<CriterionResult()>>> criteria{
        {"radial law", radial_law},
        {"planar oracle", planar_oracle},
        {"branch independence", branch_independence},
        {"julia sphere", julia_sphere},
        {"ring example", ring_example},
        {"closure of member Julia sets", closure_of_member_julia_sets},
        {"moran solver", moran_solver},
        {"cantor shell", cantor_shell},
        {"necklace", necklace},
        {"conformal trap", trap},
        {"perfectness contrast", perfectness_contrast},
        {"dilatation divergence", dilatation},
        {"preimage degree", preimage_degree},
        {"holder estimator", holder},
    };
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = Clock::now();
        CriterionResult r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {static_cast<int>(i + 1), criteria[i].first, false, std::string("exception: ") + e.what()};
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    char head[128];
    std::snprintf(head, sizeof head, "[%s] %2d %s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(),
                  r.seconds);
    return head + r.detail;
}

}  // namespace uqr

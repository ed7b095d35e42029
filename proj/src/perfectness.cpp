#include "uqr/perfectness.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <ostream>

#include "uqr/parallel.hpp"
#include "uqr/random.hpp"

namespace uqr {

namespace {

bool larger_first(const AnnulusReport& a, const AnnulusReport& b) {
    if (a.modulus != b.modulus) return a.modulus > b.modulus;
    if (a.center_index != b.center_index) return a.center_index < b.center_index;
    return a.annulus.inner() < b.annulus.inner();
}

void keep_largest(std::vector<AnnulusReport>& v, std::size_t keep) {
    std::sort(v.begin(), v.end(), larger_first);
    if (keep != 0 && v.size() > keep) v.erase(v.begin() + static_cast<std::ptrdiff_t>(keep), v.end());
}

}  // namespace

AnnulusSearch separating_annuli(const std::vector<Point>& points, const AnnulusOptions& opt) {
    const std::size_t n = points.size();
    if (n < 2) throw InvalidParameter("separating annuli need at least 2 points");
    if (!(opt.min_radius > 0.0 && opt.min_radius < 1.0)) throw InvalidParameter("min_radius must lie in (0,1)");
    const int dim = points.front().dim();
    for (const auto& p : points)
        if (p.dim() != dim) throw InvalidParameter("sample points have different dimensions");

    AnnulusSearch out;
    out.sample_size = n;
    if (n == 2) {
        const double r = normalized_radius(points[0], points[1]);
        if (r == 0.0) throw InvalidParameter("the two sample points coincide");
        const double outer = std::isinf(r) ? 1.0 / opt.min_radius : r;
        const double inner = outer * opt.min_radius;
        out.annuli.push_back({RoundAnnulus<double>(points[0], inner, outer), std::log(outer / inner), 0, 1, 1});
        out.degenerate = true;
        return out;
    }

    std::vector<std::vector<AnnulusReport>> per_center(n);
    const unsigned threads = opt.threads == 0 ? default_threads() : opt.threads;
    parallel_for(n, threads, [&](std::size_t i) {
        std::vector<double> r;
        r.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) r.push_back(normalized_radius(points[i], points[j]));
        std::sort(r.begin(), r.end());
        auto& mine = per_center[i];
        for (std::size_t k = 0; k + 1 < r.size(); ++k) {
            const double inner = r[k];
            double outer = r[k + 1];
            if (!(inner > 0.0) || !(outer > inner) || std::isinf(inner)) continue;
            const std::size_t inside = k + 2;  // the centre and r[0..k]
            const std::size_t outside = n - inside;
            if (inside < opt.min_inside || outside < opt.min_inside) continue;
            if (std::isinf(outer)) outer = inner / opt.min_radius;
            mine.push_back({RoundAnnulus<double>(points[i], inner, outer), std::log(outer / inner), i,
                            inside, outside});
        }
        keep_largest(mine, opt.max_reports);
    });
    for (auto& v : per_center) out.annuli.insert(out.annuli.end(), v.begin(), v.end());
    keep_largest(out.annuli, opt.max_reports);
    return out;
}

double uniform_perfectness_estimate(const std::vector<Point>& points, const AnnulusOptions& opt) {
    AnnulusOptions o = opt;
    o.max_reports = 1;
    const auto search = separating_annuli(points, o);
    return search.annuli.empty() ? 0.0 : search.annuli.front().modulus;
}

void write_annulus_csv(std::ostream& os, const std::vector<AnnulusReport>& annuli) {
    const auto old = os.precision(17);
    os << "center_index,inner,outer,modulus,inside,outside\n";
    for (const auto& a : annuli)
        os << a.center_index << ',' << a.annulus.inner() << ',' << a.annulus.outer() << ',' << a.modulus << ','
           << a.inside << ',' << a.outside << '\n';
    os.precision(old);
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kPairBlock = 4096;

/// Inverse stereographic projection of a unit vector of R^{dim+1}.
Point from_sphere(const Eigen::VectorXd& X) {
    const int dim = static_cast<int>(X.size()) - 1;
    const double den = 1.0 - X[dim];
    if (den <= 0.0) return Point::infinity(dim);
    return Point(Eigen::VectorXd(X.head(dim) / den));
}

}  // namespace

HolderEstimate holder_constant_estimate(const SphereMap& f, int dim, double alpha, std::size_t nsamples,
                                        std::uint64_t seed, unsigned threads) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must lie in (0,1]");
    if (dim < 1) throw InvalidParameter("dimension must be positive");
    const std::size_t blocks = (nsamples + kPairBlock - 1) / kPairBlock;
    std::vector<double> best(blocks, 0.0);
    const double lo = std::log(1e-8);
    parallel_for(blocks, threads == 0 ? default_threads() : threads, [&](std::size_t b) {
        Rng rng(stream_seed(seed, b));
        const std::size_t end = std::min(nsamples, (b + 1) * kPairBlock);
        double sup = 0.0;
        for (std::size_t i = b * kPairBlock; i < end; ++i) {
            const Eigen::VectorXd X = rng.unit_vector(dim + 1);
            Eigen::VectorXd Y;
            if (i % 2 == 0) {
                Y = rng.unit_vector(dim + 1);
            } else {
                Eigen::VectorXd t = rng.unit_vector(dim + 1);
                t -= t.dot(X) * X;
                if (t.norm() < 1e-12) continue;
                t.normalize();
                const double theta = std::exp(rng.uniform(lo, 0.0));
                Y = std::cos(theta) * X + std::sin(theta) * t;
            }
            const Point x = from_sphere(X);
            const Point y = from_sphere(Y);
            const double d = chordal_distance(x, y);
            if (!(d > 0.0)) continue;
            const double ratio = chordal_distance(f(x), f(y)) / std::pow(d, alpha);
            sup = std::max(sup, ratio);
        }
        best[b] = sup;
    });
    HolderEstimate out;
    out.alpha = alpha;
    out.samples = nsamples;
    out.seed = seed;
    for (double v : best) out.estimate = std::max(out.estimate, v);
    return out;
}

}  // namespace uqr

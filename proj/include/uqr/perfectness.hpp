#pragma once

// Uniform-perfectness diagnostics for finite samples (separating round
// annuli), empirical Hölder constants, and dilatation of linear maps.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "uqr/error.hpp"
#include "uqr/geometry.hpp"

namespace uqr {

struct AnnulusReport {
    RoundAnnulus<double> annulus;  // radii measured after sending the centre to 0
    double modulus = 0.0;
    std::size_t center_index = 0;
    std::size_t inside = 0;   // sample points with normalized radius <= inner
    std::size_t outside = 0;  // sample points with normalized radius >= outer
};

struct AnnulusOptions {
    /// Minimum number of sample points required on each side of an annulus.
    /// 1 counts every gap; larger values ignore gaps around sparse clusters
    /// of a random sample.
    std::size_t min_inside = 1;
    /// Radius ratio at which unbounded families are truncated (two-point
    /// samples, points at the antipode of the centre).
    double min_radius = 1e-12;
    /// Number of reports kept, largest moduli first; 0 keeps all.
    std::size_t max_reports = 1000;
    unsigned threads = 0;  // 0 = machine parallelism
};

struct AnnulusSearch {
    std::vector<AnnulusReport> annuli;  // sorted by modulus, descending
    std::size_t sample_size = 0;
    /// Two-point sample: the reported annulus is one member of an unbounded
    /// family, truncated at min_radius.
    bool degenerate = false;
};

AnnulusSearch separating_annuli(const std::vector<Point>& points, const AnnulusOptions& opt = {});

/// Largest separating-annulus modulus of the sample (α̂).
double uniform_perfectness_estimate(const std::vector<Point>& points, const AnnulusOptions& opt = {});

/// One row per annulus: center_index,inner,outer,modulus,inside,outside.
void write_annulus_csv(std::ostream& os, const std::vector<AnnulusReport>& annuli);

// ---------------------------------------------------------------------------

using SphereMap = std::function<Point(const Point&)>;

struct HolderEstimate {
    double alpha = 1.0;
    double estimate = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Empirical sup of χ(f(x),f(y)) / χ(x,y)^alpha over seeded pairs on S^dim.
/// Half the pairs are uniform on the sphere; the other half are
/// near-diagonal with angular separation log-uniform in [1e-8, 1]. Pair i
/// depends only on (seed, i), so larger sample counts extend smaller ones.
HolderEstimate holder_constant_estimate(const SphereMap& f, int dim, double alpha, std::size_t nsamples,
                                        std::uint64_t seed, unsigned threads = 0);

// ---------------------------------------------------------------------------

struct LinearDilatation {
    double K_O = 1.0;
    double K_I = 1.0;
    double K = 1.0;
};

/// Outer, inner and maximal dilatation of x ↦ Mx.
template <typename Derived>
LinearDilatation matrix_dilatation(const Eigen::MatrixBase<Derived>& M) {
    using Scalar = typename Derived::Scalar;
    using std::abs;
    using std::pow;
    if (M.rows() != M.cols() || M.rows() == 0) throw InvalidParameter("dilatation needs a non-empty square matrix");
    using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const MatrixX A = M;
    Eigen::JacobiSVD<MatrixX> svd(A);
    const auto& sv = svd.singularValues();
    const Scalar smax = sv(0);
    const Scalar smin = sv(sv.size() - 1);
    const Scalar det = A.determinant();
    if (!(smin > Scalar(0)) || det == Scalar(0)) throw InvalidParameter("matrix is singular");
    const int n = static_cast<int>(A.rows());
    LinearDilatation out;
    out.K_O = static_cast<double>(pow(smax, n) / abs(det));
    out.K_I = static_cast<double>(abs(det) / pow(smin, n));
    out.K = std::max(out.K_O, out.K_I);
    return out;
}

/// K(M^k) for k = 1..kmax.
template <typename Derived>
std::vector<double> dilatation_sequence(const Eigen::MatrixBase<Derived>& M, int kmax) {
    if (kmax < 1) throw InvalidParameter("kmax must be positive");
    using Scalar = typename Derived::Scalar;
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A = M;
    auto P = A;
    std::vector<double> out;
    for (int k = 1; k <= kmax; ++k) {
        out.push_back(matrix_dilatation(P).K);
        P = (P * A).eval();
    }
    return out;
}

}  // namespace uqr

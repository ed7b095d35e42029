#pragma once

// Example factories: Cantor-shell radial systems, Antoine-necklace torus
// chains and conformal-trap Möbius systems. Each emits the IFS that
// determines the Julia set together with validation evidence.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uqr/ifs.hpp"
#include "uqr/powermaps.hpp"
#include "uqr/semigroup.hpp"

namespace uqr {

// ---------------------------------------------------------------------------
// Ring family

/// ⟨f_{2,1}, f_{2,1/a}⟩, whose Julia set is the closed ring 1 <= |x| <= a.
SemigroupSpec ring_semigroup(double a, int dim = 3);

// ---------------------------------------------------------------------------
// Cantor shells

/// Radial IFS in log2-radius coordinates:
///   phi_k(t) = t/2^k + 1 - 2^{1-k}  (k = 1..N-1),   phi_N(t) = t/2^N + 1 - 2^{-N},
/// the inverses of the radial parts of p_k = f_{2^k, 2^{2-2^k}} and
/// q_N = f_{2^N, 2^{1-2^N}}.
struct CantorShellSystem {
    int N = 2;
    std::vector<Similarity<double>> maps;
    std::vector<double> ratios;
    std::vector<Stretch> generators;
    std::vector<std::string> labels;

    ContractiveSystem<double> system() const { return ContractiveSystem<double>::from_similarities(maps); }
    SemigroupSpec semigroup(int dim = 3) const { return SemigroupSpec::power_type(generators, dim, labels); }
};

CantorShellSystem cantor_shell_system(int N);

/// c_k = (2^k - 2)/(2^k - 1), the fixed point of phi_k.
double cantor_shell_fixed_point(int k);

/// (n - 1) + similarity dimension of the radial system.
double cantor_shell_dimension(int N, int n);

// ---------------------------------------------------------------------------
// Solid tori and Antoine necklaces

using Vec3 = Eigen::Vector3d;

/// Tube of radius `rho` about the circle center + R(cos t · a + sin t · b).
struct SolidTorus {
    Vec3 center = Vec3::Zero();
    Vec3 axis_a = Vec3::UnitX();
    Vec3 axis_b = Vec3::UnitY();
    double R = 1.0;
    double rho = 0.2;

    Vec3 normal() const { return axis_a.cross(axis_b); }
    Vec3 core_point(double t) const;
    /// Distance from p to the core circle.
    double core_distance(const Vec3& p) const;
    double diameter() const { return 2.0 * (R + rho); }
};

SolidTorus region_image(const ContractionMap<double>& m, const SolidTorus& t);
bool region_within(const SolidTorus& outer, const SolidTorus& inner);
inline double region_diameter(const SolidTorus& t) { return t.diameter(); }

/// Closed curve with period 1 and its derivative.
struct PeriodicCurve {
    std::function<Vec3(double)> point;
    std::function<Vec3(double)> tangent;
};

PeriodicCurve circle_curve(const Vec3& center, const Vec3& a, const Vec3& b, double r);
PeriodicCurve core_curve(const SolidTorus& t);

/// Gauss linking integral by the periodic trapezoid rule on a res × res grid.
double linking_number(const PeriodicCurve& c1, const PeriodicCurve& c2, int resolution = 512);

struct NecklaceReport {
    bool disjoint = false;
    double min_gap = 0.0;              // smallest sampled surface distance between children
    bool contained = false;
    double containment_margin = 0.0;   // smallest clearance to the parent surface
    bool linking_ok = false;
    double consecutive_lk_error = 0.0; // max | |lk| - 1 | over consecutive pairs
    double nonconsecutive_lk_max = 0.0;
    std::vector<std::string> failures;

    bool passed() const { return disjoint && contained && linking_ok; }
};

struct NecklaceGeometry {
    double parent_R = 1.0;
    double parent_rho = 0.2;
    /// Child ring radius in units of parent_R · sin(pi/m), i.e. of half the
    /// spacing between neighbouring child centres. Child tubes keep the
    /// parent's rho/R so every child is a similar copy of the parent.
    double ring_factor = 1.5;
};

struct TorusChain {
    SolidTorus parent;
    std::vector<SolidTorus> children;
    std::vector<Similarity<double>> maps;  // parent -> child j
    int m = 0;
    NecklaceReport report;

    ContractiveSystem<double> system() const { return ContractiveSystem<double>::from_similarities(maps); }
};

/// Throws InvalidParameter unless m = d^2 for an even d >= 2.
void check_necklace_count(int m);

/// Places the m children without validating them.
TorusChain layout_necklace(int m, const NecklaceGeometry& geometry = {});

/// Disjointness, containment and Hopf-link pattern of a chain.
NecklaceReport validate_necklace(const TorusChain& chain, int resolution = 512);

/// Lays out and validates a chain; geometry that fails validation raises
/// ConstructionFailed naming the failing predicate.
TorusChain build_necklace(int m, double parentR = 1.0, double parentrho = 0.2);
TorusChain build_necklace(int m, const NecklaceGeometry& geometry);

std::vector<SolidTorus> necklace_stage(const TorusChain& chain, int k);

// ---------------------------------------------------------------------------
// Conformal traps

struct TrapSystem {
    int d = 2;
    Point x0;
    std::vector<Point> xi;
    double a = 0.0;
    double b = 0.0;
    Mobius involution;                  // exchanges B(x0, b) and its complement
    std::vector<Mobius> translations;   // tau_i : B(x_i, b) -> B(x0, b)
    std::vector<Mobius> inverse_branches;  // tau_i^{-1} ∘ Phi
    ContractiveSystem<double> system;

    GeneralizedBall<double> trap_ball() const { return {x0.coords(), b, false}; }
    /// Complement of the closed trap ball; every member maps it into itself.
    GeneralizedBall<double> seed_region() const { return {x0.coords(), b, true}; }
};

TrapSystem build_trap(int d, const Point& x0, const std::vector<Point>& xi, double a, double b);

}  // namespace uqr

#pragma once

// Semigroups generated by power-type maps (or by IFS-described uqr maps):
// word algebra, Julia radii of words, backward orbits, orbit classification
// and the invariance harness.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "uqr/ifs.hpp"
#include "uqr/powermaps.hpp"

namespace uqr {

/// Generator indices; the leftmost generator is applied last, so [i, j]
/// denotes g_i ∘ g_j.
using Word = std::vector<std::size_t>;

/// A uqr generator known only through the IFS that determines its Julia set
/// (necklace and conformal-trap maps).
struct IfsGenerator {
    ContractiveSystem<double> system;
};

using Generator = std::variant<PowerMap<double>, IfsGenerator>;

class SemigroupSpec {
public:
    explicit SemigroupSpec(std::vector<Generator> generators, std::vector<std::string> labels = {});

    /// Power-type semigroup ⟨f_{d_i, λ_i}⟩ over the Zorich map of dimension `dim`.
    static SemigroupSpec power_type(const std::vector<Stretch>& params, int dim = 3,
                                    std::vector<std::string> labels = {});

    std::size_t size() const { return generators_.size(); }
    const Generator& generator(std::size_t i) const { return generators_.at(i); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    bool power_type() const;

    /// Power-type generator i; throws UnsupportedOperation otherwise.
    const PowerMap<double>& power_map(std::size_t i) const;

    /// Union of the generators' IFS: the Julia-determining system of the
    /// semigroup when every generator is IFS-described.
    ContractiveSystem<double> julia_system() const;

    /// Smallest and largest Julia-sphere radius among the generators.
    std::pair<double, double> generator_radius_range() const;

    int dim() const;

private:
    std::vector<Generator> generators_;
    std::vector<std::string> labels_;
};

Stretch word_params(const SemigroupSpec& spec, const Word& w);

/// Default cap on the number of enumerated words.
inline constexpr std::size_t kDefaultWordBudget = std::size_t{1} << 14;

struct WordRadius {
    Word word;
    Stretch params;
    double radius = 0.0;
};

/// Every word of length 1..maxlen with its composed stretch and Julia radius.
std::vector<WordRadius> enumerate_words(const SemigroupSpec& spec, int maxlen,
                                        std::size_t budget = kDefaultWordBudget);

/// Sorted Julia radii of all words of length <= maxlen, merged at 1e-12 in
/// log scale.
std::vector<double> word_julia_radii(const SemigroupSpec& spec, int maxlen,
                                     std::size_t budget = kDefaultWordBudget);

struct RadiusInterval {
    double lo = 0.0;
    double hi = 0.0;
};

RadiusInterval julia_ring_estimate(const SemigroupSpec& spec, int maxlen, std::size_t budget = kDefaultWordBudget);

struct BackwardOrbit {
    std::vector<Point> points;
    /// words[i] maps points[i] to the root point.
    std::vector<Word> words;
    std::vector<int> depths;
    bool truncated = false;
};

/// Breadth-first preimage tree of x under all generators, truncated at
/// `budget` points.
BackwardOrbit backward_orbit(const SemigroupSpec& spec, const Point& x, int depth, std::size_t budget);

/// Applies w to x (rightmost generator first).
Point apply_word(const SemigroupSpec& spec, const Word& w, const Point& x);

enum class Verdict { attracted, escaping, mixed_expansion, inconclusive };

std::string to_string(Verdict v);

struct ClassificationOptions {
    int max_word_length = 64;
    double delta = 1e-6;          // chordal offset of the companion points
    double separation = 0.1;      // chordal separation counted as expansion
    double attract_factor = 1e-6; // threshold below min Julia radius
    double escape_factor = 1e6;   // threshold above max Julia radius
    double clamp = 1e12;
};

/// Evidence about Fatou/Julia membership; never a proof of non-normality.
struct ClassificationReport {
    Verdict verdict = Verdict::inconclusive;
    std::vector<Word> witnesses;
    /// Largest observed log(separation / delta) per step.
    double expansion_estimate = 0.0;
    std::size_t attracted = 0;
    std::size_t escaped = 0;
    std::size_t separated = 0;
    std::size_t undecided = 0;
};

ClassificationReport classify_point(const SemigroupSpec& spec, const Point& x, std::size_t wordbudget,
                                    std::uint64_t seed, const ClassificationOptions& opt = {});

/// Closed set of radii given as a union of closed intervals of log-radius.
struct RadialJuliaDescription {
    std::vector<std::pair<double, double>> log_intervals;

    static RadialJuliaDescription ring(double rmin, double rmax);
    static RadialJuliaDescription sphere(double r) { return ring(r, r); }

    bool contains(double radius, double log_tol) const;
    RadialJuliaDescription merged(double log_tol) const;
};

/// [rmin, rmax] of the generators' Julia spheres.
RadialJuliaDescription ring_description(const SemigroupSpec& spec);

struct InvarianceReport {
    bool passed = true;
    std::size_t fatou_images_checked = 0;
    std::size_t fatou_failures = 0;
    std::size_t julia_preimages_checked = 0;
    std::size_t julia_failures = 0;
    bool decomposition_holds = true;
    std::vector<std::string> failures;
};

/// Forward invariance of the Fatou set, backward invariance of the Julia set,
/// and J = ∪ g_i^{-1}(J), checked against an exact radial description.
InvarianceReport invariance_check(const SemigroupSpec& spec, const RadialJuliaDescription& julia,
                                  const std::vector<Point>& juliasample, const std::vector<Point>& fatousample,
                                  double radial_tol = 1e-9);

}  // namespace uqr

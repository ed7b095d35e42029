#include "uqr/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "uqr/random.hpp"

namespace uqr {

SemigroupSpec::SemigroupSpec(std::vector<Generator> generators, std::vector<std::string> labels)
    : generators_(std::move(generators)), labels_(std::move(labels)) {
    if (generators_.empty()) throw InvalidParameter("a semigroup needs at least one generator");
    for (const auto& g : generators_) {
        if (const auto* ig = std::get_if<IfsGenerator>(&g)) {
            if (ig->system.size() < 2) throw InvalidParameter("generators must be non-injective");
        }
    }
    if (labels_.empty()) {
        for (std::size_t i = 0; i < generators_.size(); ++i) labels_.push_back("g" + std::to_string(i + 1));
    }
    if (labels_.size() != generators_.size()) throw InvalidParameter("one label per generator");
    const int n = dim();
    for (std::size_t i = 1; i < generators_.size(); ++i) {
        const int ni = std::visit(
            [](const auto& g) -> int {
                if constexpr (std::is_same_v<std::decay_t<decltype(g)>, PowerMap<double>>) return g.dim();
                else return g.system.dim();
            },
            generators_[i]);
        if (ni != n) throw InvalidParameter("generators act in different dimensions");
    }
}

SemigroupSpec SemigroupSpec::power_type(const std::vector<Stretch>& params, int dim, std::vector<std::string> labels) {
    std::vector<Generator> gens;
    const ZorichMap<double> h(dim);
    for (const auto& p : params) gens.emplace_back(PowerMap<double>(p, h));
    return SemigroupSpec(std::move(gens), std::move(labels));
}

bool SemigroupSpec::power_type() const {
    return std::all_of(generators_.begin(), generators_.end(),
                       [](const Generator& g) { return std::holds_alternative<PowerMap<double>>(g); });
}

const PowerMap<double>& SemigroupSpec::power_map(std::size_t i) const {
    const auto* f = std::get_if<PowerMap<double>>(&generators_.at(i));
    if (!f) throw UnsupportedOperation("generator " + labels_.at(i) + " is not power-type");
    return *f;
}

ContractiveSystem<double> SemigroupSpec::julia_system() const {
    std::vector<ContractionMap<double>> maps;
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        const auto* ig = std::get_if<IfsGenerator>(&generators_[i]);
        if (!ig) throw UnsupportedOperation("generator " + labels_[i] + " is not IFS-described");
        maps.insert(maps.end(), ig->system.maps().begin(), ig->system.maps().end());
    }
    return ContractiveSystem<double>(std::move(maps));
}

std::pair<double, double> SemigroupSpec::generator_radius_range() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double r = julia_radius(power_map(i).params());
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo, hi};
}

int SemigroupSpec::dim() const {
    return std::visit(
        [](const auto& g) -> int {
            if constexpr (std::is_same_v<std::decay_t<decltype(g)>, PowerMap<double>>) return g.dim();
            else return g.system.dim();
        },
        generators_.front());
}

Stretch word_params(const SemigroupSpec& spec, const Word& w) {
    if (w.empty()) throw InvalidParameter("empty word");
    Stretch acc = spec.power_map(w.back()).params();
    for (std::size_t k = w.size() - 1; k-- > 0;) acc = stretch_compose(spec.power_map(w[k]).params(), acc);
    return acc;
}

std::vector<WordRadius> enumerate_words(const SemigroupSpec& spec, int maxlen, std::size_t budget) {
    if (maxlen < 1) throw InvalidParameter("maxlen must be at least 1");
    const std::size_t k = spec.size();
    for (std::size_t i = 0; i < k; ++i)
        if (spec.power_map(i).params().d < 2) throw InvalidParameter("word radii need d >= 2 for every generator");
    double total = 0.0;
    for (int len = 1; len <= maxlen; ++len) total += std::pow(static_cast<double>(k), len);
    if (total > static_cast<double>(budget))
        throw BudgetExceeded("word enumeration of length " + std::to_string(maxlen) + " exceeds the budget");

    std::vector<WordRadius> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<WordRadius> level;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& p = spec.power_map(i).params();
        level.push_back({Word{i}, p, julia_radius(p)});
    }
    for (int len = 1;; ++len) {
        out.insert(out.end(), level.begin(), level.end());
        if (len == maxlen) break;
        std::vector<WordRadius> next;
        next.reserve(level.size() * k);
        for (std::size_t i = 0; i < k; ++i) {
            const auto& g = spec.power_map(i).params();
            for (const auto& wr : level) {
                Word w;
                w.reserve(wr.word.size() + 1);
                w.push_back(i);
                w.insert(w.end(), wr.word.begin(), wr.word.end());
                const Stretch p = stretch_compose(g, wr.params);
                next.push_back({std::move(w), p, julia_radius(p)});
            }
        }
        level = std::move(next);
    }
    return out;
}

std::vector<double> word_julia_radii(const SemigroupSpec& spec, int maxlen, std::size_t budget) {
    std::vector<double> radii;
    for (const auto& wr : enumerate_words(spec, maxlen, budget)) radii.push_back(wr.radius);
    std::sort(radii.begin(), radii.end());
    std::vector<double> merged;
    for (double r : radii)
        if (merged.empty() || std::log(r) - std::log(merged.back()) > 1e-12) merged.push_back(r);
    return merged;
}

RadiusInterval julia_ring_estimate(const SemigroupSpec& spec, int maxlen, std::size_t budget) {
    const auto radii = word_julia_radii(spec, maxlen, budget);
    return {radii.front(), radii.back()};
}

Point apply_word(const SemigroupSpec& spec, const Word& w, const Point& x) {
    Point y = x;
    for (auto it = w.rbegin(); it != w.rend(); ++it) y = spec.power_map(*it)(y);
    return y;
}

BackwardOrbit backward_orbit(const SemigroupSpec& spec, const Point& x, int depth, std::size_t budget) {
    if (x.is_infinity() || x.coords().norm() == 0.0)
        throw InvalidParameter("0 and infinity are exceptional for power-type semigroups");
    if (depth < 0) throw InvalidParameter("depth must be non-negative");
    if (budget == 0) throw InvalidParameter("budget must be positive");
    BackwardOrbit orbit;
    orbit.points.push_back(x);
    orbit.words.emplace_back();
    orbit.depths.push_back(0);
    std::size_t level_begin = 0;
    for (int level = 1; level <= depth; ++level) {
        const std::size_t level_end = orbit.points.size();
        for (std::size_t idx = level_begin; idx < level_end; ++idx) {
            for (std::size_t g = 0; g < spec.size(); ++g) {
                for (auto& p : preimages(spec.power_map(g), orbit.points[idx])) {
                    if (orbit.points.size() >= budget) {
                        orbit.truncated = true;
                        return orbit;
                    }
                    Word w = orbit.words[idx];
                    w.push_back(g);
                    orbit.points.push_back(std::move(p));
                    orbit.words.push_back(std::move(w));
                    orbit.depths.push_back(level);
                }
            }
        }
        level_begin = level_end;
    }
    return orbit;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::attracted: return "attracted";
        case Verdict::escaping: return "escaping";
        case Verdict::mixed_expansion: return "mixed-expansion";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

std::vector<Point> companions(const Point& x, double delta) {
    std::vector<Point> out;
    if (x.is_infinity()) return out;
    const auto& c = x.coords();
    // A Euclidean step of delta·(1+|x|²) moves roughly delta in the chordal metric.
    const double step = delta * (1.0 + c.squaredNorm());
    for (int i = 0; i < c.size(); ++i) {
        for (double sign : {-1.0, 1.0}) {
            Vec<double> v = c;
            v[i] += sign * step;
            out.emplace_back(v);
        }
    }
    return out;
}

}  // namespace

ClassificationReport classify_point(const SemigroupSpec& spec, const Point& x, std::size_t wordbudget,
                                    std::uint64_t seed, const ClassificationOptions& opt) {
    if (wordbudget == 0) throw InvalidParameter("word budget must be positive");
    const auto [rmin, rmax] = spec.generator_radius_range();
    const double low = opt.attract_factor * rmin;
    const double high = std::min(opt.escape_factor * rmax, opt.clamp);
    ClassificationReport rep;
    const auto base_companions = companions(x, opt.delta);
    std::vector<Word> separating;
    std::vector<Word> decided;

    for (std::size_t trial = 0; trial < wordbudget; ++trial) {
        Rng rng(stream_seed(seed, trial));
        // Even trials follow the orbit: they prefer generators that keep it
        // inside the shell spanned by the generators' Julia spheres.
        const bool guided = trial % 2 == 0;
        Point p = x;
        auto comp = base_companions;
        std::deque<std::size_t> applied;
        enum class Outcome { none, attracted, escaped, separated } outcome = Outcome::none;
        for (int step = 1; step <= opt.max_word_length; ++step) {
            std::vector<std::size_t> candidates;
            if (guided) {
                for (std::size_t g = 0; g < spec.size(); ++g) {
                    const double r = spec.power_map(g)(p).norm();
                    if (r >= rmin * (1 - 1e-9) && r <= rmax * (1 + 1e-9)) candidates.push_back(g);
                }
            }
            const std::size_t g = candidates.empty() ? rng.index(spec.size()) : candidates[rng.index(candidates.size())];
            const auto& f = spec.power_map(g);
            p = f(p);
            for (auto& q : comp) q = f(q);
            applied.push_front(g);

            double sep = 0.0;
            for (const auto& q : comp) sep = std::max(sep, chordal_distance(p, q));
            if (sep > 0.0) rep.expansion_estimate = std::max(rep.expansion_estimate, std::log(sep / opt.delta) / step);
            const double r = p.norm();
            if (sep > opt.separation) {
                outcome = Outcome::separated;
                break;
            }
            if (r < low) {
                outcome = Outcome::attracted;
                break;
            }
            if (r > high) {
                outcome = Outcome::escaped;
                break;
            }
        }
        Word w(applied.begin(), applied.end());
        switch (outcome) {
            case Outcome::attracted: ++rep.attracted; break;
            case Outcome::escaped: ++rep.escaped; break;
            case Outcome::separated: ++rep.separated; break;
            case Outcome::none: ++rep.undecided; break;
        }
        if (outcome == Outcome::separated) {
            if (separating.size() < 8) separating.push_back(std::move(w));
        } else if (outcome != Outcome::none && decided.size() < 4) {
            decided.push_back(std::move(w));
        }
    }

    if (rep.attracted == wordbudget) {
        rep.verdict = Verdict::attracted;
        rep.witnesses = std::move(decided);
    } else if (rep.escaped == wordbudget) {
        rep.verdict = Verdict::escaping;
        rep.witnesses = std::move(decided);
    } else if (rep.separated > 0) {
        rep.verdict = Verdict::mixed_expansion;
        rep.witnesses = std::move(separating);
    } else {
        rep.verdict = Verdict::inconclusive;
        rep.witnesses = std::move(decided);
    }
    return rep;
}

RadialJuliaDescription RadialJuliaDescription::ring(double rmin, double rmax) {
    if (!(rmin > 0.0) || !(rmax >= rmin)) throw InvalidParameter("ring needs 0 < rmin <= rmax");
    return {{{std::log(rmin), std::log(rmax)}}};
}

bool RadialJuliaDescription::contains(double radius, double log_tol) const {
    if (!(radius > 0.0) || !std::isfinite(radius)) return false;
    const double t = std::log(radius);
    return std::any_of(log_intervals.begin(), log_intervals.end(),
                       [&](const auto& iv) { return t >= iv.first - log_tol && t <= iv.second + log_tol; });
}

RadialJuliaDescription RadialJuliaDescription::merged(double log_tol) const {
    auto iv = log_intervals;
    std::sort(iv.begin(), iv.end());
    RadialJuliaDescription out;
    for (const auto& [a, b] : iv) {
        if (!out.log_intervals.empty() && a <= out.log_intervals.back().second + log_tol)
            out.log_intervals.back().second = std::max(out.log_intervals.back().second, b);
        else
            out.log_intervals.emplace_back(a, b);
    }
    return out;
}

RadialJuliaDescription ring_description(const SemigroupSpec& spec) {
    const auto [lo, hi] = spec.generator_radius_range();
    return RadialJuliaDescription::ring(lo, hi);
}

InvarianceReport invariance_check(const SemigroupSpec& spec, const RadialJuliaDescription& julia,
                                  const std::vector<Point>& juliasample, const std::vector<Point>& fatousample,
                                  double radial_tol) {
    InvarianceReport rep;
    auto fail = [&](std::string msg) {
        rep.passed = false;
        if (rep.failures.size() < 16) rep.failures.push_back(std::move(msg));
    };

    for (const auto& x : fatousample) {
        for (std::size_t g = 0; g < spec.size(); ++g) {
            const Point y = spec.power_map(g)(x);
            ++rep.fatou_images_checked;
            const double r = y.norm();
            if (r > 0.0 && std::isfinite(r) && julia.contains(r, radial_tol)) {
                ++rep.fatou_failures;
                fail("Fatou image under " + spec.label(g) + " lands in the Julia set (radius " + std::to_string(r) + ")");
            }
        }
    }

    for (const auto& x : juliasample) {
        for (std::size_t g = 0; g < spec.size(); ++g) {
            for (const auto& p : preimages(spec.power_map(g), x)) {
                ++rep.julia_preimages_checked;
                if (!julia.contains(p.norm(), radial_tol)) {
                    ++rep.julia_failures;
                    fail("preimage under " + spec.label(g) + " leaves the Julia set (radius " +
                         std::to_string(p.norm()) + ")");
                }
            }
        }
    }

    // J = ∪ g^{-1}(J) on log-radius intervals: g acts as t -> d t + ln λ.
    RadialJuliaDescription pulled;
    for (std::size_t g = 0; g < spec.size(); ++g) {
        const auto& p = spec.power_map(g).params();
        for (const auto& [a, b] : julia.log_intervals) {
            double lo = (a - p.loglambda) / static_cast<double>(p.d);
            double hi = (b - p.loglambda) / static_cast<double>(p.d);
            if (lo > hi) std::swap(lo, hi);
            pulled.log_intervals.emplace_back(lo, hi);
        }
    }
    const auto lhs = julia.merged(radial_tol).log_intervals;
    const auto rhs = pulled.merged(radial_tol).log_intervals;
    rep.decomposition_holds = lhs.size() == rhs.size();
    for (std::size_t i = 0; rep.decomposition_holds && i < lhs.size(); ++i) {
        rep.decomposition_holds = std::abs(lhs[i].first - rhs[i].first) <= radial_tol &&
                                  std::abs(lhs[i].second - rhs[i].second) <= radial_tol;
    }
    if (!rep.decomposition_holds) fail("J(G) differs from the union of generator preimages of J(G)");
    return rep;
}

}  // namespace uqr

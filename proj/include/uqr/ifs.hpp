#pragma once

// Contractive iterated function systems: chaos-game sampling, deterministic
// stage refinement, and the similarity (Moran) dimension.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "uqr/error.hpp"
#include "uqr/geometry.hpp"
#include "uqr/random.hpp"

namespace uqr {

/// Möbius member of an IFS. `witness` is mapped strictly into itself and
/// `ratio` bounds the Euclidean Lipschitz constant on the image of `witness`.
template <typename Scalar>
struct MobiusContraction {
    MobiusMap<Scalar> map;
    GeneralizedBall<Scalar> witness;
    Scalar ratio{};
};

template <typename Scalar>
using ContractionMap = std::variant<Similarity<Scalar>, MobiusContraction<Scalar>>;

template <typename Scalar>
SpherePoint<Scalar> apply(const ContractionMap<Scalar>& m, const SpherePoint<Scalar>& x) {
    if (const auto* s = std::get_if<Similarity<Scalar>>(&m)) return uqr::apply(*s, x);
    return std::get<MobiusContraction<Scalar>>(m).map(x);
}

template <typename Scalar>
Scalar contraction_ratio(const ContractionMap<Scalar>& m) {
    if (const auto* s = std::get_if<Similarity<Scalar>>(&m)) return s->scale;
    return std::get<MobiusContraction<Scalar>>(m).ratio;
}

template <typename Scalar>
GeneralizedBall<Scalar> region_image(const ContractionMap<Scalar>& m, const GeneralizedBall<Scalar>& b) {
    if (const auto* s = std::get_if<Similarity<Scalar>>(&m)) return image(*s, b);
    return image(std::get<MobiusContraction<Scalar>>(m).map, b);
}

template <typename Scalar>
bool region_within(const GeneralizedBall<Scalar>& outer, const GeneralizedBall<Scalar>& inner) {
    const Scalar scale = std::max(Scalar(1), outer.radius);
    return outer.contains(inner, Scalar(1e-12) * scale);
}

template <typename Scalar>
Scalar region_diameter(const GeneralizedBall<Scalar>& b) {
    return b.diameter();
}

template <typename Scalar>
class ContractiveSystem {
public:
    explicit ContractiveSystem(std::vector<ContractionMap<Scalar>> maps) : maps_(std::move(maps)) {
        if (maps_.empty()) throw InvalidParameter("an IFS needs at least one map");
        dim_ = member_dim(maps_.front());
        for (const auto& m : maps_) {
            if (member_dim(m) != dim_) throw InvalidParameter("IFS members have different dimensions");
            const Scalar r = contraction_ratio(m);
            if (!(r > Scalar(0) && r < Scalar(1))) throw InvalidParameter("contraction ratio must lie in (0,1)");
            if (const auto* mc = std::get_if<MobiusContraction<Scalar>>(&m)) {
                const auto img = image(mc->map, mc->witness);
                if (img.exterior || !mc->witness.contains(img, -Scalar(1e-12)))
                    throw InvalidParameter("Möbius member does not map its witness ball strictly inside itself");
            }
        }
    }

    static ContractiveSystem from_similarities(const std::vector<Similarity<Scalar>>& sims) {
        std::vector<ContractionMap<Scalar>> maps(sims.begin(), sims.end());
        return ContractiveSystem(std::move(maps));
    }

    std::size_t size() const { return maps_.size(); }
    int dim() const { return dim_; }
    const std::vector<ContractionMap<Scalar>>& maps() const { return maps_; }
    const ContractionMap<Scalar>& map(std::size_t i) const { return maps_.at(i); }

    std::vector<Scalar> ratios() const {
        std::vector<Scalar> r;
        for (const auto& m : maps_) r.push_back(contraction_ratio(m));
        return r;
    }

    Scalar max_ratio() const {
        const auto r = ratios();
        return *std::max_element(r.begin(), r.end());
    }

    /// A point on (or, for Möbius systems, within one step of) the attractor.
    SpherePoint<Scalar> start_point() const {
        const auto& m = maps_.front();
        if (const auto* s = std::get_if<Similarity<Scalar>>(&m)) return SpherePoint<Scalar>(s->fixed_point());
        const auto& mc = std::get<MobiusContraction<Scalar>>(m);
        const auto anchor = mc.witness.exterior ? SpherePoint<Scalar>::infinity(dim_)
                                                : SpherePoint<Scalar>(mc.witness.center);
        return mc.map(anchor);
    }

    /// IFS generated by the members of both systems.
    ContractiveSystem united_with(const ContractiveSystem& other) const {
        auto maps = maps_;
        maps.insert(maps.end(), other.maps_.begin(), other.maps_.end());
        return ContractiveSystem(std::move(maps));
    }

private:
    static int member_dim(const ContractionMap<Scalar>& m) {
        if (const auto* s = std::get_if<Similarity<Scalar>>(&m)) return s->dim();
        return std::get<MobiusContraction<Scalar>>(m).map.dim();
    }

    std::vector<ContractionMap<Scalar>> maps_;
    int dim_ = 0;
};

using IFS = ContractiveSystem<double>;

template <typename Scalar>
struct AttractorSample {
    std::vector<SpherePoint<Scalar>> points;
    std::size_t burnin = 0;
    std::uint64_t seed = 0;
    /// Hausdorff-distance bound between every point and the attractor,
    /// relative to the diameter of the start region.
    Scalar accuracy_factor{};
};

/// Random-composition orbit of the start point; the first `burnin` iterates
/// are discarded.
template <typename Scalar>
AttractorSample<Scalar> chaos_game(const ContractiveSystem<Scalar>& sys, std::size_t n, std::size_t burnin,
                                   std::uint64_t seed) {
    if (n == 0) throw InvalidParameter("chaos game needs n > 0");
    Rng rng(seed);
    AttractorSample<Scalar> out;
    out.burnin = burnin;
    out.seed = seed;
    out.accuracy_factor = std::pow(sys.max_ratio(), Scalar(burnin));
    out.points.reserve(n);
    SpherePoint<Scalar> p = sys.start_point();
    for (std::size_t i = 0; i < burnin + n; ++i) {
        p = uqr::apply(sys.map(rng.index(sys.size())), p);
        if (i >= burnin) out.points.push_back(p);
    }
    return out;
}

/// Images of `seed` under all words of length k, ordered lexicographically
/// with the outermost map most significant: entry p*m + j of stage k+1 lies
/// inside entry p of stage k.
template <typename Scalar, typename Region>
std::vector<Region> deterministic_stage(const ContractiveSystem<Scalar>& sys, const Region& seed, int k) {
    if (k < 0) throw InvalidParameter("stage index must be non-negative");
    for (const auto& m : sys.maps())
        if (!region_within(seed, region_image(m, seed)))
            throw InvalidParameter("seed region is not mapped into itself by every member");
    const double count = std::pow(static_cast<double>(sys.size()), k);
    if (count > 5e7) throw BudgetExceeded("stage would contain too many regions");
    std::vector<Region> stage{seed};
    for (int level = 0; level < k; ++level) {
        std::vector<Region> next;
        next.reserve(stage.size() * sys.size());
        // Prepending the outer map keeps word order lexicographic.
        for (const auto& m : sys.maps())
            for (const auto& r : stage) next.push_back(region_image(m, r));
        stage = std::move(next);
    }
    return stage;
}

/// Unique s with Σ r_i^s = 1, by bisection.
template <typename Scalar>
Scalar similarity_dimension(std::span<const Scalar> ratios) {
    using std::log;
    using std::pow;
    if (ratios.empty()) throw InvalidParameter("similarity dimension needs at least one ratio");
    for (Scalar r : ratios)
        if (!(r > Scalar(0) && r < Scalar(1))) throw InvalidParameter("ratios must lie in (0,1)");
    if (ratios.size() == 1) return Scalar(0);
    auto excess = [&](Scalar s) {
        Scalar sum(0);
        for (Scalar r : ratios) sum += pow(r, s);
        return sum - Scalar(1);
    };
    const Scalar rmax = *std::max_element(ratios.begin(), ratios.end());
    Scalar lo(1e-9);
    Scalar hi = std::max(Scalar(1), log(Scalar(ratios.size())) / log(Scalar(1) / rmax));
    if (excess(hi) > Scalar(0)) hi *= Scalar(2);
    for (int it = 0; it < 400; ++it) {
        const Scalar mid = (lo + hi) / Scalar(2);
        if (mid <= lo || mid >= hi) break;
        (excess(mid) > Scalar(0) ? lo : hi) = mid;
    }
    return (lo + hi) / Scalar(2);
}

template <typename Scalar>
Scalar similarity_dimension(const std::vector<Scalar>& ratios) {
    return similarity_dimension(std::span<const Scalar>(ratios));
}

}  // namespace uqr

#include <cmath>
#include <random>
#include <vector>

#include "kcurve/csc.hpp"
#include "kcurve/errors.hpp"
#include "kcurve/geom.hpp"
#include "kcurve/validate.hpp"

namespace kcurve {

namespace {

// One random walk from x closed up to (y, random heading) by the shortest
// arc-segment-arc connector. The walk itself is C1 by construction.
CsCurve draw_once(Point2 x, Point2 y, KappaParams kappa, int budget,
                  std::mt19937_64& rng) {
    std::uniform_real_distribution<double> head_dist(-kPi, kPi);
    std::uniform_real_distribution<double> sweep_dist(-kPi / 2.0, kPi / 2.0);
    std::uniform_real_distribution<double> len_dist(0.0, kappa.r);
    std::bernoulli_distribution coin(0.5);

    Config current{x, head_dist(rng)};
    std::vector<Component> comps;
    for (int i = 0; i + 3 < budget; ++i) {
        if (coin(rng)) {
            double sweep = sweep_dist(rng);
            while (std::abs(sweep) < 0.05) sweep = sweep_dist(rng);
            const double side = sweep > 0.0 ? 1.0 : -1.0;
            const Point2 center =
                current.position + kappa.r * unit(current.heading +
                                                  side * kPi / 2.0);
            ArcComponent arc{center, kappa.r,
                             angle_of(current.position - center), sweep};
            comps.push_back(arc);
            current = Config{arc.end_point(), arc.heading_at(arc.length())};
        } else {
            double len = len_dist(rng);
            while (len < 0.05 * kappa.r) len = len_dist(rng);
            SegmentComponent seg{current.position,
                                 current.position +
                                     len * unit(current.heading)};
            comps.push_back(seg);
            current = Config{seg.end, current.heading};
        }
    }
    const Config target{y, head_dist(rng)};
    const CsCurve tail =
        csc_curve(current, solve_csc(current, target, kappa).best(), kappa);
    for (const Component& comp : tail.components()) comps.push_back(comp);
    return CsCurve(kappa, comps);
}

// Net turning of the loop in full turns: the summed arc sweeps plus the
// short-way corner turn closing the end heading back to the start heading.
int loop_winding(const CsCurve& curve) {
    double sweep_sum = 0.0;
    for (const Component& comp : curve.components()) {
        if (const auto* arc = std::get_if<ArcComponent>(&comp))
            sweep_sum += arc->sweep;
    }
    const double seam = angle_diff(curve.start_config().heading,
                                   curve.end_config().heading);
    return static_cast<int>(std::lround((sweep_sum + seam) / kTwoPi));
}

}  // namespace

CsCurve random_curve(Point2 x, Point2 y, KappaParams kappa,
                     int complexity_budget, std::uint64_t seed) {
    if (complexity_budget < 3) {
        throw DomainError(
            "random_curve: complexity budget must be at least 3 (the "
            "closing connector alone can need that many components)");
    }
    std::mt19937_64 rng(seed);
    const bool closed = distance(x, y) <= 1e-12;
    const int max_attempts = 32;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        CsCurve candidate = draw_once(x, y, kappa, complexity_budget, rng);
        if (!validate_cs(candidate).valid) continue;
        if (closed && std::abs(loop_winding(candidate)) != 1) continue;
        return candidate;
    }
    throw GenerationError(
        "random_curve: no acceptable draw after 32 attempts");
}

}  // namespace kcurve

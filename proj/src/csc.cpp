#include "kcurve/csc.hpp"

#include <algorithm>
#include <cmath>

namespace kcurve {

namespace {

// Snap a just-short-of-full-turn sweep to zero: those arise from angle
// wrap-around when start and target headings align, not from a genuine
// need to loop.
double snap_sweep(double sweep) {
    return (std::fabs(sweep) >= kTwoPi - 1e-12) ? 0.0 : sweep;
}

Point2 turn_center(const Config& c, double side, double r) {
    return c.position + r * unit(c.heading + side * kPi / 2.0);
}

struct WordSpec {
    WordType word;
    double side1;  // +1 = counterclockwise first arc, -1 = clockwise
    double side2;
};

constexpr std::array<WordSpec, 4> kWordSpecs = {{
    {WordType::LSL, +1.0, +1.0},
    {WordType::LSR, +1.0, -1.0},
    {WordType::RSL, -1.0, +1.0},
    {WordType::RSR, -1.0, -1.0},
}};

// Sweep from heading `a` to heading `b` turning in direction `side`.
double directed_sweep(double a, double b, double side) {
    return side > 0.0 ? mod_two_pi(b - a) : -mod_two_pi(a - b);
}

std::optional<CscWord> solve_word(const WordSpec& spec, const Config& start,
                                  const Config& end, double r) {
    const Point2 c1 = turn_center(start, spec.side1, r);
    const Point2 c2 = turn_center(end, spec.side2, r);
    const Point2 D = c2 - c1;
    const double dist = norm(D);
    CscWord out;
    out.word = spec.word;
    if (spec.side1 == spec.side2) {
        if (dist < 1e-12) {
            // Both configurations share one turning circle: a single arc.
            out.arc1_sweep = snap_sweep(
                directed_sweep(start.heading, end.heading, spec.side1));
            out.seg_length = 0.0;
            out.arc2_sweep = 0.0;
        } else {
            const double u = angle_of(D);
            out.arc1_sweep = snap_sweep(directed_sweep(start.heading, u, spec.side1));
            out.seg_length = dist;
            out.arc2_sweep = snap_sweep(directed_sweep(u, end.heading, spec.side2));
        }
    } else {
        // The segment runs between the circles; it exists only when they
        // are at least a diameter apart.
        if (dist < 2.0 * r) return std::nullopt;
        const double t = std::sqrt(std::max(dist * dist - 4.0 * r * r, 0.0));
        const double u = angle_of(D) + spec.side1 * std::atan2(2.0 * r, t);
        out.arc1_sweep = snap_sweep(directed_sweep(start.heading, u, spec.side1));
        out.seg_length = t;
        out.arc2_sweep = snap_sweep(directed_sweep(u, end.heading, spec.side2));
    }
    out.length = r * (std::fabs(out.arc1_sweep) + std::fabs(out.arc2_sweep)) +
                 out.seg_length;
    return out;
}

}  // namespace

std::string word_name(WordType w) {
    switch (w) {
        case WordType::LSL: return "LSL";
        case WordType::LSR: return "LSR";
        case WordType::RSL: return "RSL";
        case WordType::RSR: return "RSR";
    }
    return "?";
}

CscSolution solve_csc(const Config& start, const Config& end, KappaParams kappa) {
    CscSolution sol;
    double best = 1e300;
    for (const auto& spec : kWordSpecs) {
        auto w = solve_word(spec, start, end, kappa.r);
        if (!w) continue;
        sol.candidates.push_back(*w);
        if (w->length < best) {
            best = w->length;
            sol.best_index = sol.candidates.size() - 1;
        }
    }
    if (sol.candidates.empty())
        throw DomainError("no arc-segment-arc word joins the configurations");
    return sol;
}

CsCurve csc_curve(const Config& start, const CscWord& word, KappaParams kappa) {
    const double r = kappa.r;
    double side1 = 0.0, side2 = 0.0;
    for (const auto& spec : kWordSpecs) {
        if (spec.word == word.word) {
            side1 = spec.side1;
            side2 = spec.side2;
        }
    }
    std::vector<Component> comps;
    Config cur = start;
    if (std::fabs(word.arc1_sweep) > 0.0) {
        ArcComponent arc;
        arc.center = turn_center(cur, side1, r);
        arc.radius = r;
        arc.start_angle = cur.heading - side1 * kPi / 2.0;
        arc.sweep = word.arc1_sweep;
        comps.push_back(arc);
        cur = component_end(comps.back());
    }
    if (word.seg_length > 0.0) {
        SegmentComponent seg{cur.position,
                             cur.position + word.seg_length * unit(cur.heading)};
        comps.push_back(seg);
        cur = component_end(comps.back());
    }
    if (std::fabs(word.arc2_sweep) > 0.0) {
        ArcComponent arc;
        arc.center = turn_center(cur, side2, r);
        arc.radius = r;
        arc.start_angle = cur.heading - side2 * kPi / 2.0;
        arc.sweep = word.arc2_sweep;
        comps.push_back(arc);
    }
    return CsCurve(kappa, std::move(comps));
}

namespace {

Fragmentation fragmentation_of_length(double total, double lambda, double r) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw DomainError("fragmentation fraction must lie strictly between 0 and 1");
    const std::size_t m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(total / (lambda * r))));
    Fragmentation f;
    f.breakpoints.reserve(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        f.breakpoints.push_back(total * static_cast<double>(i) /
                                static_cast<double>(m));
    return f;
}

}  // namespace

Fragmentation fragmentation(const CsCurve& curve, double lambda) {
    return fragmentation_of_length(curve.total_length(), lambda, curve.kappa().r);
}

Fragmentation fragmentation(const SampledCurve& curve, double lambda) {
    return fragmentation_of_length(curve.total_length(), lambda, curve.kappa.r);
}

CsCurve replace_fragment(const Config& start, const Config& end,
                         double fragment_length, KappaParams kappa) {
    const CscSolution sol = solve_csc(start, end, kappa);
    const CsCurve out = csc_curve(start, sol.best(), kappa);
    if (out.total_length() > fragment_length + kTol)
        throw Error("replacement exceeds the fragment length; "
                    "the fragment violates the curvature bound");
    return out;
}

CsCurve replace_fragment(const CsCurve& fragment) {
    const double len = fragment.total_length();
    if (len >= fragment.kappa().r)
        throw DomainError("fragment must be shorter than the turning radius");
    return replace_fragment(fragment.start_config(), fragment.end_config(), len,
                            fragment.kappa());
}

namespace {

// Tangent estimate at arbitrary arc length of a sampled curve, interpolating
// between vertex estimates (smoother than the raw chord heading).
double sampled_tangent_smooth(const SampledCurve& c, double s) {
    const auto& cum = c.cumulative_lengths;
    s = std::clamp(s, 0.0, c.total_length());
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t i = (it == cum.begin()) ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
    if (i + 1 >= c.points.size()) i = c.points.size() - 2;
    const double a = cum[i], b = cum[i + 1];
    const double t = (b > a) ? (s - a) / (b - a) : 0.0;
    const double t0 = c.vertex_tangent(i);
    const double t1 = c.vertex_tangent(i + 1);
    return normalize_angle(t0 + t * angle_diff(t1, t0));
}

}  // namespace

CsCurve replace_fragment(const SampledCurve& fragment) {
    const double len = fragment.total_length();
    if (len >= fragment.kappa.r)
        throw DomainError("fragment must be shorter than the turning radius");
    const Config start{fragment.points.front(), sampled_tangent_smooth(fragment, 0.0)};
    const Config end{fragment.points.back(), sampled_tangent_smooth(fragment, len)};
    const CscSolution sol = solve_csc(start, end, fragment.kappa);
    return csc_curve(start, sol.best(), fragment.kappa);
}

namespace {

template <typename CurveT, typename ConfigAt>
CsCurve normalize_impl(const CurveT& curve, double lambda, ConfigAt config_at,
                       KappaParams kappa) {
    const Fragmentation frag = fragmentation(curve, lambda);
    std::optional<CsCurve> acc;
    for (std::size_t i = 0; i + 1 < frag.breakpoints.size(); ++i) {
        const double s0 = frag.breakpoints[i];
        const double s1 = frag.breakpoints[i + 1];
        const Config c0 = config_at(s0);
        const Config c1 = config_at(s1);
        const CscSolution sol = solve_csc(c0, c1, kappa);
        CsCurve piece = csc_curve(c0, sol.best(), kappa);
        acc = acc ? concatenate(*acc, piece) : piece;
    }
    return *acc;
}

}  // namespace

CsCurve normalize(const CsCurve& curve, double lambda) {
    return normalize_impl(
        curve, lambda, [&](double s) { return curve.config_at(s); },
        curve.kappa());
}

CsCurve normalize(const SampledCurve& curve, double lambda) {
    return normalize_impl(
        curve, lambda,
        [&](double s) {
            return Config{curve.evaluate(s), sampled_tangent_smooth(curve, s)};
        },
        curve.kappa);
}

std::optional<CsCurve> solve_point_to_config(Point2 from, const Config& to,
                                             KappaParams kappa) {
    const double r = kappa.r;
    std::optional<CsCurve> best;
    double best_len = 1e300;
    for (const double side : {+1.0, -1.0}) {
        const Point2 o = turn_center(to, side, r);
        const Point2 w = o - from;
        const double D = norm(w);
        if (D < r - 1e-12) continue;  // start strictly inside this circle
        const double target_angle = to.heading - side * kPi / 2.0;
        std::vector<Component> comps;
        double len = 0.0;
        if (D <= r + 1e-12) {
            // Start on the circle: pure arc into the configuration.
            const double psi = angle_of(from - o);
            const double sweep =
                snap_sweep(directed_sweep(psi + side * kPi / 2.0,
                                          to.heading, side));
            if (std::fabs(sweep) < kEpsDegenerate) continue;
            ArcComponent arc{o, r, psi, sweep};
            comps.push_back(arc);
            len = arc.length();
        } else {
            const double alpha = angle_of(w);
            const double rho = std::acos(std::clamp(-r / D, -1.0, 1.0));
            bool found = false;
            for (const double sgn : {+1.0, -1.0}) {
                const double psi = alpha + sgn * rho;
                const Point2 T = o + r * unit(psi);
                const double tau = norm(T - from);
                if (tau < 1e-12) continue;
                const double u = angle_of(T - from);
                // The travel direction along the circle at T must match the
                // segment direction for the chosen turn side.
                if (std::fabs(angle_diff(psi + side * kPi / 2.0, u)) > 1e-9)
                    continue;
                const double sweep =
                    snap_sweep(directed_sweep(psi, target_angle, side));
                SegmentComponent seg{from, T};
                comps.clear();
                comps.push_back(seg);
                len = tau;
                if (std::fabs(sweep) >= kEpsDegenerate) {
                    ArcComponent arc{o, r, psi, sweep};
                    comps.push_back(arc);
                    len += arc.length();
                }
                found = true;
                break;
            }
            if (!found) continue;
        }
        if (comps.empty()) continue;
        if (len < best_len) {
            best_len = len;
            best = CsCurve(kappa, comps);
        }
    }
    return best;
}

std::optional<CsCurve> solve_config_to_point(const Config& from, Point2 to,
                                             KappaParams kappa) {
    const Config flipped{from.position, from.heading + kPi};
    auto rev = solve_point_to_config(to, flipped, kappa);
    if (!rev) return std::nullopt;
    return reverse(*rev);
}

}  // namespace kcurve

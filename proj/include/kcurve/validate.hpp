#pragma once

#include <string>
#include <vector>

#include "kcurve/geom.hpp"

namespace kcurve {

struct Violation {
    double location = 0.0;  // arc length (or frame index for trace reports)
    std::string kind;
    double magnitude = 0.0;
};

struct ValidationReport {
    bool valid = true;
    double max_curvature = 0.0;
    double worst_joint_gap = 0.0;
    std::vector<Violation> violations;

    void add(double location, std::string kind, double magnitude) {
        valid = false;
        violations.push_back({location, std::move(kind), magnitude});
    }
};

struct Disk {
    Point2 center;
    double radius = 1.0;

    Disk(Point2 c, double radius_in) : center(c), radius(radius_in) {
        if (!(radius > 0.0)) throw DomainError("disk radius must be positive");
    }
};

enum class DichotomyResult { OnBoundary, InteriorDisjoint, Violation };

// Structural check for arc/segment curves: every interior joint continuous
// in position and tangent (within kEpsJoin) and every arc at least as flat
// as the curvature bound allows (radius >= r(1 - kEpsRel)).
ValidationReport validate_cs(const CsCurve& curve);

// Discrete check for sampled curves: circumscribed-circle curvature
// estimate at most kappa(1 + kEpsRel) everywhere, consistent cumulative
// lengths, no duplicate points.
ValidationReport validate_sampled(const SampledCurve& curve);

// Length law for curves that start on a circle of radius r about the
// origin, stay outside it, and wind through polar angle eta: the length is
// at least r*eta. The checker returns the truth of that inequality (with
// kTol slack); it must come back true for every conforming input.
bool check_radial_bound(const CsCurve& curve, double eta);

// Length law for curves from the origin to a point at height z >= 0: the
// length is at least z.
bool check_vertical_bound(const CsCurve& curve);

// A curvature-bounded curve inside a closed disk of the critical radius r
// either runs entirely along the boundary circle or touches it at most at
// its endpoints. Violation is returned when an interior point lies on the
// boundary while the curve leaves it - which must never happen for valid
// curves.
DichotomyResult check_disk_dichotomy(const CsCurve& curve, const Disk& disk);

// A curve inside the vertical strip |x| < r starting and ending on the
// horizontal axis, both endpoints on the given circle (radius r, center on
// the negative y-axis), can never rise strictly above that circle. Returns
// whether the curve indeed stays on or below it.
bool check_band_escape(const CsCurve& curve, const Disk& circle);

}  // namespace kcurve

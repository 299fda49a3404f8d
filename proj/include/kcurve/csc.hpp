#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kcurve/geom.hpp"

namespace kcurve {

enum class WordType { LSL, LSR, RSL, RSR };

std::string word_name(WordType w);

// One realized arc-segment-arc join between two configurations. Sweeps are
// signed (positive = counterclockwise); realizing the word from the start
// configuration reaches the end configuration within kEpsJoin.
struct CscWord {
    WordType word = WordType::LSL;
    double arc1_sweep = 0.0;
    double seg_length = 0.0;
    double arc2_sweep = 0.0;
    double length = 0.0;
};

// All feasible words for a configuration pair, with the shortest singled
// out (ties broken in enumeration order LSL < LSR < RSL < RSR).
struct CscSolution {
    std::vector<CscWord> candidates;
    std::size_t best_index = 0;

    const CscWord& best() const { return candidates[best_index]; }
};

// Equal-length subdivision with every piece shorter than the turning radius.
struct Fragmentation {
    std::vector<double> breakpoints;  // 0 = t0 < t1 < ... < tm = total length

    std::size_t piece_count() const { return breakpoints.size() - 1; }
};

CscSolution solve_csc(const Config& start, const Config& end, KappaParams kappa);

// Build the curve realized by a word from its start configuration.
CsCurve csc_curve(const Config& start, const CscWord& word, KappaParams kappa);

Fragmentation fragmentation(const CsCurve& curve, double lambda);
Fragmentation fragmentation(const SampledCurve& curve, double lambda);

// Minimal arc-segment-arc curve matching the endpoint configurations of a
// curve piece shorter than the turning radius; never longer than the piece
// (within kTol).
CsCurve replace_fragment(const CsCurve& fragment);
CsCurve replace_fragment(const SampledCurve& fragment);
CsCurve replace_fragment(const Config& start, const Config& end,
                         double fragment_length, KappaParams kappa);

// Concatenation of all fragment replacements: an arc/segment curve with the
// same endpoints, never longer than the input (within a per-piece kTol).
CsCurve normalize(const CsCurve& curve, double lambda = 0.9);
CsCurve normalize(const SampledCurve& curve, double lambda = 0.9);

// Shortest curve from a free-heading start point to a configuration:
// a straight run onto a tangent circle of the target (segment-then-arc).
// Empty when the point is strictly inside both tangent circles.
std::optional<CsCurve> solve_point_to_config(Point2 from, const Config& to,
                                             KappaParams kappa);

// Mirror problem: from a configuration to a free-heading end point
// (arc-then-segment).
std::optional<CsCurve> solve_config_to_point(const Config& from, Point2 to,
                                             KappaParams kappa);

}  // namespace kcurve

#include "kcurve/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcurve/errors.hpp"

namespace kcurve {

std::string format_real(double value) {
    if (value == 0.0) value = 0.0;  // collapse negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

using nlohmann::json;

std::string escape_string(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x",
                                  static_cast<unsigned>(ch));
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

void emit_point(std::ostringstream& os, Point2 p) {
    os << '[' << format_real(p.x) << ',' << format_real(p.y) << ']';
}

void emit_components(std::ostringstream& os,
                     const std::vector<Component>& comps) {
    os << '[';
    bool first = true;
    for (const Component& c : comps) {
        if (!first) os << ',';
        first = false;
        if (const auto* arc = std::get_if<ArcComponent>(&c)) {
            os << "{\"center\":";
            emit_point(os, arc->center);
            os << ",\"radius\":" << format_real(arc->radius)
               << ",\"start_angle\":" << format_real(arc->start_angle)
               << ",\"sweep\":" << format_real(arc->sweep)
               << ",\"type\":\"arc\"}";
        } else {
            const auto& seg = std::get<SegmentComponent>(c);
            os << "{\"end\":";
            emit_point(os, seg.end);
            os << ",\"start\":";
            emit_point(os, seg.start);
            os << ",\"type\":\"segment\"}";
        }
    }
    os << ']';
}

// ---- strict parsing helpers ---------------------------------------------

[[noreturn]] void schema_error(const std::string& msg) {
    throw ParseError(ParseError::Kind::Schema, "schema: " + msg);
}

[[noreturn]] void validation_error(const std::string& msg) {
    throw ParseError(ParseError::Kind::Validation, "validation: " + msg);
}

void require_object(const json& v, const char* where) {
    if (!v.is_object())
        schema_error(std::string(where) + " must be an object");
}

void require_exact_keys(const json& obj,
                        std::initializer_list<const char*> keys,
                        const char* where) {
    require_object(obj, where);
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            schema_error(std::string("unknown field \"") + it.key() +
                         "\" in " + where);
    }
    for (const char* k : keys) {
        if (!obj.contains(k))
            schema_error(std::string("missing field \"") + k + "\" in " +
                         where);
    }
}

double get_real(const json& obj, const char* key, const char* where) {
    const json& v = obj.at(key);
    if (!v.is_number())
        schema_error(std::string("field \"") + key + "\" in " + where +
                     " must be a number");
    return v.get<double>();
}

std::string get_string(const json& obj, const char* key, const char* where) {
    const json& v = obj.at(key);
    if (!v.is_string())
        schema_error(std::string("field \"") + key + "\" in " + where +
                     " must be a string");
    return v.get<std::string>();
}

Point2 get_point(const json& v, const char* where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number())
        schema_error(std::string(where) +
                     " must be an array of two numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

double parse_kappa(const json& obj, const char* where) {
    const double kappa = get_real(obj, "kappa", where);
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        schema_error("kappa must be a positive finite number");
    return kappa;
}

void check_format_version(const json& obj, const char* where) {
    if (get_string(obj, "format_version", where) != "1")
        schema_error("unsupported format_version (expected \"1\")");
}

json parse_root(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(ParseError::Kind::Syntax,
                         std::string("syntax: ") + e.what());
    }
}

// `strict_radius`: arcs must match the turning radius implied by kappa
// (curve documents); trace frames may carry any positive radius so that
// rule-breaking frames stay representable.
std::vector<Component> parse_components(const json& arr, double r,
                                        bool strict_radius,
                                        const char* where) {
    if (!arr.is_array())
        schema_error(std::string(where) + " must be an array");
    std::vector<Component> comps;
    for (const json& c : arr) {
        require_object(c, "component");
        const std::string type = get_string(c, "type", "component");
        if (type == "arc") {
            require_exact_keys(
                c, {"center", "radius", "start_angle", "sweep", "type"},
                "arc component");
            const Point2 center = get_point(c.at("center"), "center");
            const double radius = get_real(c, "radius", "arc component");
            const double start_angle =
                get_real(c, "start_angle", "arc component");
            const double sweep = get_real(c, "sweep", "arc component");
            if (!(radius > 0.0))
                validation_error("arc radius must be positive");
            if (strict_radius &&
                std::abs(radius - r) > 1e-9 * std::max(1.0, r))
                validation_error(
                    "arc radius " + format_real(radius) +
                    " incompatible with the turning radius " +
                    format_real(r) + " implied by kappa");
            comps.push_back(ArcComponent{center, radius, start_angle, sweep});
        } else if (type == "segment") {
            require_exact_keys(c, {"end", "start", "type"},
                               "segment component");
            comps.push_back(SegmentComponent{get_point(c.at("start"), "start"),
                                             get_point(c.at("end"), "end")});
        } else {
            schema_error("component type must be \"arc\" or \"segment\"");
        }
    }
    return comps;
}

CsCurve build_cs(KappaParams kappa, std::vector<Component> comps) {
    try {
        return CsCurve(kappa, std::move(comps));
    } catch (const Error& e) {
        validation_error(e.what());
    }
}

}  // namespace

std::string emit_curve(const CsCurve& curve) {
    std::ostringstream os;
    os << "{\"components\":";
    emit_components(os, curve.components());
    os << ",\"format_version\":\"1\",\"kappa\":"
       << format_real(curve.kappa().kappa) << ",\"kind\":\"cs\"}\n";
    return os.str();
}

std::string emit_curve(const SampledCurve& curve) {
    std::ostringstream os;
    os << "{\"cumulative_lengths\":[";
    for (std::size_t i = 0; i < curve.cumulative_lengths.size(); ++i) {
        if (i) os << ',';
        os << format_real(curve.cumulative_lengths[i]);
    }
    os << "],\"format_version\":\"1\",\"kappa\":"
       << format_real(curve.kappa.kappa) << ",\"kind\":\"sampled\",\"points\":[";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (i) os << ',';
        emit_point(os, curve.points[i]);
    }
    os << "]}\n";
    return os.str();
}

std::string emit_trace(const HomotopyTrace& trace) {
    if (trace.frames.empty())
        throw DomainError("emit_trace: trace has no frames");
    std::ostringstream os;
    const CsCurve& first = trace.frames.front().curve;
    os << "{\"endpoints\":{\"end\":";
    emit_point(os, first.end_point());
    os << ",\"start\":";
    emit_point(os, first.start_point());
    os << "},\"format_version\":\"1\",\"frames\":[";
    for (std::size_t i = 0; i < trace.frames.size(); ++i) {
        if (i) os << ',';
        os << "{\"components\":";
        emit_components(os, trace.frames[i].curve.components());
        os << ",\"p\":" << format_real(trace.frames[i].p) << '}';
    }
    os << "],\"kappa\":" << format_real(first.kappa().kappa)
       << ",\"moves\":[";
    for (std::size_t i = 0; i < trace.moves.size(); ++i) {
        const MoveAnnotation& mv = trace.moves[i];
        if (i) os << ',';
        os << "{\"detail\":\"" << escape_string(mv.detail)
           << "\",\"kind\":\"" << move_kind_name(mv.kind)
           << "\",\"p_begin\":" << format_real(mv.p_begin)
           << ",\"p_end\":" << format_real(mv.p_end) << '}';
    }
    os << "],\"step_hint\":" << format_real(trace.step_hint) << "}\n";
    return os.str();
}

std::string emit_report(const ValidationReport& report) {
    std::ostringstream os;
    os << "{\"max_curvature\":" << format_real(report.max_curvature)
       << ",\"valid\":" << (report.valid ? "true" : "false")
       << ",\"violations\":[";
    for (std::size_t i = 0; i < report.violations.size(); ++i) {
        const Violation& v = report.violations[i];
        if (i) os << ',';
        os << "{\"kind\":\"" << escape_string(v.kind)
           << "\",\"location\":" << format_real(v.location)
           << ",\"magnitude\":" << format_real(v.magnitude) << '}';
    }
    os << "],\"worst_joint_gap\":" << format_real(report.worst_joint_gap)
       << "}\n";
    return os.str();
}

ParsedCurve parse_curve(const std::string& text) {
    const json root = parse_root(text);
    require_object(root, "document");
    if (!root.contains("kind")) schema_error("missing field \"kind\"");
    const std::string kind = get_string(root, "kind", "document");
    if (kind == "cs") {
        require_exact_keys(root,
                           {"components", "format_version", "kappa", "kind"},
                           "curve document");
        check_format_version(root, "curve document");
        const KappaParams kappa{parse_kappa(root, "curve document")};
        CsCurve curve =
            build_cs(kappa, parse_components(root.at("components"), kappa.r,
                                             true, "components"));
        const ValidationReport report = validate_cs(curve);
        if (!report.valid)
            validation_error("curve fails validation (" +
                             report.violations.front().kind + " at arc length " +
                             format_real(report.violations.front().location) +
                             ")");
        return curve;
    }
    if (kind == "sampled") {
        require_exact_keys(root,
                           {"cumulative_lengths", "format_version", "kappa",
                            "kind", "points"},
                           "curve document");
        check_format_version(root, "curve document");
        const KappaParams kappa{parse_kappa(root, "curve document")};
        const json& jp = root.at("points");
        if (!jp.is_array()) schema_error("\"points\" must be an array");
        std::vector<Point2> points;
        for (const json& v : jp) points.push_back(get_point(v, "point"));
        const json& jc = root.at("cumulative_lengths");
        if (!jc.is_array())
            schema_error("\"cumulative_lengths\" must be an array");
        std::vector<double> cum;
        for (const json& v : jc) {
            if (!v.is_number())
                schema_error("\"cumulative_lengths\" entries must be numbers");
            cum.push_back(v.get<double>());
        }
        try {
            SampledCurve curve(kappa, std::move(points), std::move(cum));
            const ValidationReport report = validate_sampled(curve);
            if (!report.valid)
                validation_error("sampled curve fails validation (" +
                                 report.violations.front().kind + ")");
            return curve;
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            validation_error(e.what());
        }
    }
    schema_error("\"kind\" must be \"cs\" or \"sampled\"");
}

HomotopyTrace parse_trace(const std::string& text) {
    const json root = parse_root(text);
    require_exact_keys(root,
                       {"endpoints", "format_version", "frames", "kappa",
                        "moves", "step_hint"},
                       "trace document");
    check_format_version(root, "trace document");
    const KappaParams kappa{parse_kappa(root, "trace document")};
    require_exact_keys(root.at("endpoints"), {"end", "start"}, "endpoints");
    get_point(root.at("endpoints").at("start"), "endpoints.start");
    get_point(root.at("endpoints").at("end"), "endpoints.end");

    HomotopyTrace trace;
    const json& jf = root.at("frames");
    if (!jf.is_array()) schema_error("\"frames\" must be an array");
    if (jf.empty()) validation_error("trace must contain at least one frame");
    for (const json& f : jf) {
        require_exact_keys(f, {"components", "p"}, "frame");
        const double p = get_real(f, "p", "frame");
        CsCurve curve =
            build_cs(kappa, parse_components(f.at("components"), kappa.r,
                                             false, "frame components"));
        trace.frames.push_back({p, std::move(curve)});
    }
    const json& jm = root.at("moves");
    if (!jm.is_array()) schema_error("\"moves\" must be an array");
    for (const json& m : jm) {
        require_exact_keys(m, {"detail", "kind", "p_begin", "p_end"}, "move");
        const std::string kind = get_string(m, "kind", "move");
        MoveAnnotation mv;
        if (kind == "type1") mv.kind = MoveKind::TypeI;
        else if (kind == "type2") mv.kind = MoveKind::TypeII;
        else if (kind == "type3") mv.kind = MoveKind::TypeIII;
        else if (kind == "fragment_replacement")
            mv.kind = MoveKind::FragmentReplacement;
        else schema_error("unknown move kind \"" + kind + "\"");
        mv.detail = get_string(m, "detail", "move");
        mv.p_begin = get_real(m, "p_begin", "move");
        mv.p_end = get_real(m, "p_end", "move");
        trace.moves.push_back(std::move(mv));
    }
    trace.step_hint = get_real(root, "step_hint", "trace document");
    return trace;
}

// ---- SVG rendering -------------------------------------------------------

namespace {

struct Bounds {
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    void add(Point2 p) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    bool ok() const { return maxx >= minx && maxy >= miny; }
};

std::string svg_num(double v) {
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

void add_curve_bounds(const CsCurve& c, Bounds& b) {
    const double len = total_length(c);
    const int n = 256;
    for (int i = 0; i <= n; ++i)
        b.add(c.evaluate(len * static_cast<double>(i) / n));
}

void add_circle_bounds(Point2 center, double r, Bounds& b) {
    b.add(center + Point2{r, r});
    b.add(center - Point2{r, r});
}

// Path data in screen coordinates (y negated), arcs as elliptical-arc
// commands split below a half turn.
std::string path_for_components(const std::vector<Component>& comps) {
    std::ostringstream os;
    bool started = false;
    for (const Component& c : comps) {
        const Point2 s = component_start(c).position;
        if (!started) {
            os << "M " << svg_num(s.x) << ' ' << svg_num(-s.y);
            started = true;
        }
        if (const auto* arc = std::get_if<ArcComponent>(&c)) {
            const int pieces = std::max(
                1, static_cast<int>(std::ceil(std::abs(arc->sweep) /
                                              (0.9 * kPi))));
            const int flag = arc->sweep < 0.0 ? 1 : 0;
            for (int i = 1; i <= pieces; ++i) {
                const double a = arc->start_angle +
                                 arc->sweep * static_cast<double>(i) / pieces;
                const Point2 p = arc->center + arc->radius * unit(a);
                os << " A " << svg_num(arc->radius) << ' '
                   << svg_num(arc->radius) << " 0 0 " << flag << ' '
                   << svg_num(p.x) << ' ' << svg_num(-p.y);
            }
        } else {
            const auto& seg = std::get<SegmentComponent>(c);
            os << " L " << svg_num(seg.end.x) << ' ' << svg_num(-seg.end.y);
        }
    }
    return os.str();
}

std::string circle_path(Point2 center, double r) {
    std::ostringstream os;
    const Point2 a = center + Point2{r, 0.0};
    const Point2 b = center - Point2{r, 0.0};
    os << "M " << svg_num(a.x) << ' ' << svg_num(-a.y) << " A " << svg_num(r)
       << ' ' << svg_num(r) << " 0 0 0 " << svg_num(b.x) << ' '
       << svg_num(-b.y) << " A " << svg_num(r) << ' ' << svg_num(r)
       << " 0 0 0 " << svg_num(a.x) << ' ' << svg_num(-a.y) << " Z";
    return os.str();
}

// Arc path piece from angle a0 by `sweep` around `center`, appended to a
// region outline.
void append_arc_piece(std::ostringstream& os, Point2 center, double r,
                      double a0, double sweep) {
    const int pieces = std::max(
        1, static_cast<int>(std::ceil(std::abs(sweep) / (0.9 * kPi))));
    const int flag = sweep < 0.0 ? 1 : 0;
    for (int i = 1; i <= pieces; ++i) {
        const double a = a0 + sweep * static_cast<double>(i) / pieces;
        const Point2 p = center + r * unit(a);
        os << " A " << svg_num(r) << ' ' << svg_num(r) << " 0 0 " << flag
           << ' ' << svg_num(p.x) << ' ' << svg_num(-p.y);
    }
}

void append_region_layers(std::ostringstream& body, const LensGeometry& lens,
                          double stroke_width) {
    const double r = lens.kappa.r;
    const double ax1 = angle_of(lens.x - lens.c1);
    const double ay1 = angle_of(lens.y - lens.c1);
    const double ax2 = angle_of(lens.x - lens.c2);
    const double ay2 = angle_of(lens.y - lens.c2);
    const double short1_xy = normalize_angle(ay1 - ax1);
    const double short1_yx = normalize_angle(ax1 - ay1);
    const double short2_yx = normalize_angle(ax2 - ay2);
    const double long1_xy = -mod_two_pi(ax1 - ay1);
    const double long2_xy = mod_two_pi(ay2 - ax2);

    // Outer lobes: each disk minus the closed lens.
    {
        std::ostringstream path;
        path << "M " << svg_num(lens.x.x) << ' ' << svg_num(-lens.x.y);
        append_arc_piece(path, lens.c1, r, ax1, long1_xy);
        append_arc_piece(path, lens.c2, r, ay2, short2_yx);
        path << " Z";
        body << "  <path class=\"lobe\" d=\"" << path.str()
             << "\" fill=\"#fde5cf\" fill-opacity=\"0.6\" stroke=\"none\"/>\n";
    }
    {
        std::ostringstream path;
        path << "M " << svg_num(lens.x.x) << ' ' << svg_num(-lens.x.y);
        append_arc_piece(path, lens.c2, r, ax2, long2_xy);
        append_arc_piece(path, lens.c1, r, ay1, short1_yx);
        path << " Z";
        body << "  <path class=\"lobe\" d=\"" << path.str()
             << "\" fill=\"#fde5cf\" fill-opacity=\"0.6\" stroke=\"none\"/>\n";
    }
    // The lens itself.
    {
        std::ostringstream path;
        path << "M " << svg_num(lens.x.x) << ' ' << svg_num(-lens.x.y);
        append_arc_piece(path, lens.c1, r, ax1, short1_xy);
        append_arc_piece(path, lens.c2, r, ay2, short2_yx);
        path << " Z";
        body << "  <path class=\"lens\" d=\"" << path.str()
             << "\" fill=\"#c6dbef\" fill-opacity=\"0.7\" stroke=\"none\"/>\n";
    }
    // Defining circles.
    for (const Point2& c : {lens.c1, lens.c2}) {
        body << "  <path class=\"circle\" d=\"" << circle_path(c, r)
             << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\""
             << svg_num(stroke_width)
             << "\" stroke-dasharray=\"" << svg_num(4.0 * stroke_width)
             << ' ' << svg_num(3.0 * stroke_width) << "\"/>\n";
    }
}

std::string assemble_svg(const Bounds& b, double margin,
                         const std::string& body) {
    Bounds bb = b;
    if (!bb.ok()) {
        bb = Bounds{};
        bb.add({0.0, 0.0});
        bb.add({1.0, 1.0});
    }
    double w = bb.maxx - bb.minx;
    double h = bb.maxy - bb.miny;
    const double pad = std::max(1e-6, margin * std::max(w, h));
    const double vx = bb.minx - pad;
    const double vy = -bb.maxy - pad;
    const double vw = w + 2.0 * pad;
    const double vh = h + 2.0 * pad;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
       << svg_num(vx) << ' ' << svg_num(vy) << ' ' << svg_num(vw) << ' '
       << svg_num(vh) << "\" width=\"800\" height=\""
       << svg_num(800.0 * vh / vw) << "\">\n"
       << body << "</svg>\n";
    return os.str();
}

double stroke_for(const Bounds& b) {
    const double diag = std::hypot(b.maxx - b.minx, b.maxy - b.miny);
    return std::max(1e-6, 0.004 * diag);
}

std::optional<LensGeometry> lens_for_endpoints(Point2 x, Point2 y,
                                               KappaParams kappa) {
    const double d = distance(x, y);
    if (d <= 1e-12 || d >= 2.0 * kappa.r) return std::nullopt;
    return build_lens(x, y, kappa);
}

void append_endpoint_dots(std::ostringstream& body, Point2 x, Point2 y,
                          double stroke_width) {
    for (const Point2& p : {x, y}) {
        body << "  <circle class=\"endpoint\" cx=\"" << svg_num(p.x)
             << "\" cy=\"" << svg_num(-p.y) << "\" r=\""
             << svg_num(2.0 * stroke_width) << "\" fill=\"#333333\"/>\n";
    }
}

}  // namespace

std::string render_svg(const CsCurve& curve, const RenderOptions& options) {
    Bounds b;
    add_curve_bounds(curve, b);
    std::optional<LensGeometry> lens;
    if (options.regions) {
        lens = lens_for_endpoints(curve.start_point(), curve.end_point(),
                                  curve.kappa());
        if (lens) {
            add_circle_bounds(lens->c1, curve.kappa().r, b);
            add_circle_bounds(lens->c2, curve.kappa().r, b);
        }
    }
    const double sw = stroke_for(b);
    std::ostringstream body;
    if (lens) append_region_layers(body, *lens, 0.5 * sw);
    body << "  <path class=\"curve\" d=\""
         << path_for_components(curve.components())
         << "\" fill=\"none\" stroke=\"#1f6fb4\" stroke-width=\""
         << svg_num(sw) << "\" stroke-linecap=\"round\"/>\n";
    append_endpoint_dots(body, curve.start_point(), curve.end_point(), sw);
    return assemble_svg(b, options.margin, body.str());
}

std::string render_svg(const SampledCurve& curve,
                       const RenderOptions& options) {
    Bounds b;
    for (const Point2& p : curve.points) b.add(p);
    std::optional<LensGeometry> lens;
    if (options.regions) {
        lens = lens_for_endpoints(curve.start_point(), curve.end_point(),
                                  curve.kappa);
        if (lens) {
            add_circle_bounds(lens->c1, curve.kappa.r, b);
            add_circle_bounds(lens->c2, curve.kappa.r, b);
        }
    }
    const double sw = stroke_for(b);
    std::ostringstream body;
    if (lens) append_region_layers(body, *lens, 0.5 * sw);
    body << "  <path class=\"curve\" d=\"";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        body << (i == 0 ? "M " : " L ") << svg_num(curve.points[i].x) << ' '
             << svg_num(-curve.points[i].y);
    }
    body << "\" fill=\"none\" stroke=\"#1f6fb4\" stroke-width=\""
         << svg_num(sw) << "\" stroke-linecap=\"round\"/>\n";
    append_endpoint_dots(body, curve.start_point(), curve.end_point(), sw);
    return assemble_svg(b, options.margin, body.str());
}

std::string render_svg(const HomotopyTrace& trace,
                       const RenderOptions& options) {
    if (trace.frames.empty())
        throw DomainError("render_svg: trace has no frames");
    Bounds b;
    const std::size_t n = trace.frames.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 80);
    std::vector<std::size_t> picks;
    for (std::size_t i = 0; i < n; i += stride) picks.push_back(i);
    if (picks.back() != n - 1) picks.push_back(n - 1);
    for (std::size_t i : picks) add_curve_bounds(trace.frames[i].curve, b);
    const CsCurve& first = trace.frames.front().curve;
    std::optional<LensGeometry> lens;
    if (options.regions) {
        lens = lens_for_endpoints(first.start_point(), first.end_point(),
                                  first.kappa());
        if (lens) {
            add_circle_bounds(lens->c1, first.kappa().r, b);
            add_circle_bounds(lens->c2, first.kappa().r, b);
        }
    }
    const double sw = stroke_for(b);
    std::ostringstream body;
    if (lens) append_region_layers(body, *lens, 0.5 * sw);
    for (std::size_t k = 0; k < picks.size(); ++k) {
        const double u =
            picks.size() > 1
                ? static_cast<double>(k) / (static_cast<double>(picks.size()) - 1.0)
                : 1.0;
        const bool last = k + 1 == picks.size();
        const double opacity = 0.15 + 0.85 * u;
        body << "  <path class=\"frame\" d=\""
             << path_for_components(trace.frames[picks[k]].curve.components())
             << "\" fill=\"none\" stroke=\""
             << (last ? "#d62728" : "#1f6fb4") << "\" stroke-opacity=\""
             << svg_num(opacity) << "\" stroke-width=\""
             << svg_num(last ? 1.2 * sw : 0.7 * sw) << "\"/>\n";
    }
    append_endpoint_dots(body, first.start_point(), first.end_point(), sw);
    return assemble_svg(b, options.margin, body.str());
}

std::string render_svg(const LensGeometry& lens, const RenderOptions& options) {
    Bounds b;
    add_circle_bounds(lens.c1, lens.kappa.r, b);
    add_circle_bounds(lens.c2, lens.kappa.r, b);
    const double sw = stroke_for(b);
    std::ostringstream body;
    append_region_layers(body, lens, 0.5 * sw);
    append_endpoint_dots(body, lens.x, lens.y, sw);
    return assemble_svg(b, options.margin, body.str());
}

}  // namespace kcurve

// Command-line surface for the curvature-bounded curve toolkit.
//
// Exit codes: 0 success; 1 domain, class, or validation errors;
// 2 I/O, syntax, schema, or usage errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "kcurve/csc.hpp"
#include "kcurve/errors.hpp"
#include "kcurve/geom.hpp"
#include "kcurve/homotopy.hpp"
#include "kcurve/io.hpp"
#include "kcurve/regions.hpp"
#include "kcurve/validate.hpp"

namespace {

struct IoFailure : std::runtime_error {
    explicit IoFailure(const std::string& msg) : std::runtime_error(msg) {}
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw IoFailure("cannot read " + path);
    return os.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoFailure("cannot write " + path);
}

std::vector<double> split_reals(const std::string& text, std::size_t n,
                                const std::string& flag) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw IoFailure("cannot parse " + flag + "=" + text);
        }
    }
    if (vals.size() != n)
        throw IoFailure(flag + " expects " + std::to_string(n) +
                        " comma-separated reals");
    return vals;
}

kcurve::Point2 parse_xy(const std::string& text, const std::string& flag) {
    const auto v = split_reals(text, 2, flag);
    return {v[0], v[1]};
}

kcurve::Config parse_config(const std::string& text, const std::string& flag) {
    const auto v = split_reals(text, 3, flag);
    return kcurve::Config{{v[0], v[1]}, v[2]};
}

kcurve::CsCurve as_cs(kcurve::ParsedCurve&& parsed) {
    if (auto* cs = std::get_if<kcurve::CsCurve>(&parsed)) return *cs;
    return kcurve::normalize(std::get<kcurve::SampledCurve>(parsed));
}

}  // namespace

int main(int argc, char** argv) {
    using namespace kcurve;

    CLI::App app{"Toolkit for curvature-bounded plane curves"};
    app.require_subcommand(1);

    std::string opt_x, opt_y, opt_start, opt_end, opt_file, opt_file_b;
    std::string opt_out;
    double opt_kappa = 1.0;
    double opt_lambda = 0.9;
    bool opt_regions = false;

    CLI::App* cmd_classify = app.add_subcommand(
        "classify", "Class count and region geometry for an endpoint pair");
    cmd_classify->add_option("--x", opt_x, "start point X,Y")->required();
    cmd_classify->add_option("--y", opt_y, "end point X,Y")->required();
    cmd_classify->add_option("--kappa", opt_kappa, "curvature bound")
        ->required();

    CLI::App* cmd_label =
        app.add_subcommand("label", "Class label of a curve document");
    cmd_label->add_option("file", opt_file, "curve JSON file")->required();

    CLI::App* cmd_normalize = app.add_subcommand(
        "normalize", "Rewrite a curve onto its fragment replacements");
    cmd_normalize->add_option("file", opt_file, "curve JSON file")->required();
    cmd_normalize->add_option("--lambda", opt_lambda,
                              "fragment length factor in (0,1]");
    cmd_normalize->add_option("--out", opt_out, "output file (default stdout)");

    CLI::App* cmd_reduce =
        app.add_subcommand("reduce", "Shorten a curve to its minimizer");
    cmd_reduce->add_option("file", opt_file, "curve JSON file")->required();
    cmd_reduce->add_option("--out", opt_out, "output file (default stdout)");

    CLI::App* cmd_homotope = app.add_subcommand(
        "homotope", "Deformation between two curves sharing endpoints");
    cmd_homotope->add_option("a", opt_file, "first curve JSON file")
        ->required();
    cmd_homotope->add_option("b", opt_file_b, "second curve JSON file")
        ->required();
    cmd_homotope->add_option("--out", opt_out, "output file (default stdout)");

    CLI::App* cmd_verify =
        app.add_subcommand("verify", "Validate a curve document");
    cmd_verify->add_option("file", opt_file, "curve JSON file")->required();

    CLI::App* cmd_verify_trace =
        app.add_subcommand("verify-trace", "Validate a deformation trace");
    cmd_verify_trace->add_option("file", opt_file, "trace JSON file")
        ->required();

    CLI::App* cmd_csc = app.add_subcommand(
        "csc", "Arc-segment-arc connectors between two configurations");
    cmd_csc->add_option("--start", opt_start, "start configuration x,y,theta")
        ->required();
    cmd_csc->add_option("--end", opt_end, "end configuration x,y,theta")
        ->required();
    cmd_csc->add_option("--kappa", opt_kappa, "curvature bound")->required();

    CLI::App* cmd_render =
        app.add_subcommand("render", "Render a curve or trace document as SVG");
    cmd_render->add_option("file", opt_file, "curve or trace JSON file")
        ->required();
    cmd_render->add_flag("--regions", opt_regions,
                         "shade the endpoint lens geometry");
    cmd_render->add_option("--out", opt_out, "output SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*cmd_classify) {
            const Point2 x = parse_xy(opt_x, "--x");
            const Point2 y = parse_xy(opt_y, "--y");
            const KappaParams kappa(opt_kappa);
            const double d = distance(x, y);
            std::cout << "classes: " << class_count(x, y, kappa) << "\n";
            std::cout << "d: " << format_real(d) << "\n";
            if (d > 1e-12 && d < 2.0 * kappa.r) {
                const LensGeometry lens = build_lens(x, y, kappa);
                std::cout << "lens: yes\n";
                std::cout << "c1: " << format_real(lens.c1.x) << ' '
                          << format_real(lens.c1.y) << "\n";
                std::cout << "c2: " << format_real(lens.c2.x) << ' '
                          << format_real(lens.c2.y) << "\n";
            } else {
                std::cout << "lens: no\n";
            }
            return 0;
        }
        if (*cmd_label) {
            const ParsedCurve parsed = parse_curve(read_file(opt_file));
            const ClassLabel label = std::visit(
                [](const auto& c) { return class_label(c); }, parsed);
            std::cout << label_name(label) << "\n";
            return 0;
        }
        if (*cmd_normalize) {
            if (!(opt_lambda > 0.0 && opt_lambda <= 1.0))
                throw DomainError("--lambda must lie in (0, 1]");
            ParsedCurve parsed = parse_curve(read_file(opt_file));
            const CsCurve result = std::visit(
                [&](const auto& c) { return normalize(c, opt_lambda); },
                parsed);
            write_output(opt_out, emit_curve(result));
            return 0;
        }
        if (*cmd_reduce) {
            ParsedCurve parsed = parse_curve(read_file(opt_file));
            const HomotopyTrace trace = std::visit(
                [](const auto& c) { return reduce(c); }, parsed);
            write_output(opt_out, emit_trace(trace));
            return 0;
        }
        if (*cmd_homotope) {
            const CsCurve a = as_cs(parse_curve(read_file(opt_file)));
            const CsCurve b = as_cs(parse_curve(read_file(opt_file_b)));
            write_output(opt_out, emit_trace(build_homotopy(a, b)));
            return 0;
        }
        if (*cmd_verify) {
            const ParsedCurve parsed = parse_curve(read_file(opt_file));
            const ValidationReport report = std::visit(
                [](const auto& c) {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, CsCurve>)
                        return validate_cs(c);
                    else
                        return validate_sampled(c);
                },
                parsed);
            std::cout << emit_report(report);
            return report.valid ? 0 : 1;
        }
        if (*cmd_verify_trace) {
            const HomotopyTrace trace = parse_trace(read_file(opt_file));
            const ValidationReport report = verify_trace(trace);
            std::cout << emit_report(report);
            return report.valid ? 0 : 1;
        }
        if (*cmd_csc) {
            const Config start = parse_config(opt_start, "--start");
            const Config end = parse_config(opt_end, "--end");
            const KappaParams kappa(opt_kappa);
            const CscSolution sol = solve_csc(start, end, kappa);
            for (std::size_t i = 0; i < sol.candidates.size(); ++i) {
                const CscWord& w = sol.candidates[i];
                std::cout << word_name(w.word) << " turn "
                          << format_real(w.arc1_sweep) << " straight "
                          << format_real(w.seg_length) << " turn "
                          << format_real(w.arc2_sweep) << " total "
                          << format_real(w.length)
                          << (i == sol.best_index ? " *" : "") << "\n";
            }
            std::cout << "best: " << word_name(sol.best().word) << ' '
                      << format_real(sol.best().length) << "\n";
            return 0;
        }
        if (*cmd_render) {
            const std::string text = read_file(opt_file);
            RenderOptions options;
            options.regions = opt_regions;
            std::string svg;
            try {
                svg = render_svg(parse_trace(text), options);
            } catch (const ParseError& e) {
                if (e.kind == ParseError::Kind::Syntax) throw;
                svg = std::visit(
                    [&](const auto& c) { return render_svg(c, options); },
                    parse_curve(text));
            }
            write_output(opt_out, svg);
            return 0;
        }
        return 2;  // unreachable: a subcommand is required
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind == ParseError::Kind::Validation ? 1 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

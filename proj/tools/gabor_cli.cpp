// Command-line front end for the dual-window library.
//
//   check       membership report for a window            -> JSON
//   dual        short-support dual on [-3a/2, 3a/2]       -> CSV + det CSV + summary JSON
//   verify      pointwise duality residuals for (g, h)    -> JSON
//   scan        classify an (a, b) lattice                -> CSV
//   atlas-plot  same scan rendered as a region map        -> SVG
//
// Exit codes: 0 success, 2 parameter or usage error, 3 singular translation
// matrix, 4 failed verification.  Every failure prints one line to stderr:
// `ERROR <code>: <detail>`.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "gabor/gabor.hpp"

namespace {

struct number_arg {
    double value = 0.0;
    std::optional<gabor::rational> exact;  // set when the user typed p/q
};

number_arg parse_number(const std::string& text, const char* what) {
    if (auto r = gabor::parse_rational(text)) {
        if (r->num <= 0) throw gabor::validation_error(std::string(what) + ": must be positive");
        return {r->value(), r};
    }
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return {v, std::nullopt};
    } catch (const std::invalid_argument&) {
        throw gabor::validation_error(std::string(what) + ": expected a number or p/q, got '" + text + "'");
    } catch (const std::out_of_range&) {
        throw gabor::validation_error(std::string(what) + ": value out of range: '" + text + "'");
    }
}

struct range_arg {
    double start = 0.0, stop = 0.0, step = 0.0;
};

range_arg parse_range(const std::string& text, const char* what) {
    auto c1 = text.find(':');
    auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw gabor::validation_error(std::string(what) + ": expected start:stop:step, got '" + text + "'");
    range_arg r;
    r.start = parse_number(text.substr(0, c1), what).value;
    r.stop = parse_number(text.substr(c1 + 1, c2 - c1 - 1), what).value;
    r.step = parse_number(text.substr(c2 + 1), what).value;
    return r;
}

gabor::window load_window(const std::string& spec_text, double n_flag) {
    auto parsed = gabor::parse_window_spec(spec_text);
    if (parsed.knots_path) {
        if (!(n_flag > 0))
            throw gabor::validation_error("knots windows need --N to fix the support [-N/2, N/2]");
        parsed.spec.shape = n_flag;
        parsed.spec.knots = gabor::io::read_knots_csv(*parsed.knots_path);
    }
    return gabor::make_window(parsed.spec);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw gabor::validation_error("cannot open output file '" + path + "'");
    return out;
}

void emit(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    auto out = open_output(path);
    out << body;
}

// h.csv -> h.det.csv / h.summary.json; extensionless paths just append.
std::string derived_path(const std::string& path, const char* suffix) {
    std::string base = path;
    if (base.size() > 4 && base.compare(base.size() - 4, 4, ".csv") == 0) base.resize(base.size() - 4);
    return base + suffix;
}

bool integral(double v) { return std::abs(v - std::round(v)) <= 1e-12 && v > 0 && v <= 1e6; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compactly supported dual Gabor windows: membership, synthesis, duality, region maps"};
    app.require_subcommand(1);

    std::string window_text, a_text, b_text, a_range_text, b_range_text;
    std::string output, dual_csv, obstructions_csv, method = "axioms";
    double n_flag = 0.0, grid_step = 0.0, tol = -1.0;
    bool force = false, offset_grid = false, strict = false;

    auto add_window = [&](CLI::App* sub) {
        sub->add_option("--window", window_text,
                        "window spec: bspline:N=2 gauss:N=2 exp:N=2 cospower:N=3 rational_sq:N=2 "
                        "rational_abs:N=2 box:c=1 knots:FILE.csv")
            ->required();
        sub->add_option("--N", n_flag, "support length for knots windows");
    };

    CLI::App* check = app.add_subcommand("check", "test window class membership");
    add_window(check);
    check->add_option("--a", a_text, "translation step (number or p/q)");
    check->add_option("--method", method, "axioms | prop41 | cor19")
        ->check(CLI::IsMember({"axioms", "prop41", "cor19"}));
    check->add_option("--grid-step", grid_step, "scan resolution");
    check->add_option("--tol", tol, "comparison tolerance");
    check->add_option("--output", output, "output JSON path (default stdout)");

    CLI::App* dual = app.add_subcommand("dual", "synthesize the dual window supported on [-3a/2, 3a/2]");
    add_window(dual);
    dual->add_option("--a", a_text, "translation step (number or p/q)")->required();
    dual->add_option("--b", b_text, "modulation step (number or p/q)")->required();
    dual->add_option("--grid-step", grid_step, "solution grid resolution (default a/2000)");
    dual->add_flag("--force", force, "attempt synthesis even for b <= 2/(N+a)");
    dual->add_option("--output", output, "dual CSV path; det scan and summary derive from it")->required();

    CLI::App* verify = app.add_subcommand("verify", "check the pointwise duality conditions");
    add_window(verify);
    verify->add_option("--a", a_text, "translation step")->required();
    verify->add_option("--b", b_text, "modulation step")->required();
    verify->add_option("--dual", dual_csv, "dual CSV to verify (default: re-synthesize)");
    verify->add_option("--grid-step", grid_step, "residual grid resolution (default a/2000)");
    verify->add_option("--tol", tol, "pass tolerance (default 1e-6*b)");
    verify->add_flag("--offset-grid", offset_grid, "evaluate between grid nodes");
    verify->add_option("--output", output, "output JSON path (default stdout)");

    CLI::App* scan = app.add_subcommand("scan", "classify an (a, b) lattice");
    add_window(scan);
    scan->add_option("--a", a_range_text, "a range start:stop:step")->required();
    scan->add_option("--b", b_range_text, "b range start:stop:step")->required();
    scan->add_flag("--strict", strict, "re-verify membership numerically at every a");
    scan->add_option("--obstructions", obstructions_csv, "extra obstruction entries (CSV)");
    scan->add_option("--output", output, "region CSV path")->required();

    CLI::App* plot = app.add_subcommand("atlas-plot", "render a scanned region map as SVG");
    add_window(plot);
    plot->add_option("--a", a_range_text, "a range start:stop:step")->required();
    plot->add_option("--b", b_range_text, "b range start:stop:step")->required();
    plot->add_flag("--strict", strict, "re-verify membership numerically at every a");
    plot->add_option("--obstructions", obstructions_csv, "extra obstruction entries (CSV)");
    plot->add_option("--output", output, "SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "ERROR 2: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*check) {
            gabor::window w = load_window(window_text, n_flag);
            gabor::membership_report rep;
            if (method == "axioms") {
                if (a_text.empty())
                    throw gabor::validation_error("check --method axioms needs --a");
                number_arg a = parse_number(a_text, "--a");
                rep = gabor::check_axioms(w, a.value,
                                          grid_step > 0 ? grid_step : gabor::default_grid_step(w, a.value),
                                          tol >= 0 ? tol : gabor::default_tol(w));
            } else if (method == "prop41") {
                rep = gabor::check_prop41(w, grid_step > 0 ? grid_step : w.support_radius() / 1000.0,
                                          tol >= 0 ? tol : gabor::default_tol(w));
            } else {
                rep = gabor::check_cor19(w, grid_step > 0 ? grid_step : w.support_radius() / 1000.0,
                                         tol >= 0 ? tol : gabor::default_tol(w));
            }
            emit(output, gabor::io::membership_json(rep).dump(2) + "\n");
            return 0;
        }

        if (*dual) {
            gabor::window w = load_window(window_text, n_flag);
            number_arg a = parse_number(a_text, "--a");
            number_arg b = parse_number(b_text, "--b");
            double N = 2.0 * w.support_radius();

            std::optional<bool> in_range_exact;
            if (a.exact && b.exact && integral(N)) {
                // Boundary values typed as fractions (4/7, ...) must land on
                // the closed side of the range checks without float drift.
                gabor::classify_options exact_opts;
                exact_opts.a_exact = a.exact;
                exact_opts.b_exact = b.exact;
                auto cmp = gabor::detail::boundary_cmp::make({N, a.value, b.value}, exact_opts);
                if (cmp.b_le_2_over_NpA() && !force)
                    throw gabor::parameter_out_of_range("dual: b <= 2/(N+a), no three-cell dual exists",
                                                        b.value, 2.0 / (N + a.value));
                in_range_exact = !cmp.b_le_2_over_NpA() && cmp.b_le_4_over_Np3A();
            }

            gabor::synthesis_options opts;
            opts.force = force || in_range_exact.has_value();  // exact gate already decided
            gabor::dual_result res = gabor::synthesize_dual(
                w, a.value, b.value, grid_step > 0 ? grid_step : a.value / 2000.0, opts);
            if (in_range_exact) res.in_theorem_range = *in_range_exact;

            {
                auto out = open_output(output);
                gabor::io::write_samples_csv(out, res.h);
            }
            {
                auto out = open_output(derived_path(output, ".det.csv"));
                gabor::io::write_det_scan_csv(out, res.scan);
            }
            nlohmann::json summary{{"window", w.name()},
                                   {"N", N},
                                   {"a", a.value},
                                   {"b", b.value},
                                   {"grid_step", res.grid_step},
                                   {"min_abs_det", res.min_abs_det},
                                   {"det_argmin", res.det_argmin},
                                   {"in_theorem_range", res.in_theorem_range},
                                   {"seam_mismatch_left", res.seam_mismatch_left},
                                   {"seam_mismatch_right", res.seam_mismatch_right},
                                   {"seams_consistent", res.seams_consistent},
                                   {"support_min", res.h.x_min()},
                                   {"support_max", res.h.x_max()}};
            emit(derived_path(output, ".summary.json"), summary.dump(2) + "\n");
            return 0;
        }

        if (*verify) {
            gabor::window w = load_window(window_text, n_flag);
            number_arg a = parse_number(a_text, "--a");
            number_arg b = parse_number(b_text, "--b");
            gabor::grid_function h;
            if (!dual_csv.empty())
                h = gabor::io::read_samples_csv_file(dual_csv);
            else
                h = gabor::synthesize_dual(w, a.value, b.value,
                                           grid_step > 0 ? grid_step : a.value / 2000.0, {})
                        .h;
            gabor::duality_options opts;
            opts.offset_grid = offset_grid;
            if (tol >= 0) opts.tolerance = tol;
            auto rep = gabor::duality_residuals(w, h, a.value, b.value,
                                                grid_step > 0 ? grid_step : a.value / 2000.0, opts);
            emit(output, gabor::io::duality_json(rep).dump(2) + "\n");
            if (!rep.pass) {
                std::cerr << "ERROR 4: duality residuals exceed tolerance (max = "
                          << gabor::io::fmt(rep.max_residual()) << ", tolerance = "
                          << gabor::io::fmt(rep.tolerance) << ")\n";
                return 4;
            }
            return 0;
        }

        if (*scan || *plot) {
            gabor::window w = load_window(window_text, n_flag);
            range_arg ra = parse_range(a_range_text, "--a");
            range_arg rb = parse_range(b_range_text, "--b");
            gabor::classify_options opts;
            opts.strict_membership = strict;
            gabor::obstruction_db db = gabor::obstruction_db::builtin();
            if (!obstructions_csv.empty()) {
                db.load_csv_file(obstructions_csv);
                opts.obstructions = &db;
            }
            gabor::scan_result grid =
                gabor::scan_region(w, ra.start, ra.stop, ra.step, rb.start, rb.stop, rb.step, opts);
            auto out = open_output(output);
            if (*scan)
                gabor::io::write_region_csv(out, grid);
            else
                gabor::io::write_atlas_svg(out, grid, 2.0 * w.support_radius());
            return 0;
        }
    } catch (const gabor::singular_matrix_error& e) {
        std::cerr << "ERROR 3: " << e.what() << '\n';
        return 3;
    } catch (const gabor::duality_not_verified& e) {
        std::cerr << "ERROR 4: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "ERROR 2: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

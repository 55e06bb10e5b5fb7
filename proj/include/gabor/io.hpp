#pragma once

// File formats shared by the CLI and the tests.  Everything here is
// deterministic: floats print with 17 significant digits, JSON keys are
// sorted, row order follows the container order of the structs.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gabor/dual_synthesis.hpp"
#include "gabor/duality.hpp"
#include "gabor/errors.hpp"
#include "gabor/frame_atlas.hpp"
#include "gabor/grid_function.hpp"
#include "gabor/membership.hpp"
#include "gabor/window.hpp"

namespace gabor::io {

using json = nlohmann::json;

inline std::string fmt(double v) { return gabor::detail::format_g(v); }

inline void write_samples_csv(std::ostream& out, const grid_function& f) {
    out << "x,value\n";
    for (std::size_t k = 0; k < f.size(); ++k)
        out << fmt(f.x_min() + static_cast<double>(k) * f.step()) << ',' << fmt(f.values()[k]) << '\n';
}

inline void write_det_scan_csv(std::ostream& out, const det_scan_result& scan) {
    out << "x,det,A_N,G21,G22,G23\n";
    const grid_function& d = scan.samples;
    for (std::size_t k = 0; k < d.size(); ++k) {
        out << fmt(d.x_min() + static_cast<double>(k) * d.step()) << ',' << fmt(d.values()[k]) << ','
            << fmt(scan.a_lower[k]) << ',' << fmt(scan.g21[k]) << ',' << fmt(scan.g22[k]) << ','
            << fmt(scan.g23[k]) << '\n';
    }
}

inline json membership_json(const membership_report& r) {
    json witnesses = json::array();
    for (const auto& w : r.witnesses)
        witnesses.push_back({{"axiom", w.axiom}, {"x", w.x}, {"deficit", w.deficit}});
    json params = {{"N", r.N}, {"grid_step", r.grid_step}, {"tol", r.tol}};
    params["a"] = r.a ? json(*r.a) : json();
    return json{{"member", r.member()},
                {"method", method_name(r.method)},
                {"axioms", {{"A1", r.a1_pass}, {"A2", r.a2_pass}, {"A3", r.a3_pass}}},
                {"witnesses", witnesses},
                {"params", params}};
}

inline json duality_json(const duality_report& r) {
    json residuals = json::array();
    for (const auto& [ell, res] : r.residuals) residuals.push_back({{"ell", ell}, {"residual", res}});
    return json{{"pass", r.pass}, {"tolerance", r.tolerance}, {"residuals", residuals}};
}

// Rows `x,value`; a leading "x,value" header line is allowed.  Used both for
// knot lists (left half-support of a window) and for sampled duals.
inline std::vector<std::pair<double, double>> read_xy_csv(std::istream& in, const char* what) {
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line == "x,value") continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw validation_error(std::string(what) + ": line " + std::to_string(line_no) +
                                   " is not `x,value`");
        try {
            std::size_t p1 = 0, p2 = 0;
            std::string xs = line.substr(0, comma), vs = line.substr(comma + 1);
            double x = std::stod(xs, &p1);
            double v = std::stod(vs, &p2);
            if (p1 != xs.size() || p2 != vs.size()) throw std::invalid_argument(line);
            rows.emplace_back(x, v);
        } catch (const std::invalid_argument&) {
            throw validation_error(std::string(what) + ": bad number on line " + std::to_string(line_no));
        } catch (const std::out_of_range&) {
            throw validation_error(std::string(what) + ": number out of range on line " +
                                   std::to_string(line_no));
        }
    }
    return rows;
}

inline std::vector<std::pair<double, double>> read_knots_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("knots csv: cannot open '" + path + "'");
    return read_xy_csv(in, "knots csv");
}

// Reads a sampled function back into a grid_function; the x column must be
// uniformly spaced (relative drift up to 1e-9 of the step is tolerated).
inline grid_function read_samples_csv(std::istream& in, const char* what = "samples csv") {
    auto rows = read_xy_csv(in, what);
    if (rows.size() < 2) throw validation_error(std::string(what) + ": need at least two samples");
    double step = rows[1].first - rows[0].first;
    if (!(step > 0)) throw validation_error(std::string(what) + ": x must be strictly ascending");
    std::vector<double> vals;
    vals.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        double expect = rows[0].first + static_cast<double>(k) * step;
        if (std::abs(rows[k].first - expect) > 1e-9 * std::max(1.0, std::abs(step) * static_cast<double>(k)))
            throw validation_error(std::string(what) + ": x values are not uniformly spaced at row " +
                                   std::to_string(k + 1));
        vals.push_back(rows[k].second);
    }
    return grid_function(rows[0].first, step, std::move(vals));
}

inline grid_function read_samples_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("samples csv: cannot open '" + path + "'");
    return read_samples_csv(in);
}

inline void write_region_csv(std::ostream& out, const scan_result& scan) {
    out << "a,b,status,rules\n";
    for (std::size_t ai = 0; ai < scan.a_values.size(); ++ai) {
        for (std::size_t bi = 0; bi < scan.b_values.size(); ++bi) {
            const auto& cell = scan.at(ai, bi);
            out << fmt(scan.a_values[ai]) << ',' << fmt(scan.b_values[bi]) << ','
                << status_name(cell.status) << ',';
            for (std::size_t r = 0; r < cell.rules_fired.size(); ++r) {
                if (r) out << ';';
                out << rule_name(cell.rules_fired[r]);
            }
            out << '\n';
        }
    }
}

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Cell fill: guaranteed cells are keyed by the first sufficient rule that
// fired, the rest by status.
inline const char* cell_color(const region_classification& c) {
    if (c.status == region_status::frame_guaranteed) {
        for (atlas_rule r : c.rules_fired) {
            switch (r) {
                case atlas_rule::regionA_multiplication: return "#7fc8a9";
                case atlas_rule::prop_ii_shortdual: return "#4f9d69";
                case atlas_rule::prop_iii_halfsupport: return "#b8c46f";
                case atlas_rule::thm_D_Vclass: return "#4f74b8";
                default: break;
            }
        }
        return "#4f74b8";
    }
    switch (c.status) {
        case region_status::known_not_frame: return "#c0392b";
        case region_status::necessary_violated: return "#b0b0b0";
        default: return "#f4f4f4";
    }
}

}  // namespace detail

// One filled cell per lattice point over axes a in (0, N], b in (0, b_top];
// the four closed-form boundary curves are drawn on top, and the legend maps
// each fill and curve color.
inline void write_atlas_svg(std::ostream& out, const scan_result& scan, double N) {
    const double W = 720, H = 540, ML = 60, MB = 46, MT = 16, MR = 210;
    double a_top = N;
    double b_top = scan.b_values.empty() ? 1.0 : scan.b_values.back();
    if (!scan.b_values.empty() && scan.b_values.size() > 1)
        b_top += scan.b_values[1] - scan.b_values[0];
    double pw = W - ML - MR, ph = H - MT - MB;
    auto X = [&](double a) { return ML + pw * a / a_top; };
    auto Y = [&](double b) { return MT + ph * (1.0 - b / b_top); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    out << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"white\" stroke=\"#444\"/>\n";

    double da = scan.a_values.size() > 1 ? scan.a_values[1] - scan.a_values[0] : 0.01;
    double db = scan.b_values.size() > 1 ? scan.b_values[1] - scan.b_values[0] : 0.01;
    for (std::size_t ai = 0; ai < scan.a_values.size(); ++ai) {
        for (std::size_t bi = 0; bi < scan.b_values.size(); ++bi) {
            double a = scan.a_values[ai], b = scan.b_values[bi];
            if (a > a_top || b > b_top) continue;
            double x0 = X(a - 0.5 * da), x1 = X(a + 0.5 * da);
            double y0 = Y(b + 0.5 * db), y1 = Y(b - 0.5 * db);
            out << "<rect x=\"" << detail::svg_num(x0) << "\" y=\"" << detail::svg_num(y0)
                << "\" width=\"" << detail::svg_num(x1 - x0) << "\" height=\""
                << detail::svg_num(y1 - y0) << "\" fill=\"" << detail::cell_color(scan.at(ai, bi))
                << "\"/>\n";
        }
    }

    struct curve {
        const char* label;
        const char* color;
        const char* dash;
        double (*f)(double, double);
    };
    const curve curves[] = {
        {"b = 2/(N+a)", "#e67e22", "", [](double N_, double a) { return 2.0 / (N_ + a); }},
        {"b = 4/(N+3a)", "#8e44ad", "", [](double N_, double a) { return 4.0 / (N_ + 3.0 * a); }},
        {"b = 1/N", "#16a085", "6,4", [](double N_, double) { return 1.0 / N_; }},
        {"ab = 1", "#222222", "", [](double, double a) { return 1.0 / a; }},
    };
    for (const auto& c : curves) {
        out << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.6\"";
        if (c.dash[0]) out << " stroke-dasharray=\"" << c.dash << "\"";
        out << " points=\"";
        bool first = true;
        for (int k = 1; k <= 400; ++k) {
            double a = a_top * static_cast<double>(k) / 400.0;
            double b = c.f(N, a);
            if (b > b_top || b <= 0) continue;
            if (!first) out << ' ';
            out << detail::svg_num(X(a)) << ',' << detail::svg_num(Y(b));
            first = false;
        }
        out << "\"/>\n";
    }

    out << "<text x=\"" << ML + pw / 2 << "\" y=\"" << H - 10
        << "\" text-anchor=\"middle\" font-size=\"14\">a</text>\n";
    out << "<text x=\"18\" y=\"" << MT + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << detail::svg_num(MT + ph / 2) << ")\">b</text>\n";
    for (int t = 0; t <= 4; ++t) {
        double a = a_top * t / 4.0, b = b_top * t / 4.0;
        out << "<text x=\"" << detail::svg_num(X(a)) << "\" y=\"" << H - MB + 16
            << "\" text-anchor=\"middle\" font-size=\"11\">" << detail::svg_num(a) << "</text>\n";
        out << "<text x=\"" << ML - 6 << "\" y=\"" << detail::svg_num(Y(b) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << detail::svg_num(b) << "</text>\n";
    }

    const std::pair<const char*, const char*> legend[] = {
        {"#4f74b8", "guaranteed: short-support dual range"},
        {"#4f9d69", "guaranteed: short dual (b <= 2/(N+a))"},
        {"#7fc8a9", "guaranteed: multiplication operator"},
        {"#b8c46f", "guaranteed: half-support positivity"},
        {"#c0392b", "known not a frame"},
        {"#b0b0b0", "necessary condition violated"},
        {"#f4f4f4", "unknown"},
    };
    double ly = MT + 8;
    double lx = W - MR + 14;
    for (const auto& [color, label] : legend) {
        out << "<rect x=\"" << lx << "\" y=\"" << detail::svg_num(ly) << "\" width=\"14\" height=\"14\" fill=\""
            << color << "\" stroke=\"#666\"/>\n";
        out << "<text x=\"" << lx + 20 << "\" y=\"" << detail::svg_num(ly + 11.5)
            << "\" font-size=\"11\">" << label << "</text>\n";
        ly += 20;
    }
    ly += 8;
    for (const auto& c : curves) {
        out << "<line x1=\"" << lx << "\" y1=\"" << detail::svg_num(ly + 7) << "\" x2=\"" << lx + 14
            << "\" y2=\"" << detail::svg_num(ly + 7) << "\" stroke=\"" << c.color << "\" stroke-width=\"2\"";
        if (c.dash[0]) out << " stroke-dasharray=\"" << c.dash << "\"";
        out << "/>\n";
        out << "<text x=\"" << lx + 20 << "\" y=\"" << detail::svg_num(ly + 11.5)
            << "\" font-size=\"11\">" << c.label << "</text>\n";
        ly += 20;
    }
    out << "</svg>\n";
}

}  // namespace gabor::io

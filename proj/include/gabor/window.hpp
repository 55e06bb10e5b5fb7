#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gabor/errors.hpp"
#include "gabor/grid_function.hpp"

namespace gabor {

// Catalog of even, compactly supported windows on [-R, R].  All evaluators
// return exactly 0 outside the support interval.
enum class window_kind {
    bspline,             // B_N, iterated self-convolution of the unit box
    cospower,            // cos^{2N-2}(pi x / N) on [-N/2, N/2]
    trunc_exp,           // e^{-|x|} - e^{-N/2}
    trunc_rational_abs,  // 1/(1+|x|) - 1/(1+N/2)
    trunc_rational_sq,   // 1/(1+x^2) - 1/(1+(N/2)^2)
    trunc_gauss,         // e^{-x^2} - e^{-N^2/4}
    box,                 // indicator of [-c, c]
    knot_interpolant,    // even piecewise-linear interpolant of user knots
};

constexpr const char* kind_token(window_kind k) {
    switch (k) {
        case window_kind::bspline: return "bspline";
        case window_kind::cospower: return "cospower";
        case window_kind::trunc_exp: return "exp";
        case window_kind::trunc_rational_abs: return "rational_abs";
        case window_kind::trunc_rational_sq: return "rational_sq";
        case window_kind::trunc_gauss: return "gauss";
        case window_kind::box: return "box";
        case window_kind::knot_interpolant: return "knots";
    }
    return "?";
}

struct window_spec {
    window_kind kind = window_kind::bspline;
    // N for every kind except box, where it holds c.
    double shape = 2.0;
    // knot_interpolant only: (x, value) pairs, ascending x in [-N/2, 0].
    std::vector<std::pair<double, double>> knots;
};

namespace detail {

inline std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// B_1 with the symmetric convention at the jump points, which keeps every
// B_N exactly even in floating point and makes the N=2 recurrence land on
// the continuous values at half-integers.
inline double box_base(double x) {
    double ax = std::abs(x);
    if (ax < 0.5) return 1.0;
    if (ax == 0.5) return 0.5;
    return 0.0;
}

// Centered B-spline via the two-term recurrence
//   B_N(x) = ((x + N/2) B_{N-1}(x + 1/2) + (N/2 - x) B_{N-1}(x - 1/2)) / (N - 1),
// evaluated bottom-up over the triangle of half-integer offsets so shared
// subterms are computed once.
inline double bspline_eval(int n, double x) {
    if (n == 1) return box_base(x);  // keeps the midpoint value at the jump
    if (std::abs(x) >= 0.5 * n) return 0.0;
    std::vector<double> v(static_cast<std::size_t>(2 * n - 1));
    // Level m=1 holds B_1(x + j/2) for j = -(n-1) .. n-1; index i = j + (n-1).
    for (int j = -(n - 1); j <= n - 1; ++j)
        v[static_cast<std::size_t>(j + n - 1)] = box_base(x + 0.5 * j);
    for (int m = 2; m <= n; ++m) {
        double half = 0.5 * m;
        // The update reads the previous level at j-1 and j+1; iterate
        // ascending and keep the not-yet-overwritten left neighbor in `prev`.
        double prev = v[static_cast<std::size_t>(-(n - m) + n - 2)];
        for (int j = -(n - m); j <= n - m; ++j) {
            std::size_t i = static_cast<std::size_t>(j + n - 1);
            double t = x + 0.5 * j;
            double next = ((t + half) * v[i + 1] + (half - t) * prev) / (m - 1);
            prev = v[i];
            v[i] = next;
        }
    }
    return v[static_cast<std::size_t>(n - 1)];
}

}  // namespace detail

// A window ready for evaluation: spec, exact support radius, peak value,
// breakpoints where the evaluator is not smooth (used by the one-sided
// numerical derivatives), and the evaluator itself.
class window {
public:
    window() = default;

    const window_spec& spec() const { return spec_; }
    double support_radius() const { return radius_; }
    double peak() const { return peak_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    double evaluate(double x) const { return eval_(x); }
    double operator()(double x) const { return eval_(x); }

    // Canonical text form, e.g. "bspline:N=2", "box:c=0.5", "knots:<5 pts>".
    std::string name() const {
        std::string s = kind_token(spec_.kind);
        if (spec_.kind == window_kind::knot_interpolant)
            return s + ":<" + std::to_string(spec_.knots.size()) + " pts>";
        s += spec_.kind == window_kind::box ? ":c=" : ":N=";
        s += detail::format_g(spec_.shape);
        return s;
    }

    friend window make_window(const window_spec& spec);

private:
    window_spec spec_;
    double radius_ = 0.0;
    double peak_ = 0.0;
    std::vector<double> breakpoints_;
    std::function<double(double)> eval_;
};

inline window make_window(const window_spec& spec) {
    window w;
    w.spec_ = spec;
    const double N = spec.shape;

    auto require = [](bool ok, const char* msg) {
        if (!ok) throw validation_error(msg);
    };
    require(std::isfinite(N) && N > 0, "window_spec.shape: must be positive and finite");

    switch (spec.kind) {
        case window_kind::bspline: {
            require(N == std::floor(N), "window_spec.shape: bspline N must be an integer");
            require(N <= 500, "window_spec.shape: bspline N too large");
            int n = static_cast<int>(N);
            w.radius_ = 0.5 * N;
            w.eval_ = [n](double x) { return detail::bspline_eval(n, x); };
            w.peak_ = w.eval_(0.0);
            for (int j = 0; j <= n; ++j) w.breakpoints_.push_back(-0.5 * N + j);
            break;
        }
        case window_kind::cospower: {
            require(N == std::floor(N) && N >= 2, "window_spec.shape: cospower N must be an integer >= 2");
            double p = 2.0 * N - 2.0;
            double R = 0.5 * N;
            w.radius_ = R;
            w.eval_ = [N, p, R](double x) {
                if (std::abs(x) >= R) return 0.0;
                double c = std::cos(M_PI * std::abs(x) / N);
                return std::pow(c, p);
            };
            w.peak_ = 1.0;
            w.breakpoints_ = {-R, R};
            break;
        }
        case window_kind::trunc_exp: {
            double R = 0.5 * N;
            double floor_v = std::exp(-R);
            w.radius_ = R;
            w.eval_ = [R, floor_v](double x) {
                if (std::abs(x) >= R) return 0.0;
                return std::exp(-std::abs(x)) - floor_v;
            };
            w.peak_ = 1.0 - floor_v;
            w.breakpoints_ = {-R, 0.0, R};
            break;
        }
        case window_kind::trunc_rational_abs: {
            double R = 0.5 * N;
            double floor_v = 1.0 / (1.0 + R);
            w.radius_ = R;
            w.eval_ = [R, floor_v](double x) {
                if (std::abs(x) >= R) return 0.0;
                return 1.0 / (1.0 + std::abs(x)) - floor_v;
            };
            w.peak_ = 1.0 - floor_v;
            w.breakpoints_ = {-R, 0.0, R};
            break;
        }
        case window_kind::trunc_rational_sq: {
            double R = 0.5 * N;
            double floor_v = 1.0 / (1.0 + R * R);
            w.radius_ = R;
            w.eval_ = [R, floor_v](double x) {
                if (std::abs(x) >= R) return 0.0;
                return 1.0 / (1.0 + x * x) - floor_v;
            };
            w.peak_ = 1.0 - floor_v;
            w.breakpoints_ = {-R, R};
            break;
        }
        case window_kind::trunc_gauss: {
            double R = 0.5 * N;
            double floor_v = std::exp(-R * R);
            w.radius_ = R;
            w.eval_ = [R, floor_v](double x) {
                if (std::abs(x) >= R) return 0.0;
                return std::exp(-x * x) - floor_v;
            };
            w.peak_ = 1.0 - floor_v;
            w.breakpoints_ = {-R, R};
            break;
        }
        case window_kind::box: {
            double c = spec.shape;  // shape holds c, support is the closed [-c, c]
            w.radius_ = c;
            w.eval_ = [c](double x) { return std::abs(x) <= c ? 1.0 : 0.0; };
            w.peak_ = 1.0;
            w.breakpoints_ = {-c, c};
            break;
        }
        case window_kind::knot_interpolant: {
            const auto& kn = spec.knots;
            require(kn.size() >= 2, "window_spec.knots: need at least two knots");
            double R = 0.5 * N;
            require(std::abs(kn.front().first + R) <= 1e-9 * std::max(1.0, N),
                    "window_spec.knots: first knot must sit at x = -N/2");
            require(std::abs(kn.front().second) <= 1e-12 * std::max(1.0, std::abs(kn.back().second)),
                    "window_spec.knots: value at -N/2 must be 0");
            for (std::size_t i = 0; i + 1 < kn.size(); ++i) {
                require(kn[i].first < kn[i + 1].first, "window_spec.knots: x must be strictly ascending");
                require(kn[i].second < kn[i + 1].second, "window_spec.knots: values must be strictly increasing");
            }
            require(kn.back().first <= 1e-12, "window_spec.knots: knots must lie in [-N/2, 0]");
            for (auto& [kx, kv] : kn)
                require(std::isfinite(kx) && std::isfinite(kv), "window_spec.knots: entries must be finite");

            auto knots = kn;
            knots.front().first = -R;  // snap so the support edge is exact
            w.radius_ = R;
            w.eval_ = [knots, R](double x) {
                double t = -std::abs(x);
                if (t < -R) return 0.0;
                if (t >= knots.back().first) return knots.back().second;  // plateau up to 0 if no knot there
                auto it = std::upper_bound(knots.begin(), knots.end(), t,
                                           [](double v, const std::pair<double, double>& k) { return v < k.first; });
                std::size_t hi = static_cast<std::size_t>(it - knots.begin());
                const auto& [x0, v0] = knots[hi - 1];
                const auto& [x1, v1] = knots[hi];
                double frac = (t - x0) / (x1 - x0);
                return v0 + frac * (v1 - v0);
            };
            w.peak_ = knots.back().second;
            for (auto& [kx, kv] : knots) {
                w.breakpoints_.push_back(kx);
                if (kx != 0.0) w.breakpoints_.push_back(-kx);
            }
            std::sort(w.breakpoints_.begin(), w.breakpoints_.end());
            break;
        }
    }
    return w;
}

// Uniform samples of a window: x_min + k*step for k = 0 .. floor((x_max - x_min)/step).
inline grid_function sample(const window& w, double x_min, double x_max, double step) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || x_min >= x_max)
        throw validation_error("sample: need finite x_min < x_max");
    if (!(step > 0) || !std::isfinite(step) || step > x_max - x_min)
        throw validation_error("sample: step must be positive and no larger than the interval");
    std::vector<double> vals;
    auto count = static_cast<std::size_t>(std::floor((x_max - x_min) / step)) + 1;
    vals.reserve(count);
    for (std::size_t k = 0; k < count; ++k) vals.push_back(w.evaluate(x_min + static_cast<double>(k) * step));
    return grid_function(x_min, step, std::move(vals));
}

// Parses the window grammar used on the command line and in obstruction
// tables: "bspline:N=2", "gauss:N=1.5", "box:c=0.5", "knots:FILE.csv".
// For "knots:" the file is NOT read here; the path is reported back so the
// caller can load it and fill the knot list.
struct parsed_window_spec {
    window_spec spec;
    std::optional<std::string> knots_path;
};

inline parsed_window_spec parse_window_spec(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw validation_error("window: expected '<kind>:<param>' in '" + text + "'");
    std::string head = text.substr(0, colon);
    std::string tail = text.substr(colon + 1);

    parsed_window_spec out;
    if (head == "knots") {
        if (tail.empty()) throw validation_error("window: knots path is empty");
        out.spec.kind = window_kind::knot_interpolant;
        out.knots_path = tail;
        return out;
    }

    static const std::pair<const char*, window_kind> kinds[] = {
        {"bspline", window_kind::bspline},
        {"cospower", window_kind::cospower},
        {"exp", window_kind::trunc_exp},
        {"rational_abs", window_kind::trunc_rational_abs},
        {"rational_sq", window_kind::trunc_rational_sq},
        {"gauss", window_kind::trunc_gauss},
        {"box", window_kind::box},
    };
    const window_kind* kind = nullptr;
    for (auto& [tok, k] : kinds)
        if (head == tok) kind = &k;
    if (!kind) throw validation_error("window: unknown kind '" + head + "'");

    const char* param = *kind == window_kind::box ? "c=" : "N=";
    if (tail.rfind(param, 0) != 0)
        throw validation_error("window: expected '" + head + ":" + param + "<value>'");
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tail.substr(2), &pos);
    } catch (const std::exception&) {
        throw validation_error("window: bad numeric value in '" + text + "'");
    }
    if (pos != tail.size() - 2) throw validation_error("window: trailing junk in '" + text + "'");
    out.spec.kind = *kind;
    out.spec.shape = v;
    return out;
}

}  // namespace gabor

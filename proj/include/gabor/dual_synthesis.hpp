#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "gabor/errors.hpp"
#include "gabor/grid_function.hpp"
#include "gabor/window.hpp"

namespace gabor {

// The 3x3 translation matrix of the duality system at a point x:
// entries[l+1][m+1] = g(x - l/b + m*a), rows l = -1, 0, 1 top to bottom,
// columns m = -1, 0, 1 left to right.
struct gmatrix {
    double x = 0.0;
    std::array<std::array<double, 3>, 3> entries{};
};

inline gmatrix build_G(const window& w, double a, double b, double x) {
    if (!(a > 0)) throw parameter_error("build_G: a must be positive");
    if (!(b > 0)) throw parameter_error("build_G: b must be positive");
    gmatrix g;
    g.x = x;
    double inv_b = 1.0 / b;
    for (int l = -1; l <= 1; ++l)
        for (int m = -1; m <= 1; ++m)
            g.entries[l + 1][m + 1] = w(x - l * inv_b + m * a);
    return g;
}

// Unsigned 2x2 minors obtained by deleting row 2 and one column; these are
// the only minors the middle-row cofactor expansion needs.
struct gminors {
    double g21 = 0.0;
    double g22 = 0.0;
    double g23 = 0.0;
};

inline gminors minors(const gmatrix& g) {
    const auto& e = g.entries;
    return {e[0][1] * e[2][2] - e[0][2] * e[2][1],
            e[0][0] * e[2][2] - e[0][2] * e[2][0],
            e[0][0] * e[2][1] - e[0][1] * e[2][0]};
}

// Cofactor expansion along the middle row:
// det G = -g(x-a) G21 + g(x) G22 - g(x+a) G23.
inline double det_G(const gmatrix& g) {
    auto m = minors(g);
    const auto& mid = g.entries[1];
    return -mid[0] * m.g21 + mid[1] * m.g22 - mid[2] * m.g23;
}

// Determinant lower-bound diagnostic
// A_N(x) = (g(x)-g(x-a)) G21 + (g(x)-g(x+a)) G23,
// nonnegative on [-a/2, 0] for members of the window class.
inline double det_lower_diagnostic(const gmatrix& g) {
    auto m = minors(g);
    const auto& mid = g.entries[1];
    return (mid[1] - mid[0]) * m.g21 + (mid[1] - mid[2]) * m.g23;
}

struct det_scan_result {
    double min_abs_det = 0.0;
    double det_argmin = 0.0;
    grid_function samples;           // signed det values on [-a/2, a/2]
    std::vector<double> a_lower;     // A_N diagnostic per grid point
    std::vector<double> g21, g22, g23;
    double max_abs_entry = 0.0;      // scale s for the singularity threshold
    double grid_step = 0.0;          // effective step (a divided evenly)

    // |det| <= 1e-10 s^3: cube because det is degree 3 in the entries.
    double singularity_threshold() const { return 1e-10 * max_abs_entry * max_abs_entry * max_abs_entry; }
};

namespace detail {

// The period [-a/2, a/2] is divided into an integer number of steps so the
// three solution strands of the dual interleave exactly; the user's step is
// rounded to the nearest divisor.
inline long scan_steps(double a, double grid_step) {
    if (!(grid_step > 0) || grid_step > a / 100.0)
        throw parameter_error("grid_step must be positive and at most a/100");
    return std::lround(a / grid_step);
}

}  // namespace detail

// Signed determinant over the closed period [-a/2, a/2], endpoints included,
// with the minors and the A_N diagnostic recorded per point.
inline det_scan_result det_scan(const window& w, double a, double b, double grid_step) {
    if (!(a > 0)) throw parameter_error("det_scan: a must be positive");
    if (!(b > 0)) throw parameter_error("det_scan: b must be positive");
    long K = detail::scan_steps(a, grid_step);
    double step = a / static_cast<double>(K);

    det_scan_result r;
    r.grid_step = step;
    std::vector<double> det_vals;
    det_vals.reserve(static_cast<std::size_t>(K) + 1);
    r.min_abs_det = std::numeric_limits<double>::infinity();
    for (long k = 0; k <= K; ++k) {
        double x = -0.5 * a + static_cast<double>(k) * step;
        gmatrix g = build_G(w, a, b, x);
        for (const auto& row : g.entries)
            for (double e : row) r.max_abs_entry = std::max(r.max_abs_entry, std::abs(e));
        auto m = minors(g);
        double d = det_G(g);
        det_vals.push_back(d);
        r.a_lower.push_back(det_lower_diagnostic(g));
        r.g21.push_back(m.g21);
        r.g22.push_back(m.g22);
        r.g23.push_back(m.g23);
        if (std::abs(d) < r.min_abs_det) {
            r.min_abs_det = std::abs(d);
            r.det_argmin = x;
        }
    }
    r.samples = grid_function(-0.5 * a, step, std::move(det_vals));
    return r;
}

struct dual_result {
    grid_function h;                 // on [-3a/2, 3a/2], exactly 0 outside
    double min_abs_det = 0.0;
    double det_argmin = 0.0;
    double grid_step = 0.0;          // effective step
    det_scan_result scan;

    // The solves at x = -a/2 and x = a/2 each produce one value that the
    // neighboring strand also produces; the middle strand's value is kept.
    double seam_mismatch_left = 0.0;
    double seam_mismatch_right = 0.0;
    bool seams_consistent = true;

    bool in_theorem_range = true;    // 2/(N+a) < b <= 4/(N+3a)

    // per-ell max duality residuals, filled by the duality checker when run
    std::optional<std::vector<std::pair<int, double>>> residual_summary;
};

struct synthesis_options {
    // Proceed even when b <= 2/(N+a), where the construction provably
    // degenerates (zero first/third row on part of the period).
    bool force = false;
};

// Pointwise dual construction: for each x in [-a/2, a/2] solve
// G(x) (v1, v2, v3)^T = (0, b, 0)^T and place v1, v2, v3 at x-a, x, x+a.
// Cramer's rule with the middle-row minors gives
//   (v1, v2, v3) = (b/det) (-G21, G22, -G23).
inline dual_result synthesize_dual(const window& w, double a, double b, double grid_step,
                                   const synthesis_options& opts = {}) {
    double N = 2.0 * w.support_radius();
    if (!(a > 0) || !(a < N)) throw parameter_error("synthesize_dual: a must lie in (0, N)");
    if (!(b > 0)) throw parameter_error("synthesize_dual: b must be positive");
    double degenerate_limit = 2.0 / (N + a);
    if (b <= degenerate_limit && !opts.force)
        throw parameter_out_of_range(
            "synthesize_dual: b <= 2/(N+a); the three-cell dual degenerates on part of the period "
            "(pass force to scan anyway)",
            b, degenerate_limit);

    dual_result r;
    r.scan = det_scan(w, a, b, grid_step);
    r.min_abs_det = r.scan.min_abs_det;
    r.det_argmin = r.scan.det_argmin;
    r.grid_step = r.scan.grid_step;
    r.in_theorem_range = b > degenerate_limit && b <= 4.0 / (N + 3.0 * a);
    if (r.min_abs_det <= r.scan.singularity_threshold())
        throw singular_matrix_error("synthesize_dual: det G is numerically singular on the period",
                                    r.det_argmin, r.min_abs_det);

    double step = r.grid_step;
    long K = std::lround(a / step);
    std::vector<double> vals(static_cast<std::size_t>(3 * K) + 1, 0.0);
    std::vector<double> mid(static_cast<std::size_t>(K) + 1, 0.0);
    double seam_left_other = 0.0, seam_right_other = 0.0;

    for (long k = 0; k <= K; ++k) {
        double x = -0.5 * a + static_cast<double>(k) * step;
        gmatrix g = build_G(w, a, b, x);
        auto m = minors(g);
        double det = det_G(g);
        double v1 = -b * m.g21 / det;
        double v3 = -b * m.g23 / det;
        mid[static_cast<std::size_t>(k)] = b * m.g22 / det;
        if (k == K) seam_left_other = v1;   // h(-a/2) from the x = a/2 solve
        if (k == 0) seam_right_other = v3;  // h(a/2) from the x = -a/2 solve
        vals[static_cast<std::size_t>(k)] = v1;
        vals[static_cast<std::size_t>(2 * K + k)] = v3;
    }
    // Middle strand written last so its values win at the shared indices K, 2K.
    for (long k = 0; k <= K; ++k) vals[static_cast<std::size_t>(K + k)] = mid[static_cast<std::size_t>(k)];

    r.seam_mismatch_left = std::abs(seam_left_other - mid.front());
    r.seam_mismatch_right = std::abs(seam_right_other - mid.back());
    double h_max = 0.0;
    for (double v : vals) h_max = std::max(h_max, std::abs(v));
    double seam_tol = 1e-8 * h_max;
    r.seams_consistent = r.seam_mismatch_left <= seam_tol && r.seam_mismatch_right <= seam_tol;

    r.h = grid_function(-1.5 * a, step, std::move(vals));
    return r;
}

inline dual_result synthesize_dual(const window& w, double a, double b) {
    return synthesize_dual(w, a, b, a / 2000.0);
}

}  // namespace gabor

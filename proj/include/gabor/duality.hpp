#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "gabor/errors.hpp"
#include "gabor/grid_function.hpp"
#include "gabor/window.hpp"

namespace gabor {

struct duality_report {
    // (ell, max residual over the x-grid), ell ascending; covers every ell
    // whose g-translate can overlap the support of h.
    std::vector<std::pair<int, double>> residuals;
    int ell_range = 0;
    double grid_step = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    double max_residual() const {
        double m = 0.0;
        for (auto& [l, r] : residuals) m = std::max(m, r);
        return m;
    }
};

struct duality_options {
    // Evaluate midway between grid nodes instead of on them.  The node grid
    // matches the synthesis grid, so node residuals of a synthesized dual
    // reflect solver error alone; the offset grid adds interpolation error.
    bool offset_grid = false;
    std::optional<double> tolerance;  // default 1e-6 * b
};

// Max deviation of sum_m g(x - l/b + m a) h(x + m a) from b*delta_{l,0}
// over one period, per l.  The m-sum runs over every integer with
// x + m a inside the support of h, so a dual wider than three cells would
// show up as a nonzero extra term rather than being silently truncated.
//
// The period endpoints x = +-a/2 are excluded: the duality identity is an
// almost-everywhere statement, and for a dual carrying nonzero samples at
// the closed support edges +-3a/2 it genuinely fails at exactly those two
// points (the edge samples overlap the sum only there).  The endpoint
// systems are covered instead by the synthesis seam-consistency check.
inline duality_report duality_residuals(const window& g, const grid_function& h, double a, double b,
                                        double grid_step, const duality_options& opts = {}) {
    if (!(a > 0)) throw parameter_error("duality_residuals: a must be positive");
    if (!(b > 0)) throw parameter_error("duality_residuals: b must be positive");
    if (!(grid_step > 0)) throw parameter_error("duality_residuals: grid_step must be positive");

    duality_report rep;
    rep.tolerance = opts.tolerance.value_or(1e-6 * b);
    double radius_h = std::max(std::abs(h.x_min()), std::abs(h.x_max()));
    rep.ell_range = static_cast<int>(std::floor(b * (g.support_radius() + radius_h) + 1e-9));
    long K = std::max<long>(2, std::lround(a / grid_step));
    double step = a / static_cast<double>(K);
    rep.grid_step = step;

    for (int l = -rep.ell_range; l <= rep.ell_range; ++l) rep.residuals.push_back({l, 0.0});

    long k_lo = 1, k_hi = K - 1;
    double shift = 0.0;
    if (opts.offset_grid) {
        shift = 0.5 * step;
        k_lo = 0;
    }
    for (long k = k_lo; k <= k_hi; ++k) {
        double x = -0.5 * a + static_cast<double>(k) * step + shift;
        long m_lo = static_cast<long>(std::ceil((h.x_min() - x) / a - 1e-12));
        long m_hi = static_cast<long>(std::floor((h.x_max() - x) / a + 1e-12));
        for (auto& [l, worst] : rep.residuals) {
            double sum = 0.0;
            for (long m = m_lo; m <= m_hi; ++m) {
                double xm = x + static_cast<double>(m) * a;
                sum += g(xm - static_cast<double>(l) / b) * h(xm);
            }
            double target = l == 0 ? b : 0.0;
            worst = std::max(worst, std::abs(sum - target));
        }
    }
    rep.pass = std::all_of(rep.residuals.begin(), rep.residuals.end(),
                           [&](const auto& e) { return e.second <= rep.tolerance; });
    return rep;
}

inline duality_report duality_residuals(const window& g, const grid_function& h, double a, double b) {
    return duality_residuals(g, h, a, b, a / 2000.0);
}

namespace detail {

// (1/b) sum_k sup_x |sum_n w(x-na) w(x-na-k/b)|.  The sup is a grid max over
// the midpoints of one period — an estimate in the ess-sup spirit: sampling
// cell midpoints keeps measure-zero coincidence spikes of discontinuous
// windows (box edges meeting lattice points) out of the estimate.
template <class F>
double bessel_upper_impl(const F& w, double lo, double hi, double a, double b, double grid_step) {
    if (!(a > 0)) throw parameter_error("bessel_upper_bound: a must be positive");
    if (!(b > 0)) throw parameter_error("bessel_upper_bound: b must be positive");
    long M = std::max<long>(1, std::lround(a / grid_step));
    double step = a / static_cast<double>(M);
    int k_max = static_cast<int>(std::floor(b * (hi - lo) + 1e-9));

    double total = 0.0;
    for (int k = -k_max; k <= k_max; ++k) {
        double off = static_cast<double>(k) / b;
        double sup = 0.0;
        for (long j = 0; j < M; ++j) {
            double x = (static_cast<double>(j) + 0.5) * step;
            long n_lo = static_cast<long>(std::ceil((x - hi) / a - 1e-12));
            long n_hi = static_cast<long>(std::floor((x - lo) / a + 1e-12));
            double sum = 0.0;
            for (long n = n_lo; n <= n_hi; ++n) {
                double y = x - static_cast<double>(n) * a;
                sum += w(y) * w(y - off);
            }
            sup = std::max(sup, std::abs(sum));
        }
        total += sup;
    }
    return total / b;
}

}  // namespace detail

inline double bessel_upper_bound(const window& w, double a, double b, double grid_step) {
    return detail::bessel_upper_impl(w, -w.support_radius(), w.support_radius(), a, b, grid_step);
}
inline double bessel_upper_bound(const window& w, double a, double b) {
    return bessel_upper_bound(w, a, b, a / 2000.0);
}
inline double bessel_upper_bound(const grid_function& h, double a, double b, double grid_step) {
    return detail::bessel_upper_impl(h, h.x_min(), h.x_max(), a, b, grid_step);
}
inline double bessel_upper_bound(const grid_function& h, double a, double b) {
    return bessel_upper_bound(h, a, b, a / 2000.0);
}

struct bounds_estimate {
    double bessel_upper_g = 0.0;
    double bessel_upper_h = 0.0;
    double lower_frame_g = 0.0;  // 1/bessel_upper_h once duality is verified
};

// Frame-bound estimates via the standard duality consequence: if (g, h) are
// dual Bessel generators then the lower frame bound of g is at least
// 1/B_h.  Refuses to report anything when the duality check fails.
inline bounds_estimate frame_bounds_from_dual(const window& g, const grid_function& h, double a, double b,
                                              double tolerance, const duality_options& opts = {}) {
    duality_options o = opts;
    o.tolerance = tolerance;
    auto rep = duality_residuals(g, h, a, b, a / 2000.0, o);
    if (!rep.pass)
        throw duality_not_verified("frame_bounds_from_dual: duality residuals exceed tolerance (max " +
                                   std::to_string(rep.max_residual()) + ")");
    bounds_estimate out;
    out.bessel_upper_g = bessel_upper_bound(g, a, b);
    out.bessel_upper_h = bessel_upper_bound(h, a, b);
    out.lower_frame_g = 1.0 / out.bessel_upper_h;
    return out;
}

}  // namespace gabor

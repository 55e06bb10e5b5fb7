#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gabor/errors.hpp"
#include "gabor/window.hpp"

namespace gabor {

// First and second backward differences with shift a.
template <class F>
double delta(const F& w, double a, double x) {
    if (!(a > 0)) throw parameter_error("delta: a must be positive");
    return w(x) - w(x - a);
}

template <class F>
double delta2(const F& w, double a, double x) {
    if (!(a > 0)) throw parameter_error("delta2: a must be positive");
    return w(x) - 2.0 * w(x - a) + w(x - 2.0 * a);
}

struct witness {
    std::string axiom;
    double x = 0.0;
    double deficit = 0.0;
};

struct membership_report {
    enum class method_t { axioms, prop41, cor19 };

    bool a1_pass = true;
    bool a2_pass = true;
    bool a3_pass = true;
    std::vector<witness> witnesses;
    method_t method = method_t::axioms;

    // prop41/cor19 verify derivative conditions that certify membership for
    // every shift in (0, N) at once; `a` is then absent.
    bool universal_a = false;

    double N = 0.0;
    std::optional<double> a;
    double grid_step = 0.0;
    double tol = 0.0;
    std::string note;

    bool member() const { return a1_pass && a2_pass && a3_pass; }
};

inline const char* method_name(membership_report::method_t m) {
    switch (m) {
        case membership_report::method_t::axioms: return "axioms";
        case membership_report::method_t::prop41: return "prop41";
        case membership_report::method_t::cor19: return "cor19";
    }
    return "?";
}

inline double default_tol(const window& w) { return 1e-10 * w.peak(); }
inline double default_grid_step(const window& w, double a) {
    return std::min(a, w.support_radius()) / 1000.0;
}

namespace detail {

// Closed grid lo + k*step; hi is appended when the step does not land on it.
inline std::vector<double> grid_closed(double lo, double hi, double step) {
    std::vector<double> pts;
    auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    pts.reserve(static_cast<std::size_t>(count) + 1);
    for (long k = 0; k < count; ++k) pts.push_back(lo + static_cast<double>(k) * step);
    if (pts.empty() || pts.back() < hi - 1e-12 * std::max(1.0, std::abs(hi))) pts.push_back(hi);
    return pts;
}

inline void sort_witnesses(std::vector<witness>& ws) {
    std::stable_sort(ws.begin(), ws.end(), [](const witness& l, const witness& r) { return l.x < r.x; });
}

}  // namespace detail

// Central difference quotient, switching to a one-sided quotient when a
// window breakpoint falls strictly inside the stencil (or x sits on one).
// All variants are plain difference quotients, so on any interval where the
// window is convex a scan of these values is nondecreasing up to rounding.
inline double numerical_derivative(const window& w, double x, double h) {
    bool at_bp = false, left_blocked = false, right_blocked = false;
    for (double b : w.breakpoints()) {
        if (std::abs(b - x) <= 1e-12 * std::max(1.0, std::abs(x))) {
            at_bp = true;
        } else if (b > x && b < x + h) {
            right_blocked = true;
        } else if (b < x && b > x - h) {
            left_blocked = true;
        }
    }
    bool use_left = (at_bp || right_blocked) && !left_blocked;
    bool use_right = !at_bp && left_blocked && !right_blocked;
    if (use_left) return (w(x) - w(x - h)) / h;
    if (use_right) return (w(x + h) - w(x)) / h;
    return (w(x + h) - w(x - h)) / (2.0 * h);
}

namespace detail {

// A1 on [0, N/2]: |w(x) - w(-x)| <= tol.
inline bool scan_symmetry(const window& w, double step, double tol, std::vector<witness>& ws) {
    bool ok = true;
    for (double x : grid_closed(0.0, w.support_radius(), step)) {
        double diff = std::abs(w(x) - w(-x));
        if (diff > tol) {
            ws.push_back({"A1", x, diff});
            ok = false;
        }
    }
    return ok;
}

// A2 on [-N/2, 0]: strict increase of consecutive samples.  The pair
// anchored at the left support endpoint is excluded (the window is zero and
// continuous there, so equality at that single pair is not evidence of a
// plateau).  Equality is judged relative to the larger of the two samples:
// a window with an N-fold zero at the support edge climbs by far less than
// tol per step there while being strictly increasing, whereas a genuine
// plateau has a step of exactly zero at whatever level it sits.
inline bool scan_strict_increase(const window& w, double step, double tol, std::vector<witness>& ws) {
    auto pts = grid_closed(-w.support_radius(), 0.0, step);
    bool ok = true;
    for (std::size_t k = 2; k < pts.size(); ++k) {
        double lo = w(pts[k - 1]), hi = w(pts[k]);
        double diff = hi - lo;
        if (diff <= tol * std::max(std::abs(lo), std::abs(hi))) {
            ws.push_back({"A2", pts[k], -diff});
            ok = false;
        }
    }
    return ok;
}

inline bool scan_delta2(const window& w, double a, double lo, double hi, double step, double tol,
                        const char* axiom, std::vector<witness>& ws) {
    bool ok = true;
    for (double x : grid_closed(lo, hi, step)) {
        double d2 = delta2(w, a, x);
        if (d2 < -tol) {
            ws.push_back({axiom, x, -d2});
            ok = false;
        }
    }
    return ok;
}

}  // namespace detail

// Axioms of the V_{N,a} class, checked on grids.  N is read off the window
// (support [-N/2, N/2]).  The second-difference requirement splits on a:
// below N/3 it runs on [-N/2, -N/4+3a/4]; from N/3 on it runs on [-N/2, 0]
// plus one closed-form point inequality w(N/4-3a/4) - 2 w(-N/4-a/4) >= 0,
// whose x-2a term would fall outside the support.
inline membership_report check_axioms(const window& w, double a, double grid_step, double tol) {
    double N = 2.0 * w.support_radius();
    if (!(a > 0) || !(a < N)) throw parameter_error("check_axioms: a must lie in (0, N)");
    if (!(grid_step > 0) || grid_step > a / 10.0)
        throw parameter_error("check_axioms: grid_step must be positive and at most a/10");
    if (!(tol >= 0)) throw parameter_error("check_axioms: tol must be nonnegative");

    membership_report r;
    r.method = membership_report::method_t::axioms;
    r.N = N;
    r.a = a;
    r.grid_step = grid_step;
    r.tol = tol;
    r.note = "A2 strictness scan excludes the pair anchored at the left support endpoint";

    r.a1_pass = detail::scan_symmetry(w, grid_step, tol, r.witnesses);
    r.a2_pass = detail::scan_strict_increase(w, grid_step, tol, r.witnesses);

    if (a < N / 3.0) {
        r.a3_pass = detail::scan_delta2(w, a, -N / 2.0, -N / 4.0 + 0.75 * a, grid_step, tol, "A3", r.witnesses);
    } else {
        r.a3_pass = detail::scan_delta2(w, a, -N / 2.0, 0.0, grid_step, tol, "A3", r.witnesses);
        double lhs = w(N / 4.0 - 0.75 * a) - 2.0 * w(-N / 4.0 - 0.25 * a);
        if (lhs < -tol) {
            r.witnesses.push_back({"A3", -N / 4.0 + 0.75 * a, -lhs});
            r.a3_pass = false;
        }
    }
    detail::sort_witnesses(r.witnesses);
    return r;
}

inline membership_report check_axioms(const window& w, double a) {
    return check_axioms(w, a, default_grid_step(w, a), default_tol(w));
}

// Sufficient derivative conditions certifying membership for all a in (0, N):
// (a) symmetry, (b) strict increase, (c) derivative nondecreasing on
// (-N/2, -N/4], (d) derivative dominates its reflection, g'(-x-N/2) <= g'(x)
// on [-N/4, 0).  (c) and (d) together stand in for the second-difference
// axiom, so they report under a3_pass.
inline membership_report check_prop41(const window& w, double grid_step, double tol) {
    double N = 2.0 * w.support_radius();
    if (!(grid_step > 0) || grid_step > N / 8.0)
        throw parameter_error("check_prop41: grid_step must be positive and at most N/8");
    if (!(tol >= 0)) throw parameter_error("check_prop41: tol must be nonnegative");

    membership_report r;
    r.method = membership_report::method_t::prop41;
    r.universal_a = true;
    r.N = N;
    r.grid_step = grid_step;
    r.tol = tol;
    r.note = "pass certifies membership for every a in (0, N)";

    r.a1_pass = detail::scan_symmetry(w, grid_step, tol, r.witnesses);
    r.a2_pass = detail::scan_strict_increase(w, grid_step, tol, r.witnesses);

    bool c_pass = true;
    {
        auto pts = detail::grid_closed(-N / 2.0 + grid_step, -N / 4.0, grid_step);
        double prev = numerical_derivative(w, pts.front(), grid_step);
        for (std::size_t k = 1; k < pts.size(); ++k) {
            double cur = numerical_derivative(w, pts[k], grid_step);
            if (cur < prev - tol) {
                r.witnesses.push_back({"P41c", pts[k], prev - cur});
                c_pass = false;
            }
            prev = cur;
        }
    }
    bool d_pass = true;
    for (double x : detail::grid_closed(-N / 4.0, -grid_step, grid_step)) {
        if (x >= 0) break;
        double mirrored = numerical_derivative(w, -x - N / 2.0, grid_step);
        double direct = numerical_derivative(w, x, grid_step);
        if (mirrored > direct + tol) {
            r.witnesses.push_back({"P41d", x, mirrored - direct});
            d_pass = false;
        }
    }
    r.a3_pass = c_pass && d_pass;
    detail::sort_witnesses(r.witnesses);
    return r;
}

inline membership_report check_prop41(const window& w) {
    return check_prop41(w, w.support_radius() / 1000.0, default_tol(w));
}

// Stronger sufficient condition: derivative positive and nondecreasing on
// the whole (-N/2, 0).  Positivity reports under a2_pass (it implies strict
// increase), monotonicity under a3_pass.
inline membership_report check_cor19(const window& w, double grid_step, double tol) {
    double N = 2.0 * w.support_radius();
    if (!(grid_step > 0) || grid_step > N / 8.0)
        throw parameter_error("check_cor19: grid_step must be positive and at most N/8");
    if (!(tol >= 0)) throw parameter_error("check_cor19: tol must be nonnegative");

    membership_report r;
    r.method = membership_report::method_t::cor19;
    r.universal_a = true;
    r.N = N;
    r.grid_step = grid_step;
    r.tol = tol;
    r.note = "pass certifies membership for every a in (0, N)";

    r.a1_pass = detail::scan_symmetry(w, grid_step, tol, r.witnesses);

    bool pos_pass = true, inc_pass = true;
    auto pts = detail::grid_closed(-N / 2.0 + grid_step, -grid_step, grid_step);
    double prev = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (pts[k] >= 0) break;
        double cur = numerical_derivative(w, pts[k], grid_step);
        if (cur <= tol) {
            r.witnesses.push_back({"C19b_pos", pts[k], -cur});
            pos_pass = false;
        }
        if (k > 0 && cur < prev - tol) {
            r.witnesses.push_back({"C19b_inc", pts[k], prev - cur});
            inc_pass = false;
        }
        prev = cur;
    }
    r.a2_pass = pos_pass;
    r.a3_pass = inc_pass;
    detail::sort_witnesses(r.witnesses);
    return r;
}

inline membership_report check_cor19(const window& w) {
    return check_cor19(w, w.support_radius() / 1000.0, default_tol(w));
}

struct lemma45_result {
    bool pass = true;
    std::vector<witness> witnesses;
};

// Members satisfy the second-difference inequality on the full interval
// [-N/2, -N/4+3a/4] regardless of the a >= N/3 case split; checking it is a
// consistency diagnostic for check_axioms.
inline lemma45_result check_lemma45_extension(const window& w, double a, double grid_step) {
    double N = 2.0 * w.support_radius();
    if (!(a > 0) || !(a < N)) throw parameter_error("check_lemma45_extension: a must lie in (0, N)");
    if (!(grid_step > 0)) throw parameter_error("check_lemma45_extension: grid_step must be positive");
    lemma45_result out;
    out.pass = detail::scan_delta2(w, a, -N / 2.0, -N / 4.0 + 0.75 * a, grid_step, default_tol(w),
                                   "L45", out.witnesses);
    detail::sort_witnesses(out.witnesses);
    return out;
}

inline lemma45_result check_lemma45_extension(const window& w, double a) {
    return check_lemma45_extension(w, a, default_grid_step(w, a));
}

}  // namespace gabor

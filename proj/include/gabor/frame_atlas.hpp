#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gabor/errors.hpp"
#include "gabor/membership.hpp"
#include "gabor/window.hpp"

namespace gabor {

struct gabor_params {
    double N = 0.0;  // support length of the window, 2 * support_radius
    double a = 0.0;
    double b = 0.0;
};

enum class region_status { frame_guaranteed, known_not_frame, necessary_violated, unknown };

enum class atlas_rule {
    regionA_multiplication,
    prop_ii_shortdual,
    prop_iii_halfsupport,
    thm_D_Vclass,
    nec_ab_lt_1,
    nec_a_lt_N,
    obstruction_db,
};

inline const char* status_name(region_status s) {
    switch (s) {
        case region_status::frame_guaranteed: return "frame_guaranteed";
        case region_status::known_not_frame: return "known_not_frame";
        case region_status::necessary_violated: return "necessary_violated";
        case region_status::unknown: return "unknown";
    }
    return "?";
}

inline const char* rule_name(atlas_rule r) {
    switch (r) {
        case atlas_rule::regionA_multiplication: return "regionA_multiplication";
        case atlas_rule::prop_ii_shortdual: return "prop_ii_shortdual";
        case atlas_rule::prop_iii_halfsupport: return "prop_iii_halfsupport";
        case atlas_rule::thm_D_Vclass: return "thm_D_Vclass";
        case atlas_rule::nec_ab_lt_1: return "nec_ab_lt_1";
        case atlas_rule::nec_a_lt_N: return "nec_a_lt_N";
        case atlas_rule::obstruction_db: return "obstruction_db";
    }
    return "?";
}

struct region_classification {
    region_status status = region_status::unknown;
    std::vector<atlas_rule> rules_fired;
    std::vector<std::string> details;

    bool fired(atlas_rule r) const {
        return std::find(rules_fired.begin(), rules_fired.end(), r) != rules_fired.end();
    }
};

// Exact fraction for lattice parameters given as p/q.  Kept small (1e6 cap
// after reduction) so every boundary comparison below fits in long long.
struct rational {
    long long num = 0;
    long long den = 1;

    rational() = default;
    rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw validation_error("rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num > 1000000 || num < -1000000 || den > 1000000)
            throw validation_error("rational: numerator or denominator exceeds the 1e6 cap");
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Accepts "p/q" with integer p, q; anything else is not a fraction and
// should be read as a plain double by the caller.
inline std::optional<rational> parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == text.size()) return std::nullopt;
    auto digits = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = s[0] == '+' || s[0] == '-' ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    std::string p = text.substr(0, slash), q = text.substr(slash + 1);
    if (!digits(p) || !digits(q)) return std::nullopt;
    try {
        return rational(std::stoll(p), std::stoll(q));
    } catch (const std::out_of_range&) {
        throw validation_error("rational: value out of range in '" + text + "'");
    }
}

struct obstruction_entry {
    std::string window_id;       // canonical window name, e.g. "bspline:N=2"
    std::optional<double> a;     // empty means the obstruction holds for every shift
    double b = 0.0;
    std::string citation;
};

// Catalog of (window, a, b) points known NOT to generate a frame.  This is
// the only source of known_not_frame verdicts; everything else the
// classifier cannot certify stays unknown.
class obstruction_db {
public:
    static obstruction_db builtin() {
        obstruction_db db;
        db.add({"bspline:N=2", std::nullopt, 2.0,
                "Zak transform of the degree-2 spline has a zero on the b=2 lattice"});
        db.add({"bspline:N=2", 2.0 / 7.0, 7.0 / 4.0,
                "rational-lattice criterion excludes (2/7, 7/4) for the degree-2 spline"});
        return db;
    }

    void add(obstruction_entry e) { entries_.push_back(std::move(e)); }

    // Lines are `window_id,a,b,citation`; a may be "any", a and b may be
    // fractions p/q; '#' starts a comment line.
    void load_csv(std::istream& in) {
        std::string line;
        std::size_t line_no = 0;
        auto number = [&](const std::string& field) {
            if (auto r = parse_rational(field)) return r->value();
            std::size_t pos = 0;
            double v = std::stod(field, &pos);
            if (pos != field.size()) throw std::invalid_argument(field);
            return v;
        };
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            auto c1 = line.find(',');
            auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
            auto c3 = c2 == std::string::npos ? c2 : line.find(',', c2 + 1);
            if (c3 == std::string::npos)
                throw validation_error("obstruction csv: line " + std::to_string(line_no) +
                                       " needs window_id,a,b,citation");
            obstruction_entry e;
            e.window_id = line.substr(0, c1);
            std::string a_field = line.substr(c1 + 1, c2 - c1 - 1);
            std::string b_field = line.substr(c2 + 1, c3 - c2 - 1);
            e.citation = line.substr(c3 + 1);
            try {
                if (a_field != "any") e.a = number(a_field);
                e.b = number(b_field);
            } catch (const std::invalid_argument&) {
                throw validation_error("obstruction csv: bad number on line " + std::to_string(line_no));
            }
            add(std::move(e));
        }
    }

    void load_csv_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw validation_error("obstruction csv: cannot open '" + path + "'");
        load_csv(in);
    }

    const obstruction_entry* match(const std::string& window_id, double a, double b) const {
        for (const auto& e : entries_) {
            if (e.window_id != window_id) continue;
            if (e.a && std::abs(*e.a - a) > 1e-12) continue;
            if (std::abs(e.b - b) > 1e-12) continue;
            return &e;
        }
        return nullptr;
    }

    const std::vector<obstruction_entry>& entries() const { return entries_; }

private:
    std::vector<obstruction_entry> entries_;
};

struct classify_options {
    // Re-run the membership scan at every point instead of consulting the
    // proven shift ranges of the catalog families.
    bool strict_membership = false;
    double hypothesis_grid_step = 0.0;  // 0 picks a/2000 for the infima
    const obstruction_db* obstructions = nullptr;  // null uses the builtin table
    // When both fractions are given (and N is an integer) the rule-range
    // comparisons are done in integer arithmetic, so closed boundaries like
    // b = 4/(N+3a) are honored exactly for lattice parameters typed as p/q.
    std::optional<rational> a_exact;
    std::optional<rational> b_exact;
};

// Shift intervals with proven class membership, per catalog family.
// half-open [lo, hi) unless lo_open; empty for windows outside the catalog,
// which then get the numerical membership scan instead.
struct shift_interval {
    double lo, hi;
    bool lo_open;
    bool contains(double a) const { return (lo_open ? a > lo : a >= lo) && a < hi; }
};

inline std::vector<shift_interval> proven_membership_ranges(const window& w) {
    double N = 2.0 * w.support_radius();
    switch (w.spec().kind) {
        case window_kind::bspline:
        case window_kind::cospower:
        case window_kind::trunc_exp:
        case window_kind::trunc_rational_abs:
            return {{0.0, N, true}};
        case window_kind::trunc_gauss:
            return {{3.0 * N / 7.0, N, false}};
        case window_kind::trunc_rational_sq:
            if (N >= std::sqrt(12.0 / 5.0)) return {{N / 3.0, N, false}};
            return {{3.0 * N / 7.0, N, false}};
        default:
            return {};
    }
}

// Grid infimum of the periodized energy sum_n |g(x - n a)|^2 over one period.
// Positive infimum means the frame operator at b <= 1/N acts by
// multiplication with an invertible function.
inline double region_A_infimum(const window& w, double a, double grid_step) {
    if (!(a > 0)) throw parameter_error("region_A_infimum: a must be positive");
    if (!(grid_step > 0)) throw parameter_error("region_A_infimum: grid_step must be positive");
    double R = w.support_radius();
    long M = std::max<long>(1, std::lround(a / grid_step));
    double step = a / static_cast<double>(M);
    double inf = std::numeric_limits<double>::infinity();
    for (long k = 0; k <= M; ++k) {
        double x = static_cast<double>(k) * step;
        long n_lo = static_cast<long>(std::ceil((x - R) / a - 1e-12));
        long n_hi = static_cast<long>(std::floor((x + R) / a + 1e-12));
        double sum = 0.0;
        for (long n = n_lo; n <= n_hi; ++n) {
            double v = w(x - static_cast<double>(n) * a);
            sum += v * v;
        }
        inf = std::min(inf, sum);
    }
    return inf;
}

inline double region_A_infimum(const window& w, double a) { return region_A_infimum(w, a, a / 2000.0); }

namespace detail {

// All rule-range comparisons go through here so the exact-fraction path and
// the double path cannot drift apart.
struct boundary_cmp {
    double N, a, b;
    bool exact = false;
    long long pa = 0, qa = 1, pb = 0, qb = 1, Ni = 0;

    static boundary_cmp make(const gabor_params& p, const classify_options& opts) {
        boundary_cmp c;
        c.N = p.N;
        c.a = p.a;
        c.b = p.b;
        long long Ni = std::llround(p.N);
        if (opts.a_exact && opts.b_exact && std::abs(p.N - static_cast<double>(Ni)) <= 1e-12 && Ni > 0 &&
            Ni <= 1000000) {
            if (std::abs(opts.a_exact->value() - p.a) > 1e-12 * std::max(1.0, std::abs(p.a)) ||
                std::abs(opts.b_exact->value() - p.b) > 1e-12 * std::max(1.0, std::abs(p.b)))
                throw validation_error("classify: exact fractions disagree with the a, b values");
            c.exact = true;
            c.pa = opts.a_exact->num;
            c.qa = opts.a_exact->den;
            c.pb = opts.b_exact->num;
            c.qb = opts.b_exact->den;
            c.Ni = Ni;
        }
        return c;
    }

    bool ab_lt_1() const { return exact ? pa * pb < qa * qb : a * b < 1.0; }
    bool a_lt_N() const { return exact ? pa < Ni * qa : a < N; }
    bool a_ge_half_N() const { return exact ? 2 * pa >= Ni * qa : a >= 0.5 * N; }
    bool b_le_1_over_N() const { return exact ? pb * Ni <= qb : b <= 1.0 / N; }
    bool b_lt_1_over_a() const { return exact ? pb * pa < qb * qa : b < 1.0 / a; }
    bool b_le_2_over_NpA() const {
        return exact ? pb * (Ni * qa + pa) <= 2 * qa * qb : b <= 2.0 / (N + a);
    }
    bool b_le_4_over_Np3A() const {
        return exact ? pb * (Ni * qa + 3 * pa) <= 4 * qa * qb : b <= 4.0 / (N + 3.0 * a);
    }
};

// Hypothesis verdicts reused across one column of a scan (they depend on a
// but not on b).
struct column_cache {
    std::optional<double> regionA_inf;
    std::optional<double> prop_ii_min;
    std::optional<bool> prop_iii_pos;
    std::optional<std::pair<bool, std::string>> membership;
};

inline double min_abs_on_half_period(const window& w, double a, double grid_step) {
    long M = std::max<long>(1, std::lround(a / grid_step));
    double step = a / static_cast<double>(M);
    double lo = std::numeric_limits<double>::infinity();
    for (long k = 0; k <= M; ++k)
        lo = std::min(lo, std::abs(w(-0.5 * a + static_cast<double>(k) * step)));
    return lo;
}

inline bool positive_on_open_support(const window& w, double grid_step) {
    double R = w.support_radius();
    long M = std::max<long>(2, std::lround(2.0 * R / grid_step));
    double step = 2.0 * R / static_cast<double>(M);
    for (long k = 1; k < M; ++k)
        if (!(w(-R + static_cast<double>(k) * step) > 0.0)) return false;
    return true;
}

inline std::pair<bool, std::string> membership_for_rule(const window& w, double a,
                                                        const classify_options& opts) {
    if (!opts.strict_membership) {
        auto ranges = proven_membership_ranges(w);
        if (!ranges.empty()) {
            for (const auto& iv : ranges)
                if (iv.contains(a)) return {true, "membership via proven shift range"};
            return {false, "a outside the proven shift range"};
        }
    }
    auto rep = check_axioms(w, a);
    if (rep.member()) return {true, "membership verified by scan"};
    return {false, "membership scan failed"};
}

inline region_classification classify_impl(const window& w, const gabor_params& p,
                                           const classify_options& opts, column_cache* cache) {
    if (!(p.N > 0) || !(p.a > 0) || !(p.b > 0))
        throw parameter_error("classify: N, a, b must all be positive");
    if (std::abs(p.N - 2.0 * w.support_radius()) > 1e-9 * std::max(1.0, p.N))
        throw validation_error("classify: params.N disagrees with the window support length");

    boundary_cmp cmp = boundary_cmp::make(p, opts);
    region_classification out;

    bool ab_ok = cmp.ab_lt_1();
    bool aN_ok = cmp.a_lt_N();
    if (!ab_ok) {
        out.rules_fired.push_back(atlas_rule::nec_ab_lt_1);
        out.details.push_back("ab = " + gabor::detail::format_g(p.a * p.b) + " >= 1");
    }
    if (!aN_ok) {
        out.rules_fired.push_back(atlas_rule::nec_a_lt_N);
        out.details.push_back("a = " + gabor::detail::format_g(p.a) +
                              " >= N = " + gabor::detail::format_g(p.N));
    }

    static const obstruction_db builtin = obstruction_db::builtin();
    const obstruction_db& db = opts.obstructions ? *opts.obstructions : builtin;
    const obstruction_entry* hit = db.match(w.name(), p.a, p.b);
    if (hit) {
        out.rules_fired.push_back(atlas_rule::obstruction_db);
        out.details.push_back("obstruction: " + hit->citation);
    }

    if (!ab_ok || !aN_ok) {
        out.status = region_status::necessary_violated;
        return out;
    }

    double inf_step = opts.hypothesis_grid_step > 0 ? opts.hypothesis_grid_step : p.a / 2000.0;
    double support_step = opts.hypothesis_grid_step > 0 ? opts.hypothesis_grid_step
                                                        : w.support_radius() / 1000.0;
    bool sufficient = false;

    if (cmp.b_le_1_over_N()) {
        double inf;
        if (cache && cache->regionA_inf)
            inf = *cache->regionA_inf;
        else {
            inf = region_A_infimum(w, p.a, inf_step);
            if (cache) cache->regionA_inf = inf;
        }
        if (inf > 1e-12 * w.peak() * w.peak()) {
            out.rules_fired.push_back(atlas_rule::regionA_multiplication);
            out.details.push_back("regionA: tiling infimum = " + gabor::detail::format_g(inf) +
                                  " (boundary b <= 1/N is an interpretation: painless overlap)");
            sufficient = true;
        } else {
            out.details.push_back("regionA range holds but tiling infimum = " +
                                  gabor::detail::format_g(inf) + " is not positive");
        }
    }

    if (cmp.b_le_2_over_NpA()) {
        double lo;
        if (cache && cache->prop_ii_min)
            lo = *cache->prop_ii_min;
        else {
            lo = min_abs_on_half_period(w, p.a, inf_step);
            if (cache) cache->prop_ii_min = lo;
        }
        if (lo > 1e-12 * w.peak()) {
            out.rules_fired.push_back(atlas_rule::prop_ii_shortdual);
            out.details.push_back("prop_ii: min |g| on [-a/2, a/2] = " + gabor::detail::format_g(lo));
            sufficient = true;
        } else {
            out.details.push_back("prop_ii range holds but min |g| on [-a/2, a/2] = " +
                                  gabor::detail::format_g(lo) + " is not positive");
        }
    }

    if (cmp.a_ge_half_N() && cmp.b_lt_1_over_a()) {
        bool pos;
        if (cache && cache->prop_iii_pos)
            pos = *cache->prop_iii_pos;
        else {
            pos = positive_on_open_support(w, support_step);
            if (cache) cache->prop_iii_pos = pos;
        }
        if (pos) {
            out.rules_fired.push_back(atlas_rule::prop_iii_halfsupport);
            out.details.push_back("prop_iii: N/2 <= a < N, b < 1/a, g > 0 inside the support");
            sufficient = true;
        } else {
            out.details.push_back("prop_iii range holds but g vanishes inside the support");
        }
    }

    if (!cmp.b_le_2_over_NpA() && cmp.b_le_4_over_Np3A()) {
        std::pair<bool, std::string> mem;
        if (cache && cache->membership)
            mem = *cache->membership;
        else {
            mem = membership_for_rule(w, p.a, opts);
            if (cache) cache->membership = mem;
        }
        if (mem.first) {
            out.rules_fired.push_back(atlas_rule::thm_D_Vclass);
            out.details.push_back("thm_D: 2/(N+a) < b <= 4/(N+3a), " + mem.second);
            sufficient = true;
        } else {
            out.details.push_back("thm_D range holds but " + mem.second);
        }
    }

    if (hit && sufficient)
        throw atlas_integrity_error(
            "classify: a sufficient rule certified a point recorded in the obstruction database (" +
            w.name() + ", a = " + gabor::detail::format_g(p.a) +
            ", b = " + gabor::detail::format_g(p.b) + ")");
    if (hit)
        out.status = region_status::known_not_frame;
    else if (sufficient)
        out.status = region_status::frame_guaranteed;
    return out;
}

}  // namespace detail

inline region_classification classify(const window& w, const gabor_params& p,
                                      const classify_options& opts = {}) {
    return detail::classify_impl(w, p, opts, nullptr);
}

inline region_classification classify(const window& w, double a, double b,
                                      const classify_options& opts = {}) {
    return classify(w, {2.0 * w.support_radius(), a, b}, opts);
}

struct scan_result {
    std::vector<double> a_values;
    std::vector<double> b_values;
    std::vector<region_classification> cells;  // row-major, a outer then b

    const region_classification& at(std::size_t ai, std::size_t bi) const {
        return cells[ai * b_values.size() + bi];
    }
};

namespace detail {

inline std::vector<double> lattice(double start, double stop, double step, const char* what) {
    if (!(start > 0) || !(step > 0))
        throw parameter_error(std::string("scan_region: ") + what + " start and step must be positive");
    if (stop < start - 1e-12)
        throw parameter_error(std::string("scan_region: ") + what + " stop must not precede start");
    long count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> xs(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) xs[static_cast<std::size_t>(k)] = start + static_cast<double>(k) * step;
    return xs;
}

inline unsigned scan_thread_count(std::size_t columns) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("GABOR_ATLAS_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(std::min(v, 64L));
    }
    if (n == 0) n = 1;
    return static_cast<unsigned>(std::min<std::size_t>(n, columns));
}

}  // namespace detail

// Classifies the whole lattice {a_i} x {b_j}.  Work is split by column so
// the b-independent hypothesis checks run once per a; the output layout is
// fixed by index, independent of the thread schedule.
inline scan_result scan_region(const window& w, double a_start, double a_stop, double a_step,
                               double b_start, double b_stop, double b_step,
                               const classify_options& opts = {}) {
    scan_result out;
    out.a_values = detail::lattice(a_start, a_stop, a_step, "a");
    out.b_values = detail::lattice(b_start, b_stop, b_step, "b");
    out.cells.resize(out.a_values.size() * out.b_values.size());

    classify_options cell_opts = opts;
    cell_opts.a_exact.reset();  // lattice points are generated as doubles
    cell_opts.b_exact.reset();

    auto run_column = [&](std::size_t ai) {
        detail::column_cache cache;
        gabor_params p{2.0 * w.support_radius(), out.a_values[ai], 0.0};
        for (std::size_t bi = 0; bi < out.b_values.size(); ++bi) {
            p.b = out.b_values[bi];
            out.cells[ai * out.b_values.size() + bi] = detail::classify_impl(w, p, cell_opts, &cache);
        }
    };

    unsigned n_threads = detail::scan_thread_count(out.a_values.size());
    if (n_threads <= 1) {
        for (std::size_t ai = 0; ai < out.a_values.size(); ++ai) run_column(ai);
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mu;
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t ai = t; ai < out.a_values.size(); ai += n_threads) run_column(ai);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace gabor

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gabor/grid_function.hpp"
#include "gabor/window.hpp"

using gabor::grid_function;
using gabor::make_window;
using gabor::validation_error;
using gabor::window;
using gabor::window_kind;
using gabor::window_spec;

namespace {

window catalog_window(window_kind k, double shape) { return make_window({k, shape, {}}); }

// Quadrature oracle for the convolution step B_N = B_{N-1} * B_1, i.e.
//   B_N(x) = integral of B_{N-1} over [x - 1/2, x + 1/2].
// Composite midpoint over pieces split at the integrand's kinks keeps the
// midpoint rule second-order accurate (and exact on the linear pieces of
// B_2's integrand).
double bspline_convolution_oracle(int n, double x, double step) {
    double R = 0.5 * (n - 1);
    double lo = std::max(x - 0.5, -R), hi = std::min(x + 0.5, R);
    if (hi <= lo) return 0.0;
    std::vector<double> cuts{lo, hi};
    for (int j = 0; j <= n - 1; ++j) {
        double c = -R + j;
        if (c > lo && c < hi) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        double len = cuts[p + 1] - cuts[p];
        auto m = static_cast<long>(std::ceil(len / step));
        double h = len / static_cast<double>(m);
        for (long i = 0; i < m; ++i)
            total += h * gabor::detail::bspline_eval(n - 1, cuts[p] + (static_cast<double>(i) + 0.5) * h);
    }
    return total;
}

}  // namespace

TEST_CASE("bspline point values") {
    window b2 = catalog_window(window_kind::bspline, 2);
    CHECK(b2(0.0) == 1.0);
    CHECK(b2(0.5) == 0.5);
    CHECK(b2(-0.5) == 0.5);
    CHECK(b2(1.0) == 0.0);
    CHECK(b2(-1.0) == 0.0);

    window b3 = catalog_window(window_kind::bspline, 3);
    CHECK(b3(0.0) == Catch::Approx(0.75).margin(1e-15));
    CHECK(b3(0.5) == Catch::Approx(0.5).margin(1e-15));
    CHECK(b3(1.5) == 0.0);

    window b4 = catalog_window(window_kind::bspline, 4);
    CHECK(b4(0.0) == Catch::Approx(2.0 / 3.0).margin(1e-15));

    window b1 = catalog_window(window_kind::bspline, 1);
    CHECK(b1(0.0) == 1.0);
    CHECK(b1(0.5) == 0.5);  // midpoint convention at the jump
    CHECK(b1(0.51) == 0.0);
}

TEST_CASE("bspline recurrence matches the convolution quadrature") {
    std::mt19937 rng(20240811);
    for (int n = 2; n <= 5; ++n) {
        std::uniform_real_distribution<double> xs(-0.5 * n - 0.25, 0.5 * n + 0.25);
        for (int k = 0; k < 60; ++k) {
            double x = xs(rng);
            double got = gabor::detail::bspline_eval(n, x);
            double want = bspline_convolution_oracle(n, x, 2e-4);
            CAPTURE(n, x);
            CHECK(got == Catch::Approx(want).margin(1e-6));
        }
    }
}

TEST_CASE("bspline partition of unity") {
    std::mt19937 rng(77001);
    for (int n = 2; n <= 5; ++n) {
        std::uniform_real_distribution<double> xs(-static_cast<double>(n), static_cast<double>(n));
        for (int k = 0; k < 200; ++k) {
            double x = xs(rng);
            double sum = 0.0;
            // Translates with |x - t| <= n/2 contribute; |x| < n needs |t| up to 3n/2.
            for (int t = -2 * n; t <= 2 * n; ++t) sum += gabor::detail::bspline_eval(n, x - t);
            CAPTURE(n, x);
            CHECK(sum == Catch::Approx(1.0).margin(1e-9));
        }
    }
}

TEST_CASE("catalog closed forms") {
    CHECK(catalog_window(window_kind::trunc_gauss, 2)(0.0) == Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-15));
    CHECK(catalog_window(window_kind::trunc_exp, 2)(1.0) == 0.0);
    CHECK(catalog_window(window_kind::trunc_exp, 2)(-1.0) == 0.0);
    CHECK(catalog_window(window_kind::trunc_exp, 2)(0.0) == Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-15));
    CHECK(catalog_window(window_kind::cospower, 3)(0.0) == 1.0);
    CHECK(catalog_window(window_kind::cospower, 2)(0.5) == Catch::Approx(std::pow(std::cos(M_PI * 0.25), 2)).margin(1e-15));
    CHECK(catalog_window(window_kind::trunc_rational_abs, 2)(0.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(catalog_window(window_kind::trunc_rational_sq, 2)(0.0) == Catch::Approx(0.5).margin(1e-15));

    window box = catalog_window(window_kind::box, 1);
    CHECK(box(1.0) == 1.0);  // support is the closed interval
    CHECK(box(-1.0) == 1.0);
    CHECK(box(1.0 + 1e-9) == 0.0);
    CHECK(box(0.3) == 1.0);
}

TEST_CASE("even symmetry over random points") {
    std::vector<window> ws;
    ws.push_back(catalog_window(window_kind::bspline, 3));
    ws.push_back(catalog_window(window_kind::cospower, 2));
    ws.push_back(catalog_window(window_kind::trunc_exp, 2));
    ws.push_back(catalog_window(window_kind::trunc_rational_abs, 2));
    ws.push_back(catalog_window(window_kind::trunc_rational_sq, 1.5));
    ws.push_back(catalog_window(window_kind::trunc_gauss, 2));
    ws.push_back(catalog_window(window_kind::box, 0.75));
    ws.push_back(make_window({window_kind::knot_interpolant, 5.0,
                              {{-2.5, 0.0}, {-7.0 / 3.0, 3.0}, {-4.0 / 3.0, 5.0}, {-1.0, 10.0}, {0.0, 12.0}}}));

    std::mt19937 rng(4242);
    for (const auto& w : ws) {
        double N = 2.0 * w.support_radius();
        std::uniform_real_distribution<double> xs(-N, N);
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            double x = xs(rng);
            worst = std::max(worst, std::abs(w(x) - w(-x)));
        }
        CAPTURE(w.name());
        CHECK(worst <= 1e-12 * w.peak());
    }
}

TEST_CASE("compact support is exact") {
    std::vector<window> ws;
    ws.push_back(catalog_window(window_kind::bspline, 4));
    ws.push_back(catalog_window(window_kind::cospower, 3));
    ws.push_back(catalog_window(window_kind::trunc_exp, 1.5));
    ws.push_back(catalog_window(window_kind::trunc_gauss, 2));
    ws.push_back(catalog_window(window_kind::box, 1));

    for (const auto& w : ws) {
        double R = w.support_radius();
        CAPTURE(w.name());
        for (double x : {R + 1e-9, R + 0.1, 2 * R, -R - 1e-9, -3 * R}) CHECK(w(x) == 0.0);
        if (w.spec().kind != window_kind::box) {
            CHECK(w(R) == 0.0);
            CHECK(w(-R) == 0.0);
        }
    }
}

TEST_CASE("knot interpolant") {
    window g = make_window({window_kind::knot_interpolant, 5.0,
                            {{-2.5, 0.0}, {-7.0 / 3.0, 3.0}, {-4.0 / 3.0, 5.0}, {-1.0, 10.0}, {0.0, 12.0}}});
    CHECK(g(0.0) == 12.0);
    CHECK(g(-1.0) == 10.0);
    CHECK(g(1.0) == 10.0);
    CHECK(g(-4.0 / 3.0) == 5.0);
    CHECK(g(-7.0 / 3.0) == 3.0);
    CHECK(g(-2.5) == 0.0);
    CHECK(g(2.5) == 0.0);
    CHECK(g(3.0) == 0.0);
    CHECK(g(-0.5) == Catch::Approx(11.0).margin(1e-12));  // between (-1,10) and (0,12)
    CHECK(g.peak() == 12.0);

    SECTION("no knot at zero means a plateau around the origin") {
        window p = make_window({window_kind::knot_interpolant, 2.0, {{-1.0, 0.0}, {-0.5, 1.0}}});
        CHECK(p(0.0) == 1.0);
        CHECK(p(0.3) == 1.0);
        CHECK(p(-0.3) == 1.0);
        CHECK(p(0.75) == Catch::Approx(0.5).margin(1e-12));
    }
}

TEST_CASE("window validation errors") {
    CHECK_THROWS_AS(make_window({window_kind::bspline, 2.5, {}}), validation_error);
    CHECK_THROWS_AS(make_window({window_kind::bspline, 0, {}}), validation_error);
    CHECK_THROWS_AS(make_window({window_kind::bspline, -3, {}}), validation_error);
    CHECK_THROWS_AS(make_window({window_kind::cospower, 1, {}}), validation_error);
    CHECK_THROWS_AS(make_window({window_kind::box, 0, {}}), validation_error);

    using knots_t = std::vector<std::pair<double, double>>;
    auto knotspec = [](double N, knots_t k) { return window_spec{window_kind::knot_interpolant, N, std::move(k)}; };
    CHECK_THROWS_AS(make_window(knotspec(2, {{-1.0, 0.0}})), validation_error);                     // too few
    CHECK_THROWS_AS(make_window(knotspec(2, {{-0.9, 0.0}, {0.0, 1.0}})), validation_error);         // not at -N/2
    CHECK_THROWS_AS(make_window(knotspec(2, {{-1.0, 0.5}, {0.0, 1.0}})), validation_error);         // nonzero edge
    CHECK_THROWS_AS(make_window(knotspec(2, {{-1.0, 0.0}, {-1.0, 1.0}})), validation_error);        // x ties
    CHECK_THROWS_AS(make_window(knotspec(2, {{-1.0, 0.0}, {-0.5, 2.0}, {0.0, 1.0}})), validation_error);  // values dip
    CHECK_THROWS_AS(make_window(knotspec(2, {{-1.0, 0.0}, {0.5, 1.0}})), validation_error);         // x > 0
}

TEST_CASE("sampling") {
    window b2 = catalog_window(window_kind::bspline, 2);
    grid_function f = gabor::sample(b2, -1.0, 1.0, 0.5);
    REQUIRE(f.size() == 5);
    CHECK(f.values() == std::vector<double>{0.0, 0.5, 1.0, 0.5, 0.0});

    grid_function g = gabor::sample(catalog_window(window_kind::box, 1), 0.0, 1.0, 0.5);
    CHECK(g.values() == std::vector<double>{1.0, 1.0, 1.0});

    SECTION("node identity") {
        for (std::size_t k = 0; k < f.size(); ++k) {
            double x = f.x_min() + static_cast<double>(k) * f.step();
            CHECK(f(x) == f.values()[k]);
        }
    }
    SECTION("argument validation") {
        CHECK_THROWS_AS(gabor::sample(b2, 1.0, -1.0, 0.5), validation_error);
        CHECK_THROWS_AS(gabor::sample(b2, -1.0, 1.0, 0.0), validation_error);
        CHECK_THROWS_AS(gabor::sample(b2, -1.0, 1.0, 3.0), validation_error);
    }
}

TEST_CASE("grid_function behaviour") {
    grid_function f(0.0, 0.5, {0.0, 1.0, 0.5});
    CHECK(f(0.25) == Catch::Approx(0.5).margin(1e-15));
    CHECK(f(0.75) == Catch::Approx(0.75).margin(1e-15));
    CHECK(f(-0.1) == 0.0);
    CHECK(f(1.0) == 0.5);
    CHECK(f(1.1) == 0.0);
    CHECK(f.max_abs() == 1.0);
    CHECK(f.x_max() == 1.0);

    CHECK_THROWS_AS(grid_function(0.0, 0.0, {1.0, 2.0}), validation_error);
    CHECK_THROWS_AS(grid_function(0.0, -1.0, {1.0, 2.0}), validation_error);
    CHECK_THROWS_AS(grid_function(0.0, 1.0, {1.0}), validation_error);
    double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(grid_function(inf, 1.0, {1.0, 2.0}), validation_error);
    CHECK_THROWS_AS(grid_function(0.0, 1.0, {1.0, inf}), validation_error);
}

TEST_CASE("window spec parsing") {
    auto p = gabor::parse_window_spec("bspline:N=2");
    CHECK(p.spec.kind == window_kind::bspline);
    CHECK(p.spec.shape == 2.0);
    CHECK(!p.knots_path);

    CHECK(gabor::parse_window_spec("gauss:N=1.5").spec.kind == window_kind::trunc_gauss);
    CHECK(gabor::parse_window_spec("exp:N=2").spec.kind == window_kind::trunc_exp);
    CHECK(gabor::parse_window_spec("cospower:N=3").spec.kind == window_kind::cospower);
    CHECK(gabor::parse_window_spec("rational_sq:N=2").spec.kind == window_kind::trunc_rational_sq);
    CHECK(gabor::parse_window_spec("rational_abs:N=2").spec.kind == window_kind::trunc_rational_abs);
    CHECK(gabor::parse_window_spec("box:c=0.5").spec.shape == 0.5);

    auto k = gabor::parse_window_spec("knots:runs/example.csv");
    REQUIRE(k.knots_path);
    CHECK(*k.knots_path == "runs/example.csv");

    CHECK_THROWS_AS(gabor::parse_window_spec("hamming:N=2"), validation_error);
    CHECK_THROWS_AS(gabor::parse_window_spec("bspline"), validation_error);
    CHECK_THROWS_AS(gabor::parse_window_spec("bspline:c=2"), validation_error);
    CHECK_THROWS_AS(gabor::parse_window_spec("bspline:N=two"), validation_error);
    CHECK_THROWS_AS(gabor::parse_window_spec("bspline:N=2junk"), validation_error);
    CHECK_THROWS_AS(gabor::parse_window_spec("box:N=2"), validation_error);
}

TEST_CASE("window names") {
    CHECK(catalog_window(window_kind::bspline, 2).name() == "bspline:N=2");
    CHECK(catalog_window(window_kind::box, 0.5).name() == "box:c=0.5");
    CHECK(catalog_window(window_kind::trunc_gauss, 2).name() == "gauss:N=2");
}

#include "smoothkit/error.hpp"
#include "smoothkit/kernels.hpp"
#include "smoothkit/periodic.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace smoothkit;

namespace {

TrigPolynomial sample_poly()
{
    return TrigPolynomial({0.5, -1.0, 0.25, 0.125}, {2.0, 0.0, -0.75});
}

double direct_sum(double x)
{
    return 0.5 - std::cos(x) + 0.25 * std::cos(2 * x) + 0.125 * std::cos(3 * x) + 2.0 * std::sin(x)
           - 0.75 * std::sin(3 * x);
}

double direct_second_derivative(double x)
{
    return std::cos(x) - 0.25 * 4 * std::cos(2 * x) - 0.125 * 9 * std::cos(3 * x) - 2.0 * std::sin(x)
           + 0.75 * 9 * std::sin(3 * x);
}

} // namespace

TEST_CASE("trig evaluation matches a direct sum")
{
    const TrigPolynomial p = sample_poly();
    CHECK(p.degree() == 3);
    CHECK(p.true_degree() == 3);
    for (int i = 0; i < 50; ++i) {
        const double x = -7.0 + 0.3 * i;
        CHECK(p(x) == doctest::Approx(direct_sum(x)).epsilon(1e-14));
        CHECK(eval_trig(p, x) == doctest::Approx(direct_sum(x)).epsilon(1e-14));
    }
}

TEST_CASE("trailing zeros leave true_degree below degree")
{
    const TrigPolynomial p({1.0, 2.0, 0.0, 0.0}, {0.0, 0.0, 0.0});
    CHECK(p.degree() == 3);
    CHECK(p.true_degree() == 1);
    CHECK(TrigPolynomial::constant(3.0).true_degree() == 0);
}

TEST_CASE("derivative rotates and scales coefficients")
{
    const TrigPolynomial d2 = derivative(sample_poly(), 2);
    for (int i = 0; i < 20; ++i) {
        const double x = 0.37 * i;
        CHECK(d2(x) == doctest::Approx(direct_second_derivative(x)).epsilon(1e-13));
    }
    const TrigPolynomial d4 = derivative(sample_poly(), 4);
    const TrigPolynomial d22 = derivative(derivative(sample_poly(), 2), 2);
    for (int i = 0; i < 20; ++i)
        CHECK(d4(0.41 * i) == doctest::Approx(d22(0.41 * i)).epsilon(1e-13));
    const TrigPolynomial d1 = derivative(TrigPolynomial::sine(3), 1);
    CHECK(d1(0.2) == doctest::Approx(3.0 * std::cos(0.6)));
}

TEST_CASE("arithmetic on polynomials")
{
    const TrigPolynomial a = TrigPolynomial::cosine(2);
    const TrigPolynomial b = TrigPolynomial::sine(4, 0.5);
    const TrigPolynomial c = 2.0 * a - b;
    CHECK(c.degree() == 4);
    CHECK(c(1.1) == doctest::Approx(2.0 * std::cos(2.2) - 0.5 * std::sin(4.4)));
    CHECK(a.padded(6).degree() == 6);
    CHECK(a.padded(6)(0.3) == doctest::Approx(a(0.3)));
}

TEST_CASE("wrap_angle and sinc")
{
    CHECK(wrap_angle(-0.5) == doctest::Approx(two_pi - 0.5));
    CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - two_pi));
    const double w = wrap_angle(-1e-300);
    CHECK(w >= 0.0);
    CHECK(w < two_pi);
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(1e-9) == doctest::Approx(1.0));
    CHECK(sinc(pi / 2) == doctest::Approx(2.0 / pi));
}

TEST_CASE("sup norm of pure harmonics")
{
    for (int m = 1; m <= 40; m += 3) {
        CHECK(sup_norm(TrigPolynomial::cosine(m)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sup_norm(TrigPolynomial::sine(m, -2.5)) == doctest::Approx(2.5).epsilon(1e-12));
    }
    // |a cos x + b sin x| peaks at hypot(a, b) between grid points.
    const TrigPolynomial p({0.0, 0.3}, {0.7});
    CHECK(sup_norm(p) == doctest::Approx(std::hypot(0.3, 0.7)).epsilon(1e-12));
}

TEST_CASE("locate_max is signed, locate_sup is not")
{
    const FunctionHandle f = FunctionHandle::from_trig(TrigPolynomial({0.5, -2.0}, {0.0}));
    const SupPoint mx = locate_max(f);
    const SupPoint sp = locate_sup(f);
    CHECK(mx.value == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(wrap_angle(mx.x) == doctest::Approx(pi).epsilon(1e-6));
    CHECK(sp.value == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("non-finite samples raise EvaluationError")
{
    const FunctionHandle bad([](double x) { return x > 3.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0; },
                             "bad");
    CHECK_THROWS_AS(sup_norm(bad), EvaluationError);
}

TEST_CASE("breakpoint probes straddle each breakpoint")
{
    const double bps[] = {0.0, 1.0};
    const auto probes = breakpoint_probes(bps);
    REQUIRE(probes.size() == 4);
    for (double p : probes) {
        CHECK(p >= 0.0);
        CHECK(p < two_pi);
        const double d = std::min({std::abs(p - 1.0), std::abs(p), std::abs(p - two_pi)});
        CHECK(d < 1e-11);
    }
}

TEST_CASE("sup of a step function sees the one-sided limits")
{
    // 1 on [0, 1), 2 on [1, 2π): the top value is reached only from the right of 1.
    const FunctionHandle step = FunctionHandle([](double x) { return wrap_angle(x) < 1.0 ? 1.0 : 2.0; }, "step")
                                    .with_breakpoints({0.0, 1.0}, 0);
    CHECK(sup_norm(step) == 2.0);
}

TEST_CASE("panel quadrature against closed forms")
{
    const double cuts[] = {0.0, 0.5, 2.0};
    const double v = integrate_panels(cuts, [](double t) { return std::exp(t); }, QuadratureSpec{}, false);
    CHECK(v == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-13));
    const double poly = integrate_panels(
        cuts, [](double t) { return std::pow(t, 31); }, QuadratureSpec{}, true);
    CHECK(poly == doctest::Approx(std::pow(2.0, 32) / 32.0).epsilon(1e-13));
    const double full[] = {0.0, two_pi};
    CHECK(integrate_panels(full, [](double t) { return std::cos(t) * std::cos(t); }, QuadratureSpec{}, false)
          == doctest::Approx(pi).epsilon(1e-13));
}

TEST_CASE("breakpoint crossings")
{
    const double bps[] = {1.0};
    std::vector<double> out;
    // x + 2t = 1 + 2πq for t in (0, 4).
    append_breakpoint_crossings(bps, 0.0, +1.0, 2.0, 0.0, 4.0, out);
    REQUIRE(out.size() == 2);
    std::sort(out.begin(), out.end());
    CHECK(out[0] == doctest::Approx(0.5));
    CHECK(out[1] == doctest::Approx(0.5 + pi));
}

TEST_CASE("convolution with the triangle kernel multiplies by sinc squared")
{
    for (int m : {1, 3, 7}) {
        for (double h : {0.1, 0.5, 1.3}) {
            const PiecewiseLinearKernel phi = triangle_kernel(h);
            const FunctionHandle f = FunctionHandle::from_trig(TrigPolynomial::cosine(m));
            const double s = sinc(0.5 * m * h);
            for (double x : {0.0, 0.7, 2.9}) {
                CHECK(convolve_periodic(f, phi, x) == doctest::Approx(s * s * std::cos(m * x)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("grid sampling and resolution")
{
    const GridFunction g = GridFunction::sample(FunctionHandle::from_trig(TrigPolynomial::cosine(2)), 8);
    CHECK(g.size() == 8);
    CHECK(g.node(2) == doctest::Approx(pi / 2));
    CHECK(g.values[2] == doctest::Approx(-1.0));
    CHECK(g.max_abs() == doctest::Approx(1.0));
    const Resolution r{};
    CHECK(r.grid_for(100) == 3200);
    CHECK(r.grid_for(1) == 1024);
    Resolution bad;
    bad.grid_size = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

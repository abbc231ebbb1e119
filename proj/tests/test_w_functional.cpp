#include "smoothkit/differences.hpp"
#include "smoothkit/error.hpp"
#include "smoothkit/w_functional.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace smoothkit;

namespace {

double central_binomial(int k)
{
    double c = 1.0;
    for (int i = 1; i <= k; ++i)
        c = c * (k + i) / i;
    return c;
}

// C(2k,k)^{-1} ∫_{-h}^{h} (2 sin(mt/2))^{2k} φ_h(t) dt by composite Simpson.
double multiplier_oracle(int m, int k, double h)
{
    const int panels = 4000;
    const double step = h / panels;
    auto g = [&](double t) { return std::pow(2.0 * std::sin(0.5 * m * t), 2 * k) * (1.0 - t / h) / h; };
    double s = g(0.0) + g(h);
    for (int i = 1; i < panels; ++i)
        s += g(i * step) * (i % 2 == 1 ? 4.0 : 2.0);
    return 2.0 * s * step / 3.0 / central_binomial(k);
}

TrigPolynomial mixed_poly()
{
    return TrigPolynomial({0.2, 0.5, -0.3, 0.0, 0.25}, {0.0, -0.4, 0.1, 0.6});
}

} // namespace

TEST_CASE("admissible steps")
{
    CHECK(WParams::admissible(1, 3.0));
    CHECK_FALSE(WParams::admissible(2, pi / 2));
    CHECK_FALSE(WParams::admissible(1, 0.0));
    CHECK_THROWS_AS(WParams(2, 1.6), DomainError);
    CHECK_THROWS_AS(WParams(0, 0.1), DomainError);
    CHECK_THROWS_AS(w_star(FunctionHandle::constant(1.0), 2, 2.0), DomainError);
}

TEST_CASE("W vanishes on constants")
{
    const FunctionHandle one = FunctionHandle::constant(1.0);
    for (int k = 1; k <= 6; ++k) {
        const WParams p(k, 0.4);
        CHECK(std::abs(w_pointwise(one, p, 0.3)) < 1e-13);
        CHECK(std::abs(w_kernel_path(one, p, 0.3)) < 1e-13);
        CHECK(w_multiplier(0, p) == 0.0);
    }
}

TEST_CASE("W on the first harmonic at h = pi/2")
{
    const FunctionHandle c1 = FunctionHandle::from_trig(TrigPolynomial::cosine(1));
    const WParams p(1, pi / 2);
    const double s = std::sin(pi / 4) / (pi / 4);
    const double expect = 1.0 - s * s;
    CHECK(expect == doctest::Approx(0.189430530861).epsilon(1e-11));
    CHECK(w_pointwise(c1, p, 0.0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(w_kernel_path(c1, p, 0.0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(w_multiplier(1, p) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(multiplier_oracle(1, 1, pi / 2) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("multiplier against quadrature")
{
    for (int k = 1; k <= 8; ++k) {
        const double h = 0.9 * pi / k;
        for (int m = 1; m <= 32; m += 3) {
            const WParams p(k, h);
            const double oracle = multiplier_oracle(m, k, h);
            CHECK(w_multiplier(m, p) == doctest::Approx(oracle).epsilon(1e-8).scale(1e-12));
        }
    }
}

TEST_CASE("multiplier limits and range")
{
    for (int k = 1; k <= 8; ++k) {
        const WParams p(k, 0.3);
        CHECK(w_multiplier(10000, p) == doctest::Approx(1.0).epsilon(1e-3));
        const double top = std::pow(4.0, k) / central_binomial(k);
        for (int m = 1; m <= 60; ++m) {
            const double mu = w_multiplier(m, p);
            CHECK(mu >= 0.0);
            CHECK(mu <= top * (1 + 1e-12));
        }
    }
    // Tiny steps keep relative accuracy through the quadrature fallback.
    const WParams tiny(3, 1e-4);
    const double mu = w_multiplier(1, tiny);
    CHECK(mu > 0.0);
    CHECK(mu == doctest::Approx(multiplier_oracle(1, 3, 1e-4)).epsilon(1e-6));
    CHECK_THROWS_AS(w_multiplier(-1, tiny), DomainError);
}

TEST_CASE("three evaluation paths agree")
{
    const TrigPolynomial tau = mixed_poly();
    const FunctionHandle f = FunctionHandle::from_trig(tau);
    for (int k = 1; k <= 8; ++k) {
        const WParams p(k, 0.7 * pi / k);
        const TrigPolynomial wt = apply_w_multiplier(tau, p);
        for (double x : {0.0, 1.3, 4.4}) {
            const double a = w_pointwise(f, p, x);
            const double b = w_kernel_path(f, p, x);
            CHECK(a == doctest::Approx(wt(x)).epsilon(1e-10).scale(1.0));
            CHECK(b == doctest::Approx(wt(x)).epsilon(1e-10).scale(1.0));
        }
        CHECK(w_norm(f, p) == doctest::Approx(w_norm(tau, p)).epsilon(1e-9));
        CHECK(w_norm(f, p, {}, WPath::kernel) == doctest::Approx(w_norm(tau, p)).epsilon(1e-9));
    }
}

TEST_CASE("paths agree on a step function")
{
    const FunctionHandle step = FunctionHandle([](double x) { return wrap_angle(x) < pi ? 1.0 : -1.0; }, "step")
                                    .with_breakpoints({0.0, pi}, 0);
    for (int k = 1; k <= 4; ++k) {
        const WParams p(k, 0.6 / k);
        for (double x : {0.05, 0.3, 3.0})
            CHECK(w_pointwise(step, p, x) == doctest::Approx(w_kernel_path(step, p, x)).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("maximal functional dominates W and is monotone")
{
    const TrigPolynomial tau = mixed_poly();
    const FunctionHandle f = FunctionHandle::from_trig(tau);
    for (int k = 1; k <= 3; ++k) {
        std::vector<double> deltas;
        for (int i = 1; i <= 6; ++i)
            deltas.push_back((pi / k) * i / 7.0);
        const auto star = w_star_profile(tau, k, deltas);
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            CHECK(star[i] >= w_norm(tau, WParams(k, deltas[i])) * (1 - 1e-12));
            if (i > 0)
                CHECK(star[i] >= star[i - 1]);
        }
        const double x = 0.9;
        const auto sharp = w_sharp_profile(f, k, x, deltas);
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            CHECK(sharp[i] >= std::abs(w_pointwise(f, WParams(k, deltas[i]), x)) * (1 - 1e-12));
            CHECK(sharp[i] <= star[i] * (1 + 1e-9));
        }
        CHECK(w_sharp(f, k, x, deltas[2]) == doctest::Approx(sharp[2]));
        CHECK(w_star(tau, k, deltas[3]) == doctest::Approx(star[3]));
    }
}

TEST_CASE("maximal functional stays below three times the norm")
{
    const FunctionHandle step = FunctionHandle([](double x) { return std::cos(2 * x) >= 0.0 ? 1.0 : -1.0; }, "sq")
                                    .with_breakpoints({pi / 4, 3 * pi / 4, 5 * pi / 4, 7 * pi / 4}, 0)
                                    .with_degree_hint(2);
    const FunctionHandle smooth([](double x) { return std::exp(std::cos(x)); }, "exp_cos");
    for (int k = 1; k <= 4; ++k) {
        const double delta = (pi / k) * 0.95;
        CHECK(w_star(step, k, delta) <= 3.0);
        CHECK(w_star(smooth, k, delta) <= 3.0 * std::exp(1.0));
    }
}

TEST_CASE("step grid is fixed and admissible")
{
    for (int k : {1, 5}) {
        const auto& g = w_step_grid(k);
        CHECK(g.size() == 128);
        CHECK(g.back() < pi / k);
        for (std::size_t i = 1; i < g.size(); ++i)
            CHECK(g[i] > g[i - 1]);
        CHECK(&g == &w_step_grid(k));
    }
}

#include "smoothkit/differences.hpp"
#include "smoothkit/error.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace smoothkit;

namespace {

// Pascal's triangle row n in unsigned 64-bit; exact up to n = 67.
std::vector<unsigned long long> pascal_row(int n)
{
    std::vector<unsigned long long> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<unsigned long long> next(i + 1, 1);
        for (int j = 1; j < i; ++j)
            next[j] = row[j - 1] + row[j];
        row = next;
    }
    return row;
}

FunctionHandle cos_n(int n)
{
    return FunctionHandle::from_trig(TrigPolynomial::cosine(n));
}

} // namespace

TEST_CASE("binomials agree with Pascal's triangle")
{
    for (int n : {0, 1, 5, 20, 40, 60}) {
        const auto row = pascal_row(n);
        for (int m = 0; m <= n; ++m)
            CHECK(binomial(n, m) == BigInt(row[m]));
    }
    CHECK(binomial(5, -1) == 0);
    CHECK(binomial(5, 6) == 0);
    CHECK(binomial(128, 64) == BigInt("23951146041928082866135587776380551750"));
    CHECK(binomial_double(128, 64) == doctest::Approx(2.3951146041928085e37));
}

TEST_CASE("central ratios")
{
    const auto& a = central_ratios(3);
    REQUIRE(a.size() == 4);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == doctest::Approx(15.0 / 20.0));
    CHECK(a[2] == doctest::Approx(6.0 / 20.0));
    CHECK(a[3] == doctest::Approx(1.0 / 20.0));
    CHECK_THROWS_AS(central_ratios(0), DomainError);
}

TEST_CASE("forward difference on a cosine")
{
    // Σ (-1)^j C(r,j) cos(n(x + jh)) = (-2 sin(nh/2))^r cos(n(x + rh/2) + rπ/2).
    for (int r = 1; r <= 6; ++r) {
        for (int n : {1, 3}) {
            const double h = 0.4;
            for (double x : {0.0, 1.1, 4.0}) {
                const double expect = std::pow(-2.0 * std::sin(0.5 * n * h), r)
                                      * std::cos(n * (x + 0.5 * r * h) + 0.5 * r * pi);
                CHECK(forward_difference(cos_n(n), r, h, x) == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("central difference on a cosine")
{
    for (int k = 1; k <= 5; ++k) {
        for (int n : {1, 2, 5}) {
            const double t = 0.3;
            const double factor = std::pow(2.0 * std::sin(0.5 * n * t), 2 * k);
            for (double x : {0.0, 0.8, 2.5})
                CHECK(central_difference(cos_n(n), k, t, x)
                      == doctest::Approx(factor * std::cos(n * x)).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("modulus of smoothness of a cosine")
{
    // ω_r(c_n, δ) = (2 sin(nδ/2))^r for nδ <= π.
    for (int r : {1, 2, 4}) {
        for (int n : {1, 4}) {
            const double delta = 0.5 * pi / n;
            CHECK(omega(cos_n(n), r, delta) == doctest::Approx(std::pow(2.0 * std::sin(0.5 * n * delta), r)).epsilon(1e-8));
        }
    }
}

TEST_CASE("modulus of a step function reaches 2^r")
{
    const FunctionHandle step = FunctionHandle([](double x) { return std::cos(3 * x) >= 0.0 ? 1.0 : -1.0; }, "sq")
                                    .with_breakpoints({pi / 6, pi / 2, 5 * pi / 6, 7 * pi / 6, 3 * pi / 2, 11 * pi / 6}, 0);
    for (int r = 1; r <= 4; ++r)
        CHECK(omega(step, r, pi / 3) == doctest::Approx(std::pow(2.0, r)).epsilon(1e-9));
}

TEST_CASE("modulus evaluator is monotone in delta")
{
    const FunctionHandle f = FunctionHandle::from_trig(TrigPolynomial({0.0, 1.0, 0.0, 0.5}, {0.0, 0.3, -0.2}));
    ModulusEvaluator w(f, 2);
    double last = 0.0;
    for (int i = 1; i <= 12; ++i) {
        const double v = w(0.25 * i);
        CHECK(v >= last);
        last = v;
    }
    CHECK(w.order() == 2);
}

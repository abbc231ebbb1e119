#ifndef SMOOTHKIT_DIFFERENCES_HPP
#define SMOOTHKIT_DIFFERENCES_HPP

#include "smoothkit/periodic.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace smoothkit {

using BigInt = boost::multiprecision::cpp_int;

/// Largest half-order k supported by the exact binomial tables (order 2k <= 128).
inline constexpr int max_half_order = 64;

/// Exact binomial coefficient; zero when m lies outside [0, n].
BigInt binomial(int n, int m);

/// binomial(n, m) correctly rounded to double.
double binomial_double(int n, int m);

/// a_j = C(2k, k+j) / C(2k, k) for j = 0..k, rounded from the exact ratio.
const std::vector<double>& central_ratios(int k);

/// Δ_h^r f(x) = Σ_{j=0..r} (-1)^j C(r,j) f(x + jh), arguments reduced mod 2π.
double forward_difference(const FunctionHandle& f, int r, double h, double x);

/// Even central difference Σ_{j=-k..k} (-1)^j C(2k, k+j) f(x + jt).
/// On cos(n·) it multiplies by (2 sin(nt/2))^{2k}.
double central_difference(const FunctionHandle& f, int k, double t, double x);

/// ω_r(f, δ) = sup_{|h| <= δ} sup_x |Δ_h^r f(x)|.
///
/// Sweeps 256 step sizes on [0, δ] against the x-grid of the resolution and
/// refines the best cells on both axes. Maxima found by earlier calls are
/// kept and reused as lower bounds, so values returned by one evaluator are
/// non-decreasing in δ.
class ModulusEvaluator {
public:
    ModulusEvaluator(FunctionHandle f, int r, Resolution res = {});

    double operator()(double delta);

    int order() const noexcept { return r_; }

private:
    struct Cell {
        double value;
        double h;
        double x;
    };

    double abs_difference(double h, double x) const;

    FunctionHandle f_;
    int r_;
    Resolution res_;
    std::vector<Cell> found_;
};

double omega(const FunctionHandle& f, int r, double delta, const Resolution& res = {});

} // namespace smoothkit

#endif // SMOOTHKIT_DIFFERENCES_HPP

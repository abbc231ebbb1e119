#ifndef SMOOTHKIT_W_FUNCTIONAL_HPP
#define SMOOTHKIT_W_FUNCTIONAL_HPP

#include "smoothkit/kernels.hpp"
#include "smoothkit/periodic.hpp"

#include <span>
#include <vector>

namespace smoothkit {

/// Order k and step h of W_{2k}; admissible when 0 < h < π/k.
class WParams {
public:
    WParams(int k, double h);

    int k() const noexcept { return k_; }
    double h() const noexcept { return h_; }

    static bool admissible(int k, double h) noexcept;

private:
    int k_;
    double h_;
};

/// How W_{2k}(f, x, h) is evaluated for black-box functions.
enum class WPath {
    /// C(2k,k)^{-1} ∫ Δ̂_t^{2k} f(x) φ_h(t) dt by panel quadrature on [0, h]
    pointwise,
    /// f(x) - (f * Λ_{k,h})(x)
    kernel,
};

/// W_{2k}(f, x, h) = C(2k,k)^{-1} ∫_T Δ̂_t^{2k} f(x) φ_h(t) dt.
/// The integrand is even in t; panels on [0, h] are split wherever some
/// x ± jt crosses a declared breakpoint of f.
double w_pointwise(const FunctionHandle& f, const WParams& p, double x, const QuadratureSpec& quad = {});

/// f(x) - (f * Λ_{k,h})(x). Identical to w_pointwise.
double w_kernel_path(const FunctionHandle& f, const WParams& p, double x, const QuadratureSpec& quad = {});
/// Same, reusing a kernel from lambda_kernel(p.k(), p.h()).
double w_kernel_path(const FunctionHandle& f, const PiecewiseLinearKernel& lambda, double x,
                     const QuadratureSpec& quad = {});

/// Eigenvalue of W_{2k}(·, ·, h) on cos(m·) and sin(m·):
///   μ_{k,h}(m) = 1 + 2 Σ_{j=1..k} (-1)^j a_j sinc²(jmh/2),  a_j = C(2k,k+j)/C(2k,k).
/// Lies in [0, 4^k / C(2k,k)].
double w_multiplier(int m, const WParams& p);

/// W_{2k}(τ, ·, h) as a trigonometric polynomial.
TrigPolynomial apply_w_multiplier(const TrigPolynomial& tau, const WParams& p);

/// W_{2k}(f, h) = sup_x |W_{2k}(f, x, h)|.
double w_norm(const FunctionHandle& f, const WParams& p, const Resolution& res = {},
              WPath path = WPath::pointwise);
/// Multiplier path for exact trigonometric polynomials.
double w_norm(const TrigPolynomial& tau, const WParams& p, const Resolution& res = {});

/// W_{2k}^♯(f, x, δ) = sup_{0<h<=δ} |W_{2k}(f, x, h)|; requires 0 < δ < π/k.
double w_sharp(const FunctionHandle& f, int k, double x, double delta, const Resolution& res = {},
               WPath path = WPath::pointwise);

/// W_{2k}^*(f, δ) = sup_x W_{2k}^♯(f, x, δ).
double w_star(const FunctionHandle& f, int k, double delta, const Resolution& res = {},
              WPath path = WPath::pointwise);
double w_star(const TrigPolynomial& tau, int k, double delta, const Resolution& res = {});

/// W_{2k}^♯(f, x, δ) at every δ of an increasing list, from one shared sweep.
std::vector<double> w_sharp_profile(const FunctionHandle& f, int k, double x, std::span<const double> deltas,
                                    const Resolution& res = {}, WPath path = WPath::pointwise);
/// W_{2k}^* at every δ of an increasing list, from one shared sweep.
/// Non-decreasing by construction.
std::vector<double> w_star_profile(const FunctionHandle& f, int k, std::span<const double> deltas,
                                   const Resolution& res = {}, WPath path = WPath::pointwise);
std::vector<double> w_star_profile(const TrigPolynomial& tau, int k, std::span<const double> deltas,
                                   const Resolution& res = {});

/// Step sizes swept for the suprema over h: 128 log-spaced points spanning
/// three decades below π/k. Fixed per k, so grids for different δ nest.
const std::vector<double>& w_step_grid(int k);

} // namespace smoothkit

#endif // SMOOTHKIT_W_FUNCTIONAL_HPP

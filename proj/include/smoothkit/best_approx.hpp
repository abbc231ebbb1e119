#ifndef SMOOTHKIT_BEST_APPROX_HPP
#define SMOOTHKIT_BEST_APPROX_HPP

#include "smoothkit/error.hpp"
#include "smoothkit/kernels.hpp"
#include "smoothkit/periodic.hpp"

#include <utility>
#include <vector>

namespace smoothkit {

// ------- best uniform trigonometric approximation ------- //

struct MinimaxOptions {
    double tol = 1e-8;
    int max_iterations = 200;
    Resolution resolution{};
};

struct MinimaxResult {
    TrigPolynomial approximant;
    /// Refined sup-norm of f - approximant.
    double error = 0.0;
    /// Levelled error on the final reference; a lower bound for E_{n-1}(f).
    double lower_bound = 0.0;
    std::vector<double> reference_points;
    int iterations = 0;
    /// (lower, upper) bracket after each exchange; never widens.
    std::vector<std::pair<double, double>> brackets;
};

/// Best uniform approximation of f from T_{degree_bound}.
///
/// Discrete exchange on a grid of at least 64(degree_bound + 1) points,
/// starting from 2(degree_bound + 1) equispaced reference points and
/// swapping in the grid maximizer of the residual one point at a time.
/// For functions without declared breakpoints the converged reference is
/// then moved onto the local extrema of the continuous residual.
/// Throws ConvergenceError with the last bracket when max_iterations runs out.
MinimaxResult trig_minimax(const FunctionHandle& f, int degree_bound, const MinimaxOptions& options = {});

// ------- periodic splines ------- //

/// s(x) = Σ_i c_i M_{d+1}(x/Δ - i - offset) on N uniform knots, Δ = 2π/N.
/// offset is 0 for odd degree and 1/2 for even degree, so knots always sit
/// at the mesh points jΔ.
class PeriodicSpline {
public:
    PeriodicSpline(int degree, std::vector<double> coefficients);

    int degree() const noexcept { return degree_; }
    int knot_count() const noexcept { return static_cast<int>(coeffs_.size()); }
    double spacing() const noexcept { return two_pi / knot_count(); }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    /// Collocation nodes sit at (j + offset)Δ.
    double offset() const noexcept { return degree_ % 2 == 1 ? 0.0 : 0.5; }

    double operator()(double x) const noexcept;

    FunctionHandle as_function(std::string label = "spline") const;

private:
    int degree_;
    std::vector<double> coeffs_;
    const CardinalBSpline* basis_;
};

struct FavardOperatorDescriptor {
    enum class Kind { spline_interpolation };

    int n = 0;
    int r = 0;
    Kind kind = Kind::spline_interpolation;
    double favard_factor = 0.0; ///< F_r = 𝒦_r
};

FavardOperatorDescriptor favard_descriptor(int n, int r);

/// A_{n,r} f: periodic spline of degree r-1 with 2n uniform knots
/// (mesh π/n), interpolating at the knots for odd degree and at the
/// midpoints for even degree. The circulant collocation system is
/// diagonalized by the discrete Fourier transform.
PeriodicSpline spline_interpolant(const FunctionHandle& f, int n, int r);

struct SplineFavardResult {
    PeriodicSpline spline;
    double residual;
    FavardOperatorDescriptor op;
};

/// A_{n,r} f together with the sup-norm of f - A_{n,r} f.
SplineFavardResult spline_favard(const FunctionHandle& f, int n, int r, const Resolution& res = {});

/// E^F_{n-1}(f) realized as ‖f - A_{n,r}(τ*)‖ with τ* the best approximation from T_{n-1}.
struct FavardApproximation {
    MinimaxResult best;
    PeriodicSpline spline;
    double error;
};

FavardApproximation favard_best_error(const FunctionHandle& f, int n, int r, const MinimaxOptions& options = {});

// ------- Bernstein-type inequalities ------- //

/// Raised when a polynomial passed as normalized does not peak at +1.
class NormalizationError : public Error {
public:
    using Error::Error;
};

/// τ / ‖τ‖, negated if needed so that the supremum is attained with value +1.
TrigPolynomial normalize_peak(const TrigPolynomial& tau, const Resolution& res = {});

struct SbsCheck {
    double lhs; ///< (τ * χ_t^r)(x_0)
    double rhs; ///< (c_n * χ_t^r)(0)
    double x0;
};

/// Both sides of (τ * χ_t^r)(x_0) >= (c_n * χ_t^r)(0) for τ ∈ T_n with
/// ‖τ‖ = τ(x_0) = 1 and 0 < t < 2π/n.
SbsCheck sbs_pointwise_check(const TrigPolynomial& tau, int n, int r, double t, const Resolution& res = {});

/// Largest admissible step min(2π/n, π/k) for bns_ratio, just inside π/k.
double bns_max_step(int n, int k);

struct BnsCheck {
    double lhs; ///< ‖D^{2k} τ‖
    double rhs; ///< n^{2k} W_{2k}(τ, h) / W_{2k}(c_n, h)
};

BnsCheck bns_ratio(const TrigPolynomial& tau, int n, int k, double h, const Resolution& res = {});

} // namespace smoothkit

#endif // SMOOTHKIT_BEST_APPROX_HPP

#ifndef SMOOTHKIT_KERNELS_HPP
#define SMOOTHKIT_KERNELS_HPP

#include "smoothkit/differences.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <span>
#include <vector>

namespace smoothkit {

using BigRational = boost::multiprecision::cpp_rational;

// ------- piecewise-linear kernels ------- //

/// Compactly supported continuous piecewise-linear function on the line.
/// Vanishes at both end breakpoints and outside them.
class PiecewiseLinearKernel {
public:
    PiecewiseLinearKernel(std::vector<double> breakpoints, std::vector<double> vertex_values);

    double operator()(double t) const noexcept;

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> vertex_values() const noexcept { return values_; }
    double support_radius() const noexcept;
    static constexpr int piece_degree() noexcept { return 1; }

    /// ∫ g, exact for the piecewise-linear form.
    double mass() const noexcept;
    /// ∫ |g|, exact including sign changes inside a piece.
    double l1_norm() const noexcept;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// φ_h(t) = (1/h)(1 - |t|/h) on [-h, h]; requires 0 < h < π.
PiecewiseLinearKernel triangle_kernel(double h);

// ------- B-spline convolution powers ------- //

/// Centred cardinal B-spline M_r of order r (degree r-1) on [-r/2, r/2),
/// the r-fold convolution of the indicator of [-1/2, 1/2]. Piece
/// coefficients come from exact rational arithmetic.
class CardinalBSpline {
public:
    explicit CardinalBSpline(int order);

    int order() const noexcept { return order_; }
    double operator()(double x) const noexcept;

    /// Exact rational coefficients of piece i in the local variable
    /// u = x + r/2 - i in [0, 1], lowest power first.
    const std::vector<BigRational>& exact_piece(int i) const { return exact_[i]; }

private:
    int order_;
    std::vector<std::vector<BigRational>> exact_;
    std::vector<std::vector<double>> pieces_;
};

/// Shared, memoized B-spline of the given order (1 <= order <= 40).
const CardinalBSpline& cardinal_bspline(int order);

/// χ_h^r: r-fold convolution power of the normalized indicator of
/// [-h/2, h/2], i.e. (1/h) M_r(t/h). Unit mass, support [-rh/2, rh/2].
class SmoothingKernelPower {
public:
    SmoothingKernelPower(double base_width, int power);

    double operator()(double t) const noexcept { return spline_->operator()(t / width_) / width_; }
    std::span<const double> breakpoints() const noexcept { return breaks_; }
    int piece_degree() const noexcept { return power_ - 1; }

    double base_width() const noexcept { return width_; }
    int power() const noexcept { return power_; }
    double support_radius() const noexcept { return 0.5 * power_ * width_; }
    /// Fourier transform at frequency m: sinc(m h / 2)^r.
    double multiplier(double m) const noexcept;

private:
    double width_;
    int power_;
    const CardinalBSpline* spline_;
    std::vector<double> breaks_;
};

SmoothingKernelPower chi_power(double h, int r);

// ------- the Λ kernel ------- //

/// Exact vertex table of Λ_{k,1}:
///   a_j = C(2k, k+j) / C(2k, k),                               j = 1..k
///   b_i = 2 C(2k,k)^{-1} Σ_{j=i+1..k} C(2k,k-j) (-1)^{j+1} (1/j)(1 - i/j),  i = 0..k-1
/// and b_k = 0.
struct RationalVertexTable {
    int k = 0;
    std::vector<BigRational> a; ///< a[0] = 1, then a_1..a_k
    std::vector<BigRational> b; ///< b_0..b_k

    /// b_{|i|}; the table extends evenly.
    const BigRational& b_at(int i) const;
    double b_double(int i) const;
    double a_double(int j) const;
};

const RationalVertexTable& lambda_vertices(int k);

/// Outcome of the exact comparisons of the vertex values against
///   0 < b_0 < 2 ln 2,  2 ln 2 - π²/6 < b_1 < 0,  |b_i| < 1/(2i²) (2 <= i <= k-1).
/// Transcendentals enter through 40-digit decimal enclosures.
struct LambdaBoundCheck {
    bool b0 = false;
    bool b1 = false; ///< vacuous (true) for k = 1
    bool tail = false;
    int first_tail_failure = -1;

    bool all() const noexcept { return b0 && b1 && tail; }
};

LambdaBoundCheck check_lambda_bounds(const RationalVertexTable& table);

/// Λ_{k,h} = 2 Σ_{j=1..k} (-1)^{j+1} a_j φ_{jh} assembled on the breakpoints
/// {i h : |i| <= k}. Requires k h < π so that the support fits the torus.
PiecewiseLinearKernel lambda_kernel(int k, double h);

/// Same assembly without the torus restriction.
PiecewiseLinearKernel lambda_kernel_on_line(int k, double h);

/// ∫_R |Λ_{k,1}|.
double lambda_l1_norm(int k);

// ------- constants ------- //

struct FavardSeries {
    double value = 0.0;
    long terms = 0;          ///< partial sum runs over |j| <= terms
    double tail_bound = 0.0; ///< bound on the error after the tail correction
};

/// 𝒦_r = (4/π) Σ_{j∈Z} (4j+1)^{-r-1}.
///
/// The symmetric partial sum over |j| <= J is completed by an Euler-Maclaurin
/// tail (three Bernoulli corrections). Both one-sided summands are completely
/// monotone, so the first omitted correction bounds the remainder; J doubles
/// until that bound drops below tol.
FavardSeries favard_series(int r, double tol = 1e-15);
double favard_constant(int r, double tol = 1e-15);

/// Plain integral tail bound (4/π)·2∫_J^∞ (4u-1)^{-r-1} du of the partial sum.
double favard_integral_tail(int r, long J);

struct CAlphaBound {
    double secant;     ///< sec(π/(2α))
    double comparison; ///< (4/π)(1 - α^{-2})^{-1}
};

/// Requires α > 1.
CAlphaBound c_alpha_bound(double alpha);

} // namespace smoothkit

#endif // SMOOTHKIT_KERNELS_HPP

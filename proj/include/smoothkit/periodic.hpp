#ifndef SMOOTHKIT_PERIODIC_HPP
#define SMOOTHKIT_PERIODIC_HPP

#include <concepts>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smoothkit {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduces x to [0, 2π).
double wrap_angle(double x);

/// sin(u)/u with the removable singularity filled in.
double sinc(double u);

// ------- trigonometric polynomials ------- //

/// Finite sum a_0 + Σ_{m=1..n} (a_m cos mx + b_m sin mx).
/// Trailing zero coefficients are allowed, so degree() is an upper bound
/// on the true degree.
class TrigPolynomial {
public:
    TrigPolynomial();
    /// `cos_coeffs` holds a_0..a_n, `sin_coeffs` holds b_1..b_n.
    TrigPolynomial(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

    static TrigPolynomial constant(double value);
    /// amplitude * cos(m x)
    static TrigPolynomial cosine(int m, double amplitude = 1.0);
    /// amplitude * sin(m x)
    static TrigPolynomial sine(int m, double amplitude = 1.0);

    int degree() const noexcept { return static_cast<int>(cos_.size()) - 1; }
    /// Highest index with a non-zero coefficient pair.
    int true_degree() const noexcept;

    double cos_coeff(int m) const noexcept;
    double sin_coeff(int m) const noexcept;
    std::span<const double> cos_coeffs() const noexcept { return cos_; }
    /// b_1..b_n
    std::span<const double> sin_coeffs() const noexcept { return {sin_.data() + 1, sin_.size() - 1}; }

    double operator()(double x) const noexcept;

    TrigPolynomial padded(int degree) const;

    /// Replaces every pair (a_m, b_m) by multiplier(m) * (a_m, b_m).
    template <class F>
    TrigPolynomial apply_multiplier(F&& multiplier) const
    {
        TrigPolynomial out(*this);
        for (int m = 0; m <= degree(); ++m) {
            const double w = multiplier(m);
            out.cos_[m] *= w;
            out.sin_[m] *= w;
        }
        return out;
    }

    TrigPolynomial& operator+=(const TrigPolynomial& other);
    TrigPolynomial& operator-=(const TrigPolynomial& other);
    TrigPolynomial& operator*=(double s);

    friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
    friend TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b) { return a -= b; }
    friend TrigPolynomial operator*(TrigPolynomial a, double s) { return a *= s; }
    friend TrigPolynomial operator*(double s, TrigPolynomial a) { return a *= s; }

private:
    friend TrigPolynomial derivative(const TrigPolynomial& p, int r);

    // sin_[0] is always zero so both arrays share indexing.
    std::vector<double> cos_;
    std::vector<double> sin_;
};

double eval_trig(const TrigPolynomial& p, double x) noexcept;

/// Exact r-th derivative. Each pair (a_m, b_m) is rotated by r quarter
/// turns and scaled by m^r.
TrigPolynomial derivative(const TrigPolynomial& p, int r);

// ------- black-box periodic functions ------- //

/// Bounded 2π-periodic function with optional structural hints.
///
/// Hints are used by quadrature and sampling only:
///   - breakpoints: points in [0, 2π) where f or a derivative jumps;
///   - piecewise_degree: f is a polynomial of that degree between breakpoints;
///   - degree_hint: bandwidth estimate that sizes sampling grids;
///   - trig: the exact trigonometric polynomial, when f is one.
class FunctionHandle {
public:
    using Evaluator = std::function<double(double)>;

    FunctionHandle(Evaluator evaluator, std::string label);

    static FunctionHandle from_trig(TrigPolynomial p, std::string label = "trig");
    static FunctionHandle constant(double value);

    FunctionHandle with_breakpoints(std::vector<double> points,
                                    std::optional<int> piecewise_degree = std::nullopt) const;
    FunctionHandle with_degree_hint(int degree) const;
    FunctionHandle with_label(std::string label) const;

    double operator()(double x) const { return state_->evaluator(x); }

    const std::string& label() const noexcept { return state_->label; }
    std::span<const double> breakpoints() const noexcept { return state_->breakpoints; }
    std::optional<int> piecewise_degree() const noexcept { return state_->piecewise_degree; }
    int degree_hint() const noexcept { return state_->degree_hint; }
    const TrigPolynomial* trig() const noexcept { return state_->trig ? &*state_->trig : nullptr; }

private:
    struct State {
        Evaluator evaluator;
        std::string label;
        std::vector<double> breakpoints;
        std::optional<int> piecewise_degree;
        int degree_hint = 0;
        std::optional<TrigPolynomial> trig;
    };
    explicit FunctionHandle(std::shared_ptr<const State> state) : state_(std::move(state)) {}

    std::shared_ptr<const State> state_;
};

/// Samples at x_m = 2πm/M.
struct GridFunction {
    std::vector<double> values;

    static GridFunction sample(const FunctionHandle& f, int size);

    int size() const noexcept { return static_cast<int>(values.size()); }
    double node(int m) const noexcept { return two_pi * m / size(); }
    double max_abs() const noexcept;
};

// ------- sup-norm estimation ------- //

struct Resolution {
    int grid_size = 1024;
    double refine_tol = 1e-10;
    int max_refine_iters = 50;

    void validate() const;
    /// max(grid_size, 32 * degree_hint)
    int grid_for(int degree_hint) const noexcept;
};

struct SupPoint {
    double value = 0.0;
    double x = 0.0;
};

/// Maximizes g on [lo, hi] starting from an interior sample mid with g(mid)
/// not below the endpoint values. Successive three-point parabolic fits with
/// a golden-section fallback; stops once the best value improves by less than
/// tol twice in a row, or after max_iters evaluations.
SupPoint refine_maximum(const std::function<double(double)>& g, double lo, double mid, double hi,
                        double g_mid, double tol, int max_iters);

/// Grid maximum of g followed by refinement around every near-maximal grid
/// local maximum, then the extra `probes`. The returned value is a lower
/// bound on sup g.
SupPoint sweep_maximum(const std::function<double(double)>& g, int grid_size, const Resolution& res,
                       std::span<const double> probes = {});

/// Points just either side of each breakpoint, standing in for one-sided limits.
std::vector<double> breakpoint_probes(std::span<const double> breakpoints);

/// Location and value of sup |f|.
SupPoint locate_sup(const FunctionHandle& f, const Resolution& res = {});
/// Location and value of sup f (signed).
SupPoint locate_max(const FunctionHandle& f, const Resolution& res = {});

/// sup_x |f(x)|. Throws EvaluationError on a non-finite sample.
double sup_norm(const FunctionHandle& f, const Resolution& res = {});
double sup_norm(const TrigPolynomial& p, const Resolution& res = {});

// ------- quadrature and convolution ------- //

struct QuadratureSpec {
    double tol = 1e-11;
    int max_levels = 14;
};

/// Integrates over [cuts.front(), cuts.back()] panel by panel with 16-node
/// Gauss-Legendre rules. Each panel is halved repeatedly until successive
/// estimates agree; with `exact` set a single pass is used, which is exact
/// for polynomial integrands of degree <= 31.
double integrate_panels(std::span<const double> cuts, const std::function<double(double)>& integrand,
                        const QuadratureSpec& quad, bool exact);

/// Points t in (lo, hi) where x + sign*t, reduced mod 2π, meets one of the
/// breakpoints, with t scaled by 1/step. Appended to `out`.
void append_breakpoint_crossings(std::span<const double> breakpoints, double x, double sign, double step,
                                 double lo, double hi, std::vector<double>& out);

template <class K>
concept PiecewiseKernel = requires(const K& kernel, double t) {
    { kernel(t) } -> std::convertible_to<double>;
    { kernel.breakpoints() } -> std::convertible_to<std::span<const double>>;
    { kernel.piece_degree() } -> std::convertible_to<int>;
};

namespace detail {
double convolve(const FunctionHandle& f, std::span<const double> kernel_breaks,
                const std::function<double(double)>& kernel, int kernel_degree, double x,
                const QuadratureSpec& quad);
} // namespace detail

/// (f*g)(x) = ∫ f(x - t) g(t) dt over the support of g. Panels are split at
/// every kernel breakpoint and at every crossing of a declared breakpoint of f.
template <PiecewiseKernel K>
double convolve_periodic(const FunctionHandle& f, const K& g, double x, const QuadratureSpec& quad = {})
{
    return detail::convolve(
        f, g.breakpoints(), [&g](double t) { return static_cast<double>(g(t)); }, g.piece_degree(), x,
        quad);
}

} // namespace smoothkit

#endif // SMOOTHKIT_PERIODIC_HPP

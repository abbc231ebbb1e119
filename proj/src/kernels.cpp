#include "smoothkit/kernels.hpp"

#include "smoothkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace smoothkit {

// ------- PiecewiseLinearKernel ------- //

PiecewiseLinearKernel::PiecewiseLinearKernel(std::vector<double> breakpoints, std::vector<double> vertex_values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(vertex_values))
{
    if (breakpoints_.size() < 2 || breakpoints_.size() != values_.size())
        throw DomainError("PiecewiseLinearKernel: need matching breakpoints and values (at least two)");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] > breakpoints_[i - 1]))
            throw DomainError("PiecewiseLinearKernel: breakpoints must increase strictly");
    if (values_.front() != 0.0 || values_.back() != 0.0)
        throw DomainError("PiecewiseLinearKernel: kernel must vanish at its end breakpoints");
}

double PiecewiseLinearKernel::operator()(double t) const noexcept
{
    if (!(t > breakpoints_.front() && t < breakpoints_.back()))
        return 0.0;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    const double x0 = breakpoints_[i], x1 = breakpoints_[i + 1];
    const double w = (t - x0) / (x1 - x0);
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

double PiecewiseLinearKernel::support_radius() const noexcept
{
    return std::max(std::abs(breakpoints_.front()), std::abs(breakpoints_.back()));
}

double PiecewiseLinearKernel::mass() const noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        s += 0.5 * (values_[i] + values_[i + 1]) * (breakpoints_[i + 1] - breakpoints_[i]);
    return s;
}

double PiecewiseLinearKernel::l1_norm() const noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
        const double y0 = values_[i], y1 = values_[i + 1];
        const double dx = breakpoints_[i + 1] - breakpoints_[i];
        if (y0 * y1 >= 0.0)
            s += 0.5 * std::abs(y0 + y1) * dx;
        else // two triangles either side of the zero crossing
            s += 0.5 * dx * (y0 * y0 + y1 * y1) / (std::abs(y0) + std::abs(y1));
    }
    return s;
}

PiecewiseLinearKernel triangle_kernel(double h)
{
    if (!(h > 0.0 && h < pi))
        throw DomainError("triangle_kernel: h must lie in (0, pi)");
    return PiecewiseLinearKernel({-h, 0.0, h}, {0.0, 1.0 / h, 0.0});
}

// ------- cardinal B-splines ------- //

namespace {

using Poly = std::vector<BigRational>;

Poly antiderivative(const Poly& p)
{
    Poly q(p.size() + 1, BigRational(0));
    for (std::size_t n = 0; n < p.size(); ++n)
        q[n + 1] = p[n] / BigRational(static_cast<long>(n + 1));
    return q;
}

BigRational value_at_one(const Poly& p)
{
    BigRational s = 0;
    for (const auto& c : p)
        s += c;
    return s;
}

} // namespace

CardinalBSpline::CardinalBSpline(int order) : order_(order)
{
    if (order < 1 || order > 40)
        throw DomainError("CardinalBSpline: order must lie in [1, 40]");
    std::vector<Poly> pieces{Poly{BigRational(1)}};
    for (int r = 2; r <= order; ++r) {
        std::vector<Poly> anti;
        anti.reserve(pieces.size());
        for (const auto& p : pieces)
            anti.push_back(antiderivative(p));
        std::vector<Poly> next(r, Poly(r, BigRational(0)));
        for (int i = 0; i < r; ++i) {
            Poly& out = next[i];
            if (i - 1 >= 0) {
                const Poly& q = anti[i - 1];
                out[0] += value_at_one(q);
                for (std::size_t n = 0; n < q.size(); ++n)
                    out[n] -= q[n];
            }
            if (i < r - 1) {
                const Poly& q = anti[i];
                for (std::size_t n = 0; n < q.size(); ++n)
                    out[n] += q[n];
            }
        }
        pieces = std::move(next);
    }
    exact_ = pieces;
    pieces_.reserve(exact_.size());
    for (const auto& p : exact_) {
        std::vector<double> d;
        d.reserve(p.size());
        for (const auto& c : p)
            d.push_back(c.convert_to<double>());
        pieces_.push_back(std::move(d));
    }
}

double CardinalBSpline::operator()(double x) const noexcept
{
    const double y = x + 0.5 * order_;
    if (!(y >= 0.0 && y < order_))
        return 0.0;
    const int i = std::min(static_cast<int>(std::floor(y)), order_ - 1);
    const double u = y - i;
    const auto& c = pieces_[i];
    double s = 0.0;
    for (std::size_t n = c.size(); n-- > 0;)
        s = s * u + c[n];
    return s;
}

const CardinalBSpline& cardinal_bspline(int order)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<CardinalBSpline>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot)
        slot = std::make_unique<CardinalBSpline>(order);
    return *slot;
}

SmoothingKernelPower::SmoothingKernelPower(double base_width, int power)
    : width_(base_width), power_(power), spline_(nullptr)
{
    if (!(base_width > 0.0) || !std::isfinite(base_width))
        throw DomainError("chi_power: width must be positive");
    if (power < 1 || power > 40)
        throw DomainError("chi_power: power must lie in [1, 40]");
    spline_ = &cardinal_bspline(power);
    breaks_.reserve(power + 1);
    for (int i = 0; i <= power; ++i)
        breaks_.push_back((i - 0.5 * power) * width_);
}

double SmoothingKernelPower::multiplier(double m) const noexcept
{
    return std::pow(sinc(0.5 * m * width_), power_);
}

SmoothingKernelPower chi_power(double h, int r)
{
    return SmoothingKernelPower(h, r);
}

// ------- Λ kernel ------- //

const BigRational& RationalVertexTable::b_at(int i) const
{
    const int j = std::abs(i);
    if (j > k)
        throw DomainError("RationalVertexTable: index outside the support");
    return b[j];
}

double RationalVertexTable::b_double(int i) const
{
    return b_at(i).convert_to<double>();
}

double RationalVertexTable::a_double(int j) const
{
    if (j < 0 || j > k)
        throw DomainError("RationalVertexTable: index out of range");
    return a[j].convert_to<double>();
}

namespace {

RationalVertexTable build_vertex_table(int k)
{
    RationalVertexTable t;
    t.k = k;
    const BigInt centre = binomial(2 * k, k);
    t.a.resize(k + 1);
    for (int j = 0; j <= k; ++j)
        t.a[j] = BigRational(binomial(2 * k, k + j), centre);
    t.b.assign(k + 1, BigRational(0));
    for (int i = 0; i < k; ++i) {
        BigRational s = 0;
        for (int j = i + 1; j <= k; ++j) {
            BigRational term(binomial(2 * k, k - j), BigInt(j));
            term *= BigRational(j - i, j);
            if (j % 2 == 0)
                s -= term;
            else
                s += term;
        }
        t.b[i] = BigRational(2) * s / BigRational(centre);
    }
    return t;
}

// Truncations to 40 decimals; adding 1e-40 gives the upper end.
const BigRational& decimal_unit()
{
    static const BigRational u(BigInt(1), pow(BigInt(10), 40));
    return u;
}

BigRational decimal(const char* digits_after_point, int integer_part)
{
    return BigRational(integer_part) + BigRational(BigInt(digits_after_point), pow(BigInt(10), 40));
}

} // namespace

const RationalVertexTable& lambda_vertices(int k)
{
    if (k < 1 || k > max_half_order)
        throw DomainError("lambda_vertices: k out of range");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<RationalVertexTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[k];
    if (!slot)
        slot = std::make_unique<RationalVertexTable>(build_vertex_table(k));
    return *slot;
}

LambdaBoundCheck check_lambda_bounds(const RationalVertexTable& table)
{
    // 2 ln 2 = 1.38629436111989061883446424291635313615100026872...
    static const BigRational two_ln2_lo = decimal("3862943611198906188344642429163531361510", 1);
    // π²/6 = 1.64493406684822643647241516664602518921894990120...
    static const BigRational pi2_6_lo = decimal("6449340668482264364724151666460251892189", 1);
    const BigRational two_ln2_hi = two_ln2_lo + decimal_unit();

    LambdaBoundCheck out;
    const auto& b = table.b;
    out.b0 = b[0] > 0 && b[0] < two_ln2_lo;
    if (table.k >= 2) {
        // 2 ln 2 - π²/6 < two_ln2_hi - pi2_6_lo
        out.b1 = b[1] < 0 && b[1] > two_ln2_hi - pi2_6_lo;
    } else {
        out.b1 = true;
    }
    out.tail = true;
    for (int i = 2; i <= table.k - 1; ++i) {
        const BigRational bound(1, 2 * i * i);
        if (!(abs(b[i]) < bound)) {
            out.tail = false;
            out.first_tail_failure = i;
            break;
        }
    }
    return out;
}

PiecewiseLinearKernel lambda_kernel_on_line(int k, double h)
{
    if (k < 1 || k > max_half_order)
        throw DomainError("lambda_kernel: k out of range");
    if (!(h > 0.0) || !std::isfinite(h))
        throw DomainError("lambda_kernel: h must be positive");
    const auto& a = central_ratios(k);
    std::vector<double> breaks(2 * k + 1), values(2 * k + 1, 0.0);
    for (int i = -k; i <= k; ++i) {
        breaks[i + k] = i * h;
        // φ_{jh}(ih) = (1/(jh)) (1 - |i|/j) for |i| <= j
        double v = 0.0;
        for (int j = std::max(std::abs(i), 1); j <= k; ++j) {
            const double phi = (1.0 - static_cast<double>(std::abs(i)) / j) / (j * h);
            v += (j % 2 == 1 ? 2.0 : -2.0) * a[j] * phi;
        }
        values[i + k] = v;
    }
    values.front() = 0.0;
    values.back() = 0.0;
    return PiecewiseLinearKernel(std::move(breaks), std::move(values));
}

PiecewiseLinearKernel lambda_kernel(int k, double h)
{
    if (!(k * h < pi))
        throw DomainError("lambda_kernel: support k*h must be below pi");
    return lambda_kernel_on_line(k, h);
}

double lambda_l1_norm(int k)
{
    return lambda_kernel_on_line(k, 1.0).l1_norm();
}

// ------- Favard constants ------- //

namespace {

// Σ_{j>J} (4j+c)^{-s} by Euler-Maclaurin; `bound` receives the remainder bound.
double em_tail(int s, double c, long J, double& bound)
{
    static constexpr double bernoulli[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
    const double base = 4.0 * static_cast<double>(J) + c;
    const auto derivative = [&](int q) {
        // g^{(q)}(J) = (-4)^q (s)_q base^{-s-q}
        double rising = 1.0;
        for (int i = 0; i < q; ++i)
            rising *= s + i;
        return std::pow(-4.0, q) * rising * std::pow(base, -s - q);
    };
    double tail = std::pow(base, 1.0 - s) / (4.0 * (s - 1)) - 0.5 * std::pow(base, -s);
    double factorial = 1.0;
    for (int p = 1; p <= 3; ++p) {
        factorial *= (2.0 * p - 1.0) * (2.0 * p);
        tail -= bernoulli[p - 1] / factorial * derivative(2 * p - 1);
    }
    factorial *= 7.0 * 8.0;
    bound = std::abs(bernoulli[3] / factorial * derivative(7));
    return tail;
}

} // namespace

FavardSeries favard_series(int r, double tol)
{
    if (r < 1)
        throw DomainError("favard_constant: r must be positive");
    if (!(tol > 0.0))
        throw DomainError("favard_constant: tol must be positive");
    const int s = r + 1;
    const double sign = s % 2 == 0 ? 1.0 : -1.0;
    const double scale = 4.0 / pi;
    for (long J = 16;; J *= 2) {
        double bound_plus = 0.0, bound_minus = 0.0;
        const double tail_plus = em_tail(s, 1.0, J, bound_plus);
        const double tail_minus = em_tail(s, -1.0, J, bound_minus);
        const double bound = scale * (bound_plus + bound_minus);
        if (bound >= tol && J < (1L << 24))
            continue;
        double sum = tail_plus + sign * tail_minus;
        for (long j = J; j >= 1; --j) {
            const double x = 4.0 * static_cast<double>(j);
            sum += std::pow(x + 1.0, -s) + sign * std::pow(x - 1.0, -s);
        }
        return {scale * (1.0 + sum), J, bound};
    }
}

double favard_constant(int r, double tol)
{
    return favard_series(r, tol).value;
}

double favard_integral_tail(int r, long J)
{
    if (r < 1 || J < 1)
        throw DomainError("favard_integral_tail: r and J must be positive");
    // 2 ∫_J^∞ (4u-1)^{-r-1} du = 2 (4J-1)^{-r} / (4r)
    return 4.0 / pi * 2.0 * std::pow(4.0 * static_cast<double>(J) - 1.0, -r) / (4.0 * r);
}

CAlphaBound c_alpha_bound(double alpha)
{
    if (!(alpha > 1.0))
        throw DomainError("c_alpha_bound: alpha must exceed 1");
    return {1.0 / std::cos(pi / (2.0 * alpha)), 4.0 / pi / (1.0 - 1.0 / (alpha * alpha))};
}

} // namespace smoothkit

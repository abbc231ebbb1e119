#include "smoothkit/periodic.hpp"

#include "smoothkit/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace smoothkit {

EvaluationError::EvaluationError(const std::string& label, double x)
    : Error([&] {
          std::ostringstream os;
          os.precision(17);
          os << "non-finite value of '" << label << "' at x = " << x;
          return os.str();
      }()),
      x_(x)
{
}

AccuracyError::AccuracyError(const std::string& what, double achieved_estimate, double last_difference)
    : Error(what), estimate_(achieved_estimate), difference_(last_difference)
{
}

ConvergenceError::ConvergenceError(const std::string& what, double lower, double upper, int iterations)
    : Error(what), lower_(lower), upper_(upper), iterations_(iterations)
{
}

double wrap_angle(double x)
{
    double r = std::fmod(x, two_pi);
    if (r < 0.0)
        r += two_pi;
    return r >= two_pi ? 0.0 : r;
}

double sinc(double u)
{
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

// ------- TrigPolynomial ------- //

TrigPolynomial::TrigPolynomial() : cos_{0.0}, sin_{0.0} {}

TrigPolynomial::TrigPolynomial(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
{
    if (cos_coeffs.empty())
        cos_coeffs.push_back(0.0);
    if (sin_coeffs.size() + 1 != cos_coeffs.size())
        throw DomainError("TrigPolynomial: need n+1 cosine and n sine coefficients");
    cos_ = std::move(cos_coeffs);
    sin_.reserve(cos_.size());
    sin_.push_back(0.0);
    sin_.insert(sin_.end(), sin_coeffs.begin(), sin_coeffs.end());
}

TrigPolynomial TrigPolynomial::constant(double value)
{
    return TrigPolynomial({value}, {});
}

TrigPolynomial TrigPolynomial::cosine(int m, double amplitude)
{
    if (m < 0)
        throw DomainError("TrigPolynomial::cosine: negative harmonic");
    std::vector<double> a(m + 1, 0.0), b(m, 0.0);
    a[m] = amplitude;
    return TrigPolynomial(std::move(a), std::move(b));
}

TrigPolynomial TrigPolynomial::sine(int m, double amplitude)
{
    if (m < 1)
        throw DomainError("TrigPolynomial::sine: harmonic must be positive");
    std::vector<double> a(m + 1, 0.0), b(m, 0.0);
    b[m - 1] = amplitude;
    return TrigPolynomial(std::move(a), std::move(b));
}

int TrigPolynomial::true_degree() const noexcept
{
    for (int m = degree(); m > 0; --m)
        if (cos_[m] != 0.0 || sin_[m] != 0.0)
            return m;
    return 0;
}

double TrigPolynomial::cos_coeff(int m) const noexcept
{
    return (m >= 0 && m <= degree()) ? cos_[m] : 0.0;
}

double TrigPolynomial::sin_coeff(int m) const noexcept
{
    return (m >= 1 && m <= degree()) ? sin_[m] : 0.0;
}

double TrigPolynomial::operator()(double x) const noexcept
{
    // e^{i(m+1)x} = e^{imx} e^{ix}
    const double c1 = std::cos(x), s1 = std::sin(x);
    double cm = 1.0, sm = 0.0;
    double sum = cos_[0];
    for (int m = 1; m <= degree(); ++m) {
        const double c = cm * c1 - sm * s1;
        sm = sm * c1 + cm * s1;
        cm = c;
        sum += cos_[m] * cm + sin_[m] * sm;
    }
    return sum;
}

TrigPolynomial TrigPolynomial::padded(int degree) const
{
    TrigPolynomial out(*this);
    if (degree > this->degree()) {
        out.cos_.resize(degree + 1, 0.0);
        out.sin_.resize(degree + 1, 0.0);
    }
    return out;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other)
{
    if (other.degree() > degree())
        *this = padded(other.degree());
    for (int m = 0; m <= other.degree(); ++m) {
        cos_[m] += other.cos_[m];
        sin_[m] += other.sin_[m];
    }
    return *this;
}

TrigPolynomial& TrigPolynomial::operator-=(const TrigPolynomial& other)
{
    return *this += other * -1.0;
}

TrigPolynomial& TrigPolynomial::operator*=(double s)
{
    for (auto& a : cos_)
        a *= s;
    for (auto& b : sin_)
        b *= s;
    return *this;
}

double eval_trig(const TrigPolynomial& p, double x) noexcept
{
    return p(x);
}

TrigPolynomial derivative(const TrigPolynomial& p, int r)
{
    if (r < 0)
        throw DomainError("derivative: negative order");
    TrigPolynomial out(p);
    out.cos_[0] = r == 0 ? p.cos_[0] : 0.0;
    for (int m = 1; m <= p.degree(); ++m) {
        const double scale = std::pow(static_cast<double>(m), r);
        const double a = p.cos_[m], b = p.sin_[m];
        switch (r % 4) {
        case 0: out.cos_[m] = a; out.sin_[m] = b; break;
        case 1: out.cos_[m] = b; out.sin_[m] = -a; break;
        case 2: out.cos_[m] = -a; out.sin_[m] = -b; break;
        default: out.cos_[m] = -b; out.sin_[m] = a; break;
        }
        out.cos_[m] *= scale;
        out.sin_[m] *= scale;
    }
    return out;
}

// ------- FunctionHandle ------- //

FunctionHandle::FunctionHandle(Evaluator evaluator, std::string label)
{
    auto state = std::make_shared<State>();
    state->evaluator = std::move(evaluator);
    state->label = std::move(label);
    state_ = std::move(state);
}

FunctionHandle FunctionHandle::from_trig(TrigPolynomial p, std::string label)
{
    auto state = std::make_shared<State>();
    state->degree_hint = p.degree();
    state->trig = std::move(p);
    state->evaluator = [&poly = *state->trig](double x) { return poly(x); };
    state->label = std::move(label);
    return FunctionHandle(std::shared_ptr<const State>(std::move(state)));
}

FunctionHandle FunctionHandle::constant(double value)
{
    return from_trig(TrigPolynomial::constant(value), "constant");
}

FunctionHandle FunctionHandle::with_breakpoints(std::vector<double> points,
                                                std::optional<int> piecewise_degree) const
{
    auto state = std::make_shared<State>(*state_);
    for (auto& p : points)
        p = wrap_angle(p);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    state->breakpoints = std::move(points);
    state->piecewise_degree = piecewise_degree;
    if (state->trig)
        state->evaluator = [&poly = *state->trig](double x) { return poly(x); };
    return FunctionHandle(std::shared_ptr<const State>(std::move(state)));
}

FunctionHandle FunctionHandle::with_degree_hint(int degree) const
{
    auto state = std::make_shared<State>(*state_);
    state->degree_hint = degree;
    if (state->trig)
        state->evaluator = [&poly = *state->trig](double x) { return poly(x); };
    return FunctionHandle(std::shared_ptr<const State>(std::move(state)));
}

FunctionHandle FunctionHandle::with_label(std::string label) const
{
    auto state = std::make_shared<State>(*state_);
    state->label = std::move(label);
    if (state->trig)
        state->evaluator = [&poly = *state->trig](double x) { return poly(x); };
    return FunctionHandle(std::shared_ptr<const State>(std::move(state)));
}

GridFunction GridFunction::sample(const FunctionHandle& f, int size)
{
    if (size < 4)
        throw DomainError("GridFunction: size must be at least 4");
    GridFunction g;
    g.values.resize(size);
    for (int m = 0; m < size; ++m) {
        const double x = two_pi * m / size;
        const double v = f(x);
        if (!std::isfinite(v))
            throw EvaluationError(f.label(), x);
        g.values[m] = v;
    }
    return g;
}

double GridFunction::max_abs() const noexcept
{
    double best = 0.0;
    for (double v : values)
        best = std::max(best, std::abs(v));
    return best;
}

// ------- sup-norm ------- //

void Resolution::validate() const
{
    if (grid_size < 4)
        throw DomainError("Resolution: grid_size must be at least 4");
    if (!(refine_tol > 0.0))
        throw DomainError("Resolution: refine_tol must be positive");
    if (max_refine_iters < 1)
        throw DomainError("Resolution: max_refine_iters must be positive");
}

int Resolution::grid_for(int degree_hint) const noexcept
{
    return std::max(grid_size, 32 * degree_hint);
}

SupPoint refine_maximum(const std::function<double(double)>& g, double lo, double mid, double hi,
                        double g_mid, double tol, int max_iters)
{
    constexpr double golden = 0.3819660112501051;
    double a = lo, b = mid, c = hi;
    double ga = g(a), gb = g_mid, gc = g(c);
    if (ga > gb || gc > gb)
        return ga >= gc ? SupPoint{ga, a} : SupPoint{gc, c};

    double previous = gb;
    int small_steps = 0;
    for (int it = 2; it < max_iters; ++it) {
        const double r = (b - a) * (gb - gc);
        const double q = (b - c) * (gb - ga);
        const double den = 2.0 * (r - q);
        double v = b - ((b - a) * r - (b - c) * q) / den;
        if (!(den != 0.0) || !std::isfinite(v) || v <= a || v >= c || std::abs(v - b) < 1e-12 * (c - a))
            v = (c - b) > (b - a) ? b + golden * (c - b) : b - golden * (b - a);
        const double gv = g(v);
        if (gv >= gb) {
            if (v < b) {
                c = b;
                gc = gb;
            } else {
                a = b;
                ga = gb;
            }
            b = v;
            gb = gv;
        } else if (v < b) {
            a = v;
            ga = gv;
        } else {
            c = v;
            gc = gv;
        }
        small_steps = (gb - previous < tol) ? small_steps + 1 : 0;
        previous = gb;
        if (small_steps >= 2 || c - a <= 4e-16 * (std::abs(b) + 1.0))
            break;
    }
    return {gb, b};
}

std::vector<double> breakpoint_probes(std::span<const double> breakpoints)
{
    constexpr double offset = 1e-12;
    std::vector<double> out;
    out.reserve(2 * breakpoints.size());
    for (double b : breakpoints) {
        out.push_back(wrap_angle(b - offset));
        out.push_back(wrap_angle(b + offset));
    }
    return out;
}

SupPoint sweep_maximum(const std::function<double(double)>& g, int grid_size, const Resolution& res,
                       std::span<const double> probes)
{
    res.validate();
    const int M = std::max(grid_size, 4);
    const double dx = two_pi / M;
    std::vector<double> v(M);
    for (int m = 0; m < M; ++m) {
        v[m] = g(dx * m);
        if (!std::isfinite(v[m]))
            throw EvaluationError("sweep", dx * m);
    }
    const auto top = std::max_element(v.begin(), v.end());
    SupPoint best{*top, dx * static_cast<double>(top - v.begin())};

    const double threshold = best.value - std::max(0.01 * std::abs(best.value), 1e-13);
    std::vector<int> candidates;
    for (int m = 0; m < M; ++m) {
        const double left = v[(m + M - 1) % M], right = v[(m + 1) % M];
        if (v[m] >= left && v[m] >= right && v[m] >= threshold)
            candidates.push_back(m);
    }
    constexpr std::size_t max_candidates = 16;
    if (candidates.size() > max_candidates) {
        std::partial_sort(candidates.begin(), candidates.begin() + max_candidates, candidates.end(),
                          [&](int i, int j) { return v[i] > v[j] || (v[i] == v[j] && i < j); });
        candidates.resize(max_candidates);
    }
    for (int m : candidates) {
        const double x = dx * m;
        const SupPoint p = refine_maximum(g, x - dx, x, x + dx, v[m], res.refine_tol, res.max_refine_iters);
        if (p.value > best.value)
            best = {p.value, wrap_angle(p.x)};
    }
    for (double x : probes) {
        const double value = g(x);
        if (!std::isfinite(value))
            throw EvaluationError("sweep", x);
        if (value > best.value)
            best = {value, x};
    }
    return best;
}

namespace {

std::function<double(double)> checked(const FunctionHandle& f, bool absolute)
{
    return [&f, absolute](double x) {
        const double v = f(x);
        if (!std::isfinite(v))
            throw EvaluationError(f.label(), x);
        return absolute ? std::abs(v) : v;
    };
}

} // namespace

SupPoint locate_sup(const FunctionHandle& f, const Resolution& res)
{
    return sweep_maximum(checked(f, true), res.grid_for(f.degree_hint()), res, breakpoint_probes(f.breakpoints()));
}

SupPoint locate_max(const FunctionHandle& f, const Resolution& res)
{
    return sweep_maximum(checked(f, false), res.grid_for(f.degree_hint()), res, breakpoint_probes(f.breakpoints()));
}

double sup_norm(const FunctionHandle& f, const Resolution& res)
{
    return locate_sup(f, res).value;
}

double sup_norm(const TrigPolynomial& p, const Resolution& res)
{
    return sweep_maximum([&p](double x) { return std::abs(p(x)); }, res.grid_for(p.degree()), res).value;
}

// ------- quadrature ------- //

namespace {

struct GaussRule {
    std::array<double, 16> nodes{};
    std::array<double, 16> weights{};

    GaussRule()
    {
        using rule = boost::math::quadrature::gauss<double, 16>;
        const auto& x = rule::abscissa();
        const auto& w = rule::weights();
        for (std::size_t i = 0; i < x.size(); ++i) {
            nodes[i] = -x[i];
            weights[i] = w[i];
            nodes[15 - i] = x[i];
            weights[15 - i] = w[i];
        }
    }
};

const GaussRule& gauss16()
{
    static const GaussRule rule;
    return rule;
}

double gauss_on(const std::function<double(double)>& fn, double a, double b, int pieces)
{
    const auto& rule = gauss16();
    const double width = (b - a) / pieces;
    double total = 0.0;
    for (int p = 0; p < pieces; ++p) {
        const double lo = a + width * p;
        const double half = 0.5 * width, centre = lo + half;
        double s = 0.0;
        for (int i = 0; i < 16; ++i)
            s += rule.weights[i] * fn(centre + half * rule.nodes[i]);
        total += s * half;
    }
    return total;
}

} // namespace

double integrate_panels(std::span<const double> cuts, const std::function<double(double)>& integrand,
                        const QuadratureSpec& quad, bool exact)
{
    if (cuts.size() < 2)
        return 0.0;
    const double total_width = cuts.back() - cuts.front();
    if (!(total_width > 0.0))
        return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (!(b > a))
            continue;
        double previous = gauss_on(integrand, a, b, 1);
        if (exact) {
            sum += previous;
            continue;
        }
        const double panel_tol = quad.tol * std::max((b - a) / total_width, 1e-3);
        bool converged = false;
        double diff = 0.0;
        for (int level = 1; level <= quad.max_levels; ++level) {
            const double current = gauss_on(integrand, a, b, 1 << level);
            diff = std::abs(current - previous);
            previous = current;
            if (diff <= panel_tol * std::max(1.0, std::abs(current))) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw AccuracyError("quadrature did not converge", sum + previous, diff);
        sum += previous;
    }
    return sum;
}

void append_breakpoint_crossings(std::span<const double> breakpoints, double x, double sign, double step,
                                 double lo, double hi, std::vector<double>& out)
{
    if (breakpoints.empty() || !(hi > lo))
        return;
    for (double d : breakpoints) {
        // x + sign*step*t = d + 2πl  ->  step*t = sign*(d - x) + 2πl'
        const double base = sign * (d - x);
        const double s_lo = step * lo, s_hi = step * hi;
        const long first = static_cast<long>(std::ceil((s_lo - base) / two_pi));
        const long last = static_cast<long>(std::floor((s_hi - base) / two_pi));
        for (long l = first; l <= last; ++l) {
            const double t = (base + two_pi * static_cast<double>(l)) / step;
            if (t > lo && t < hi)
                out.push_back(t);
        }
    }
}

namespace detail {

double convolve(const FunctionHandle& f, std::span<const double> kernel_breaks,
                const std::function<double(double)>& kernel, int kernel_degree, double x,
                const QuadratureSpec& quad)
{
    if (kernel_breaks.size() < 2)
        return 0.0;
    std::vector<double> cuts(kernel_breaks.begin(), kernel_breaks.end());
    append_breakpoint_crossings(f.breakpoints(), x, -1.0, 1.0, cuts.front(), cuts.back(), cuts);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto degree = f.piecewise_degree();
    const bool exact = degree && *degree + kernel_degree <= 31;
    return integrate_panels(
        cuts, [&](double t) { return f(x - t) * kernel(t); }, quad, exact);
}

} // namespace detail

} // namespace smoothkit

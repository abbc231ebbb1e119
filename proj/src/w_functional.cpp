#include "smoothkit/w_functional.hpp"

#include "smoothkit/differences.hpp"
#include "smoothkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace smoothkit {

WParams::WParams(int k, double h) : k_(k), h_(h)
{
    if (k < 1 || k > max_half_order)
        throw DomainError("WParams: k out of range");
    if (!admissible(k, h))
        throw DomainError("WParams: h must satisfy 0 < h < pi/k");
}

bool WParams::admissible(int k, double h) noexcept
{
    return k >= 1 && h > 0.0 && h * k < pi;
}

double w_pointwise(const FunctionHandle& f, const WParams& p, double x, const QuadratureSpec& quad)
{
    const int k = p.k();
    const double h = p.h();
    const auto& a = central_ratios(k);

    std::vector<double> cuts{0.0, h};
    for (int j = 1; j <= k; ++j) {
        append_breakpoint_crossings(f.breakpoints(), x, +1.0, j, 0.0, h, cuts);
        append_breakpoint_crossings(f.breakpoints(), x, -1.0, j, 0.0, h, cuts);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double centre = f(x);
    const auto integrand = [&](double t) {
        double s = centre;
        for (int j = 1; j <= k; ++j) {
            const double pair = f(x + j * t) + f(x - j * t);
            s += (j % 2 == 0 ? a[j] : -a[j]) * pair;
        }
        return s * (1.0 - t / h) / h;
    };
    const auto degree = f.piecewise_degree();
    const bool exact = degree && *degree + 1 <= 31;
    return 2.0 * integrate_panels(cuts, integrand, quad, exact);
}

double w_kernel_path(const FunctionHandle& f, const PiecewiseLinearKernel& lambda, double x,
                     const QuadratureSpec& quad)
{
    return f(x) - convolve_periodic(f, lambda, x, quad);
}

double w_kernel_path(const FunctionHandle& f, const WParams& p, double x, const QuadratureSpec& quad)
{
    return w_kernel_path(f, lambda_kernel(p.k(), p.h()), x, quad);
}

namespace {

// C(2k,k)^{-1} ∫_{-h}^{h} (2 sin(mt/2))^{2k} φ_h(t) dt with a positive integrand.
double multiplier_by_quadrature(int m, const WParams& p)
{
    const int k = p.k();
    const double h = p.h();
    const double log_centre = std::log(binomial_double(2 * k, k));
    const auto integrand = [&](double t) {
        const double s = std::abs(2.0 * std::sin(0.5 * m * t));
        if (s == 0.0)
            return 0.0;
        return std::exp(2.0 * k * std::log(s) - log_centre) * (1.0 - t / h) / h;
    };
    std::vector<double> cuts;
    for (int i = 0; i <= 8; ++i)
        cuts.push_back(h * i / 8.0);
    return 2.0 * integrate_panels(cuts, integrand, QuadratureSpec{}, false);
}

} // namespace

double w_multiplier(int m, const WParams& p)
{
    if (m < 0)
        throw DomainError("w_multiplier: negative harmonic");
    const int k = p.k();
    const auto& a = central_ratios(k);
    double s = 1.0;
    for (int j = 1; j <= k; ++j) {
        const double u = sinc(0.5 * j * m * p.h());
        s += (j % 2 == 0 ? 2.0 : -2.0) * a[j] * u * u;
    }
    // The alternating sum loses all relative accuracy once μ falls near rounding level.
    if (s < 1e-8)
        return multiplier_by_quadrature(m, p);
    return s;
}

TrigPolynomial apply_w_multiplier(const TrigPolynomial& tau, const WParams& p)
{
    return tau.apply_multiplier([&p](int m) { return w_multiplier(m, p); });
}

double w_norm(const FunctionHandle& f, const WParams& p, const Resolution& res, WPath path)
{
    const int M = res.grid_for(f.degree_hint());
    if (path == WPath::kernel) {
        const PiecewiseLinearKernel lambda = lambda_kernel(p.k(), p.h());
        return sweep_maximum([&](double x) { return std::abs(w_kernel_path(f, lambda, x)); }, M, res).value;
    }
    return sweep_maximum([&](double x) { return std::abs(w_pointwise(f, p, x)); }, M, res).value;
}

double w_norm(const TrigPolynomial& tau, const WParams& p, const Resolution& res)
{
    return sup_norm(apply_w_multiplier(tau, p), res);
}

const std::vector<double>& w_step_grid(int k)
{
    if (k < 1 || k > max_half_order)
        throw DomainError("w_step_grid: k out of range");
    static std::mutex mutex;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard lock(mutex);
    auto& grid = cache[k];
    if (grid.empty()) {
        constexpr int count = 128;
        const double top = (pi / k) * (1.0 - 1e-6);
        for (int i = 0; i < count; ++i)
            grid.push_back(top * std::pow(10.0, -3.0 * (count - 1 - i) / (count - 1)));
    }
    return grid;
}

namespace {

// Suprema over h in (0, δ] for each δ of an increasing list.
std::vector<double> sup_over_steps(const std::function<double(double)>& value, int k,
                                   std::span<const double> deltas, const Resolution& res)
{
    if (deltas.empty())
        return {};
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!WParams::admissible(k, deltas[i]))
            throw DomainError("sup over h: delta must satisfy 0 < delta < pi/k");
        if (i > 0 && deltas[i] < deltas[i - 1])
            throw DomainError("sup over h: deltas must be non-decreasing");
    }
    const double top = deltas.back();
    std::vector<double> hs;
    for (double h : w_step_grid(k))
        if (h <= top)
            hs.push_back(h);
    hs.insert(hs.end(), deltas.begin(), deltas.end());
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());

    std::vector<double> vals(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i)
        vals[i] = value(hs[i]);

    struct Peak {
        double value;
        double h;
    };
    std::vector<Peak> peaks;
    const double best = *std::max_element(vals.begin(), vals.end());
    std::vector<std::size_t> interior;
    for (std::size_t i = 1; i + 1 < hs.size(); ++i)
        if (vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] && vals[i] >= best - 0.01 * std::abs(best))
            interior.push_back(i);
    std::stable_sort(interior.begin(), interior.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    if (interior.size() > 3)
        interior.resize(3);
    for (std::size_t i : interior) {
        const SupPoint pt =
            refine_maximum(value, hs[i - 1], hs[i], hs[i + 1], vals[i], res.refine_tol, res.max_refine_iters);
        peaks.push_back({pt.value, pt.x});
    }

    std::vector<double> out;
    out.reserve(deltas.size());
    double running = 0.0;
    std::size_t next = 0;
    for (double delta : deltas) {
        while (next < hs.size() && hs[next] <= delta)
            running = std::max(running, vals[next++]);
        double v = running;
        for (const auto& pk : peaks)
            if (pk.h <= delta)
                v = std::max(v, pk.value);
        out.push_back(v);
    }
    return out;
}

} // namespace

std::vector<double> w_sharp_profile(const FunctionHandle& f, int k, double x, std::span<const double> deltas,
                                    const Resolution& res, WPath path)
{
    if (path == WPath::kernel)
        return sup_over_steps([&](double h) { return std::abs(w_kernel_path(f, WParams(k, h), x)); }, k,
                              deltas, res);
    return sup_over_steps([&](double h) { return std::abs(w_pointwise(f, WParams(k, h), x)); }, k, deltas, res);
}

double w_sharp(const FunctionHandle& f, int k, double x, double delta, const Resolution& res, WPath path)
{
    const double deltas[] = {delta};
    return w_sharp_profile(f, k, x, deltas, res, path).front();
}

std::vector<double> w_star_profile(const FunctionHandle& f, int k, std::span<const double> deltas,
                                   const Resolution& res, WPath path)
{
    return sup_over_steps([&](double h) { return w_norm(f, WParams(k, h), res, path); }, k, deltas, res);
}

std::vector<double> w_star_profile(const TrigPolynomial& tau, int k, std::span<const double> deltas,
                                   const Resolution& res)
{
    return sup_over_steps([&](double h) { return w_norm(tau, WParams(k, h), res); }, k, deltas, res);
}

double w_star(const FunctionHandle& f, int k, double delta, const Resolution& res, WPath path)
{
    const double deltas[] = {delta};
    return w_star_profile(f, k, deltas, res, path).front();
}

double w_star(const TrigPolynomial& tau, int k, double delta, const Resolution& res)
{
    const double deltas[] = {delta};
    return w_star_profile(tau, k, deltas, res).front();
}

} // namespace smoothkit

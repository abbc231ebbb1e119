#include "smoothkit/best_approx.hpp"

#include "smoothkit/w_functional.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace smoothkit {

// ------- exchange algorithm ------- //

namespace {

void fill_basis(double x, int degree, double* row)
{
    row[0] = 1.0;
    for (int m = 1; m <= degree; ++m) {
        row[2 * m - 1] = std::cos(m * x);
        row[2 * m] = std::sin(m * x);
    }
}

TrigPolynomial to_trig(const Eigen::VectorXd& c, int degree)
{
    std::vector<double> a(degree + 1), b(degree);
    a[0] = c[0];
    for (int m = 1; m <= degree; ++m) {
        a[m] = c[2 * m - 1];
        b[m - 1] = c[2 * m];
    }
    return TrigPolynomial(std::move(a), std::move(b));
}

struct LevelledSolution {
    Eigen::VectorXd coeffs;
    double levelled;
};

LevelledSolution solve_reference(const std::vector<double>& points, const std::vector<double>& values, int degree)
{
    const int R = static_cast<int>(points.size());
    const int dim = 2 * degree + 1;
    Eigen::MatrixXd A(R, R);
    Eigen::VectorXd rhs(R);
    std::vector<double> row(dim);
    for (int i = 0; i < R; ++i) {
        fill_basis(points[i], degree, row.data());
        for (int j = 0; j < dim; ++j)
            A(i, j) = row[j];
        A(i, dim) = i % 2 == 0 ? 1.0 : -1.0;
        rhs[i] = values[i];
    }
    const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    return {sol.head(dim), sol[dim]};
}

} // namespace

MinimaxResult trig_minimax(const FunctionHandle& f, int degree_bound, const MinimaxOptions& options)
{
    if (degree_bound < 0)
        throw DomainError("trig_minimax: negative degree bound");
    if (!(options.tol > 0.0) || options.max_iterations < 1)
        throw DomainError("trig_minimax: invalid options");
    const int d = degree_bound;
    const int dim = 2 * d + 1;
    const int R = dim + 1;
    const int uniform = R * std::max(32, (2048 + R - 1) / R);
    const double dx = two_pi / uniform;
    const std::vector<double> probes = breakpoint_probes(f.breakpoints());

    // Uniform grid plus one-sided points at the declared breakpoints.
    std::vector<double> xs(uniform);
    for (int g = 0; g < uniform; ++g)
        xs[g] = dx * g;
    xs.insert(xs.end(), probes.begin(), probes.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    const int G = static_cast<int>(xs.size());

    std::vector<double> fv(G);
    double scale = 0.0;
    for (int g = 0; g < G; ++g) {
        fv[g] = f(xs[g]);
        if (!std::isfinite(fv[g]))
            throw EvaluationError(f.label(), xs[g]);
        scale = std::max(scale, std::abs(fv[g]));
    }
    const double floor_abs = 1e-13 * std::max(scale, 1e-300);
    // Levelled errors carry rounding of order eps * scale.
    const double gap_floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    const auto tight = [&](double lo, double hi) { return hi - lo <= std::max(options.tol * lo, gap_floor); };

    // Basis on the grid, row-major.
    std::vector<double> basis(static_cast<std::size_t>(G) * dim);
    for (int g = 0; g < G; ++g)
        fill_basis(xs[g], d, basis.data() + static_cast<std::size_t>(g) * dim);

    std::vector<int> ref(R);
    for (int i = 0; i < R; ++i)
        ref[i] = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), two_pi * i / R) - xs.begin());

    MinimaxResult out;
    double lower = 0.0, upper = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_coeffs = Eigen::VectorXd::Zero(dim);
    std::vector<double> residual(G);
    bool converged = false;
    bool discrete_optimum = false;
    int stalled = 0;

    std::vector<double> pts(R), vals(R);
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        for (int i = 0; i < R; ++i) {
            pts[i] = xs[ref[i]];
            vals[i] = fv[ref[i]];
        }
        const LevelledSolution sol = solve_reference(pts, vals, d);
        int arg = 0;
        double grid_max = -1.0;
        for (int g = 0; g < G; ++g) {
            const double* row = basis.data() + static_cast<std::size_t>(g) * dim;
            double s = 0.0;
            for (int j = 0; j < dim; ++j)
                s += sol.coeffs[j] * row[j];
            residual[g] = fv[g] - s;
            if (std::abs(residual[g]) > grid_max) {
                grid_max = std::abs(residual[g]);
                arg = g;
            }
        }
        const TrigPolynomial p = to_trig(sol.coeffs, d);
        const double sup = std::max(
            grid_max,
            sweep_maximum([&](double x) { return std::abs(f(x) - p(x)); }, uniform, options.resolution, probes).value);
        const double previous_gap = upper - lower;
        lower = std::max(lower, std::abs(sol.levelled));
        if (sup < upper) {
            upper = sup;
            best_coeffs = sol.coeffs;
        }
        stalled = upper - lower < previous_gap ? 0 : stalled + 1;
        out.brackets.emplace_back(lower, upper);
        out.iterations = iter;
        if (upper <= floor_abs || tight(lower, upper)) {
            converged = true;
            break;
        }

        // Grid maximizer already in the reference: the discrete problem is
        // solved. Degenerate problems (several optimal polynomials) can cycle
        // instead; a bracket frozen for 4R exchanges counts the same.
        if (std::find(ref.begin(), ref.end(), arg) != ref.end() || stalled >= 4 * R) {
            discrete_optimum = true;
            break;
        }

        // Single-point exchange, keeping alternation around the circle.
        const double sigma = sol.levelled >= 0.0 ? 1.0 : -1.0;
        const auto sign_at = [&](int i) { return (i % 2 == 0 ? 1.0 : -1.0) * sigma; };
        const double sy = residual[arg] >= 0.0 ? 1.0 : -1.0;
        int left = R - 1, right = 0; // wrap interval by default
        for (int i = 0; i + 1 < R; ++i) {
            if (ref[i] < arg && arg < ref[i + 1]) {
                left = i;
                right = i + 1;
                break;
            }
        }
        if (sy == sign_at(left))
            ref[left] = arg;
        else
            ref[right] = arg;
        std::sort(ref.begin(), ref.end());
    }
    const bool continuous = f.breakpoints().empty();
    if (!converged && !discrete_optimum)
        throw ConvergenceError("trig_minimax: exchange did not converge", lower, upper, out.iterations);

    std::vector<double> points(R);
    for (int i = 0; i < R; ++i)
        points[i] = xs[ref[i]];

    // Polish: move each reference point onto the nearby extremum of the
    // continuous residual. Only functions without declared breakpoints must
    // reach the tolerance; for the others the grid solution stands.
    if (!converged) {
        std::vector<double> pv(R);
        for (int pass = 0; pass < 20; ++pass) {
            for (int i = 0; i < R; ++i)
                pv[i] = f(points[i]);
            const LevelledSolution sol = solve_reference(points, pv, d);
            const TrigPolynomial p = to_trig(sol.coeffs, d);
            const auto r = [&](double x) { return f(x) - p(x); };
            const double sigma = sol.levelled >= 0.0 ? 1.0 : -1.0;
            std::vector<double> moved(R);
            for (int i = 0; i < R; ++i) {
                const double s = (i % 2 == 0 ? 1.0 : -1.0) * sigma;
                const auto g = [&](double x) { return s * r(x); };
                const double x = points[i];
                moved[i] = refine_maximum(g, x - dx, x, x + dx, g(x), 1e-15, options.resolution.max_refine_iters).x;
            }
            const double sup =
                sweep_maximum([&](double x) { return std::abs(r(x)); }, uniform, options.resolution, probes).value;
            lower = std::max(lower, std::abs(sol.levelled));
            if (sup < upper) {
                upper = sup;
                best_coeffs = sol.coeffs;
            }
            out.brackets.emplace_back(lower, upper);
            const bool ordered = std::is_sorted(moved.begin(), moved.end()) &&
                                 std::adjacent_find(moved.begin(), moved.end()) == moved.end() &&
                                 moved.back() - moved.front() < two_pi;
            if (tight(lower, upper)) {
                converged = true;
                break;
            }
            if (!ordered)
                break;
            points = moved;
        }
        if (!converged && continuous)
            throw ConvergenceError("trig_minimax: reference polish did not converge", lower, upper,
                                   out.iterations);
    }

    out.approximant = to_trig(best_coeffs, d);
    out.lower_bound = lower;
    out.reference_points = points;
    const TrigPolynomial& p = out.approximant;
    out.error =
        sweep_maximum([&](double x) { return std::abs(f(x) - p(x)); }, uniform, options.resolution, probes).value;
    return out;
}

// ------- periodic splines ------- //

PeriodicSpline::PeriodicSpline(int degree, std::vector<double> coefficients)
    : degree_(degree), coeffs_(std::move(coefficients)), basis_(nullptr)
{
    if (degree < 0 || degree > 39)
        throw DomainError("PeriodicSpline: degree must lie in [0, 39]");
    if (coeffs_.empty())
        throw DomainError("PeriodicSpline: need at least one coefficient");
    basis_ = &cardinal_bspline(degree + 1);
}

double PeriodicSpline::operator()(double x) const noexcept
{
    const int N = knot_count();
    const int r = degree_ + 1;
    const double u = wrap_angle(x) / spacing() - offset();
    const long first = static_cast<long>(std::ceil(u - 0.5 * r));
    const long last = static_cast<long>(std::floor(u + 0.5 * r));
    double s = 0.0;
    for (long i = first; i <= last; ++i) {
        const long idx = ((i % N) + N) % N;
        s += coeffs_[idx] * (*basis_)(u - static_cast<double>(i));
    }
    return s;
}

FunctionHandle PeriodicSpline::as_function(std::string label) const
{
    std::vector<double> knots;
    for (int j = 0; j < knot_count(); ++j)
        knots.push_back(spacing() * j);
    return FunctionHandle([s = *this](double x) { return s(x); }, std::move(label))
        .with_breakpoints(std::move(knots), degree_)
        .with_degree_hint(knot_count());
}

FavardOperatorDescriptor favard_descriptor(int n, int r)
{
    if (n < 1 || r < 1)
        throw DomainError("favard_descriptor: n and r must be positive");
    return {n, r, FavardOperatorDescriptor::Kind::spline_interpolation, favard_constant(r)};
}

PeriodicSpline spline_interpolant(const FunctionHandle& f, int n, int r)
{
    if (n < 1)
        throw DomainError("spline_favard: n must be positive");
    if (r < 1 || r > 40)
        throw DomainError("spline_favard: r must lie in [1, 40]");
    const int N = 2 * n;
    const double delta = two_pi / N;
    const double offset = (r - 1) % 2 == 1 ? 0.0 : 0.5;
    const CardinalBSpline& basis = cardinal_bspline(r);

    // First column of the circulant collocation matrix: periodized M_r at integers.
    std::vector<double> column(N, 0.0);
    const int reach = r / 2 + 1;
    for (int l = -reach; l <= reach; ++l)
        column[((l % N) + N) % N] += basis(static_cast<double>(l));

    std::vector<double> y(N);
    for (int j = 0; j < N; ++j)
        y[j] = f((j + offset) * delta);

    using cplx = std::complex<double>;
    std::vector<cplx> yhat(N), symbol(N);
    double symbol_max = 0.0;
    for (int q = 0; q < N; ++q) {
        cplx sy = 0.0, sa = 0.0;
        for (int j = 0; j < N; ++j) {
            const cplx w = std::polar(1.0, -two_pi * q * j / N);
            sy += y[j] * w;
            sa += column[j] * w;
        }
        yhat[q] = sy;
        symbol[q] = sa;
        symbol_max = std::max(symbol_max, std::abs(sa));
    }
    for (int q = 0; q < N; ++q) {
        if (std::abs(symbol[q]) <= 1e-13 * symbol_max)
            throw SingularSystemError("spline_favard: singular collocation system");
        yhat[q] /= symbol[q];
    }
    std::vector<double> coeffs(N);
    for (int i = 0; i < N; ++i) {
        cplx s = 0.0;
        for (int q = 0; q < N; ++q)
            s += yhat[q] * std::polar(1.0, two_pi * q * i / N);
        coeffs[i] = s.real() / N;
    }
    return PeriodicSpline(r - 1, std::move(coeffs));
}

SplineFavardResult spline_favard(const FunctionHandle& f, int n, int r, const Resolution& res)
{
    PeriodicSpline s = spline_interpolant(f, n, r);
    const int hint = std::max(f.degree_hint(), 4 * n);
    const double residual =
        sweep_maximum([&](double x) { return std::abs(f(x) - s(x)); }, res.grid_for(hint), res,
                      breakpoint_probes(f.breakpoints()))
            .value;
    return {std::move(s), residual, favard_descriptor(n, r)};
}

FavardApproximation favard_best_error(const FunctionHandle& f, int n, int r, const MinimaxOptions& options)
{
    MinimaxResult best = trig_minimax(f, n - 1, options);
    const FunctionHandle tau = FunctionHandle::from_trig(best.approximant, "tau*");
    PeriodicSpline s = spline_interpolant(tau, n, r);
    const int hint = std::max(f.degree_hint(), 4 * n);
    const double error = sweep_maximum([&](double x) { return std::abs(f(x) - s(x)); },
                                       options.resolution.grid_for(hint), options.resolution,
                                       breakpoint_probes(f.breakpoints()))
                             .value;
    return {std::move(best), std::move(s), error};
}

// ------- Bernstein-type inequalities ------- //

TrigPolynomial normalize_peak(const TrigPolynomial& tau, const Resolution& res)
{
    const FunctionHandle f = FunctionHandle::from_trig(tau);
    const SupPoint top = locate_max(f, res);
    const SupPoint abs_top = locate_sup(f, res);
    if (!(abs_top.value > 0.0))
        throw NormalizationError("normalize_peak: zero polynomial");
    const double sign = top.value >= abs_top.value ? 1.0 : -1.0;
    return tau * (sign / abs_top.value);
}

SbsCheck sbs_pointwise_check(const TrigPolynomial& tau, int n, int r, double t, const Resolution& res)
{
    if (n < 1 || r < 1)
        throw DomainError("sbs_pointwise_check: n and r must be positive");
    if (tau.true_degree() > n)
        throw DomainError("sbs_pointwise_check: tau must lie in T_n");
    if (!(t > 0.0 && t < two_pi / n))
        throw DomainError("sbs_pointwise_check: t must lie in (0, 2pi/n)");
    const FunctionHandle f = FunctionHandle::from_trig(tau, "tau");
    const SupPoint top = locate_max(f, res);
    const double norm = sup_norm(f, res);
    if (std::abs(top.value - 1.0) > 1e-8 || std::abs(norm - 1.0) > 1e-8)
        throw NormalizationError("sbs_pointwise_check: tau must satisfy |tau| = tau(x0) = 1");
    const SmoothingKernelPower chi = chi_power(t, r);
    const FunctionHandle cn = FunctionHandle::from_trig(TrigPolynomial::cosine(n), "c_n");
    return {convolve_periodic(f, chi, top.x), convolve_periodic(cn, chi, 0.0), top.x};
}

double bns_max_step(int n, int k)
{
    if (n < 1 || k < 1)
        throw DomainError("bns_ratio: empty admissible step range");
    return std::min(two_pi / n, pi / k * (1.0 - 1e-9));
}

BnsCheck bns_ratio(const TrigPolynomial& tau, int n, int k, double h, const Resolution& res)
{
    const double h_max = bns_max_step(n, k);
    if (tau.true_degree() > n)
        throw DomainError("bns_ratio: tau must lie in T_n");
    if (!(h > 0.0 && h <= h_max))
        throw DomainError("bns_ratio: h outside the admissible range");
    const WParams p(k, h);
    const double lhs = sup_norm(derivative(tau, 2 * k), res);
    const double rhs = std::pow(static_cast<double>(n), 2 * k) * w_norm(tau, p, res) / w_multiplier(n, p);
    return {lhs, rhs};
}

} // namespace smoothkit

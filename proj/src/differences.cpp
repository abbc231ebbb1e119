#include "smoothkit/differences.hpp"

#include "smoothkit/error.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace smoothkit {

namespace {

// Neumaier's compensated sum; orders of 32 and up carry weights beyond 2^53.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            compensation_ += (sum_ - t) + v;
        else
            compensation_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

std::vector<BigInt> pascal_row(int n)
{
    std::vector<BigInt> row(n + 1);
    row[0] = 1;
    for (int m = 1; m <= n; ++m)
        row[m] = row[m - 1] * (n - m + 1) / m;
    return row;
}

const std::vector<BigInt>& cached_row(int n)
{
    static std::mutex mutex;
    static std::map<int, std::vector<BigInt>> rows;
    std::lock_guard lock(mutex);
    auto it = rows.find(n);
    if (it == rows.end())
        it = rows.emplace(n, pascal_row(n)).first;
    return it->second;
}

double to_double(const BigInt& v)
{
    return v.convert_to<double>();
}

const std::vector<double>& signed_weights(int r)
{
    static std::mutex mutex;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(r);
    if (it == cache.end()) {
        std::vector<double> w(r + 1);
        const auto& row = pascal_row(r);
        for (int j = 0; j <= r; ++j)
            w[j] = (j % 2 == 0 ? 1.0 : -1.0) * to_double(row[j]);
        it = cache.emplace(r, std::move(w)).first;
    }
    return it->second;
}

} // namespace

BigInt binomial(int n, int m)
{
    if (n < 0)
        throw DomainError("binomial: negative n");
    if (m < 0 || m > n)
        return 0;
    if (n > 2 * max_half_order)
        return pascal_row(n)[m];
    return cached_row(n)[m];
}

double binomial_double(int n, int m)
{
    return to_double(binomial(n, m));
}

const std::vector<double>& central_ratios(int k)
{
    if (k < 1 || k > max_half_order)
        throw DomainError("central_ratios: k out of range");
    static std::mutex mutex;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(k);
    if (it == cache.end()) {
        using Float = boost::multiprecision::cpp_bin_float_50;
        const auto& row = pascal_row(2 * k);
        const Float centre(row[k]);
        std::vector<double> a(k + 1);
        for (int j = 0; j <= k; ++j)
            a[j] = static_cast<double>(Float(row[k + j]) / centre);
        it = cache.emplace(k, std::move(a)).first;
    }
    return it->second;
}

double forward_difference(const FunctionHandle& f, int r, double h, double x)
{
    if (r < 1)
        throw DomainError("forward_difference: order must be positive");
    const auto& w = signed_weights(r);
    if (r < 32) {
        double s = 0.0;
        for (int j = 0; j <= r; ++j)
            s += w[j] * f(wrap_angle(x + j * h));
        return s;
    }
    CompensatedSum s;
    for (int j = 0; j <= r; ++j)
        s.add(w[j] * f(wrap_angle(x + j * h)));
    return s.value();
}

double central_difference(const FunctionHandle& f, int k, double t, double x)
{
    if (k < 1 || k > max_half_order)
        throw DomainError("central_difference: k out of range");
    const auto& w = signed_weights(2 * k); // w[l] = (-1)^l C(2k, l), l = k + j
    const double sign_k = k % 2 == 0 ? 1.0 : -1.0;
    // (-1)^j C(2k,k+j) = (-1)^k w[k+j]
    if (k < 16) {
        double s = 0.0;
        for (int j = -k; j <= k; ++j)
            s += w[k + j] * f(wrap_angle(x + j * t));
        return sign_k * s;
    }
    CompensatedSum s;
    for (int j = -k; j <= k; ++j)
        s.add(w[k + j] * f(wrap_angle(x + j * t)));
    return sign_k * s.value();
}

// ------- modulus of smoothness ------- //

ModulusEvaluator::ModulusEvaluator(FunctionHandle f, int r, Resolution res)
    : f_(std::move(f)), r_(r), res_(res)
{
    if (r < 1)
        throw DomainError("omega: order must be positive");
    res_.validate();
}

double ModulusEvaluator::abs_difference(double h, double x) const
{
    return std::abs(forward_difference(f_, r_, h, x));
}

double ModulusEvaluator::operator()(double delta)
{
    if (!(delta >= 0.0))
        throw DomainError("omega: delta must be non-negative");
    double best = 0.0;
    for (const auto& c : found_)
        if (c.h <= delta)
            best = std::max(best, c.value);
    if (delta == 0.0)
        return best;

    constexpr int h_count = 256;
    const int M = res_.grid_for(f_.degree_hint());
    const double dx = two_pi / M, dh = delta / h_count;

    // Row maxima over x for each step size.
    std::vector<Cell> rows;
    rows.reserve(h_count);
    for (int i = 1; i <= h_count; ++i) {
        const double h = i == h_count ? delta : dh * i;
        Cell row{-1.0, h, 0.0};
        for (int m = 0; m < M; ++m) {
            const double v = abs_difference(h, dx * m);
            if (v > row.value)
                row = {v, h, dx * m};
        }
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Cell& a, const Cell& b) { return a.value > b.value; });

    constexpr std::size_t refined_cells = 4;
    Cell top = rows.front();
    for (std::size_t c = 0; c < std::min(refined_cells, rows.size()); ++c) {
        Cell cell = rows[c];
        for (int round = 0; round < 3; ++round) {
            const double h = cell.h;
            const auto along_x = [&](double x) { return abs_difference(h, x); };
            const SupPoint px = refine_maximum(along_x, cell.x - dx, cell.x, cell.x + dx, cell.value,
                                               res_.refine_tol, res_.max_refine_iters);
            if (px.value > cell.value)
                cell = {px.value, h, px.x};
            if (cell.h < delta) {
                const double x = cell.x;
                const auto along_h = [&](double s) { return abs_difference(s, x); };
                const double lo = std::max(cell.h - dh, 0.0), hi = std::min(cell.h + dh, delta);
                const SupPoint ph = refine_maximum(along_h, lo, cell.h, hi, cell.value, res_.refine_tol,
                                                   res_.max_refine_iters);
                if (ph.value > cell.value && ph.x <= delta)
                    cell = {ph.value, ph.x, x};
            }
        }
        if (cell.value > top.value)
            top = cell;
    }
    found_.push_back(top);
    return std::max(best, top.value);
}

double omega(const FunctionHandle& f, int r, double delta, const Resolution& res)
{
    ModulusEvaluator eval(f, r, res);
    return eval(delta);
}

} // namespace smoothkit

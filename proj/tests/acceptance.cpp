#include "smoothkit/best_approx.hpp"
#include "smoothkit/harness.hpp"
#include "smoothkit/kernels.hpp"
#include "smoothkit/w_functional.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace smoothkit;

namespace {

constexpr std::uint64_t seed = 7;

// Pinned tolerances.
constexpr double favard_low_tol = 1e-12;
constexpr double favard_limit_tol = 1e-11;
constexpr double lambda_l1_tol = 1e-10;
constexpr double lemma1_tol = 1e-8;
constexpr double path_tol = 1e-9;
constexpr double prop22_tol = 1e-8;
constexpr double eq1_tol = 1e-6;
constexpr double eq2_spread = 4.0;
constexpr double theorem1_tol = 1e-8;
constexpr double theorem1_equality_tol = 1e-10;
constexpr double sbs_tol = 1e-9;
constexpr double spline_bound_slack = 1e-6;
constexpr double doubling_band = 0.2;
constexpr double minimax_harmonic_tol = 1e-6;
constexpr double minimax_square_tol = 1e-4;
constexpr double minimax_exact_tol = 1e-10;
constexpr double theorem2_lo = 0.01;
constexpr double theorem2_hi = 100.0;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

std::size_t failures(const std::vector<Report>& rows)
{
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const Report& r) { return !r.pass; }));
}

std::string row_summary(const std::vector<Report>& rows)
{
    return std::to_string(rows.size()) + " rows, " + std::to_string(failures(rows)) + " violations";
}

Outcome favard_constants()
{
    const double e1 = std::abs(favard_constant(1) - pi / 2);
    const double e2 = std::abs(favard_constant(2) - pi * pi / 8);
    const double e40 = std::abs(favard_constant(40) - 4 / pi);
    return {e1 <= favard_low_tol && e2 <= favard_low_tol && e40 <= favard_limit_tol,
            fmt("|K1-pi/2|=%.2e |K2-pi^2/8|=%.2e |K40-4/pi|=%.2e", e1, e2, e40)};
}

Outcome kernel_certification()
{
    int bad = 0;
    double worst_l1 = 0.0;
    for (int k = 1; k <= 30; ++k) {
        if (!check_lambda_bounds(lambda_vertices(k)).all())
            ++bad;
        const double l1 = lambda_l1_norm(k);
        worst_l1 = std::max(worst_l1, l1);
        if (l1 > 2.0 + lambda_l1_tol)
            ++bad;
    }
    return {bad == 0, "k=1..30, " + std::to_string(bad) + " failed checks, max l1=" + fmt("%.12f", worst_l1)};
}

Outcome lemma1()
{
    const auto corpus = gen_corpus(extended_corpus(200, 6, seed), seed);
    SuiteParams p = default_params("lemma1");
    p.k_lo = 1;
    p.k_hi = 8;
    p.h_grid_size = 32;
    p.tolerance = lemma1_tol;
    p.seed = seed;
    const auto rows = run_suite("lemma1", p, corpus);
    return {failures(rows) == 0 && corpus.size() >= 200,
            std::to_string(corpus.size()) + " functions, " + row_summary(rows) + ", max W*/|f|="
                + fmt("%.6f", empirical_constant(rows))};
}

Outcome path_equivalence()
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    int evaluations = 0;
    for (int i = 0; i < 100; ++i) {
        const TrigPolynomial tau = random_trig_polynomial(1 + i % 12, static_cast<std::uint64_t>(i + 1));
        const FunctionHandle f = FunctionHandle::from_trig(tau);
        for (int k = 1; k <= 8; ++k) {
            const WParams p(k, (0.02 + 0.97 * unit(rng)) * pi / k);
            const TrigPolynomial w = apply_w_multiplier(tau, p);
            for (int j = 0; j < 3; ++j) {
                const double x = two_pi * unit(rng);
                const double a = w_pointwise(f, p, x);
                const double b = w_kernel_path(f, p, x);
                const double c = w(x);
                worst = std::max({worst, std::abs(a - b), std::abs(a - c), std::abs(b - c)});
                ++evaluations;
            }
        }
    }
    return {worst <= path_tol, std::to_string(evaluations) + " points, max disagreement " + fmt("%.2e", worst)};
}

Outcome suite_on_default(const std::string& name, double tol)
{
    const auto corpus = gen_corpus(default_corpus(), seed);
    SuiteParams p = default_params(name);
    p.tolerance = tol;
    p.seed = seed;
    const auto rows = run_suite(name, p, corpus);
    return {!rows.empty() && failures(rows) == 0, row_summary(rows)};
}

Outcome eq2_scaling()
{
    SuiteParams p = default_params("eq2");
    p.k_lo = 1;
    p.k_hi = 12;
    p.n_values = {16};
    p.seed = seed;
    const auto rows = run_suite("eq2", p, {});
    double spread = NAN;
    for (const auto& r : rows)
        if (r.case_id.find("/spread") != std::string::npos)
            spread = r.lhs;
    return {spread <= eq2_spread && failures(rows) == 0, fmt("max/min of r_k over k=1..12 is %.6f", spread)};
}

Outcome theorem1()
{
    SuiteParams p = default_params("theorem1");
    p.k_lo = 1;
    p.k_hi = 3;
    p.n_values = {2, 4, 8};
    p.h_grid_size = 16;
    p.case_count = 333;
    p.tolerance = theorem1_tol;
    p.seed = seed;
    const auto rows = run_suite("theorem1", p, {});
    double equality = 0.0;
    std::set<std::string> ids;
    for (const auto& r : rows) {
        ids.insert(r.case_id + "@" + std::to_string(r.n));
        if (r.case_id.rfind("high_harmonic", 0) == 0)
            equality = std::max(equality, std::abs(r.margin) / r.rhs);
    }
    return {failures(rows) == 0 && equality <= theorem1_equality_tol,
            std::to_string(ids.size()) + " polynomials, " + row_summary(rows) + ", c_n relative gap "
                + fmt("%.2e", equality)};
}

Outcome sbs()
{
    SuiteParams p = default_params("sbs");
    p.k_lo = 1;
    p.k_hi = 6;
    p.n_values = {2, 4, 8};
    p.case_count = 66;
    p.h_grid_size = 16;
    p.tolerance = sbs_tol;
    p.seed = seed;
    const auto rows = run_suite("sbs", p, {});
    std::string detail = row_summary(rows);
    double worst = 0.0;
    std::set<int> orders;
    for (const auto& r : rows)
        if (!r.pass) {
            orders.insert(r.k);
            worst = std::min(worst, r.margin);
        }
    if (!orders.empty()) {
        detail += ", failing r:";
        for (int r : orders)
            detail += " " + std::to_string(r);
        detail += fmt(", worst margin %.3e", worst);
    }
    return {failures(rows) == 0, detail};
}

Outcome spline_favard_check()
{
    std::vector<TrigPolynomial> corpus;
    std::vector<int> degrees;
    for (int d = 1; d <= 8; ++d)
        for (std::uint64_t s = 1; s <= 2; ++s) {
            corpus.push_back(random_trig_polynomial(d, s));
            degrees.push_back(d);
        }
    for (int m = 1; m <= 8; ++m) {
        corpus.push_back(TrigPolynomial::cosine(m));
        degrees.push_back(m);
    }
    const int ns[] = {8, 16, 32};
    int bound_fail = 0, doubling_fail = 0, doubling_checks = 0;
    double worst_ratio = 0.0, lo = 1e9, hi = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const FunctionHandle f = FunctionHandle::from_trig(corpus[i]);
        for (int r : {2, 4}) {
            const double dr = sup_norm(derivative(corpus[i], r));
            double previous = 0.0;
            for (int n : ns) {
                const double res = spline_favard(f, n, r).residual;
                const double bound = favard_constant(r) * std::pow(n, -r) * dr;
                worst_ratio = std::max(worst_ratio, res / bound);
                if (res > bound * (1 + spline_bound_slack))
                    ++bound_fail;
                // Asymptotic regime only: degree at most n/4 for the coarsest n.
                if (previous > 0.0 && degrees[i] <= 2) {
                    const double scaled = res / previous * std::pow(2.0, r);
                    lo = std::min(lo, scaled);
                    hi = std::max(hi, scaled);
                    ++doubling_checks;
                    if (std::abs(scaled - 1.0) > doubling_band)
                        ++doubling_fail;
                }
                previous = res;
            }
        }
    }
    return {bound_fail == 0 && doubling_fail == 0 && doubling_checks > 0,
            std::to_string(corpus.size()) + " polynomials, max residual/bound " + fmt("%.4f", worst_ratio)
                + ", doubling ratio*2^r in " + fmt("[%.4f, %.4f]", lo, hi) + " over "
                + std::to_string(doubling_checks) + " pairs"};
}

Outcome minimax()
{
    double harmonic = 0.0, square = 0.0, exact = 0.0;
    for (int n = 1; n <= 8; ++n) {
        const auto r = trig_minimax(FunctionHandle::from_trig(TrigPolynomial::cosine(n)), n - 1);
        harmonic = std::max(harmonic, std::abs(r.error - 1.0));
    }
    for (int n = 1; n <= 6; ++n) {
        CorpusCase c = parse_case("step_sign_cos:n=" + std::to_string(n));
        const auto f = gen_corpus({c}, seed).front().f;
        square = std::max(square, std::abs(trig_minimax(f, n - 1).error - 1.0));
    }
    for (int n = 1; n <= 8; ++n) {
        const TrigPolynomial p = random_trig_polynomial(n - 1, static_cast<std::uint64_t>(n));
        exact = std::max(exact, trig_minimax(FunctionHandle::from_trig(p), n - 1).error);
    }
    return {harmonic <= minimax_harmonic_tol && square <= minimax_square_tol && exact <= minimax_exact_tol,
            fmt("|E(c_n)-1|=%.2e |E(sign cos)-1|=%.2e E(T_{n-1})=%.2e", harmonic, square, exact)};
}

Outcome theorem2_order()
{
    SuiteParams p = default_params("theorem2");
    p.k_lo = 1;
    p.k_hi = 6;
    p.n_values.clear();
    p.seed = seed;
    const auto rows = run_suite("theorem2", p, {});
    double lo = 1e300, hi = 0.0;
    for (const auto& r : rows) {
        if (r.case_id.find("/sharp_upper") == std::string::npos)
            continue;
        lo = std::min(lo, r.lhs);
        hi = std::max(hi, r.lhs);
    }
    return {!rows.empty() && failures(rows) == 0 && lo >= theorem2_lo && hi <= theorem2_hi,
            row_summary(rows) + fmt(", ratio range [%.4f, %.4f]", lo, hi)};
}

std::string full_run()
{
    std::string out;
    for (const auto& name : suite_names()) {
        SuiteParams p = default_params(name);
        p.seed = seed;
        std::ostringstream csv;
        write_csv(csv, run_suite(name, p, gen_corpus(default_corpus(), seed)));
        out += csv.str();
    }
    return out;
}

Outcome determinism()
{
    const std::string a = full_run();
    const std::string b = full_run();
    return {a == b && !a.empty(), std::to_string(suite_names().size()) + " suites, " + std::to_string(a.size())
                                      + " bytes, identical=" + (a == b ? "yes" : "no")};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "Favard constants", favard_constants},
        {2, "Lambda kernel certification", kernel_certification},
        {3, "W* bounded by 3|f|", lemma1},
        {4, "W evaluation paths agree", path_equivalence},
        {5, "W <= W* <= omega_2k / C(2k,k)", [] { return suite_on_default("prop22", prop22_tol); }},
        {6, "high-pass equivalence with c_alpha", [] { return suite_on_default("eq1", eq1_tol); }},
        {7, "W scaling on c_n", eq2_scaling},
        {8, "Bernstein-type bound via W", theorem1},
        {9, "smoothed peak inequality", sbs},
        {10, "spline Favard bound and order", spline_favard_check},
        {11, "minimax engine", minimax},
        {12, "Favard-Jackson order on sign(cos nt)", theorem2_order},
        {13, "determinism", determinism},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s: %s (%s) [%.1fs]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!o.pass)
            ++failed;
    }
    return failed == 0 ? 0 : 1;
}

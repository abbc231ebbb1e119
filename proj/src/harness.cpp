#include "smoothkit/harness.hpp"

#include "smoothkit/best_approx.hpp"
#include "smoothkit/differences.hpp"
#include "smoothkit/error.hpp"
#include "smoothkit/kernels.hpp"
#include "smoothkit/w_functional.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

namespace smoothkit {

// ------- corpus ------- //

namespace {

struct KindEntry {
    CorpusCase::Kind kind;
    const char* name;
};

constexpr KindEntry kinds[] = {
    {CorpusCase::Kind::step_sign_cos, "step_sign_cos"},
    {CorpusCase::Kind::random_trig, "random_trig"},
    {CorpusCase::Kind::high_harmonic, "high_harmonic"},
    {CorpusCase::Kind::highpass_random, "highpass_random"},
    {CorpusCase::Kind::smooth_named, "smooth_named"},
};

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::mt19937_64 seeded_engine(std::uint64_t a, std::uint64_t b)
{
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

// 53 random bits mapped to [0, 1).
double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double parse_number(const std::string& key, const std::string& value)
{
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size() || !std::isfinite(v))
        throw DomainError("case field '" + key + "': not a number: " + value);
    return v;
}

long long parse_integer(const std::string& key, const std::string& value)
{
    long long v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw DomainError("case field '" + key + "': not an integer: " + value);
    return v;
}

TrigPolynomial random_coefficients(int degree, int cutoff, std::mt19937_64& rng)
{
    std::vector<double> a(degree + 1, 0.0), b(degree, 0.0);
    for (int m = cutoff; m <= degree; ++m) {
        a[m] = 2.0 * unit_draw(rng) - 1.0;
        if (m > 0)
            b[m - 1] = 2.0 * unit_draw(rng) - 1.0;
    }
    return TrigPolynomial(std::move(a), std::move(b));
}

TrigPolynomial unit_norm(const TrigPolynomial& p)
{
    const double s = sup_norm(p);
    if (!(s > 0.0))
        throw DomainError("random polynomial vanished");
    return p * (1.0 / s);
}

CorpusFunction make_step(const CorpusCase& c)
{
    const int n = c.n;
    const double phase = c.phase;
    std::vector<double> jumps;
    for (int i = 0; i < 2 * n; ++i)
        jumps.push_back(wrap_angle(phase + (2 * i + 1) * pi / (2 * n)));
    std::sort(jumps.begin(), jumps.end());
    FunctionHandle f([n, phase](double x) { return std::cos(n * (x - phase)) >= 0.0 ? 1.0 : -1.0; }, case_id(c));
    f = f.with_breakpoints(jumps, 0).with_degree_hint(n);
    return {c, case_id(c), f, jumps};
}

CorpusFunction make_named(const CorpusCase& c)
{
    const std::string id = case_id(c);
    if (c.name == "exp_cos")
        return {c, id, FunctionHandle([](double x) { return std::exp(std::cos(x)); }, id).with_degree_hint(16), {}};
    if (c.name == "inv_two_plus_cos")
        return {c, id,
                FunctionHandle([](double x) { return 1.0 / (2.0 + std::cos(x)); }, id).with_degree_hint(24), {}};
    if (c.name == "triangle_wave") {
        FunctionHandle f([](double x) { return 1.0 - 2.0 * std::abs(wrap_angle(x) - pi) / pi; }, id);
        return {c, id, f.with_breakpoints({0.0, pi}, 1).with_degree_hint(8), {}};
    }
    if (c.name == "abs_sin") {
        FunctionHandle f([](double x) { return std::abs(std::sin(x)); }, id);
        return {c, id, f.with_breakpoints({0.0, pi}).with_degree_hint(8), {}};
    }
    if (c.name == "cos_sin")
        return {c, id,
                FunctionHandle([](double x) { return std::cos(2.0 * std::sin(x)); }, id).with_degree_hint(16), {}};
    if (c.name == "one")
        return {c, id, FunctionHandle::from_trig(TrigPolynomial::constant(1.0), id), {}};
    throw DomainError("unknown smooth function: " + c.name);
}

} // namespace

const std::vector<std::string>& smooth_names()
{
    static const std::vector<std::string> names{"exp_cos", "inv_two_plus_cos", "triangle_wave", "abs_sin", "cos_sin",
                                                "one"};
    return names;
}

std::string kind_name(CorpusCase::Kind kind)
{
    for (const auto& e : kinds)
        if (e.kind == kind)
            return e.name;
    throw DomainError("unknown corpus kind");
}

std::string case_id(const CorpusCase& c)
{
    std::string s = kind_name(c.kind) + ":";
    switch (c.kind) {
    case CorpusCase::Kind::step_sign_cos:
        return s + "n=" + std::to_string(c.n) + ",phase=" + shortest(c.phase);
    case CorpusCase::Kind::random_trig:
        return s + "degree=" + std::to_string(c.degree) + ",seed=" + std::to_string(c.seed);
    case CorpusCase::Kind::high_harmonic:
        return s + "n=" + std::to_string(c.n) + ",amplitude=" + shortest(c.amplitude) + ",phase=" + shortest(c.phase);
    case CorpusCase::Kind::highpass_random:
        return s + "n=" + std::to_string(c.n) + ",degree=" + std::to_string(c.degree) + ",seed=" + std::to_string(c.seed);
    case CorpusCase::Kind::smooth_named:
        return s + "name=" + c.name;
    }
    return s;
}

CorpusCase parse_case(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    CorpusCase c;
    bool found = false;
    for (const auto& e : kinds)
        if (head == e.name) {
            c.kind = e.kind;
            found = true;
        }
    if (!found)
        throw DomainError("unknown corpus kind: " + head);
    if (colon != std::string::npos) {
        std::stringstream fields(text.substr(colon + 1));
        std::string item;
        while (std::getline(fields, item, ',')) {
            if (item.empty())
                continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw DomainError("case field without '=': " + item);
            const std::string key = item.substr(0, eq);
            const std::string value = item.substr(eq + 1);
            if (key == "n")
                c.n = static_cast<int>(parse_integer(key, value));
            else if (key == "degree")
                c.degree = static_cast<int>(parse_integer(key, value));
            else if (key == "phase")
                c.phase = parse_number(key, value);
            else if (key == "amplitude")
                c.amplitude = parse_number(key, value);
            else if (key == "seed")
                c.seed = static_cast<std::uint64_t>(parse_integer(key, value));
            else if (key == "name")
                c.name = value;
            else
                throw DomainError("unknown case field: " + key);
        }
    }
    validate_case(c);
    return c;
}

void validate_case(const CorpusCase& c)
{
    switch (c.kind) {
    case CorpusCase::Kind::step_sign_cos:
    case CorpusCase::Kind::high_harmonic:
        if (c.n < 1 || c.n > 4096)
            throw DomainError("case '" + case_id(c) + "': n must lie in [1, 4096]");
        break;
    case CorpusCase::Kind::random_trig:
        if (c.degree < 0 || c.degree > 4096)
            throw DomainError("case '" + case_id(c) + "': degree must lie in [0, 4096]");
        break;
    case CorpusCase::Kind::highpass_random:
        if (c.n < 1 || c.degree < c.n || c.degree > 4096)
            throw DomainError("case '" + case_id(c) + "': need 1 <= n <= degree <= 4096");
        break;
    case CorpusCase::Kind::smooth_named:
        if (std::find(smooth_names().begin(), smooth_names().end(), c.name) == smooth_names().end())
            throw DomainError("unknown smooth function: " + c.name);
        break;
    }
}

TrigPolynomial random_trig_polynomial(int degree, std::uint64_t seed, int cutoff)
{
    if (degree < cutoff || cutoff < 0)
        throw DomainError("random_trig_polynomial: need 0 <= cutoff <= degree");
    auto rng = seeded_engine(seed, static_cast<std::uint64_t>(degree) << 32 | static_cast<std::uint32_t>(cutoff));
    return unit_norm(random_coefficients(degree, cutoff, rng));
}

std::vector<CorpusFunction> gen_corpus(const std::vector<CorpusCase>& cases, std::uint64_t seed)
{
    std::vector<CorpusFunction> out;
    out.reserve(cases.size());
    for (const auto& c : cases) {
        validate_case(c);
        const std::string id = case_id(c);
        switch (c.kind) {
        case CorpusCase::Kind::step_sign_cos:
            out.push_back(make_step(c));
            break;
        case CorpusCase::Kind::high_harmonic: {
            std::vector<double> a(c.n + 1, 0.0), b(c.n, 0.0);
            a[c.n] = c.amplitude * std::cos(c.n * c.phase);
            b[c.n - 1] = c.amplitude * std::sin(c.n * c.phase);
            out.push_back({c, id, FunctionHandle::from_trig(TrigPolynomial(std::move(a), std::move(b)), id), {}});
            break;
        }
        case CorpusCase::Kind::random_trig:
        case CorpusCase::Kind::highpass_random: {
            const int cutoff = c.kind == CorpusCase::Kind::highpass_random ? c.n : 0;
            auto rng = seeded_engine(seed, c.seed);
            const TrigPolynomial p = unit_norm(random_coefficients(c.degree, cutoff, rng));
            out.push_back({c, id, FunctionHandle::from_trig(p, id), {}});
            break;
        }
        case CorpusCase::Kind::smooth_named:
            out.push_back(make_named(c));
            break;
        }
    }
    return out;
}

std::vector<CorpusCase> default_corpus()
{
    using K = CorpusCase::Kind;
    std::vector<CorpusCase> cases(10);
    cases[0] = {K::step_sign_cos, 3, 0, 0.0, 1.0, 0, ""};
    cases[1] = {K::step_sign_cos, 5, 0, 0.37, 1.0, 0, ""};
    cases[2] = {K::random_trig, 1, 4, 0.0, 1.0, 1, ""};
    cases[3] = {K::random_trig, 1, 9, 0.0, 1.0, 2, ""};
    cases[4] = {K::high_harmonic, 7, 0, 0.0, 1.0, 0, ""};
    cases[5] = {K::highpass_random, 8, 12, 0.0, 1.0, 3, ""};
    cases[6] = {K::smooth_named, 1, 0, 0.0, 1.0, 0, "exp_cos"};
    cases[7] = {K::smooth_named, 1, 0, 0.0, 1.0, 0, "inv_two_plus_cos"};
    cases[8] = {K::smooth_named, 1, 0, 0.0, 1.0, 0, "triangle_wave"};
    cases[9] = {K::smooth_named, 1, 0, 0.0, 1.0, 0, "abs_sin"};
    return cases;
}

std::vector<CorpusCase> extended_corpus(int total, int step_count, std::uint64_t seed)
{
    using K = CorpusCase::Kind;
    if (total < 1 || step_count < 0)
        throw DomainError("extended_corpus: invalid sizes");
    auto rng = seeded_engine(seed, 0x5eed);
    std::vector<CorpusCase> cases;
    for (int i = 0; i < step_count && static_cast<int>(cases.size()) < total; ++i) {
        const int n = 1 + i % 6;
        cases.push_back({K::step_sign_cos, n, 0, two_pi * unit_draw(rng), 1.0, 0, ""});
    }
    for (const auto& name : smooth_names())
        if (static_cast<int>(cases.size()) < total && name != "one")
            cases.push_back({K::smooth_named, 1, 0, 0.0, 1.0, 0, name});
    std::uint64_t next_seed = 1;
    for (int i = 0; static_cast<int>(cases.size()) < total; ++i) {
        switch (i % 4) {
        case 0:
        case 1:
            cases.push_back({K::random_trig, 1, 1 + static_cast<int>(rng() % 16), 0.0, 1.0, next_seed++, ""});
            break;
        case 2: {
            const int m = 1 + static_cast<int>(rng() % 24);
            cases.push_back({K::high_harmonic, m, 0, two_pi * unit_draw(rng) / m, 1.0, 0, ""});
            break;
        }
        default: {
            const int cutoff = 1 + static_cast<int>(rng() % 12);
            cases.push_back({K::highpass_random, cutoff, cutoff + static_cast<int>(rng() % 8), 0.0, 1.0,
                             next_seed++, ""});
            break;
        }
        }
    }
    return cases;
}

// ------- reports ------- //

void SuiteParams::validate() const
{
    if (k_lo < 1 || k_hi < k_lo || k_hi > max_half_order)
        throw DomainError("suite parameters: invalid k range");
    for (int n : n_values)
        if (n < 1)
            throw DomainError("suite parameters: n must be positive");
    for (double a : alphas)
        if (!(a > 1.0))
            throw DomainError("suite parameters: every alpha must exceed 1");
    if (h_grid_size < 1 || case_count < 0)
        throw DomainError("suite parameters: invalid grid size or case count");
    if (!(tolerance >= 0.0))
        throw DomainError("suite parameters: negative tolerance");
    resolution.validate();
}

SuiteParams default_params(const std::string& suite)
{
    SuiteParams p;
    if (suite == "prop21") {
        p.h_grid_size = 8;
    } else if (suite == "prop22") {
        p.h_grid_size = 4;
    } else if (suite == "eq1") {
        p.n_values = {4, 8, 16};
        p.case_count = 50;
        p.tolerance = 1e-6;
    } else if (suite == "eq2") {
        p.k_hi = 12;
        p.n_values = {16};
    } else if (suite == "lemma1") {
        p.h_grid_size = 32;
    } else if (suite == "theorem1") {
        p.k_hi = 3;
        p.n_values = {2, 4, 8};
        p.h_grid_size = 16;
    } else if (suite == "chain3") {
        p.k_hi = 3;
        p.n_values = {8, 16};
    } else if (suite == "theorem2") {
        p.k_hi = 6;
        p.n_values = {8, 16};
    } else if (suite == "sbs") {
        p.k_hi = 6;
        p.n_values = {2, 4, 8};
        p.tolerance = 1e-9;
    }
    return p;
}

void finalize(Report& r, double tolerance)
{
    r.margin = r.rhs - r.lhs;
    if (r.denominator && !r.empirical_constant) {
        if (*r.denominator > 0.0)
            r.empirical_constant = r.lhs / *r.denominator;
        else if (r.lhs == 0.0)
            r.empirical_constant = 0.0;
    }
    r.pass = r.margin >= -tolerance * std::max(1.0, std::abs(r.rhs));
}

double empirical_constant(const std::vector<Report>& reports)
{
    if (reports.empty())
        throw DomainError("empirical_constant: no rows");
    double best = 0.0;
    for (const auto& r : reports) {
        double v = 0.0;
        if (r.empirical_constant)
            v = *r.empirical_constant;
        else if (r.denominator && *r.denominator > 0.0)
            v = r.lhs / *r.denominator;
        else
            throw DomainError("empirical_constant: row '" + r.case_id + "' has no positive denominator");
        best = std::max(best, v);
    }
    return best;
}

// ------- parallel execution ------- //

int worker_count()
{
    int n = 0;
    if (const char* env = std::getenv("SMOOTHKIT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0)
            n = static_cast<int>(std::min(v, 256L));
    }
    if (n == 0)
        n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task)
{
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    std::vector<std::exception_ptr> errors(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

// ------- suites ------- //

namespace {

using Rows = std::vector<Report>;

template <class Task>
Rows collect(std::size_t count, Task&& task)
{
    std::vector<Rows> parts(count);
    parallel_for(count, [&](std::size_t i) { parts[i] = task(i); });
    Rows out;
    for (auto& p : parts)
        out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    return out;
}

Report row(const std::string& suite, std::string id, int k, int n, std::optional<double> alpha,
           std::optional<double> h, double lhs, double rhs)
{
    Report r;
    r.suite = suite;
    r.case_id = std::move(id);
    r.k = k;
    r.n = n;
    r.alpha = alpha;
    r.h = h;
    r.lhs = lhs;
    r.rhs = rhs;
    return r;
}

double norm_of(const CorpusFunction& c, const Resolution& res)
{
    if (const auto* t = c.f.trig())
        return sup_norm(*t, res);
    return sup_norm(c.f, res);
}

// Multiplier path for exact polynomials, kernel path otherwise.
double w_of(const CorpusFunction& c, const WParams& p, const Resolution& res)
{
    if (const auto* t = c.f.trig())
        return w_norm(*t, p, res);
    return w_norm(c.f, p, res, WPath::kernel);
}

std::vector<double> w_star_of(const CorpusFunction& c, int k, std::span<const double> deltas, const Resolution& res)
{
    if (const auto* t = c.f.trig())
        return w_star_profile(*t, k, deltas, res);
    return w_star_profile(c.f, k, deltas, res, WPath::kernel);
}

// δ_i = (π/k) i/(H+1), i = 1..H.
std::vector<double> step_grid(int k, int count)
{
    std::vector<double> out;
    for (int i = 1; i <= count; ++i)
        out.push_back(pi / k * i / (count + 1));
    return out;
}

std::vector<int> k_values(const SuiteParams& p)
{
    std::vector<int> ks;
    for (int k = p.k_lo; k <= p.k_hi; ++k)
        ks.push_back(k);
    return ks;
}

std::vector<double> alphas_for(const SuiteParams& p, int n, int k)
{
    std::vector<double> out;
    for (double a : p.alphas)
        if (a > 1.0 && a < static_cast<double>(n) / k)
            out.push_back(a);
    std::sort(out.begin(), out.end());
    return out;
}

Rows run_prop21(const SuiteParams& p, const std::vector<CorpusFunction>& corpus)
{
    const auto ks = k_values(p);
    return collect(corpus.size() * ks.size(), [&](std::size_t idx) {
        const auto& c = corpus[idx / ks.size()];
        const int k = ks[idx % ks.size()];
        const auto deltas = step_grid(k, p.h_grid_size);
        const double x0 = locate_sup(c.f, p.resolution).x;
        const auto star = w_star_of(c, k, deltas, p.resolution);
        const auto sharp = w_sharp_profile(c.f, k, x0, deltas, p.resolution, WPath::kernel);
        Rows rows;
        for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
            rows.push_back(row("prop21", c.id + "/star", k, 0, std::nullopt, deltas[i], star[i], star[i + 1]));
            rows.push_back(row("prop21", c.id + "/sharp", k, 0, std::nullopt, deltas[i], sharp[i], sharp[i + 1]));
        }
        return rows;
    });
}

Rows run_prop22(const SuiteParams& p, const std::vector<CorpusFunction>& corpus)
{
    const auto ks = k_values(p);
    return collect(corpus.size() * ks.size(), [&](std::size_t idx) {
        const auto& c = corpus[idx / ks.size()];
        const int k = ks[idx % ks.size()];
        const auto deltas = step_grid(k, p.h_grid_size);
        const auto star = w_star_of(c, k, deltas, p.resolution);
        ModulusEvaluator omega_eval(c.f, 2 * k, p.resolution);
        const double centre = binomial_double(2 * k, k);
        Rows rows;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            const double w = w_of(c, WParams(k, deltas[i]), p.resolution);
            const double om = omega_eval(deltas[i]);
            rows.push_back(row("prop22", c.id + "/lower", k, 0, std::nullopt, deltas[i], w, star[i]));
            rows.push_back(row("prop22", c.id + "/upper", k, 0, std::nullopt, deltas[i], star[i], om / centre));
        }
        return rows;
    });
}

Rows run_eq1(const SuiteParams& p, const std::vector<CorpusFunction>& corpus)
{
    using K = CorpusCase::Kind;
    struct Witness {
        CorpusFunction g;
        int n;
    };
    std::vector<Witness> witnesses;
    for (int n : p.n_values) {
        std::vector<CorpusCase> cases;
        for (int m : {n, n + 1, 2 * n})
            cases.push_back({K::high_harmonic, m, 0, 0.0, 1.0, 0, ""});
        for (int i = 0; i < p.case_count; ++i)
            cases.push_back({K::highpass_random, n, n + i % (n + 1), 0.0, 1.0, static_cast<std::uint64_t>(i + 1), ""});
        for (auto& g : gen_corpus(cases, p.seed))
            witnesses.push_back({std::move(g), n});
        // Corpus polynomials that already vanish below n.
        for (const auto& c : corpus) {
            const auto* t = c.f.trig();
            if (!t || t->true_degree() < n)
                continue;
            bool high = true;
            for (int m = 0; m < n && m <= t->degree(); ++m)
                high = high && t->cos_coeff(m) == 0.0 && t->sin_coeff(m) == 0.0;
            if (high)
                witnesses.push_back({c, n});
        }
    }
    const double factor = 1.0 + pi * pi / 8.0;
    return collect(witnesses.size(), [&](std::size_t idx) {
        const auto& [g, n] = witnesses[idx];
        const TrigPolynomial& tau = *g.f.trig();
        const double norm = sup_norm(tau, p.resolution);
        Rows rows;
        for (int k : k_values(p)) {
            for (double alpha : alphas_for(p, n, k)) {
                const double h = alpha * pi / n;
                const double c_alpha = c_alpha_bound(alpha).secant;
                const double w = w_norm(tau, WParams(k, h), p.resolution);
                rows.push_back(row("eq1", g.id + "/lower", k, n, alpha, h, norm, c_alpha * w));
                rows.push_back(row("eq1", g.id + "/upper", k, n, alpha, h, c_alpha * w, c_alpha * factor * norm));
            }
        }
        return rows;
    });
}

Rows run_eq2(const SuiteParams& p, const std::vector<CorpusFunction>&)
{
    Rows rows;
    for (int n : p.n_values) {
        const TrigPolynomial g = TrigPolynomial::cosine(n);
        const std::string id = "high_harmonic:n=" + std::to_string(n) + ",amplitude=1,phase=0";
        const double norm = sup_norm(g, p.resolution);
        std::vector<double> ratios;
        for (int k : k_values(p)) {
            const double h = pi / n;
            if (!WParams::admissible(k, h))
                throw DomainError("eq2: step pi/n is inadmissible for k = " + std::to_string(k) + ", n = " +
                                  std::to_string(n));
            const double w = w_norm(g, WParams(k, h), p.resolution);
            Report r = row("eq2", id, k, n, 1.0, h, w, 6.0 / pi * norm);
            r.empirical_constant = norm / (std::sqrt(2.0 * k) * w);
            ratios.push_back(*r.empirical_constant);
            rows.push_back(r);
        }
        if (ratios.size() > 1) {
            const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
            Report r = row("eq2", id + "/spread", 0, n, std::nullopt, std::nullopt, *hi / *lo, 4.0);
            rows.push_back(r);
        }
    }
    return rows;
}

Rows run_lemma1(const SuiteParams& p, const std::vector<CorpusFunction>& corpus)
{
    const auto ks = k_values(p);
    return collect(corpus.size() * ks.size(), [&](std::size_t idx) {
        const auto& c = corpus[idx / ks.size()];
        const int k = ks[idx % ks.size()];
        const auto deltas = step_grid(k, p.h_grid_size);
        const auto star = w_star_of(c, k, deltas, p.resolution);
        const double norm = norm_of(c, p.resolution);
        const auto top = std::max_element(star.begin(), star.end());
        Report r = row("lemma1", c.id, k, 0, std::nullopt, deltas[top - star.begin()], *top, 3.0 * norm);
        r.denominator = norm;
        return Rows{r};
    });
}

Rows run_theorem1(const SuiteParams& p, const std::vector<CorpusFunction>&)
{
    using K = CorpusCase::Kind;
    struct Item {
        CorpusFunction tau;
        int n;
    };
    std::vector<Item> items;
    for (int n : p.n_values) {
        std::vector<CorpusCase> cases{{K::high_harmonic, n, 0, 0.0, 1.0, 0, ""}};
        for (int i = 0; i < p.case_count; ++i)
            cases.push_back({K::random_trig, 1, n, 0.0, 1.0, static_cast<std::uint64_t>(i + 1), ""});
        for (auto& f : gen_corpus(cases, p.seed))
            items.push_back({std::move(f), n});
    }
    const auto ks = k_values(p);
    return collect(items.size(), [&](std::size_t idx) {
        const auto& [tau, n] = items[idx];
        Rows rows;
        for (int k : ks) {
            const double h_max = bns_max_step(n, k);
            std::optional<Report> worst;
            for (int j = 1; j <= p.h_grid_size; ++j) {
                const double h = h_max * j / p.h_grid_size;
                const BnsCheck b = bns_ratio(*tau.f.trig(), n, k, h, p.resolution);
                Report r = row("theorem1", tau.id, k, n, std::nullopt, h, b.lhs, b.rhs);
                const double rel = (b.rhs - b.lhs) / std::max(1.0, std::abs(b.rhs));
                if (!worst || rel < (worst->rhs - worst->lhs) / std::max(1.0, std::abs(worst->rhs)))
                    worst = r;
            }
            rows.push_back(*worst);
        }
        return rows;
    });
}

// ‖f - A_{n,r}(τ*)‖ for a precomputed τ*.
double favard_error(const CorpusFunction& c, const MinimaxResult& best, int n, int r, const Resolution& res)
{
    const FunctionHandle tau = FunctionHandle::from_trig(best.approximant, "tau*");
    const PeriodicSpline s = spline_interpolant(tau, n, r);
    const int hint = std::max(c.f.degree_hint(), 4 * n);
    return sweep_maximum([&](double x) { return std::abs(c.f(x) - s(x)); }, res.grid_for(hint), res,
                         breakpoint_probes(c.f.breakpoints()))
        .value;
}

MinimaxOptions minimax_options(const SuiteParams& p)
{
    MinimaxOptions o;
    o.resolution = p.resolution;
    return o;
}

Rows run_chain3(const SuiteParams& p, const std::vector<CorpusFunction>& corpus)
{
    const auto ks = k_values(p);
    const auto& ns = p.n_values;
    return collect(corpus.size() * ns.size(), [&](std::size_t idx) {
        const auto& c = corpus[idx / ns.size()];
        const int n = ns[idx % ns.size()];
        const MinimaxResult best = trig_minimax(c.f, n - 1, minimax_options(p));
        Rows rows;
        for (int k : ks) {
            const auto alphas = alphas_for(p, n, k);
            if (alphas.empty())
                continue;
            const double lhs = favard_error(c, best, n, 2 * k, p.resolution);
            const double favard = favard_constant(2 * k);
            for (double alpha : alphas) {
                const double h = alpha * pi / n;
                const WParams wp(k, h);
                const double w = w_of(c, wp, p.resolution);
                const double c_ka = favard / w_multiplier(n, wp);
                const double c_alpha = c_alpha_bound(alpha).secant;
                const double big_c = c_alpha * (1.0 + 3.0 * c_ka) + c_ka;
                Report r = row("chain3", c.id, k, n, alpha, h, lhs, big_c * w);
                r.denominator = w;
                rows.push_back(r);
            }
        }
        return rows;
    });
}

constexpr double order_floor = 0.01;
constexpr double order_ceiling = 100.0;

double order_scale(int r)
{
    return std::sqrt(static_cast<double>(r)) * std::ldexp(1.0, -r);
}

Rows run_theorem2(const SuiteParams& p, const std::vector<CorpusFunction>& corpus)
{
    const auto ks = k_values(p);
    const auto& ns = p.n_values;
    Rows rows = collect(corpus.size() * ns.size(), [&](std::size_t idx) {
        const auto& c = corpus[idx / ns.size()];
        const int n = ns[idx % ns.size()];
        const MinimaxResult best = trig_minimax(c.f, n - 1, minimax_options(p));
        Rows out;
        for (int k : ks) {
            const auto alphas = alphas_for(p, n, k);
            if (alphas.empty())
                continue;
            const int r = 2 * k;
            const double lhs = favard_error(c, best, n, r, p.resolution);
            ModulusEvaluator omega_eval(c.f, r, p.resolution);
            for (double alpha : alphas) {
                const double h = alpha * pi / n;
                const double om = omega_eval(h);
                const double denom = std::max(1.0 / ((alpha - 1.0) * (alpha - 1.0)), 1.0) * order_scale(r) * om;
                Report row_ = row("theorem2", c.id, k, n, alpha, h, lhs, order_ceiling * denom);
                row_.denominator = denom;
                out.push_back(row_);
            }
        }
        return out;
    });

    // Sharpness on sign(c_n) at α = 1.
    using K = CorpusCase::Kind;
    std::vector<CorpusCase> cases;
    for (int n : {3, 5})
        cases.push_back({K::step_sign_cos, n, 0, 0.0, 1.0, 0, ""});
    const auto steps = gen_corpus(cases, p.seed);
    Rows sharp = collect(steps.size(), [&](std::size_t idx) {
        const auto& c = steps[idx];
        const int n = c.spec.n;
        const double h = pi / n;
        const MinimaxResult best = trig_minimax(c.f, n - 1, minimax_options(p));
        Rows out;
        for (int k : ks) {
            const int r = 2 * k;
            const double e = favard_error(c, best, n, r, p.resolution);
            const double om = omega(c.f, r, h, p.resolution);
            const double ratio = e / (order_scale(r) * om);
            out.push_back(row("theorem2", c.id + "/sharp_upper", k, n, 1.0, h, ratio, order_ceiling));
            out.push_back(row("theorem2", c.id + "/sharp_lower", k, n, 1.0, h, order_floor, ratio));
        }
        return out;
    });
    rows.insert(rows.end(), sharp.begin(), sharp.end());
    return rows;
}

Rows run_sbs(const SuiteParams& p, const std::vector<CorpusFunction>&)
{
    using K = CorpusCase::Kind;
    struct Item {
        std::string id;
        TrigPolynomial tau;
        int n;
    };
    std::vector<Item> items;
    for (int n : p.n_values) {
        items.push_back({"high_harmonic:n=" + std::to_string(n) + ",amplitude=1,phase=0", TrigPolynomial::cosine(n), n});
        std::vector<CorpusCase> cases;
        for (int i = 0; i < p.case_count; ++i)
            cases.push_back({K::random_trig, 1, n, 0.0, 1.0, static_cast<std::uint64_t>(i + 1), ""});
        for (const auto& f : gen_corpus(cases, p.seed))
            items.push_back({f.id, normalize_peak(*f.f.trig(), p.resolution), n});
    }
    const auto rs = k_values(p);
    return collect(items.size(), [&](std::size_t idx) {
        const auto& item = items[idx];
        Rows rows;
        for (int r : rs) {
            std::optional<Report> worst;
            for (int j = 1; j <= p.h_grid_size; ++j) {
                const double t = two_pi / item.n * j / (p.h_grid_size + 1);
                const SbsCheck s = sbs_pointwise_check(item.tau, item.n, r, t, p.resolution);
                // Stored as lhs <= rhs: the c_n side must not exceed the τ side.
                Report rep = row("sbs", item.id, r, item.n, std::nullopt, t, s.rhs, s.lhs);
                if (!worst || rep.rhs - rep.lhs < worst->rhs - worst->lhs)
                    worst = rep;
            }
            rows.push_back(*worst);
        }
        return rows;
    });
}

const std::map<std::string, SuiteRunner>& registry()
{
    static const std::map<std::string, SuiteRunner> suites{
        {"prop21", run_prop21}, {"prop22", run_prop22},     {"eq1", run_eq1},
        {"eq2", run_eq2},       {"lemma1", run_lemma1},     {"theorem1", run_theorem1},
        {"chain3", run_chain3}, {"theorem2", run_theorem2}, {"sbs", run_sbs},
    };
    return suites;
}

double opt_key(const std::optional<double>& v)
{
    return v.value_or(-std::numeric_limits<double>::infinity());
}

} // namespace

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"prop21", "prop22",   "eq1",      "eq2", "lemma1",
                                                "theorem1", "chain3", "theorem2", "sbs"};
    return names;
}

bool has_suite(const std::string& name)
{
    return registry().count(name) > 0;
}

std::vector<Report> run_suite(const std::string& name, const SuiteParams& params,
                              const std::vector<CorpusFunction>& corpus)
{
    const auto it = registry().find(name);
    if (it == registry().end())
        throw DomainError("unknown suite: " + name);
    params.validate();
    std::vector<Report> rows = it->second(params, corpus);
    for (auto& r : rows)
        finalize(r, params.tolerance);
    std::stable_sort(rows.begin(), rows.end(), [](const Report& a, const Report& b) {
        return std::make_tuple(a.case_id, a.k, a.n, opt_key(a.alpha), opt_key(a.h)) <
               std::make_tuple(b.case_id, b.k, b.n, opt_key(b.alpha), opt_key(b.h));
    });
    return rows;
}

// ------- output ------- //

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<Report>& rows)
{
    out << "suite,case_id,k,n,alpha,h,lhs,rhs,margin,empirical_constant,pass\n";
    const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    const auto count = [](int v) { return v > 0 ? std::to_string(v) : std::string(); };
    for (const auto& r : rows) {
        out << r.suite << ',' << '"' << r.case_id << '"' << ',' << count(r.k) << ',' << count(r.n) << ','
            << opt(r.alpha) << ',' << opt(r.h) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
            << format_double(r.margin) << ',' << opt(r.empirical_constant) << ',' << (r.pass ? "true" : "false")
            << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<Report>& rows)
{
    using nlohmann::json;
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); };
    const auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : json(nullptr); };
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["suite"] = r.suite;
        j["case_id"] = r.case_id;
        j["params"] = {{"k", r.k > 0 ? json(r.k) : json(nullptr)},
                       {"n", r.n > 0 ? json(r.n) : json(nullptr)},
                       {"alpha", opt(r.alpha)},
                       {"h", opt(r.h)}};
        j["lhs"] = num(r.lhs);
        j["rhs"] = num(r.rhs);
        j["margin"] = num(r.margin);
        j["denominator"] = opt(r.denominator);
        j["empirical_constant"] = opt(r.empirical_constant);
        j["pass"] = r.pass;
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
}

} // namespace smoothkit

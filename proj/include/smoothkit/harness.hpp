#ifndef SMOOTHKIT_HARNESS_HPP
#define SMOOTHKIT_HARNESS_HPP

#include "smoothkit/periodic.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace smoothkit {

// ------- corpus ------- //

struct CorpusCase {
    enum class Kind { step_sign_cos, random_trig, high_harmonic, highpass_random, smooth_named };

    Kind kind = Kind::random_trig;
    /// step_sign_cos: frequency; high_harmonic: harmonic; highpass_random: cutoff.
    int n = 1;
    /// Top degree for random_trig and highpass_random.
    int degree = 0;
    double phase = 0.0;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
    /// smooth_named: one of smooth_names().
    std::string name;
};

const std::vector<std::string>& smooth_names();

std::string kind_name(CorpusCase::Kind kind);

/// Canonical "kind:key=value,..." form, also used as the report case id.
std::string case_id(const CorpusCase& c);

/// Inverse of case_id. Keys not given keep their defaults. Throws DomainError.
CorpusCase parse_case(const std::string& text);

/// Checks the fields a kind depends on. Throws DomainError.
void validate_case(const CorpusCase& c);

struct CorpusFunction {
    CorpusCase spec;
    std::string id;
    FunctionHandle f;
    /// Declared discontinuities (step functions only).
    std::vector<double> discontinuities;
};

/// Random kinds draw from mt19937_64 seeded by (seed, case seed); the same
/// inputs give bitwise-identical functions. random_trig and highpass_random
/// draw coefficients uniformly in [-1, 1] and are scaled to unit sup-norm.
std::vector<CorpusFunction> gen_corpus(const std::vector<CorpusCase>& cases, std::uint64_t seed);

/// Ten mixed cases: two step functions, three random or high-pass
/// polynomials, one high harmonic and four named functions.
std::vector<CorpusCase> default_corpus();

/// Large mixed corpus: `step_count` step functions with random phase, every
/// named smooth function, and random, high-harmonic and high-pass
/// polynomials up to `total` cases.
std::vector<CorpusCase> extended_corpus(int total, int step_count, std::uint64_t seed);

/// Uniform random polynomial of degree n in T_n, normalized to unit sup-norm.
TrigPolynomial random_trig_polynomial(int degree, std::uint64_t seed, int cutoff = 0);

// ------- reports ------- //

struct SuiteParams {
    int k_lo = 1;
    int k_hi = 4;
    std::vector<int> n_values;
    std::vector<double> alphas{1.1, 1.5, 2.0, 3.0};
    int h_grid_size = 8;
    double tolerance = 1e-8;
    int case_count = 20;
    std::uint64_t seed = 1;
    Resolution resolution{};

    /// Throws DomainError on empty or inverted ranges.
    void validate() const;
};

/// Suite defaults, overridden field by field by callers.
SuiteParams default_params(const std::string& suite);

struct Report {
    std::string suite;
    std::string case_id;
    int k = 0;     ///< 0 when not applicable
    int n = 0;     ///< 0 when not applicable
    std::optional<double> alpha;
    std::optional<double> h;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; ///< rhs - lhs
    std::optional<double> denominator;
    std::optional<double> empirical_constant; ///< lhs / denominator
    bool pass = false;
};

/// Fills margin, empirical_constant and pass from lhs, rhs, denominator.
/// pass holds when margin >= -tolerance * max(1, |rhs|).
void finalize(Report& r, double tolerance);

/// max over rows of lhs / denominator. Throws DomainError on an empty list
/// or a row without a positive denominator.
double empirical_constant(const std::vector<Report>& reports);

// ------- suites ------- //

using SuiteRunner = std::function<std::vector<Report>(const SuiteParams&, const std::vector<CorpusFunction>&)>;

/// Registered suite ids in a fixed order.
const std::vector<std::string>& suite_names();

bool has_suite(const std::string& name);

/// Runs one suite and returns its rows sorted by (case_id, k, n, alpha, h).
/// Throws DomainError for an unknown suite.
std::vector<Report> run_suite(const std::string& name, const SuiteParams& params,
                              const std::vector<CorpusFunction>& corpus);

/// Worker count from SMOOTHKIT_THREADS (0 or unset = hardware concurrency).
int worker_count();

/// Runs task(i) for i in [0, count) on worker_count() threads. Exceptions
/// from tasks are rethrown (the one with the lowest index wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

// ------- output ------- //

void write_csv(std::ostream& out, const std::vector<Report>& rows);
void write_json(std::ostream& out, const std::vector<Report>& rows);

/// %.17g, with "inf"/"nan" spelled out.
std::string format_double(double v);

} // namespace smoothkit

#endif // SMOOTHKIT_HARNESS_HPP

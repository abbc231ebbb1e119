#include "smoothkit/best_approx.hpp"
#include "smoothkit/differences.hpp"
#include "smoothkit/error.hpp"
#include "smoothkit/harness.hpp"
#include "smoothkit/kernels.hpp"
#include "smoothkit/w_functional.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace smoothkit;

namespace {

enum Exit { ok = 0, inequality_failure = 1, usage = 2, non_convergence = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_int_range(const std::string& text)
{
    const auto dots = text.find("..");
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const int v = std::stoi(text, &used);
            if (used != text.size())
                throw UsageError("bad range: " + text);
            return {v, v};
        }
        const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
        const int lo = std::stoi(a, &used);
        if (used != a.size())
            throw UsageError("bad range: " + text);
        const int hi = std::stoi(b, &used);
        if (used != b.size() || hi < lo)
            throw UsageError("bad range: " + text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("bad range: " + text);
    }
}

// "a..b" or "a,b,c".
std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    if (text.find("..") != std::string::npos) {
        const auto [lo, hi] = parse_int_range(text);
        for (int v = lo; v <= hi; ++v)
            out.push_back(v);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_int_range(item).first);
    if (out.empty())
        throw UsageError("empty list: " + text);
    return out;
}

std::vector<double> parse_double_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw UsageError("bad number: " + item);
        } catch (const std::logic_error&) {
            throw UsageError("bad number: " + item);
        }
    }
    if (out.empty())
        throw UsageError("empty list: " + text);
    return out;
}

CorpusCase case_from_json(const json& j)
{
    if (j.is_string())
        return parse_case(j.get<std::string>());
    if (!j.is_object() || !j.contains("kind"))
        throw UsageError("corpus entries must be strings or objects with a \"kind\"");
    std::string text = j.at("kind").get<std::string>() + ":";
    for (const auto& [key, value] : j.items()) {
        if (key == "kind")
            continue;
        text += key + "=" + (value.is_string() ? value.get<std::string>() : value.dump()) + ",";
    }
    return parse_case(text);
}

struct VerifyConfig {
    std::vector<CorpusCase> corpus = default_corpus();
    std::vector<std::string> suites;
    std::map<std::string, json> suite_overrides;
    std::optional<Resolution> resolution;
    std::map<std::string, double> tolerances;
    std::optional<std::uint64_t> seed;
};

VerifyConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("config is not valid JSON: " + std::string(e.what()));
    }
    VerifyConfig cfg;
    try {
        if (j.contains("corpus")) {
            cfg.corpus.clear();
            for (const auto& c : j.at("corpus"))
                cfg.corpus.push_back(case_from_json(c));
        }
        if (j.contains("suites")) {
            for (const auto& s : j.at("suites")) {
                if (s.is_string()) {
                    cfg.suites.push_back(s.get<std::string>());
                } else {
                    const std::string name = s.at("name").get<std::string>();
                    cfg.suites.push_back(name);
                    cfg.suite_overrides[name] = s;
                }
            }
        }
        if (j.contains("resolution")) {
            Resolution r;
            const auto& jr = j.at("resolution");
            r.grid_size = jr.value("grid_size", r.grid_size);
            r.refine_tol = jr.value("refine_tol", r.refine_tol);
            r.max_refine_iters = jr.value("max_refine_iters", r.max_refine_iters);
            cfg.resolution = r;
        }
        if (j.contains("tolerances"))
            for (const auto& [name, v] : j.at("tolerances").items())
                cfg.tolerances[name] = v.get<double>();
        if (j.contains("seed"))
            cfg.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw UsageError("bad config field: " + std::string(e.what()));
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

void apply_suite_json(SuiteParams& p, const json& s)
{
    try {
        if (s.contains("k"))
            std::tie(p.k_lo, p.k_hi) = parse_int_range(s.at("k").is_string() ? s.at("k").get<std::string>()
                                                                                 : s.at("k").dump());
        if (s.contains("n"))
            p.n_values = s.at("n").get<std::vector<int>>();
        if (s.contains("alpha"))
            p.alphas = s.at("alpha").get<std::vector<double>>();
        p.h_grid_size = s.value("h_grid_size", p.h_grid_size);
        p.case_count = s.value("case_count", p.case_count);
        p.tolerance = s.value("tolerance", p.tolerance);
    } catch (const json::exception& e) {
        throw UsageError("bad suite entry: " + std::string(e.what()));
    }
}

std::ostream& open_output(const std::string& out_dir, const std::string& name, std::ofstream& file)
{
    if (out_dir.empty())
        return std::cout;
    fs::create_directories(out_dir);
    file.open(fs::path(out_dir) / name, std::ios::binary);
    if (!file)
        throw UsageError("cannot write " + (fs::path(out_dir) / name).string());
    return file;
}

void check_format(const std::string& format)
{
    if (format != "csv" && format != "json")
        throw UsageError("format must be csv or json");
}

// ------- subcommands ------- //

int cmd_constants(const std::string& k_range, const std::string& format, const std::string& out_dir)
{
    check_format(format);
    const auto [lo, hi] = parse_int_range(k_range);
    if (lo < 1 || hi > max_half_order)
        throw UsageError("k must lie in 1.." + std::to_string(max_half_order));
    std::ofstream file;
    std::ostream& out = open_output(out_dir, "constants." + format, file);
    json rows = json::array();
    if (format == "csv")
        out << "k,b0,b1,b2,b3,b4,lambda_l1,K_2k\n";
    for (int k = lo; k <= hi; ++k) {
        const auto& table = lambda_vertices(k);
        std::vector<double> b(5, 0.0);
        for (int i = 0; i < 5; ++i)
            b[i] = i <= k ? table.b_double(i) : 0.0;
        const double l1 = lambda_l1_norm(k);
        const double fk = favard_constant(2 * k);
        if (format == "csv") {
            out << k;
            for (double v : b)
                out << ',' << format_double(v);
            out << ',' << format_double(l1) << ',' << format_double(fk) << '\n';
        } else {
            rows.push_back({{"k", k}, {"b", b}, {"lambda_l1", l1}, {"K_2k", fk}});
        }
    }
    if (format == "json")
        out << rows.dump(2) << '\n';
    return ok;
}

int cmd_kernel(int k, double h, const std::string& out_dir)
{
    const PiecewiseLinearKernel lambda = lambda_kernel_on_line(k, h);
    std::ofstream file;
    std::ostream& out = open_output(out_dir, "kernel_k" + std::to_string(k) + ".csv", file);
    out << "t,lambda\n";
    const auto t = lambda.breakpoints();
    const auto v = lambda.vertex_values();
    for (std::size_t i = 0; i < t.size(); ++i)
        out << format_double(t[i]) << ',' << format_double(v[i]) << '\n';
    std::cerr << "mass " << format_double(lambda.mass()) << ", l1 " << format_double(lambda.l1_norm()) << '\n';
    return ok;
}

FunctionHandle single_case(const std::string& text, std::uint64_t seed)
{
    return gen_corpus({parse_case(text)}, seed).front().f;
}

int cmd_w(const std::string& case_text, int k, int points, std::uint64_t seed, const std::string& out_dir)
{
    const FunctionHandle f = single_case(case_text, seed);
    if (k < 1 || points < 1)
        throw UsageError("need k >= 1 and at least one step");
    std::vector<double> hs;
    for (int i = 1; i <= points; ++i)
        hs.push_back(pi / k * i / (points + 1));
    std::vector<double> w, star;
    if (const auto* t = f.trig()) {
        for (double h : hs)
            w.push_back(w_norm(*t, WParams(k, h)));
        star = w_star_profile(*t, k, hs);
    } else {
        for (double h : hs)
            w.push_back(w_norm(f, WParams(k, h), {}, WPath::kernel));
        star = w_star_profile(f, k, hs, {}, WPath::kernel);
    }
    std::ofstream file;
    std::ostream& out = open_output(out_dir, "w_k" + std::to_string(k) + ".csv", file);
    out << "h,W,W_star\n";
    for (std::size_t i = 0; i < hs.size(); ++i)
        out << format_double(hs[i]) << ',' << format_double(w[i]) << ',' << format_double(star[i]) << '\n';
    return ok;
}

int cmd_omega(const std::string& case_text, int r, int points, std::uint64_t seed, const std::string& out_dir)
{
    const FunctionHandle f = single_case(case_text, seed);
    if (r < 1 || points < 1)
        throw UsageError("need r >= 1 and at least one step");
    ModulusEvaluator omega_eval(f, r);
    std::ofstream file;
    std::ostream& out = open_output(out_dir, "omega_r" + std::to_string(r) + ".csv", file);
    out << "delta,omega\n";
    for (int i = 1; i <= points; ++i) {
        const double delta = pi * i / points;
        out << format_double(delta) << ',' << format_double(omega_eval(delta)) << '\n';
    }
    return ok;
}

int cmd_bestapprox(const std::string& case_text, int n, double tol, bool coefficients, std::uint64_t seed,
                   const std::string& format)
{
    check_format(format);
    if (n < 1)
        throw UsageError("n must be positive");
    const FunctionHandle f = single_case(case_text, seed);
    MinimaxOptions opts;
    opts.tol = tol;
    const MinimaxResult r = trig_minimax(f, n - 1, opts);
    const auto a = r.approximant.cos_coeffs();
    const auto b = r.approximant.sin_coeffs();
    if (format == "json" || coefficients) {
        json j{{"case", case_text},
               {"n", n},
               {"error", r.error},
               {"lower_bound", r.lower_bound},
               {"iterations", r.iterations}};
        if (coefficients) {
            j["cos"] = std::vector<double>(a.begin(), a.end());
            j["sin"] = std::vector<double>(b.begin(), b.end());
        }
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "E_" << n - 1 << "," << format_double(r.error) << '\n'
                  << "lower_bound," << format_double(r.lower_bound) << '\n'
                  << "iterations," << r.iterations << '\n';
    }
    return ok;
}

struct VerifyFlags {
    std::vector<std::string> suites;
    std::string k_range;
    std::string n_list;
    std::string alpha_list;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string format = "csv";
    std::string config;
    std::optional<double> tol;
    std::optional<int> cases;
    std::optional<int> h_points;
};

struct SummaryRow {
    std::string suite;
    std::size_t rows = 0;
    std::size_t failed = 0;
    double min_margin = 0.0;
    std::optional<double> constant;
};

void write_summary(const std::string& out_dir, const std::vector<SummaryRow>& summary)
{
    std::ofstream file;
    std::ostream& out = open_output(out_dir, "summary.csv", file);
    out << "suite,rows,passed,failed,min_margin,empirical_constant\n";
    std::size_t total = 0, failed = 0;
    for (const auto& s : summary) {
        out << s.suite << ',' << s.rows << ',' << s.rows - s.failed << ',' << s.failed << ','
            << format_double(s.min_margin) << ',' << (s.constant ? format_double(*s.constant) : "") << '\n';
        total += s.rows;
        failed += s.failed;
    }
    out << "total," << total << ',' << total - failed << ',' << failed << ",,\n";
}

SummaryRow summarize(const std::string& suite, const std::vector<Report>& rows)
{
    SummaryRow s{suite, rows.size(), 0, std::numeric_limits<double>::infinity(), std::nullopt};
    std::vector<Report> with_constant;
    for (const auto& r : rows) {
        s.failed += r.pass ? 0 : 1;
        s.min_margin = std::min(s.min_margin, r.margin);
        if (r.empirical_constant)
            with_constant.push_back(r);
    }
    if (rows.empty())
        s.min_margin = 0.0;
    if (!with_constant.empty())
        s.constant = empirical_constant(with_constant);
    return s;
}

int cmd_verify(const VerifyFlags& flags)
{
    check_format(flags.format);
    VerifyConfig cfg;
    if (!flags.config.empty())
        cfg = load_config(flags.config);
    std::vector<std::string> suites = flags.suites;
    if (suites.empty())
        suites = cfg.suites;
    if (suites.empty())
        suites = suite_names();
    for (const auto& s : suites)
        if (!has_suite(s))
            throw UsageError("unknown suite: " + s);
    const std::uint64_t seed = flags.seed.value_or(cfg.seed.value_or(1));
    const auto corpus = gen_corpus(cfg.corpus, seed);

    std::vector<SummaryRow> summary;
    bool all_pass = true;
    for (const auto& name : suites) {
        SuiteParams p = default_params(name);
        p.seed = seed;
        if (cfg.resolution)
            p.resolution = *cfg.resolution;
        if (auto it = cfg.tolerances.find("default"); it != cfg.tolerances.end())
            p.tolerance = it->second;
        if (auto it = cfg.tolerances.find(name); it != cfg.tolerances.end())
            p.tolerance = it->second;
        if (auto it = cfg.suite_overrides.find(name); it != cfg.suite_overrides.end())
            apply_suite_json(p, it->second);
        if (!flags.k_range.empty())
            std::tie(p.k_lo, p.k_hi) = parse_int_range(flags.k_range);
        if (!flags.n_list.empty())
            p.n_values = parse_int_list(flags.n_list);
        if (!flags.alpha_list.empty())
            p.alphas = parse_double_list(flags.alpha_list);
        if (flags.tol)
            p.tolerance = *flags.tol;
        if (flags.cases)
            p.case_count = *flags.cases;
        if (flags.h_points)
            p.h_grid_size = *flags.h_points;
        try {
            p.validate();
        } catch (const DomainError& e) {
            throw UsageError(name + ": " + e.what());
        }

        const auto rows = run_suite(name, p, corpus);
        std::ofstream file;
        std::ostream& out = open_output(flags.out_dir, name + "." + flags.format, file);
        if (flags.format == "csv")
            write_csv(out, rows);
        else
            write_json(out, rows);
        const SummaryRow s = summarize(name, rows);
        all_pass = all_pass && s.failed == 0;
        std::cerr << name << ": " << s.rows - s.failed << "/" << s.rows << " rows pass\n";
        summary.push_back(s);
    }
    write_summary(flags.out_dir, summary);
    return all_pass ? ok : inequality_failure;
}

// Splits one CSV line, honouring double quotes.
std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (char c : line) {
        if (c == '"')
            quoted = !quoted;
        else if (c == ',' && !quoted)
            out.emplace_back();
        else
            out.back() += c;
    }
    return out;
}

int cmd_report(const std::string& out_dir)
{
    std::vector<SummaryRow> summary;
    bool all_pass = true;
    for (const auto& name : suite_names()) {
        const fs::path path = fs::path(out_dir) / (name + ".csv");
        std::ifstream in(path);
        if (!in)
            continue;
        std::string line;
        std::getline(in, line);
        if (line != "suite,case_id,k,n,alpha,h,lhs,rhs,margin,empirical_constant,pass")
            throw UsageError("unexpected header in " + path.string());
        std::vector<Report> rows;
        while (std::getline(in, line)) {
            const auto f = split_csv(line);
            if (f.size() != 11)
                throw UsageError("malformed row in " + path.string());
            Report r;
            r.suite = f[0];
            r.case_id = f[1];
            r.lhs = std::stod(f[6]);
            r.rhs = std::stod(f[7]);
            r.margin = std::stod(f[8]);
            if (!f[9].empty())
                r.empirical_constant = std::stod(f[9]);
            r.pass = f[10] == "true";
            rows.push_back(r);
        }
        const SummaryRow s = summarize(name, rows);
        all_pass = all_pass && s.failed == 0;
        std::cout << name << ": " << s.rows - s.failed << "/" << s.rows << " pass, min margin "
                  << format_double(s.min_margin);
        if (s.constant)
            std::cout << ", empirical constant " << format_double(*s.constant);
        std::cout << '\n';
        summary.push_back(s);
    }
    if (summary.empty())
        throw UsageError("no suite reports found in " + out_dir);
    write_summary(out_dir, summary);
    return all_pass ? ok : inequality_failure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical verification of smoothness-functional inequalities"};
    app.require_subcommand(1);

    std::string k_range = "1..30", format = "csv", out_dir, case_text = "step_sign_cos:n=3", out_constants;
    int k = 2, n = 8, r = 2, points = 32;
    double h = 1.0, tol = 1e-8;
    bool coefficients = false;
    std::uint64_t seed = 1;

    auto* constants = app.add_subcommand("constants", "Vertex table of Λ_k, ∫|Λ_k| and Favard constants 𝒦_2k");
    constants->add_option("--k", k_range, "k range a..b")->capture_default_str();
    constants->add_option("--format", format, "csv or json")->capture_default_str();
    constants->add_option("--out", out_constants, "output directory (default: stdout)");

    auto* kernel = app.add_subcommand("kernel", "Vertices of Λ_{k,h} as plot data");
    kernel->set_help_flag("--help", "Print this help message and exit");
    kernel->add_option("--k", k, "order k")->capture_default_str();
    kernel->add_option("--h", h, "step h")->capture_default_str();
    kernel->add_option("--out", out_dir, "output directory (default: stdout)");

    auto* w = app.add_subcommand("w", "W_2k(f, h) and W*_2k(f, h) on a step grid");
    w->add_option("--case", case_text, "corpus case kind:key=value,...")->capture_default_str();
    w->add_option("--k", k, "order k")->capture_default_str();
    w->add_option("--points", points, "number of steps in (0, pi/k)")->capture_default_str();
    w->add_option("--seed", seed, "corpus seed")->capture_default_str();
    w->add_option("--out", out_dir, "output directory (default: stdout)");

    auto* om = app.add_subcommand("omega", "Modulus of smoothness ω_r(f, δ) on a δ grid");
    om->add_option("--case", case_text, "corpus case kind:key=value,...")->capture_default_str();
    om->add_option("--r", r, "order r")->capture_default_str();
    om->add_option("--points", points, "number of δ values in (0, pi]")->capture_default_str();
    om->add_option("--seed", seed, "corpus seed")->capture_default_str();
    om->add_option("--out", out_dir, "output directory (default: stdout)");

    auto* best = app.add_subcommand("bestapprox", "Best uniform approximation error E_{n-1}(f)");
    best->add_option("--case", case_text, "corpus case kind:key=value,...")->capture_default_str();
    best->add_option("--n", n, "approximate from T_{n-1}")->capture_default_str();
    best->add_option("--tol", tol, "relative bracket tolerance")->capture_default_str();
    best->add_option("--seed", seed, "corpus seed")->capture_default_str();
    best->add_option("--format", format, "csv or json")->capture_default_str();
    best->add_flag("--coefficients", coefficients, "print the coefficient vectors as JSON");

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "Run verification suites and write reports");
    verify->add_option("--suite", vf.suites, "suite id (repeatable; default all)");
    verify->add_option("--k", vf.k_range, "k range a..b");
    verify->add_option("--n", vf.n_list, "n values: a..b or comma list");
    verify->add_option("--alpha", vf.alpha_list, "comma list of alpha > 1");
    verify->add_option("--seed", vf.seed, "corpus and suite seed");
    verify->add_option("--out", vf.out_dir, "output directory")->capture_default_str();
    verify->add_option("--format", vf.format, "csv or json")->capture_default_str();
    verify->add_option("--config", vf.config, "JSON run configuration");
    verify->add_option("--tol", vf.tol, "relative tolerance for pass/fail");
    verify->add_option("--cases", vf.cases, "generated cases per suite parameter");
    verify->add_option("--h-points", vf.h_points, "step grid size");

    std::string report_dir = ".";
    auto* report = app.add_subcommand("report", "Summarize suite CSV files in a directory");
    report->add_option("--out", report_dir, "directory holding suite reports")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (constants->parsed())
            return cmd_constants(k_range, format, out_constants);
        if (kernel->parsed())
            return cmd_kernel(k, h, out_dir);
        if (w->parsed())
            return cmd_w(case_text, k, points, seed, out_dir);
        if (om->parsed())
            return cmd_omega(case_text, r, points, seed, out_dir);
        if (best->parsed())
            return cmd_bestapprox(case_text, n, tol, coefficients, seed, format);
        if (verify->parsed())
            return cmd_verify(vf);
        if (report->parsed())
            return cmd_report(report_dir);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const ConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << " (bracket [" << format_double(e.lower()) << ", "
                  << format_double(e.upper()) << "] after " << e.iterations() << " iterations)\n";
        return non_convergence;
    } catch (const AccuracyError& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return non_convergence;
    } catch (const EvaluationError& e) {
        std::cerr << "evaluation failure: " << e.what() << '\n';
        return non_convergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}

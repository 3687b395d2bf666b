#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ufn/correlation.hpp"
#include "ufn/experiments.hpp"
#include "ufn/finite_function.hpp"
#include "ufn/gowers.hpp"
#include "ufn/report.hpp"

namespace {

struct CommonFlags {
    std::string format = "json";
    std::string out;
    bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonFlags& cf) {
    cmd->add_option("--format", cf.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", cf.out,
                    "Write the report to this path (atomic rename)");
    cmd->add_flag("--no-timestamp", cf.no_timestamp,
                  "Omit the timestamp and wall clock from the report");
}

// Exit 0 when every row passes, 1 otherwise. Reports go to stdout unless
// --out is set; files are written only after the computation succeeded.
int emit(ufn::ExperimentReport& rep, const CommonFlags& cf) {
    rep.include_timestamp = !cf.no_timestamp;
    std::string text = cf.format == "csv" ? rep.to_csv() : rep.to_json();
    if (!cf.out.empty()) {
        ufn::write_text_file(cf.out, text);
    } else {
        std::cout << text;
    }
    return rep.pass() ? 0 : 1;
}

ufn::ParamMap parse_overrides(const std::vector<std::string>& sets) {
    ufn::ParamMap params;
    for (const std::string& kv : sets) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("--set expects key=value, got '" + kv +
                                        "'");
        }
        params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return params;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Uniformity norms, correlation searches, and spectrum checks for "
        "functions on F_p^N"};
    app.require_subcommand(1);

    // gowers: one norm evaluation.
    auto* gowers_cmd =
        app.add_subcommand("gowers", "Evaluate a uniformity norm");
    uint32_t g_p = 2, g_n = 0, g_order = 0, g_threads = 0;
    uint64_t g_samples = 1'000'000, g_seed = 42;
    std::string g_function, g_mode = "exact";
    CommonFlags g_cf;
    gowers_cmd->add_option("--p", g_p, "Field size (prime)");
    gowers_cmd->add_option("--N", g_n, "Number of variables")->required();
    gowers_cmd
        ->add_option("--function", g_function,
                     "Function descriptor: sym:<n> | poly:<path> | "
                     "table:<path>")
        ->required();
    gowers_cmd->add_option("--order", g_order, "Norm order k")->required();
    gowers_cmd->add_option("--mode", g_mode, "Evaluation mode")
        ->check(CLI::IsMember({"exact", "mc"}));
    gowers_cmd->add_option("--samples", g_samples, "Sample count (mc mode)");
    gowers_cmd->add_option("--seed", g_seed, "Sampling seed (mc mode)");
    gowers_cmd->add_option("--threads", g_threads,
                           "Worker threads (0 = available parallelism)");
    add_common(gowers_cmd, g_cf);

    // correlate: best degree-d approximation.
    auto* corr_cmd = app.add_subcommand(
        "correlate", "Maximum correlation with low-degree polynomials");
    uint32_t c_p = 2, c_n = 0, c_degree = 3, c_threads = 0;
    uint64_t c_trials = 2000, c_seed = 42;
    std::string c_function, c_method = "exhaustive";
    CommonFlags c_cf;
    corr_cmd->add_option("--p", c_p, "Field size (prime)");
    corr_cmd->add_option("--N", c_n, "Number of variables")->required();
    corr_cmd
        ->add_option("--function", c_function,
                     "Function descriptor: sym:<n> | poly:<path> | "
                     "table:<path>")
        ->required();
    corr_cmd->add_option("--degree", c_degree, "Polynomial degree bound");
    corr_cmd->add_option("--method", c_method, "Search method")
        ->check(CLI::IsMember({"exhaustive", "spectral", "profile"}));
    corr_cmd->add_option("--trials", c_trials,
                         "Random polynomials (profile method)");
    corr_cmd->add_option("--seed", c_seed, "Sampling seed (profile method)");
    corr_cmd->add_option("--threads", c_threads,
                         "Worker threads (0 = available parallelism)");
    add_common(corr_cmd, c_cf);

    // identities / dixon: experiment aliases.
    auto* ident_cmd = app.add_subcommand(
        "identities", "Randomized algebraic identity suite");
    uint64_t i_seed = 42;
    bool i_seed_given = false;
    std::vector<std::string> i_sets;
    CommonFlags i_cf;
    ident_cmd->add_option("--seed", i_seed, "Instance generation seed")
        ->each([&](const std::string&) { i_seed_given = true; });
    ident_cmd->add_option("--set", i_sets,
                          "Extra experiment parameters as key=value");
    add_common(ident_cmd, i_cf);

    auto* dixon_cmd =
        app.add_subcommand("dixon", "Quadratic character spectrum checks");
    uint64_t d_seed = 42;
    bool d_seed_given = false;
    std::vector<std::string> d_sets;
    CommonFlags d_cf;
    dixon_cmd->add_option("--seed", d_seed, "Instance generation seed")
        ->each([&](const std::string&) { d_seed_given = true; });
    dixon_cmd->add_option("--set", d_sets,
                          "Extra experiment parameters as key=value");
    add_common(dixon_cmd, d_cf);

    // experiment: named pipelines.
    auto* exp_cmd = app.add_subcommand("experiment", "Run a named experiment");
    std::string e_name;
    uint64_t e_samples = 0, e_trials = 0, e_seed = 0;
    uint32_t e_threads = 0;
    bool e_samples_given = false, e_trials_given = false, e_seed_given = false,
         e_threads_given = false;
    std::vector<std::string> e_sets;
    CommonFlags e_cf;
    exp_cmd
        ->add_option("name", e_name,
                     "icgn-gowers | icgn-correlation | general-n | digits | "
                     "identities | dixon | rank-tail | distributions")
        ->required();
    exp_cmd->add_option("--samples", e_samples, "Sample count")
        ->each([&](const std::string&) { e_samples_given = true; });
    exp_cmd->add_option("--trials", e_trials, "Trial count")
        ->each([&](const std::string&) { e_trials_given = true; });
    exp_cmd->add_option("--seed", e_seed, "Sampling seed")
        ->each([&](const std::string&) { e_seed_given = true; });
    exp_cmd->add_option("--threads", e_threads, "Worker threads")
        ->each([&](const std::string&) { e_threads_given = true; });
    exp_cmd->add_option("--set", e_sets,
                        "Extra experiment parameters as key=value");
    add_common(exp_cmd, e_cf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gowers_cmd->parsed()) {
            ufn::FiniteFunction f = ufn::materialize(g_function, g_p, g_n);
            ufn::ExperimentReport rep;
            rep.experiment = "gowers";
            rep.add_param("p", std::to_string(g_p));
            rep.add_param("N", std::to_string(g_n));
            rep.add_param("function", g_function);
            rep.add_param("order", std::to_string(g_order));
            rep.add_param("mode", g_mode);
            ufn::GowersEstimate est;
            if (g_mode == "exact") {
                est = ufn::gowers_norm_exact(f, g_order, g_threads);
            } else {
                rep.add_param("samples", std::to_string(g_samples));
                rep.seed = g_seed;
                est = ufn::gowers_norm_mc(f, g_order, g_samples, g_seed,
                                          g_threads);
            }
            std::string tag = "u" + std::to_string(g_order);
            // Delta method on the 2^k-th root; zero at the clamp.
            double value_err = 0.0;
            if (!est.exact && est.raw_power > 0.0) {
                value_err = est.value * est.std_error /
                            (std::exp2(double(g_order)) * est.raw_power);
            }
            rep.add_row(g_n, tag + "_norm", est.value, est.exact, value_err,
                        1.0, est.value <= 1.0 + 1e-9);
            rep.add_row(g_n, tag + "_raw_power", est.raw_power, est.exact,
                        est.std_error, 1.0, est.raw_power <= 1.0 + 1e-9);
            if (est.exact && g_p == 2) {
                rep.add_param("raw_numer", ufn::format_u128(est.raw_numer));
                rep.add_param("raw_denom_log2",
                              std::to_string(est.raw_denom_log2));
            }
            return emit(rep, g_cf);
        }
        if (corr_cmd->parsed()) {
            ufn::FiniteFunction f = ufn::materialize(c_function, c_p, c_n);
            ufn::ExperimentReport rep;
            rep.experiment = "correlate";
            rep.add_param("p", std::to_string(c_p));
            rep.add_param("N", std::to_string(c_n));
            rep.add_param("function", c_function);
            rep.add_param("degree", std::to_string(c_degree));
            rep.add_param("method", c_method);
            if (c_method == "exhaustive") {
                ufn::CorrelationResult res =
                    ufn::max_correlation_exhaustive(f, c_degree, c_threads);
                rep.add_param("dimension", std::to_string(res.dimension));
                rep.add_param("candidates", std::to_string(res.candidates));
                if (res.witness) {
                    rep.add_param("witness", res.witness->to_json());
                }
                rep.add_row(c_n, "max_corr_exhaustive", res.max_abs, true, 0.0,
                            1.0, res.max_abs <= 1.0);
            } else if (c_method == "spectral") {
                ufn::CorrelationResult res = ufn::max_correlation_spectral(f);
                rep.add_row(c_n, "max_corr_spectral", res.max_abs, true, 0.0,
                            1.0, res.max_abs <= 1.0);
            } else {
                rep.add_param("trials", std::to_string(c_trials));
                rep.seed = c_seed;
                ufn::CorrelationProfile prof = ufn::sampled_correlation_profile(
                    f, c_degree, c_trials, c_seed, c_threads);
                for (const auto& q : prof.quantiles) {
                    rep.add_row(c_n, "corr_" + q.label, q.value, false,
                                q.std_error, 1.0, q.value <= 1.0 + 1e-9);
                }
            }
            return emit(rep, c_cf);
        }
        if (ident_cmd->parsed()) {
            ufn::ParamMap params = parse_overrides(i_sets);
            if (i_seed_given) params["seed"] = std::to_string(i_seed);
            ufn::ExperimentReport rep =
                ufn::run_experiment("identities", params);
            return emit(rep, i_cf);
        }
        if (dixon_cmd->parsed()) {
            ufn::ParamMap params = parse_overrides(d_sets);
            if (d_seed_given) params["seed"] = std::to_string(d_seed);
            ufn::ExperimentReport rep = ufn::run_experiment("dixon", params);
            return emit(rep, d_cf);
        }
        if (exp_cmd->parsed()) {
            ufn::ParamMap params = parse_overrides(e_sets);
            if (e_samples_given) params["samples"] = std::to_string(e_samples);
            if (e_trials_given) params["trials"] = std::to_string(e_trials);
            if (e_seed_given) params["seed"] = std::to_string(e_seed);
            if (e_threads_given) params["threads"] = std::to_string(e_threads);
            ufn::ExperimentReport rep = ufn::run_experiment(e_name, params);
            return emit(rep, e_cf);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
}

// hartigan_lab: command-line surface for the local-search laboratory.
//
// Subcommands:
//   run              generic single-point-reassignment / Lloyd run on a file
//   lowerbound       build + script + verify the worst-case chain instance
//   verify-appendix  print the ten schedule inequalities as exact rationals
//   smoothed         Gaussian perturbation sweeps, CSV out
//
// Exit codes: 0 success (run: local optimum), 2 run hit max-iters,
// 64 usage error, 65 inconsistent configuration, 1 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hartigan/hartigan.hpp"

namespace hg = hartigan;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitConfig = 65;

std::vector<double> parse_sigma_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(hg::scalar_traits<double>::parse(item));
    if (out.empty()) throw hg::ConfigError("empty --sigma list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

hg::PivotRule make_rule(const std::string& name, std::uint64_t seed) {
    if (name == "first") return hg::PivotRule::first_improvement();
    if (name == "best") return hg::PivotRule::best_improvement();
    if (name == "random") return hg::PivotRule::random_improvement(seed);
    throw hg::ConfigError("unknown pivot rule '" + name + "'");
}

unsigned thread_cap() {
    if (const char* env = std::getenv("HARTIGAN_LAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 0;  // auto
}

struct RunOptions {
    std::string input;
    std::string format = "csv";
    int k = 0;
    std::string mode = "float";
    std::string rule = "first";
    std::string init = "balanced";
    std::string given;
    std::uint64_t seed = 0;
    long max_iters = -1;
    std::string trace_path;
    std::string summary_path;
    std::string config_path;
};

// Config file values fill in anything the flags left at its default.
void merge_config_file(RunOptions& opt, const CLI::App* cmd) {
    if (opt.config_path.empty()) return;
    std::ifstream in(opt.config_path);
    if (!in) throw hg::ConfigError("cannot open config file '" + opt.config_path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw hg::ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    auto unset = [&](const std::string& flag) { return cmd->count(flag) == 0; };
    if (doc.contains("input") && unset("--input")) opt.input = doc["input"].get<std::string>();
    if (doc.contains("format") && unset("--format")) opt.format = doc["format"].get<std::string>();
    if (doc.contains("k") && unset("--k")) opt.k = doc["k"].get<int>();
    if (doc.contains("mode") && unset("--mode")) opt.mode = doc["mode"].get<std::string>();
    if (doc.contains("rule") && unset("--rule")) opt.rule = doc["rule"].get<std::string>();
    if (doc.contains("init") && unset("--init")) opt.init = doc["init"].get<std::string>();
    if (doc.contains("given") && unset("--given")) opt.given = doc["given"].get<std::string>();
    if (doc.contains("seed") && unset("--seed")) opt.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("max_iters") && unset("--max-iters"))
        opt.max_iters = doc["max_iters"].get<long>();
}

template <class S>
int run_pipeline(const RunOptions& opt) {
    auto format = opt.format == "json" ? hg::PointFormat::Json : hg::PointFormat::Csv;
    auto points = hg::parse_points_file<S>(opt.input, format);
    if (opt.k < 1 || opt.k > points.size())
        throw hg::ConfigError("k must be between 1 and n = " + std::to_string(points.size()));

    std::optional<std::vector<int>> given;
    hg::InitStrategy strategy = hg::InitStrategy::BalancedRandom;
    if (opt.init == "given") {
        strategy = hg::InitStrategy::Given;
        given = parse_int_list(opt.given);
        if (static_cast<int>(given->size()) != points.size())
            throw hg::ConfigError("--given must list one cluster id per point");
    } else if (opt.init != "balanced") {
        throw hg::ConfigError("unknown init strategy '" + opt.init + "'");
    }

    long max_iters =
        opt.max_iters >= 0 ? opt.max_iters : hg::default_max_iters(opt.k, points.dim());
    auto clustering = hg::init_clustering<S>(points, opt.k, strategy, opt.seed,
                                             given ? &*given : nullptr);
    auto trace =
        hg::hw_run(points, clustering, make_rule(opt.rule, opt.seed), max_iters);

    if (!opt.trace_path.empty()) {
        std::ofstream out(opt.trace_path);
        hg::write_trace_jsonl(out, trace);
    }
    ordered_json summary = hg::trace_summary_json(trace);
    summary["hw_local_opt"] = hg::is_hw_local_opt(clustering, points);
    summary["lloyd_local_opt"] = hg::is_lloyd_local_opt(clustering, points);
    ordered_json config;
    config["input"] = opt.input;
    config["format"] = opt.format;
    config["k"] = opt.k;
    config["mode"] = opt.mode;
    config["rule"] = opt.rule;
    config["init"] = opt.init;
    if (!opt.given.empty()) config["given"] = opt.given;
    config["seed"] = opt.seed;
    config["max_iters"] = max_iters;
    summary["config"] = config;
    if (!opt.summary_path.empty()) {
        std::ofstream out(opt.summary_path);
        out << summary.dump(2) << '\n';
    }
    std::cout << "iterations=" << trace.iterations << " terminated=" << to_string(trace.terminated)
              << " final_potential=" << hg::scalar_traits<S>::str(trace.final_potential) << '\n';
    return trace.terminated == hg::TerminationReason::MaxIters ? 2 : 0;
}

int cmd_lowerbound(int m, bool verify, const std::string& trace_path,
                   const std::string& report_path) {
    if (m < 2) throw hg::ConfigError("m must be >= 2");
    if (m > 32) throw hg::ConfigError("m must be <= 32 (script length grows like 3 * 2^(m-1))");
    auto inst = hg::build_instance(m);
    auto moves = hg::scripted_sequence_moves(inst);
    if (!verify) {
        std::cout << "m=" << m << " n=" << inst.points.size() << " k=" << inst.k
                  << " moves=" << moves.size() << '\n';
        return 0;
    }
    try {
        auto report = hg::verify_sequence(inst, moves);
        if (!trace_path.empty()) {
            std::ofstream out(trace_path);
            hg::write_trace_jsonl(out, report.trace, &inst.labels);
        }
        if (!report_path.empty()) {
            std::ofstream out(report_path);
            out << hg::verification_report_json(inst, report).dump(2) << '\n';
        }
        std::cout << "m=" << m << " moves=" << report.total_moves()
                  << " min_gain=" << report.min_gain.str() << " (" << report.min_gain.to_double()
                  << ") min_gain>0=" << (report.min_gain > hg::Rational(0) ? "yes" : "no")
                  << " final_is_hw_local_opt=" << (report.final_is_hw_local_opt ? "yes" : "no")
                  << '\n';
        return report.min_gain > hg::Rational(0) ? 0 : 1;
    } catch (const hg::ScriptInvalid& e) {
        std::cerr << "verification failed at move " << e.move_index << ": " << e.what() << '\n';
        return 1;
    }
}

int cmd_verify_appendix() {
    auto vals = hg::appendix_inequalities();
    bool all_positive = true;
    for (const auto& [name, value] : vals) {
        all_positive = all_positive && value > hg::Rational(0);
        std::cout << name << " = " << value.str() << " ≈ " << value.to_double()
                  << (value > hg::Rational(0) ? " > 0" : " NOT POSITIVE") << '\n';
    }
    return all_positive ? 0 : 1;
}

struct SmoothedOptions {
    std::string input;
    std::string format = "csv";
    int gadget_m = 0;
    int k = 0;
    std::string sigma_text = "0.1";
    int trials = 10;
    std::uint64_t seed = 0;
    std::string rule = "first";
    std::string init = "balanced";
    long max_iters = -1;
    std::string out_path;
    std::string summary_path;
};

int cmd_smoothed(const SmoothedOptions& opt) {
    std::vector<double> sigmas = parse_sigma_list(opt.sigma_text);
    for (double s : sigmas)
        if (s < 0) throw hg::ConfigError("sigma must be >= 0");
    if (opt.trials < 1) throw hg::ConfigError("trials must be >= 1");
    if (!opt.input.empty() && opt.gadget_m > 0)
        throw hg::ConfigError("--input and --gadget-m are mutually exclusive");

    hg::PointSet<double> base(1);
    hg::SweepInit init;
    std::optional<hg::PivotRule> rule;
    int k = opt.k;
    if (opt.gadget_m > 0) {
        if (opt.gadget_m < 2 || opt.gadget_m > 32) throw hg::ConfigError("--gadget-m must be in 2..32");
        auto inst = hg::build_instance(opt.gadget_m);
        base = to_float(inst.points);
        if (k == 0) k = inst.k;
        if (k != inst.k) throw hg::ConfigError("k is fixed by the instance (" + std::to_string(inst.k) + ")");
        // the scripted starting clustering is the natural given start
        init.strategy = hg::InitStrategy::Given;
        init.given = inst.initial_assignment;
        if (opt.rule == "scripted")  // only sensible as the sigma=0 control
            rule = hg::PivotRule::scripted(hg::to_script(hg::scripted_sequence_moves(inst)));
    } else if (!opt.input.empty()) {
        auto format = opt.format == "json" ? hg::PointFormat::Json : hg::PointFormat::Csv;
        base = hg::parse_points_file<double>(opt.input, format);
        if (k < 1 || k > base.size())
            throw hg::ConfigError("k must be between 1 and n = " + std::to_string(base.size()));
        init.strategy = hg::InitStrategy::BalancedRandom;
    } else {
        throw hg::ConfigError("need --input or --gadget-m");
    }
    if (opt.rule == "scripted") {
        if (!rule) throw hg::ConfigError("--rule scripted needs --gadget-m");
        for (double s : sigmas)
            if (s != 0.0) throw hg::ConfigError("--rule scripted is the unperturbed control; use --sigma 0");
    }
    if (!rule) rule = make_rule(opt.rule, opt.seed);

    hg::PerturbationConfig cfg;
    cfg.seed = opt.seed;
    cfg.trials = opt.trials;
    long max_iters = opt.max_iters >= 0 ? opt.max_iters : hg::default_max_iters(k, base.dim());

    auto result = hg::smoothed_sweep(base, k, sigmas, cfg, *rule, init, max_iters, thread_cap());

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        hg::write_sweep_csv(out, result);
    } else {
        hg::write_sweep_csv(std::cout, result);
    }
    if (!opt.summary_path.empty()) {
        ordered_json j;
        j["sigmas"] = sigmas;
        j["trials"] = opt.trials;
        j["seed"] = opt.seed;
        j["k"] = k;
        j["rule"] = opt.rule;
        j["max_iters"] = max_iters;
        j["rows"] = result.rows.size();
        if (opt.gadget_m > 0) j["gadget_m"] = opt.gadget_m;
        if (!opt.input.empty()) j["input"] = opt.input;
        std::ofstream out(opt.summary_path);
        out << j.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-means local-search laboratory (Hartigan-Wong and Lloyd baselines)"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "run local search on a point file");
    run->add_option("--input", run_opt.input, "point file (CSV or JSON)");
    run->add_option("--format", run_opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--k", run_opt.k, "number of clusters");
    run->add_option("--mode", run_opt.mode, "exact|float")->check(CLI::IsMember({"exact", "float"}));
    run->add_option("--rule", run_opt.rule, "first|best|random")
        ->check(CLI::IsMember({"first", "best", "random"}));
    run->add_option("--init", run_opt.init, "balanced|given")
        ->check(CLI::IsMember({"balanced", "given"}));
    run->add_option("--given", run_opt.given, "comma-separated cluster id per point");
    run->add_option("--seed", run_opt.seed, "seed for init/rule randomness");
    run->add_option("--max-iters", run_opt.max_iters, "iteration cap");
    run->add_option("--trace", run_opt.trace_path, "write per-move JSON lines here");
    run->add_option("--summary", run_opt.summary_path, "write the run summary JSON here");
    run->add_option("--config", run_opt.config_path, "JSON config file (flags win)");

    int lb_m = 0;
    bool lb_verify = false;
    std::string lb_trace, lb_report;
    auto* lb = app.add_subcommand("lowerbound", "worst-case chain instance and its script");
    lb->add_option("--m", lb_m, "number of gadgets (>= 2)")->required();
    lb->add_flag("--verify", lb_verify, "replay the script in exact arithmetic");
    lb->add_option("--trace", lb_trace, "write the verified script as JSON lines");
    lb->add_option("--report", lb_report, "write the verification report JSON");

    auto* va = app.add_subcommand("verify-appendix",
                                  "print the ten schedule inequalities as exact rationals");

    SmoothedOptions sm_opt;
    auto* sm = app.add_subcommand("smoothed", "Gaussian perturbation sweep, CSV out");
    sm->add_option("--input", sm_opt.input, "point file (CSV or JSON)");
    sm->add_option("--format", sm_opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    sm->add_option("--gadget-m", sm_opt.gadget_m, "use the m-gadget instance as the base");
    sm->add_option("--k", sm_opt.k, "number of clusters (fixed by --gadget-m)");
    sm->add_option("--sigma", sm_opt.sigma_text, "comma-separated sigma list");
    sm->add_option("--trials", sm_opt.trials, "trials per sigma");
    sm->add_option("--seed", sm_opt.seed, "base seed");
    sm->add_option("--rule", sm_opt.rule, "first|best|random|scripted (scripted: gadget only)")
        ->check(CLI::IsMember({"first", "best", "random", "scripted"}));
    sm->add_option("--max-iters", sm_opt.max_iters, "iteration cap per trial");
    sm->add_option("--out", sm_opt.out_path, "CSV output path (default: stdout)");
    sm->add_option("--summary", sm_opt.summary_path, "write the effective config JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n' << app.help() << '\n';
        return kExitUsage;
    }

    try {
        if (run->parsed()) {
            merge_config_file(run_opt, run);
            if (run_opt.input.empty()) throw hg::ConfigError("run: --input is required");
            if (run_opt.k == 0) throw hg::ConfigError("run: --k is required");
            if (run_opt.mode == "exact") return run_pipeline<hg::Rational>(run_opt);
            return run_pipeline<double>(run_opt);
        }
        if (lb->parsed()) return cmd_lowerbound(lb_m, lb_verify, lb_trace, lb_report);
        if (va->parsed()) return cmd_verify_appendix();
        if (sm->parsed()) return cmd_smoothed(sm_opt);
    } catch (const hg::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hg::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

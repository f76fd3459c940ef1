// Command-line front end: detection, local detection, confidence intervals,
// simulation, benchmarking, and frontier export over CSV panels.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcp/csv.hpp"
#include "fcp/detect.hpp"
#include "fcp/grid.hpp"
#include "fcp/inference.hpp"
#include "fcp/json_io.hpp"
#include "fcp/metrics.hpp"
#include "fcp/simulate.hpp"

namespace {

using fcp::ordered_json;

double resolve_lambda(const std::string& lambda_str, std::size_t n) {
    if (lambda_str == "auto") return fcp::lambda_auto(n);
    return fcp::detail::parse_number(lambda_str);
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fcp::validation_error("cannot open " + path + " for writing");
    out << text;
}

fcp::FrontierFamily parse_family(std::string name) {
    for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    name.erase(std::remove(name.begin(), name.end(), '-'), name.end());
    name.erase(std::remove(name.begin(), name.end(), '_'), name.end());
    if (name == "constant") return fcp::FrontierFamily::Constant;
    if (name == "additive") return fcp::FrontierFamily::Additive;
    if (name == "cobbdouglas") return fcp::FrontierFamily::CobbDouglas;
    if (name == "logistic") return fcp::FrontierFamily::Logistic;
    if (name == "piecewiselinear") return fcp::FrontierFamily::PiecewiseLinear;
    throw fcp::validation_error("unknown frontier model: " + name);
}

fcp::ScoreDist parse_scores(std::string name) {
    for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (name == "r1") return fcp::ScoreDist::R1Uniform;
    if (name == "r2") return fcp::ScoreDist::R2TruncNormalUp;
    if (name == "r3") return fcp::ScoreDist::R3TruncNormalDown;
    if (name == "r4") return fcp::ScoreDist::R4Mixture;
    throw fcp::validation_error("unknown score distribution: " + name);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        out.push_back(std::stoi(token));
    }
    return out;
}

// Detection options shared by detect / detect-local / ci.
struct DetectOpts {
    std::string input;
    std::string output = "-";
    std::string lambda_str = "auto";
    double alpha = 0.1;
    double robust_c = 1.0;
    int min_seg = 2;
    bool no_refit = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "input CSV (t,x1,...,xd,y)")->required();
        cmd->add_option("--output", output, "output path, '-' for stdout");
        cmd->add_option("--lambda", lambda_str, "detection threshold, 'auto' = log^2(n)");
        cmd->add_option("--alpha", alpha, "trimming quantile level");
        cmd->add_option("--robust-c", robust_c, "restart back-off constant (robust variant)");
        cmd->add_option("--min-seg", min_seg, "minimum frontier segment length");
        cmd->add_flag("--no-refit", no_refit, "skip the local refitting pass");
    }

    fcp::DetectorConfig config(std::size_t n) const {
        fcp::DetectorConfig cfg;
        cfg.lambda = resolve_lambda(lambda_str, n);
        cfg.alpha_trim = alpha;
        cfg.refit = !no_refit;
        cfg.robust_c = robust_c;
        cfg.min_seg = min_seg;
        return cfg;
    }
};

int cmd_detect(const DetectOpts& opts, bool robust) {
    const fcp::Series series = fcp::read_series_csv_file(opts.input);
    const fcp::DetectorConfig cfg = opts.config(series.n());
    const fcp::DetectionResult result =
        robust ? fcp::detect_multi_robust(series, cfg) : fcp::detect_multi(series, cfg);
    const fcp::TrimBox x0 = fcp::trim_quantile(series, cfg.alpha_trim);
    write_text(opts.output, fcp::detection_to_json(result, cfg.lambda, x0).dump(2) + "\n");
    return 0;
}

int cmd_detect_local(const DetectOpts& opts, double an_side) {
    const fcp::Series series = fcp::read_series_csv_file(opts.input);
    const fcp::DetectorConfig cfg = opts.config(series.n());
    const double a_n = std::pow(an_side, static_cast<double>(series.d));
    const fcp::DetectionResult result = fcp::detect_multi_local(series, cfg, a_n);
    const fcp::TrimBox x0 = fcp::trim_quantile(series, cfg.alpha_trim);
    write_text(opts.output, fcp::detection_to_json(result, cfg.lambda, x0).dump(2) + "\n");
    return 0;
}

int cmd_ci(const DetectOpts& opts, const std::string& mode_str, double level, bool single) {
    const fcp::Series series = fcp::read_series_csv_file(opts.input);
    const int n = static_cast<int>(series.n());
    const fcp::DetectorConfig cfg = opts.config(series.n());
    const fcp::TrimBox x0 = fcp::trim_quantile(series, cfg.alpha_trim);
    const auto mode =
        mode_str == "general" ? fcp::GeometricCI::Mode::general : fcp::GeometricCI::Mode::iid;

    std::vector<int> changepoints;
    std::vector<std::pair<int, int>> windows;
    ordered_json j;
    if (single) {
        const auto det = fcp::detect_single(series, cfg);
        j["detected"] = det.detected;
        j["stat"] = det.stat;
        if (det.detected) {
            changepoints.push_back(det.eta_hat);
            windows.emplace_back(1, n);
        }
    } else {
        const auto result = fcp::detect_multi(series, cfg);
        j["k_hat"] = result.k_hat;
        changepoints = result.changepoints;
        windows = result.refit_windows;
    }
    j["changepoints"] = changepoints;
    auto cis = ordered_json::array();
    for (std::size_t k = 0; k < changepoints.size(); ++k) {
        try {
            const fcp::GeometricCI ci = fcp::ci_for_change(
                series, windows[k].first, windows[k].second, changepoints[k], x0, mode, level,
                cfg.min_seg);
            cis.push_back(fcp::ci_to_json(ci));
        } catch (const std::exception& e) {
            ordered_json err;
            err["eta_hat"] = changepoints[k];
            err["error"] = e.what();
            cis.push_back(std::move(err));
        }
    }
    j["cis"] = std::move(cis);
    write_text(opts.output, j.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const std::string& model, int k, std::size_t n, std::size_t d,
                 const std::string& scores, double multiplier, std::uint64_t seed,
                 const std::string& prefix) {
    fcp::SimConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.k = k;
    cfg.change_multiplier = multiplier;
    cfg.frontier = fcp::FrontierSpec::defaults(parse_family(model), d);
    cfg.scores = parse_scores(scores);
    cfg.seed = seed;
    const auto [series, truth] = fcp::generate(cfg);

    std::ostringstream csv;
    fcp::write_series_csv(csv, series);
    write_text(prefix + ".csv", csv.str());
    write_text(prefix + ".truth.json", fcp::truth_to_json(truth, cfg).dump(2) + "\n");
    return 0;
}

std::vector<std::vector<int>> read_changepoint_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fcp::validation_error("cannot open " + path);
    std::vector<std::vector<int>> out;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<int> cps;
        std::string token;
        std::stringstream ss(line);
        while (ss >> token) {
            if (!token.empty() && token.back() == ',') token.pop_back();
            if (!token.empty()) cps.push_back(std::stoi(token));
        }
        out.push_back(std::move(cps));
    }
    return out;
}

struct BenchmarkOpts {
    std::string table = "t2";
    std::string row;
    int reps = 100;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    std::string detector = "";
    std::string file;
    std::size_t n = 1000;
    double an_side = 4.0;
    std::string lambda_str = "auto";
    double alpha = 0.1;
    std::string output = "-";
    std::string jsonl;
};

int cmd_benchmark(const BenchmarkOpts& opts) {
    if (!opts.seed_set) throw fcp::validation_error("benchmark requires an explicit --seed");

    fcp::SimConfig sim;
    sim.n = opts.n;
    std::string detector = opts.detector;
    if (opts.table == "t4") {
        sim.d = 1;
        sim.k = 2;
        sim.scores = fcp::ScoreDist::R4Mixture;
        sim.frontier = fcp::FrontierSpec::defaults(fcp::FrontierFamily::PiecewiseLinear, sim.d);
        if (detector.empty()) detector = "ms-fcp";
    } else {
        sim.d = opts.table == "t3" ? 2 : 1;
        sim.k = 2;
        sim.scores = fcp::ScoreDist::R1Uniform;
        sim.frontier = fcp::FrontierSpec::defaults(fcp::FrontierFamily::Constant, sim.d);
        if (detector.empty()) detector = "fcp";
    }
    // Row tokens override the table defaults, e.g. "K2,R1,Constant,d1".
    std::string token;
    std::stringstream ss(opts.row);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        if ((token[0] == 'K' || token[0] == 'k') && std::isdigit(static_cast<unsigned char>(token[1]))) {
            sim.k = std::stoi(token.substr(1));
        } else if ((token[0] == 'R' || token[0] == 'r') &&
                   std::isdigit(static_cast<unsigned char>(token[1]))) {
            sim.scores = parse_scores(token);
        } else if ((token[0] == 'd' || token[0] == 'D') &&
                   std::isdigit(static_cast<unsigned char>(token[1]))) {
            sim.d = static_cast<std::size_t>(std::stoi(token.substr(1)));
        } else {
            sim.frontier.family = parse_family(token);
        }
    }
    sim.frontier = fcp::FrontierSpec::defaults(sim.frontier.family, sim.d);

    fcp::DetectorConfig cfg;
    cfg.lambda = resolve_lambda(opts.lambda_str, sim.n);
    cfg.alpha_trim = opts.alpha;
    const double a_n = std::pow(opts.an_side, static_cast<double>(sim.d));

    fcp::Detector det;
    if (detector == "fcp") {
        det = [cfg](const fcp::Series& s, int) { return fcp::detect_multi(s, cfg).changepoints; };
    } else if (detector == "fcp-robust") {
        det = [cfg](const fcp::Series& s, int) {
            return fcp::detect_multi_robust(s, cfg).changepoints;
        };
    } else if (detector == "ms-fcp") {
        det = [cfg, a_n](const fcp::Series& s, int) {
            return fcp::detect_multi_local(s, cfg, a_n).changepoints;
        };
    } else if (detector == "oracle") {
        const fcp::SimConfig sim_copy = sim;
        const std::uint64_t master = opts.seed;
        det = [sim_copy, master](const fcp::Series&, int rep) {
            fcp::SimConfig c = sim_copy;
            c.seed = fcp::derive_seed(master, static_cast<std::uint64_t>(rep));
            return fcp::generate(c).second.changepoints;
        };
    } else if (detector == "empty") {
        det = [](const fcp::Series&, int) { return std::vector<int>{}; };
    } else if (detector == "file") {
        if (opts.file.empty()) throw fcp::validation_error("--detector file needs --file");
        auto lines = read_changepoint_lines(opts.file);
        det = [lines](const fcp::Series&, int rep) {
            if (rep < 0 || static_cast<std::size_t>(rep) >= lines.size())
                throw fcp::validation_error("no change points for replication " +
                                            std::to_string(rep));
            return lines[static_cast<std::size_t>(rep)];
        };
    } else {
        throw fcp::validation_error("unknown detector: " + detector);
    }

    const fcp::BenchmarkSummary summary =
        fcp::run_benchmark(sim, det, opts.reps, opts.seed, opts.jobs);

    const std::string setup = opts.table + (opts.row.empty() ? "" : ":" + opts.row);
    std::ostringstream csv;
    fcp::write_benchmark_summary_csv(csv, setup, detector, summary);
    if (summary.failures > 0)
        std::cerr << "warning: " << summary.failures << " replications failed and were "
                  << "excluded from the means\n";
    write_text(opts.output, csv.str());
    if (!opts.jsonl.empty()) {
        std::ostringstream jl;
        fcp::write_benchmark_jsonl(jl, summary);
        write_text(opts.jsonl, jl.str());
    }
    return 0;
}

int cmd_frontier(const std::string& input, const std::string& cps_str, const std::string& prefix,
                 double alpha, const std::string& scores_path) {
    const fcp::Series series = fcp::read_series_csv_file(input);
    const int n = static_cast<int>(series.n());
    std::vector<int> cps = parse_int_list(cps_str);
    std::sort(cps.begin(), cps.end());
    for (int cp : cps)
        if (cp < 1 || cp >= n) throw fcp::validation_error("change point outside [1, n-1]");

    std::vector<int> bounds;  // segment ends, inclusive
    bounds.insert(bounds.end(), cps.begin(), cps.end());
    bounds.push_back(n);
    int start = 1;
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        const int end = bounds[k];
        const auto frontier = fcp::FrontierEstimate::fit(
            std::span(series.obs).subspan(static_cast<std::size_t>(start - 1),
                                          static_cast<std::size_t>(end - start + 1)));
        std::ostringstream csv;
        fcp::write_frontier_csv(csv, frontier);
        write_text(prefix == "-" ? "-" : prefix + ".seg" + std::to_string(k + 1) + ".csv",
                   csv.str());
        start = end + 1;
    }
    if (!scores_path.empty()) {
        const auto full = fcp::FrontierEstimate::fit(std::span(series.obs));
        const fcp::TrimBox x0 = fcp::trim_quantile(series, alpha);
        std::ostringstream csv;
        fcp::write_scores_csv(csv, fcp::compute_scores(series, full, x0));
        write_text(scores_path, csv.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frontier change point detection"};
    app.require_subcommand(1);
    app.set_config("--config");

    DetectOpts detect_opts;
    bool robust = false;
    auto* detect = app.add_subcommand("detect", "multiple change point detection");
    detect_opts.attach(detect);
    detect->add_flag("--robust", robust, "use the drop-robust scan variant");

    DetectOpts local_opts;
    double an_side = 4.0;
    auto* detect_local = app.add_subcommand("detect-local", "multi-scale local-change detection");
    local_opts.attach(detect_local);
    detect_local->add_option("--an-side", an_side, "grid sizing factor (rescaled box side * A_n^(1/d))");

    DetectOpts ci_opts;
    std::string ci_mode = "iid";
    double ci_level = 0.9;
    bool ci_single = false;
    auto* ci = app.add_subcommand("ci", "detection with change-point confidence intervals");
    ci_opts.attach(ci);
    ci->add_option("--mode", ci_mode, "theta estimator: iid or general")
        ->check(CLI::IsMember({"iid", "general"}));
    ci->add_option("--level", ci_level, "confidence level in (0,1)");
    ci->add_flag("--single", ci_single, "at-most-one-change detection");

    std::string sim_model = "constant", sim_scores = "r1", sim_prefix = "sim";
    int sim_k = 2;
    std::size_t sim_n = 1000, sim_d = 1;
    double sim_mult = 1.75;
    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "draw a synthetic panel with ground truth");
    simulate->add_option("--model", sim_model,
                         "constant|additive|cobb-douglas|logistic|piecewise-linear");
    simulate->add_option("--k", sim_k, "number of change points");
    simulate->add_option("--n", sim_n, "series length");
    simulate->add_option("--d", sim_d, "input dimension");
    simulate->add_option("--scores", sim_scores, "score distribution r1|r2|r3|r4");
    simulate->add_option("--multiplier", sim_mult, "frontier growth per change");
    auto* seed_opt = simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--output", sim_prefix, "output prefix (<prefix>.csv, <prefix>.truth.json)");

    BenchmarkOpts bench;
    auto* benchmark = app.add_subcommand("benchmark", "seeded Monte-Carlo benchmark");
    benchmark->add_option("--table", bench.table, "t2 (d=1), t3 (d=2) or t4 (local)");
    benchmark->add_option("--row", bench.row, "setup tokens, e.g. K2,R1,Constant,d1");
    benchmark->add_option("--reps", bench.reps, "number of replications");
    auto* bseed = benchmark->add_option("--seed", bench.seed, "master seed");
    benchmark->add_option("--jobs", bench.jobs, "parallel workers");
    benchmark->add_option("--detector", bench.detector,
                          "fcp|fcp-robust|ms-fcp|oracle|empty|file");
    benchmark->add_option("--file", bench.file, "per-replication change point lists");
    benchmark->add_option("--n", bench.n, "series length");
    benchmark->add_option("--an-side", bench.an_side, "grid sizing factor for ms-fcp");
    benchmark->add_option("--lambda", bench.lambda_str, "detection threshold");
    benchmark->add_option("--alpha", bench.alpha, "trimming quantile level");
    benchmark->add_option("--output", bench.output, "summary CSV path");
    benchmark->add_option("--jsonl", bench.jsonl, "per-replication JSONL path");

    std::string fr_input, fr_cps, fr_prefix = "frontier", fr_scores;
    double fr_alpha = 0.1;
    auto* frontier = app.add_subcommand("frontier", "export per-segment FDH staircases");
    frontier->add_option("--input", fr_input, "input CSV")->required();
    frontier->add_option("--changepoints", fr_cps, "comma-separated change locations");
    frontier->add_option("--output", fr_prefix, "output prefix (<prefix>.segK.csv)");
    frontier->add_option("--alpha", fr_alpha, "trimming level for --export-scores");
    frontier->add_option("--export-scores", fr_scores, "also write t,r_hat,active CSV here");

    try {
        app.parse(argc, argv);
        if (simulate->parsed() && seed_opt->count() == 0)
            throw fcp::validation_error("simulate requires an explicit --seed");
        bench.seed_set = bseed->count() > 0;

        if (detect->parsed()) return cmd_detect(detect_opts, robust);
        if (detect_local->parsed()) return cmd_detect_local(local_opts, an_side);
        if (ci->parsed()) return cmd_ci(ci_opts, ci_mode, ci_level, ci_single);
        if (simulate->parsed())
            return cmd_simulate(sim_model, sim_k, sim_n, sim_d, sim_scores, sim_mult, sim_seed,
                                sim_prefix);
        if (benchmark->parsed()) return cmd_benchmark(bench);
        if (frontier->parsed())
            return cmd_frontier(fr_input, fr_cps, fr_prefix, fr_alpha, fr_scores);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const fcp::validation_error& e) {
        nlohmann::json err{{"error", e.what()}, {"kind", "validation"}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", e.what()}, {"kind", "internal"}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}

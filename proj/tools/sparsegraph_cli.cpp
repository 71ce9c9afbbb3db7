#include "sparsegraph/graphstats.hpp"
#include "sparsegraph/harness.hpp"
#include "sparsegraph/inference.hpp"
#include "sparsegraph/samplers.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sg = sparsegraph;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitPremise = 3;

void write_text(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text << '\n';
}

sg::Json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    return sg::Json::parse(f);
}

struct SimulateArgs {
    std::string model = "ggp";
    double sigma = 0.5, tau = 1.0, t = 100.0;
    double alpha = 0.5, theta = 0.0, p = 0.5;
    std::int64_t edges = 10000, n = 1000, d_max = 0;
    std::vector<double> thetas;
    std::uint64_t seed = 1;
    bool keep_weights = false;
    double missed_edge_tol = 0.1, max_atoms = 8e6;
    std::string out;
};

int run_simulate(const SimulateArgs& a) {
    sg::SimulatedGraph g;
    if (a.model == "ggp") {
        sg::GGPSamplerOptions opts;
        opts.keep_weights = a.keep_weights;
        opts.missed_edge_tol = a.missed_edge_tol;
        opts.max_atoms = a.max_atoms;
        g = sg::sample_ggp_graph(sg::make_ggp_params(a.sigma, a.tau, a.t, opts), a.seed, opts);
    } else if (a.model == "hollywood") {
        g = sg::sample_hollywood(a.alpha, a.theta, a.edges, a.seed);
    } else if (a.model == "dense_er") {
        g = sg::sample_dense_er(a.n, a.p, a.seed);
    } else if (a.model == "dc_er") {
        std::vector<double> th = a.thetas.empty() ? std::vector<double>(static_cast<std::size_t>(a.n), 1.0) : a.thetas;
        g = sg::sample_dc_er(th, a.p, a.seed);
    } else {  // kr_config
        const std::int64_t dmax = a.d_max > 0 ? a.d_max
                                              : static_cast<std::int64_t>(std::ceil(
                                                    std::pow(static_cast<double>(a.n), 1.0 / (1.0 + a.alpha))));
        const auto deg =
            sg::sample_constrained_config_degrees(sg::karlin_rouault_pmf_table(a.alpha, dmax), dmax, a.n, a.seed);
        g.summary = sg::summarize(deg);
        g.meta.model = "kr_config";
        g.meta.params = {{"alpha", a.alpha}, {"n", static_cast<double>(a.n)}, {"d_max", static_cast<double>(dmax)}};
        g.seed = a.seed;
    }
    const std::string out = a.out.empty() ? (std::filesystem::path(sg::default_output_dir()) / "graph.json").string() : a.out;
    write_text(out, sg::dump_json(sg::to_json(g)));
    std::cerr << "wrote " << out << " (N=" << g.summary.n << ", D*=" << g.summary.d_star << ")\n";
    return 0;
}

struct EstimateArgs {
    std::string in, out;
    std::optional<double> ci;
    double dense_c = 0.1, dense_ratio = 1.0, dense_loggedness = 0.2;
};

int run_estimate(const EstimateArgs& a) {
    const sg::GraphSummary g = sg::summary_from_json(read_json(a.in));
    const sg::MleFit fit = sg::fit_mle(g);
    sg::Json j;
    if (fit.interior()) {
        j = sg::to_json(fit, sg::laplace_posterior(fit, g), a.ci);
    } else {
        j = sg::to_json(fit);
        if (a.ci) j["ci_note"] = "no interval at a boundary fit";
    }
    const auto diag = sg::dense_diagnostics(g, a.dense_c);
    j["dense_diagnostics"] = {{"c", a.dense_c}, {"density_ratio", diag.density_ratio}, {"loggedness", diag.loggedness}};
    if (diag.density_ratio >= a.dense_ratio && diag.loggedness >= a.dense_loggedness) j["flags"].push_back("dense_regime");
    try {
        const double ah = sg::solve_alpha_hat(g);
        j["alpha_hat"] = ah;
        j["tau_star_emp"] = sg::empirical_tau_star(ah, g);
    } catch (const sg::NoSolution&) {
    }
    const std::string text = sg::dump_json(j);
    if (a.out.empty()) std::cout << text << '\n';
    else write_text(a.out, text);
    return 0;
}

struct ExperimentArgs {
    std::string name, config, out;
    unsigned threads = 0;
    std::vector<double> sigma, tau, alpha, ladder;
    std::vector<std::uint64_t> seeds;
    int n_seeds = 0;
};

int run_experiment_cmd(const ExperimentArgs& a) {
    sg::ExperimentConfig cfg;
    if (!a.config.empty()) {
        const sg::Json j = read_json(a.config);
        const std::string name = a.name.empty() ? j.at("name").get<std::string>() : a.name;
        cfg = sg::config_from_json(j, sg::default_config(name));
        cfg.name = name;
    } else {
        cfg = sg::default_config(a.name);
    }
    if (!a.sigma.empty()) cfg.params["sigma"] = a.sigma;
    if (!a.tau.empty()) cfg.params["tau"] = a.tau;
    if (!a.alpha.empty()) cfg.params["alpha"] = a.alpha;
    if (!a.ladder.empty()) cfg.ladder = a.ladder;
    if (!a.seeds.empty()) cfg.seeds = a.seeds;
    if (a.n_seeds > 0) {
        cfg.seeds.clear();
        for (int i = 1; i <= a.n_seeds; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
    }
    if (!a.out.empty()) cfg.out_dir = a.out;
    if (a.threads > 0) cfg.threads = a.threads;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    const auto rep = sg::run_experiment(cfg);
    const auto paths = sg::write_report(rep, cfg.out_dir);
    for (const auto& c : rep.criteria)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << sg::format_double(c.value)
                  << " tol=" << sg::format_double(c.tolerance) << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
    for (const auto& f : rep.failures) std::cout << "note: " << f << '\n';
    for (const auto& p : paths) std::cerr << "wrote " << p << '\n';
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and inference for sparse graph models"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Simulate a graph and write its degree summary as JSON");
    c_sim->add_option("--model", sim.model, "ggp | hollywood | dense_er | dc_er | kr_config")
        ->check(CLI::IsMember({"ggp", "hollywood", "dense_er", "dc_er", "kr_config"}));
    c_sim->add_option("--sigma", sim.sigma, "GGP stable index")->check(CLI::Range(-50.0, 0.999999));
    c_sim->add_option("--tau", sim.tau, "GGP tilting")->check(CLI::PositiveNumber);
    c_sim->add_option("--t", sim.t, "GGP size parameter")->check(CLI::PositiveNumber);
    c_sim->add_option("--alpha", sim.alpha, "Hollywood / Karlin-Rouault index")->check(CLI::Range(1e-9, 1.0 - 1e-9));
    c_sim->add_option("--theta", sim.theta, "Hollywood concentration");
    c_sim->add_option("--edges", sim.edges, "Hollywood edge count")->check(CLI::PositiveNumber);
    c_sim->add_option("--n", sim.n, "node count for dense_er, dc_er, kr_config")->check(CLI::PositiveNumber);
    c_sim->add_option("--p", sim.p, "edge probability scale")->check(CLI::Range(0.0, 1.0));
    c_sim->add_option("--thetas", sim.thetas, "dc_er node weights (default all 1)");
    c_sim->add_option("--dmax", sim.d_max, "kr_config maximum degree (default n^(1/(1+alpha)))");
    c_sim->add_option("--seed", sim.seed, "random seed");
    c_sim->add_option("--missed-edge-tol", sim.missed_edge_tol, "GGP truncation tolerance")->check(CLI::PositiveNumber);
    c_sim->add_option("--max-atoms", sim.max_atoms, "GGP atom budget")->check(CLI::PositiveNumber);
    c_sim->add_flag("--keep-weights", sim.keep_weights, "store GGP weights in the output");
    c_sim->add_option("--out", sim.out, "output path (default $SPARSEGRAPH_OUT/graph.json)");

    EstimateArgs est;
    auto* c_est = app.add_subcommand("estimate", "Fit the GGP model to a degree summary");
    c_est->add_option("--in", est.in, "graph JSON")->required()->check(CLI::ExistingFile);
    c_est->add_option("--out", est.out, "output path (default stdout)");
    c_est->add_option("--ci", est.ci, "credible level in (0,1)")->check(CLI::Range(0.0, 1.0));
    c_est->add_option("--dense-c", est.dense_c, "exponent slack c in D*/N^(2-c)");

    ExperimentArgs ex;
    auto* c_ex = app.add_subcommand("experiment", "Run a named experiment and write CSV + JSON reports");
    c_ex->add_option("--name", ex.name, "experiment name")->check(CLI::IsMember(sg::experiment_names()));
    c_ex->add_option("--config", ex.config, "JSON config overriding the defaults")->check(CLI::ExistingFile);
    c_ex->add_option("--out", ex.out, "output directory (default $SPARSEGRAPH_OUT or .)");
    c_ex->add_option("--threads", ex.threads, "worker threads (default: hardware)");
    c_ex->add_option("--sigma", ex.sigma, "override sigma list");
    c_ex->add_option("--tau", ex.tau, "override tau list");
    c_ex->add_option("--alpha", ex.alpha, "override alpha");
    c_ex->add_option("--ladder", ex.ladder, "override the size ladder");
    c_ex->add_option("--seeds", ex.seeds, "explicit seed list");
    c_ex->add_option("--n-seeds", ex.n_seeds, "use seeds 1..k")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    if (c_ex->parsed() && ex.name.empty() && ex.config.empty()) {
        std::cerr << "experiment: --name or --config is required\n";
        return kExitUsage;
    }

    try {
        if (c_sim->parsed()) return run_simulate(sim);
        if (c_est->parsed()) return run_estimate(est);
        return run_experiment_cmd(ex);
    } catch (const sg::NoSolution& e) {
        std::cerr << e.what() << '\n';
        return kExitPremise;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid_argument: " << e.what() << '\n';
        return kExitPremise;
    } catch (const std::domain_error& e) {
        std::cerr << "domain_error: " << e.what() << '\n';
        return kExitPremise;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

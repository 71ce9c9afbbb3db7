#include "doctest.h"
#include "oracles.hpp"

#include "sparsegraph/harness.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

using namespace sparsegraph;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "sparsegraph_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Run {
    int code;
    std::string err;
};

Run cli(const std::string& args, const fs::path& dir) {
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string(SPARSEGRAPH_CLI) + " " + args + " 2> " + err.string() + " > " + (dir / "stdout.txt").string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

bool has_flag(const Json& j, const std::string& flag) {
    if (!j.contains("flags")) return false;
    for (const auto& f : j["flags"])
        if (f.get<std::string>() == flag) return true;
    return false;
}

ExperimentConfig small_alphahat() {
    auto cfg = default_config("alphahat");
    cfg.ladder = {2000, 4000, 8000};
    cfg.seeds = {1, 2, 3};
    return cfg;
}

}  // namespace

TEST_CASE("doubles are written with 17 significant digits and read back exactly") {
    oracle::Gen gen(1);
    for (int i = 0; i < 1000; ++i) {
        const double x = gen.log_uniform(1e-300, 1e300) * (gen.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
        CHECK(std::stod(format_double(x)) == x);
        Json j = {{"x", x}};
        CHECK(Json::parse(dump_json(j))["x"].get<double>() == x);
    }
    Json j = {{"a", std::numeric_limits<double>::quiet_NaN()}, {"b", std::numeric_limits<double>::infinity()}};
    const auto back = Json::parse(dump_json(j));
    CHECK(back["a"].is_null());
    CHECK(back["b"].is_null());
}

TEST_CASE("graph summaries round-trip through JSON") {
    oracle::Gen gen(2);
    for (int i = 0; i < 20; ++i) {
        const auto g = from_histogram(gen.histogram(500));
        const auto back = summary_from_json(Json::parse(dump_json(to_json(g))));
        CHECK(back.histogram == g.histogram);
        CHECK(back.n == g.n);
        CHECK(back.d_star == g.d_star);
        CHECK(back.tail_counts == g.tail_counts);
    }
    GGPSamplerOptions opts;
    opts.keep_weights = true;
    const auto sim = sample_ggp_graph(make_ggp_params(0.5, 1.0, 20.0, opts), 3, opts);
    const auto j = Json::parse(dump_json(to_json(sim)));
    CHECK(summary_from_json(j).histogram == sim.summary.histogram);
    CHECK(j["model"]["name"].get<std::string>() == "ggp");
    CHECK(j["weights"].size() == sim.weights->size());
    CHECK_THROWS(summary_from_json(Json::parse(R"({"histogram": [[0, 3]]})")));
    CHECK_THROWS(summary_from_json(Json::parse(R"({"nodes": 3})")));
}

TEST_CASE("fit and posterior JSON carry the documented fields") {
    const auto g = sample_ggp_graph(make_ggp_params(0.5, 1.0, 60.0), 4).summary;
    const auto fit = fit_mle(g);
    const auto post = laplace_posterior(fit, g);
    const auto j = Json::parse(dump_json(to_json(fit, post, 0.9)));
    for (const char* key : {"sigma_hat", "tau_hat", "s_hat", "s_star_t", "cov", "ci", "flags"}) CHECK(j.contains(key));
    CHECK(j["sigma_hat"].get<double>() == fit.sigma_hat);
    CHECK(j["cov"].size() == 3);
    CHECK(j["cov"][1][2].get<double>() == post.cov(1, 2));
    const auto ci = credible_interval(post, Coord::s, 0.9);
    CHECK(j["ci"]["s"][0].get<double>() == ci.first);
    CHECK(j["ci"]["s"][1].get<double>() == ci.second);
}

TEST_CASE("experiment configs") {
    for (const auto& name : experiment_names()) {
        const auto cfg = default_config(name);
        CHECK(cfg.name == name);
        CHECK_NOTHROW(cfg.validate());
        const auto back = config_from_json(Json::parse(dump_json(to_json(cfg))), ExperimentConfig{});
        CHECK(dump_json(to_json(back)) == dump_json(to_json(cfg)));
    }
    CHECK_THROWS(default_config("nonsense"));
    auto bad = default_config("sparsity");
    bad.ladder.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = default_config("sparsity");
    bad.seeds.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = default_config("sparsity");
    bad.tolerances.begin()->second = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    const auto over = config_from_json(Json::parse(R"({"seeds": [9, 10], "params": {"sigma": [0.4]}})"), default_config("sparsity"));
    CHECK(over.seeds == std::vector<std::uint64_t>{9, 10});
    CHECK(over.param("sigma") == 0.4);
    CHECK(over.ladder == default_config("sparsity").ladder);
}

TEST_CASE("parallel_map is order-preserving and rethrows") {
    const auto sq = [](std::size_t i) { return static_cast<double>(i * i); };
    CHECK(parallel_map(100, 1, sq) == parallel_map(100, 4, sq));
    CHECK(parallel_map(100, 7, sq)[42] == 1764.0);
    CHECK_THROWS_AS(parallel_map(10, 3,
                                 [](std::size_t i) -> int {
                                     if (i == 6) throw std::runtime_error("boom");
                                     return 0;
                                 }),
                    std::runtime_error);
}

TEST_CASE("experiments are deterministic and independent of the thread count") {
    auto serial = small_alphahat();
    serial.threads = 1;
    auto parallel = serial;
    parallel.threads = 4;
    const auto a = run_experiment(serial), b = run_experiment(serial), c = run_experiment(parallel);
    CHECK(dump_json(a.aggregate()) == dump_json(b.aggregate()));
    CHECK(dump_json(a.aggregate()) == dump_json(c.aggregate()));
    CHECK(a.csv() == c.csv());
    CHECK(a.rows.size() == 9);
    for (std::size_t k = 1; k < a.rows.size(); ++k)
        CHECK(std::make_tuple(a.rows[k - 1].group, a.rows[k - 1].t, a.rows[k - 1].seed) <
              std::make_tuple(a.rows[k].group, a.rows[k].t, a.rows[k].seed));
    const std::string header = a.csv().substr(0, a.csv().find('\n'));
    CHECK(header == "seed,t,N,D*,sigma_hat,tau_hat,s_hat,alpha_hat,tau_star_emp,flags");
    const auto agg = a.aggregate();
    CHECK(agg["experiment"].get<std::string>() == "alphahat");
    CHECK(agg["pass"].get<bool>() == a.pass());
    CHECK(agg["criteria"].size() == a.criteria.size());
}

TEST_CASE("reports are written to the requested directory") {
    const auto dir = scratch("report");
    const auto rep = run_experiment(small_alphahat());
    const auto paths = write_report(rep, dir.string());
    REQUIRE(paths.size() == 2);
    CHECK(fs::path(paths[0]).filename() == "alphahat.csv");
    CHECK(fs::path(paths[1]).filename() == "alphahat.json");
    CHECK(slurp(paths[0]) == rep.csv());
    CHECK(Json::parse(slurp(paths[1]))["experiment"].get<std::string>() == "alphahat");
}

TEST_CASE("output directory defaults to the environment variable") {
    ::setenv("SPARSEGRAPH_OUT", "/tmp/somewhere", 1);
    CHECK(default_output_dir() == "/tmp/somewhere");
    ::unsetenv("SPARSEGRAPH_OUT");
    CHECK(default_output_dir() == ".");
}

TEST_CASE("CLI: simulate is deterministic and writes valid summaries") {
    const auto dir = scratch("cli_sim");
    const auto a = dir / "a.json", b = dir / "b.json";
    const std::string args = "simulate --model ggp --sigma 0.5 --tau 1 --t 200 --seed 7 --out ";
    REQUIRE(cli(args + a.string(), dir).code == 0);
    REQUIRE(cli(args + b.string(), dir).code == 0);
    CHECK(slurp(a) == slurp(b));
    const auto j = Json::parse(slurp(a));
    const auto g = summary_from_json(j);
    std::int64_t n = 0, d = 0;
    for (const auto& [deg, c] : g.histogram) {
        n += c;
        d += deg * c;
    }
    CHECK(j["n"].get<std::int64_t>() == n);
    CHECK(j["d_star"].get<std::int64_t>() == d);

    const auto h = dir / "h.json";
    REQUIRE(cli("simulate --model hollywood --alpha 0.5 --edges 50000 --seed 3 --out " + h.string(), dir).code == 0);
    CHECK(summary_from_json(Json::parse(slurp(h))).n > 0);
    ::setenv("SPARSEGRAPH_OUT", dir.string().c_str(), 1);
    CHECK(cli("simulate --model dense_er --n 50 --p 0.3", dir).code == 0);
    ::unsetenv("SPARSEGRAPH_OUT");
    CHECK(fs::exists(dir / "graph.json"));
}

TEST_CASE("CLI: estimate") {
    const auto dir = scratch("cli_est");
    const auto g = dir / "g.json", out = dir / "fit.json";
    REQUIRE(cli("simulate --model ggp --sigma 0.5 --tau 1 --t 500 --seed 1 --out " + g.string(), dir).code == 0);
    REQUIRE(cli("estimate --in " + g.string() + " --ci 0.95 --out " + out.string(), dir).code == 0);
    const auto j = Json::parse(slurp(out));
    CHECK(j["sigma_hat"].get<double>() > 0.4);
    CHECK(j["sigma_hat"].get<double>() < 0.6);
    CHECK(j["ci"]["sigma"].size() == 2);

    // all nodes of degree one
    const auto ones = dir / "ones.json";
    std::ofstream(ones) << R"({"histogram": [[1, 40]]})";
    const auto r = cli("estimate --in " + ones.string(), dir);
    CHECK(r.code == 3);
    CHECK(r.err.find("NoSolution: N_{t,1} = N") != std::string::npos);

    // dense input: the fit sits on the lower sigma boundary, and a large enough graph trips the diagnostics
    const auto dense = dir / "dense.json", dfit = dir / "dense_fit.json";
    REQUIRE(cli("simulate --model dense_er --n 200 --p 0.5 --seed 2 --out " + dense.string(), dir).code == 0);
    REQUIRE(cli("estimate --in " + dense.string() + " --out " + dfit.string(), dir).code == 0);
    const auto dj = Json::parse(slurp(dfit));
    CHECK((has_flag(dj, "sigma_lo_boundary") || dj["sigma_hat"].get<double>() <= 0.05));
    REQUIRE(cli("simulate --model dense_er --n 2000 --p 0.5 --seed 2 --out " + dense.string(), dir).code == 0);
    REQUIRE(cli("estimate --in " + dense.string() + " --out " + dfit.string(), dir).code == 0);
    CHECK(has_flag(Json::parse(slurp(dfit)), "dense_regime"));
}

TEST_CASE("CLI: usage errors and experiments") {
    const auto dir = scratch("cli_exp");
    CHECK(cli("simulate --bogus 1", dir).code == 2);
    CHECK(cli("simulate --model nope", dir).code == 2);
    CHECK(cli("", dir).code == 2);
    CHECK(cli("experiment", dir).code == 2);
    // exit status mirrors the aggregate verdict
    const int code = cli("experiment --name alphahat --ladder 2000 4000 8000 --n-seeds 2 --out " + dir.string(), dir).code;
    REQUIRE(fs::exists(dir / "alphahat.csv"));
    REQUIRE(fs::exists(dir / "alphahat.json"));
    CHECK(code == (Json::parse(slurp(dir / "alphahat.json"))["pass"].get<bool>() ? 0 : 1));
    CHECK(cli("experiment --name alphahat --out " + dir.string(), dir).code == 0);
    const int dense = cli("experiment --name dense --out " + dir.string(), dir).code;
    CHECK(dense == (Json::parse(slurp(dir / "dense.json"))["pass"].get<bool>() ? 0 : 1));
    const auto cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"name": "alphahat", "ladder": [], "seeds": [1]})";
    CHECK(cli("experiment --config " + cfg.string(), dir).code == 2);
}

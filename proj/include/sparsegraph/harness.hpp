#pragma once

#include "sparsegraph/inference.hpp"
#include "sparsegraph/samplers.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace sparsegraph {

using Json = nlohmann::ordered_json;

// %.17g, with non-finite values spelled as in C ("nan", "inf").
std::string format_double(double x);
// JSON text in which every floating value uses format_double; non-finite values become null.
std::string dump_json(const Json& j, int indent = 2);

Json to_json(const GraphSummary& g);
Json to_json(const SimulatedGraph& g);
// Accepts a SimulatedGraph document or any object with a "histogram" array of [j, count] pairs.
GraphSummary summary_from_json(const Json& j);

Json to_json(const MleFit& fit);
// Fit plus Laplace covariance, with a credible interval per coordinate when ci_level is given.
Json to_json(const MleFit& fit, const PosteriorApprox& post, std::optional<double> ci_level);

// Output directory used when none is given: $SPARSEGRAPH_OUT, else the working directory.
std::string default_output_dir();

struct ExperimentConfig {
    std::string name;
    // Model parameters; list-valued so that experiments can sweep a parameter.
    std::map<std::string, std::vector<double>> params;
    std::vector<double> ladder;
    std::vector<std::uint64_t> seeds;
    std::string out_dir;
    std::map<std::string, double> tolerances;
    unsigned threads = 0;  // 0: one per hardware thread

    double param(const std::string& key) const;
    const std::vector<double>& param_list(const std::string& key) const;
    double tol(const std::string& key) const;
    void validate() const;
};

const std::vector<std::string>& experiment_names();
ExperimentConfig default_config(const std::string& name);
Json to_json(const ExperimentConfig& cfg);
// Overrides fields of base with those present in j.
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base);

struct FitRow {
    double t = 0.0;  // ladder value: GGP time, edge count or node count
    std::uint64_t seed = 0;
    std::int64_t n = 0;
    std::int64_t d_star = 0;
    double sigma_hat = 0.0;
    double tau_hat = 0.0;
    double s_hat = 0.0;
    double alpha_hat = 0.0;
    double tau_star_emp = 0.0;
    std::vector<std::string> flags;
    std::string group;  // label of the sweep cell the row belongs to
};

struct CriterionResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::string name;
    ExperimentConfig config;
    std::vector<FitRow> rows;
    std::vector<CriterionResult> criteria;
    Json summary = Json::object();
    std::vector<std::string> failures;

    bool pass() const;
    Json aggregate() const;
    std::string csv() const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);
// Writes <out>/<name>.csv and <out>/<name>.json; returns the two paths.
std::vector<std::string> write_report(const ExperimentReport& report, const std::string& out_dir);

unsigned resolve_threads(unsigned requested);

// out[i] = fn(i) for i < n, computed on up to `threads` workers. Results do not
// depend on the thread count. The first exception thrown by fn is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, unsigned threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(n)));
    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace sparsegraph

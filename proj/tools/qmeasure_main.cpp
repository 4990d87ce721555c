// qmeasure: train variational quantum classifiers with learnable Hermitian
// measurements on the two-moons task, check gradients against finite
// differences, inspect observable spectra, and generate datasets.
//
// Exit codes: 0 success, 1 check failure, 2 usage/config error,
// 3 runtime abort (non-finite loss or unexpected failure).

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qm/data.hpp"
#include "qm/errors.hpp"
#include "qm/experiment.hpp"
#include "qm/gradients.hpp"
#include "qm/io.hpp"
#include "qm/observable.hpp"
#include "qm/serialize.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 0;

/// QMEASURE_SEED provides the default seed when a command does not get one
/// explicitly. ConfigError when set but not a valid integer.
std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("QMEASURE_SEED");
    if (v == nullptr) return std::nullopt;
    try {
        std::size_t pos = 0;
        const unsigned long long s = std::stoull(v, &pos);
        if (pos != std::string(v).size()) throw std::invalid_argument(v);
        return static_cast<std::uint64_t>(s);
    } catch (const std::exception&) {
        throw qm::ConfigError(std::string("QMEASURE_SEED is not an integer: '") + v + "'");
    }
}

const char* kseed_note = "Defaults to $QMEASURE_SEED, then 0.";

const char* ktrain_footer = R"(Config JSON schema (every key optional):
  {"circuit": {"n_qubits": 4, "n_layers": 2},
   "regimes": ["fixed_pauli_z", "learnable_shared", "learnable_separate"],
   "noises": [0.1, 0.2, 0.3],
   "seeds": [0, 1, 2, 3, 4],
   "epochs": 30, "batch_size": 20,
   "total_samples": 300, "train_size": 200, "test_size": 100,
   "optimizers": {"angles": {"kind": "rmsprop", "lr": 0.01},
                  "observables": {"kind": "adam", "lr": 0.1}},
   "observable_init": "random"}
Override keys use the same dotted paths, e.g.
  --overrides epochs=5 optimizers.observables.lr=0.05 seeds=0,1
Outputs: one {regime}_{noise}_{seed}.csv per run and one
{regime}_{noise}_aggregate.json per (regime, noise) cell.)";

int cmd_train(const std::string& config_path, const std::string& out_dir,
              std::size_t jobs, const std::vector<std::string>& overrides) {
    qm::SweepConfig config;
    bool seeds_given = false;
    if (!config_path.empty()) {
        const std::string text = qm::read_file(config_path);
        config = qm::sweep_config_from_json(text);
        seeds_given = nlohmann::json::parse(text).contains("seeds");
    }
    for (const std::string& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw qm::ConfigError("override '" + kv + "' is not of the form key=value");
        }
        const std::string key = kv.substr(0, eq);
        if (key == "seeds") seeds_given = true;
        qm::apply_override(config, key, kv.substr(eq + 1));
    }
    if (!seeds_given) {
        if (const auto s = env_seed()) config.seeds = {*s};
    }

    const qm::SweepResult result = qm::run_sweep(config, out_dir, jobs, &std::cerr);
    for (const qm::AggregateReport& rep : result.aggregates) {
        std::cout << qm::regime_name(rep.regime) << " noise=" << qm::fmt_compact(rep.noise)
                  << ": final test acc " << qm::fmt_compact(rep.final_test_acc_mean)
                  << " +- " << qm::fmt_compact(rep.final_test_acc_std) << "\n";
    }
    return 0;
}

int cmd_gradcheck(std::size_t trials, std::uint64_t seed, bool corrupt) {
    const std::vector<qm::GradCheck> checks = qm::run_gradcheck(trials, seed, corrupt);
    nlohmann::json report;
    report["seed"] = seed;
    nlohmann::json arr = nlohmann::json::array();
    bool all_passed = true;
    for (const qm::GradCheck& c : checks) {
        arr.push_back({{"name", c.name},
                       {"trials", c.trials},
                       {"max_abs_error", c.max_abs_error},
                       {"tolerance", c.tolerance},
                       {"passed", c.passed()}});
        std::cerr << c.name << ": max |analytic - fd| = " << c.max_abs_error
                  << " (tolerance " << c.tolerance << ", " << c.trials << " trials) "
                  << (c.passed() ? "ok" : "FAIL") << "\n";
        all_passed = all_passed && c.passed();
    }
    report["checks"] = arr;
    report["passed"] = all_passed;
    std::cout << report.dump(2) << "\n";
    return all_passed ? 0 : 1;
}

int cmd_spectrum(const std::string& observable_path) {
    const qm::Observable obs = qm::load_observable(observable_path);
    const std::vector<double> eigs = qm::spectrum(obs.params);
    const nlohmann::json j = {{"eigenvalues", eigs},
                              {"lambda_min", eigs.front()},
                              {"lambda_max", eigs.back()}};
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_gen_data(std::size_t n, double noise, std::uint64_t seed,
                 const std::string& out_path) {
    const qm::Dataset d = qm::make_moons(n, noise, seed);
    qm::save_csv(d, out_path);
    std::cerr << "wrote " << d.size() << " samples to " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational quantum classifier with learnable Hermitian measurements"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "runs";
    std::size_t jobs = 1;
    std::vector<std::string> overrides;
    CLI::App* train = app.add_subcommand("train", "Run the (regime x noise x seed) sweep");
    train->add_option("--config", config_path, "Sweep config JSON (defaults when omitted)")
        ->type_name("PATH");
    train->add_option("--output-dir", out_dir, "Directory for run CSVs / aggregate JSONs")
        ->capture_default_str()
        ->type_name("PATH");
    train->add_option("--jobs", jobs, "Worker threads for independent runs")
        ->capture_default_str();
    train->add_option("--overrides", overrides, "key=value config overrides");
    train->footer(ktrain_footer);

    std::size_t trials = 100;
    std::uint64_t gc_seed = kDefaultSeed;
    bool corrupt = false;
    CLI::App* gradcheck = app.add_subcommand(
        "gradcheck", "Compare analytic gradients against finite differences");
    gradcheck->add_option("--trials", trials, "Random instances per check")
        ->capture_default_str();
    CLI::Option* gc_seed_opt =
        gradcheck->add_option("--seed", gc_seed, std::string("Base seed. ") + kseed_note);
    gradcheck->add_flag("--corrupt", corrupt,
                        "Perturb the analytic gradients first (negative control; "
                        "a healthy build then exits 1)");

    std::string observable_path;
    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Print the eigenvalues of a serialized observable as JSON");
    spectrum->add_option("observable", observable_path, "Observable JSON file")
        ->required()
        ->type_name("PATH");

    std::size_t n_samples = 300;
    double noise = 0.1;
    std::uint64_t gd_seed = kDefaultSeed;
    std::string data_out = "moons.csv";
    CLI::App* gen_data = app.add_subcommand("gen-data", "Generate a two-moons CSV");
    gen_data->add_option("--samples", n_samples, "Total sample count")
        ->capture_default_str();
    gen_data->add_option("--noise", noise, "Gaussian noise standard deviation")
        ->capture_default_str();
    CLI::Option* gd_seed_opt =
        gen_data->add_option("--seed", gd_seed, std::string("Seed. ") + kseed_note);
    gen_data->add_option("--out", data_out, "Output CSV path")
        ->capture_default_str()
        ->type_name("PATH");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) {
            return cmd_train(config_path, out_dir, jobs, overrides);
        }
        if (gradcheck->parsed()) {
            if (gc_seed_opt->count() == 0) gc_seed = env_seed().value_or(kDefaultSeed);
            return cmd_gradcheck(trials, gc_seed, corrupt);
        }
        if (spectrum->parsed()) {
            return cmd_spectrum(observable_path);
        }
        if (gen_data->parsed()) {
            if (gd_seed_opt->count() == 0) gd_seed = env_seed().value_or(kDefaultSeed);
            return cmd_gen_data(n_samples, noise, gd_seed, data_out);
        }
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const qm::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const qm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

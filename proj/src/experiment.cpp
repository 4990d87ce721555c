#include "qm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <thread>
#include <utility>

#include <json.hpp>

#include "qm/errors.hpp"
#include "qm/gradients.hpp"
#include "qm/io.hpp"
#include "qm/rng.hpp"

namespace qm {

namespace {

// One RNG stream per consumer of randomness inside a run, so regimes that
// skip a consumer (e.g. FixedPauliZ never draws observable inits) still
// replay every other stream identically.
constexpr std::uint64_t kSeedData = 1;
constexpr std::uint64_t kSeedSplit = 2;
constexpr std::uint64_t kSeedAngles = 3;
constexpr std::uint64_t kSeedObservableBase = 16; // + class index
constexpr std::uint64_t kSeedShuffleBase = 1000;  // + zero-based epoch

} // namespace

std::string regime_name(Regime regime) {
    switch (regime) {
    case Regime::FixedPauliZ: return "fixed_pauli_z";
    case Regime::LearnableShared: return "learnable_shared";
    case Regime::LearnableSeparate: return "learnable_separate";
    }
    throw ConfigError("unknown regime");
}

Regime regime_from_name(const std::string& name) {
    if (name == "fixed_pauli_z") return Regime::FixedPauliZ;
    if (name == "learnable_shared") return Regime::LearnableShared;
    if (name == "learnable_separate") return Regime::LearnableSeparate;
    throw ConfigError("unknown regime '" + name +
                      "' (expected fixed_pauli_z, learnable_shared, or learnable_separate)");
}

std::string observable_init_name(ObservableInit init) {
    return init == ObservableInit::PauliZ ? "pauli_z" : "random";
}

ObservableInit observable_init_from_name(const std::string& name) {
    if (name == "pauli_z") return ObservableInit::PauliZ;
    if (name == "random") return ObservableInit::Random;
    throw ConfigError("unknown observable init '" + name + "' (expected pauli_z or random)");
}

std::vector<double> Model::class_expectations(std::span<const double> x) const {
    const StateVector psi = forward_state(x, angles, circuit);
    std::vector<double> out;
    out.reserve(observables.size());
    for (const auto& obs : observables) {
        out.push_back(expectation(psi, obs.params, obs.layout));
    }
    return out;
}

int predict(const Model& model, std::span<const double> x) {
    const std::vector<double> e = model.class_expectations(x);
    if (e.empty()) throw ValidationError("predict: model has no observables");
    std::size_t best = 0;
    for (std::size_t k = 1; k < e.size(); ++k) {
        if (e[k] > e[best]) best = k;
    }
    return static_cast<int>(best);
}

double accuracy(const Model& model, const Dataset& data) {
    if (data.size() == 0) throw ValidationError("accuracy: empty dataset");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::span<const double> x(data.points[i].data(), data.points[i].size());
        if (predict(model, x) == data.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

OptimizerSpec ExperimentConfig::resolved_angle_optimizer() const {
    return angle_optimizer.value_or(OptimizerSpec::rmsprop(1e-2));
}

std::optional<OptimizerSpec> ExperimentConfig::resolved_observable_optimizer() const {
    switch (regime) {
    case Regime::FixedPauliZ: return std::nullopt;
    case Regime::LearnableShared:
        return observable_optimizer.value_or(resolved_angle_optimizer());
    case Regime::LearnableSeparate:
        return observable_optimizer.value_or(OptimizerSpec::adam(1e-1));
    }
    throw ConfigError("unknown regime");
}

ObservableInit ExperimentConfig::resolved_observable_init() const {
    if (regime == Regime::FixedPauliZ) return ObservableInit::PauliZ;
    return observable_init.value_or(ObservableInit::Random);
}

void ExperimentConfig::validate() const {
    circuit.validate();
    if (epochs == 0) throw ConfigError("epochs must be >= 1");
    if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
    if (batch_size > train_size) throw ConfigError("batch_size exceeds train_size");
    if (test_size == 0) throw ConfigError("test_size must be >= 1");
    if (train_size + test_size > total_samples) {
        throw ConfigError("train_size + test_size exceeds total_samples");
    }
    if (seeds.empty()) throw ConfigError("seed list is empty");
    if (!(noise >= 0.0) || !std::isfinite(noise)) {
        throw ConfigError("noise must be a finite non-negative number");
    }
    // One local observable per class, on qubits 0..K-1.
    if (circuit.n_qubits < 2) {
        throw ConfigError("two-moons model needs at least 2 qubits (one per class)");
    }
    resolved_angle_optimizer().validate();
    if (const auto opt = resolved_observable_optimizer()) opt->validate();
}

const EpochMetrics& RunSummary::final_metrics() const {
    if (history.empty()) throw ValidationError("run has no recorded epochs");
    return history.back();
}

namespace {

std::vector<Sample> to_samples(const Dataset& d) {
    std::vector<Sample> s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        s[i].features = {d.points[i][0], d.points[i][1]};
        s[i].label = d.labels[i];
    }
    return s;
}

} // namespace

RunSummary train_run(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();

    const Dataset all =
        make_moons(config.total_samples, config.noise, sub_seed(seed, kSeedData));
    SplitConfig sc;
    sc.train_size = config.train_size;
    sc.test_size = config.test_size;
    sc.seed = sub_seed(seed, kSeedSplit);
    const auto [train, test] = split(all, sc);
    const auto n_classes = static_cast<std::size_t>(all.n_classes);

    Model model;
    model.circuit = config.circuit;
    Rng angle_rng(sub_seed(seed, kSeedAngles));
    model.angles.resize(config.circuit.n_angles());
    for (auto& a : model.angles) {
        a = angle_rng.uniform(-std::numbers::pi, std::numbers::pi);
    }

    const ObservableInit init = config.resolved_observable_init();
    model.observables.reserve(n_classes);
    for (std::size_t k = 0; k < n_classes; ++k) {
        const ObservableLayout layout = ObservableLayout::local(k);
        HermitianParams params =
            init == ObservableInit::PauliZ
                ? HermitianParams::pauli_z()
                : init_observable(layout, sub_seed(seed, kSeedObservableBase + k));
        model.observables.push_back({std::move(params), layout});
    }

    ParamGroup angle_group("angles", model.angles, config.resolved_angle_optimizer());
    std::optional<ParamGroup> obs_group;
    std::vector<std::size_t> obs_offsets; // start of each observable in the flat block
    if (const auto opt = config.resolved_observable_optimizer()) {
        std::vector<double> flat;
        for (const auto& obs : model.observables) {
            obs_offsets.push_back(flat.size());
            const std::vector<double> f = obs.params.to_flat();
            flat.insert(flat.end(), f.begin(), f.end());
        }
        obs_group.emplace("observables", std::move(flat), *opt);
    }

    const std::vector<Sample> train_samples = to_samples(train);

    RunSummary run;
    run.regime = config.regime;
    run.noise = config.noise;
    run.seed = seed;
    run.epochs = config.epochs;
    run.history.reserve(config.epochs);

    for (std::size_t ep = 0; ep < config.epochs; ++ep) {
        std::vector<std::size_t> perm(train_samples.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        Rng shuffle_rng(sub_seed(seed, kSeedShuffleBase + ep));
        shuffle_rng.shuffle(perm);

        double loss_sum = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < perm.size(); start += config.batch_size) {
            const std::size_t stop = std::min(perm.size(), start + config.batch_size);
            std::vector<Sample> batch;
            batch.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) {
                batch.push_back(train_samples[perm[i]]);
            }

            BatchGrad bg;
            try {
                bg = model_grad(batch, model.angles, model.circuit, model.observables);
            } catch (const NumericError& e) {
                throw NumericError("epoch " + std::to_string(ep + 1) + ", batch " +
                                   std::to_string(n_batches + 1) + ": " + e.what());
            }
            loss_sum += bg.loss;
            ++n_batches;

            angle_group.step(bg.grad.d_angles);
            model.angles = angle_group.values();
            if (obs_group) {
                std::vector<double> flat_grad;
                flat_grad.reserve(obs_group->values().size());
                for (const auto& g : bg.grad.d_observables) {
                    const std::vector<double> f = g.to_flat();
                    flat_grad.insert(flat_grad.end(), f.begin(), f.end());
                }
                obs_group->step(flat_grad);
                const std::vector<double>& v = obs_group->values();
                for (std::size_t k = 0; k < model.observables.size(); ++k) {
                    HermitianParams& p = model.observables[k].params;
                    p = HermitianParams::from_flat(
                        p.dim, std::span(v).subspan(obs_offsets[k], p.n_params()));
                }
            }
        }

        EpochMetrics m;
        m.epoch = ep + 1;
        m.train_loss = loss_sum / static_cast<double>(n_batches);
        m.train_acc = accuracy(model, train);
        m.test_acc = accuracy(model, test);
        for (const auto& obs : model.observables) {
            const std::vector<double> eigs = spectrum(obs.params);
            m.eig_min.push_back(eigs.front());
            m.eig_max.push_back(eigs.back());
        }
        run.history.push_back(std::move(m));
    }

    run.model = std::move(model);
    return run;
}

AggregateReport aggregate(std::span<const RunSummary> runs) {
    if (runs.empty()) throw ValidationError("aggregate needs at least one run");
    const Regime regime = runs[0].regime;
    const double noise = runs[0].noise;
    const std::size_t epochs = runs[0].history.size();
    for (const auto& r : runs) {
        if (r.regime != regime || r.noise != noise || r.history.size() != epochs) {
            throw ValidationError("aggregate: runs mix regime, noise, or epoch count");
        }
    }

    AggregateReport rep;
    rep.regime = regime;
    rep.noise = noise;
    rep.epochs = epochs;
    rep.seeds.reserve(runs.size());
    for (const auto& r : runs) rep.seeds.push_back(r.seed);

    const auto n = static_cast<double>(runs.size());
    auto stats = [&](double (*field)(const EpochMetrics&)) {
        SeriesStats s;
        s.mean.resize(epochs);
        s.stddev.resize(epochs);
        for (std::size_t e = 0; e < epochs; ++e) {
            double sum = 0.0;
            for (const auto& r : runs) sum += field(r.history[e]);
            const double mean = sum / n;
            double var = 0.0;
            for (const auto& r : runs) {
                const double d = field(r.history[e]) - mean;
                var += d * d;
            }
            s.mean[e] = mean;
            s.stddev[e] = std::sqrt(var / n); // population std across seeds
        }
        return s;
    };
    rep.train_loss = stats([](const EpochMetrics& m) { return m.train_loss; });
    rep.train_acc = stats([](const EpochMetrics& m) { return m.train_acc; });
    rep.test_acc = stats([](const EpochMetrics& m) { return m.test_acc; });
    if (epochs > 0) {
        rep.final_test_acc_mean = rep.test_acc.mean.back();
        rep.final_test_acc_std = rep.test_acc.stddev.back();
    }
    return rep;
}

std::string run_csv_name(Regime regime, double noise, std::uint64_t seed) {
    return regime_name(regime) + "_" + fmt_compact(noise) + "_" + std::to_string(seed) +
           ".csv";
}

std::string aggregate_json_name(Regime regime, double noise) {
    return regime_name(regime) + "_" + fmt_compact(noise) + "_aggregate.json";
}

void save_run_csv(const RunSummary& run, const std::filesystem::path& path) {
    const std::size_t n_obs = run.history.empty() ? 0 : run.history[0].eig_min.size();
    std::string out = "epoch,train_loss,train_acc,test_acc";
    for (std::size_t k = 0; k < n_obs; ++k) {
        out += ",eig_min_" + std::to_string(k) + ",eig_max_" + std::to_string(k);
    }
    out += '\n';
    for (const auto& m : run.history) {
        out += std::to_string(m.epoch);
        out += ',';
        out += fmt_double(m.train_loss);
        out += ',';
        out += fmt_double(m.train_acc);
        out += ',';
        out += fmt_double(m.test_acc);
        for (std::size_t k = 0; k < n_obs; ++k) {
            out += ',';
            out += fmt_double(m.eig_min[k]);
            out += ',';
            out += fmt_double(m.eig_max[k]);
        }
        out += '\n';
    }
    atomic_write(path, out);
}

std::string aggregate_to_json(const AggregateReport& report) {
    using nlohmann::json;
    auto series = [](const SeriesStats& s) {
        return json{{"mean", s.mean}, {"std", s.stddev}};
    };
    const json j = {
        {"regime", regime_name(report.regime)},
        {"noise", report.noise},
        {"seeds", report.seeds},
        {"epochs", report.epochs},
        {"train_loss", series(report.train_loss)},
        {"train_acc", series(report.train_acc)},
        {"test_acc", series(report.test_acc)},
        {"final_test_acc",
         json{{"mean", report.final_test_acc_mean}, {"std", report.final_test_acc_std}}},
    };
    return j.dump(2) + "\n";
}

void save_aggregate_json(const AggregateReport& report, const std::filesystem::path& path) {
    atomic_write(path, aggregate_to_json(report));
}

ExperimentConfig SweepConfig::cell(Regime regime, double noise) const {
    ExperimentConfig c;
    c.circuit = circuit;
    c.regime = regime;
    c.epochs = epochs;
    c.batch_size = batch_size;
    c.total_samples = total_samples;
    c.train_size = train_size;
    c.test_size = test_size;
    c.noise = noise;
    c.seeds = seeds;
    c.angle_optimizer = angle_optimizer;
    c.observable_optimizer = observable_optimizer;
    c.observable_init = observable_init;
    return c;
}

void SweepConfig::validate() const {
    if (regimes.empty()) throw ConfigError("sweep needs at least one regime");
    if (noises.empty()) throw ConfigError("sweep needs at least one noise level");
    for (const Regime r : regimes) {
        for (const double n : noises) cell(r, n).validate();
    }
}

SweepResult run_sweep(const SweepConfig& config, const std::filesystem::path& out_dir,
                      std::size_t jobs, std::ostream* progress) {
    config.validate();
    if (jobs == 0) throw ConfigError("jobs must be >= 1");
    std::filesystem::create_directories(out_dir);

    struct Task {
        ExperimentConfig cfg;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const Regime r : config.regimes) {
        for (const double n : config.noises) {
            const ExperimentConfig cfg = config.cell(r, n);
            for (const std::uint64_t s : config.seeds) tasks.push_back({cfg, s});
        }
    }

    SweepResult result;
    result.runs.resize(tasks.size());

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex log_mutex;
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            {
                const std::scoped_lock lock(failure_mutex);
                if (failure) return;
            }
            try {
                result.runs[i] = train_run(tasks[i].cfg, tasks[i].seed);
                const std::string name =
                    run_csv_name(tasks[i].cfg.regime, tasks[i].cfg.noise, tasks[i].seed);
                save_run_csv(result.runs[i], out_dir / name);
                const std::size_t finished = done.fetch_add(1) + 1;
                if (progress) {
                    const std::scoped_lock lock(log_mutex);
                    *progress << "[" << finished << "/" << tasks.size() << "] " << name
                              << "  final test acc "
                              << fmt_compact(result.runs[i].final_metrics().test_acc)
                              << "\n";
                }
            } catch (...) {
                const std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const std::size_t n_workers = std::min(jobs, tasks.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::size_t idx = 0;
    for (const Regime r : config.regimes) {
        for (const double n : config.noises) {
            const std::span<const RunSummary> cell_runs(result.runs.data() + idx,
                                                        config.seeds.size());
            idx += config.seeds.size();
            AggregateReport rep = aggregate(cell_runs);
            save_aggregate_json(rep, out_dir / aggregate_json_name(r, n));
            result.aggregates.push_back(std::move(rep));
        }
    }
    return result;
}

} // namespace qm

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qm/circuit.hpp"
#include "qm/data.hpp"
#include "qm/observable.hpp"
#include "qm/optim.hpp"

namespace qm {

/// The three measurement regimes compared on the two-moons task.
enum class Regime {
    FixedPauliZ,       ///< observables pinned to Pauli-Z, only angles train
    LearnableShared,   ///< observables train under the angle optimizer settings
    LearnableSeparate, ///< observables train under their own optimizer
};

/// "fixed_pauli_z", "learnable_shared", "learnable_separate".
std::string regime_name(Regime regime);
Regime regime_from_name(const std::string& name);

/// How learnable observables start out. FixedPauliZ always uses PauliZ.
enum class ObservableInit { PauliZ, Random };

std::string observable_init_name(ObservableInit init);
ObservableInit observable_init_from_name(const std::string& name);

/// Circuit angles plus one observable per class: everything inference needs.
struct Model {
    CircuitSpec circuit{};
    AngleParams angles;
    std::vector<Observable> observables;

    /// The per-class logits (expectation of each class observable on the
    /// forward state of x).
    std::vector<double> class_expectations(std::span<const double> x) const;
};

/// argmax over class expectations; ties break toward the lower class index.
int predict(const Model& model, std::span<const double> x);

/// Fraction of samples whose prediction matches the label.
double accuracy(const Model& model, const Dataset& data);

struct ExperimentConfig {
    CircuitSpec circuit{}; // 4 qubits, 2 layers
    Regime regime = Regime::LearnableSeparate;
    std::size_t epochs = 30;
    std::size_t batch_size = 20;
    std::size_t total_samples = 300;
    std::size_t train_size = 200;
    std::size_t test_size = 100;
    double noise = 0.1;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};

    // Unset fields fall back per regime (see the resolved_* accessors):
    // angles always default to RMSProp 1e-2; observables follow the angle
    // optimizer under LearnableShared and default to Adam 1e-1 under
    // LearnableSeparate; init defaults to Random for learnable regimes.
    // FixedPauliZ never trains observables and always starts from Pauli-Z,
    // whatever these fields say.
    std::optional<OptimizerSpec> angle_optimizer;
    std::optional<OptimizerSpec> observable_optimizer;
    std::optional<ObservableInit> observable_init;

    OptimizerSpec resolved_angle_optimizer() const;
    std::optional<OptimizerSpec> resolved_observable_optimizer() const;
    ObservableInit resolved_observable_init() const;

    /// ConfigError on violated bounds (epochs/batch_size/test_size zero,
    /// batch_size > train_size, train+test > total, empty seeds, noise
    /// negative, or fewer qubits than classes), and on invalid optimizer
    /// settings.
    void validate() const;
};

struct EpochMetrics {
    std::size_t epoch = 0; ///< 1-based
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    std::vector<double> eig_min; ///< per class observable, after the epoch
    std::vector<double> eig_max;
};

struct RunSummary {
    Regime regime = Regime::FixedPauliZ;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::size_t epochs = 0;
    std::vector<EpochMetrics> history; ///< length = epochs
    Model model;                       ///< final trained parameters

    const EpochMetrics& final_metrics() const;
};

/// One full training run for one seed. Deterministic: every consumer of
/// randomness draws from its own sub_seed(seed, tag) stream, so
/// (config, seed) fixes the result bit-for-bit.
///
/// Per epoch: seeded shuffle of the train set, batches of batch_size (the
/// last one may be smaller), one model_grad + optimizer step per batch,
/// then full train/test accuracy and the spectrum of each class observable.
/// Throws NumericError as soon as a batch loss turns non-finite.
RunSummary train_run(const ExperimentConfig& config, std::uint64_t seed);

/// Per-epoch mean and population standard deviation across seeds.
struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> stddev;
};

struct AggregateReport {
    Regime regime = Regime::FixedPauliZ;
    double noise = 0.0;
    std::vector<std::uint64_t> seeds;
    std::size_t epochs = 0;
    SeriesStats train_loss;
    SeriesStats train_acc;
    SeriesStats test_acc;
    double final_test_acc_mean = 0.0;
    double final_test_acc_std = 0.0;
};

/// ValidationError when runs are empty or mix regime/noise/epoch counts.
AggregateReport aggregate(std::span<const RunSummary> runs);

/// "{regime}_{noise}_{seed}.csv", e.g. "learnable_separate_0.1_3.csv".
std::string run_csv_name(Regime regime, double noise, std::uint64_t seed);
/// "{regime}_{noise}_aggregate.json".
std::string aggregate_json_name(Regime regime, double noise);

/// CSV with header epoch,train_loss,train_acc,test_acc,eig_min_0,eig_max_0,
/// ...one eig_min_k/eig_max_k pair per class. Values carry 17 significant
/// digits; written atomically.
void save_run_csv(const RunSummary& run, const std::filesystem::path& path);

std::string aggregate_to_json(const AggregateReport& report);
void save_aggregate_json(const AggregateReport& report, const std::filesystem::path& path);

/// The cross product of regimes and noise levels, each cell sharing the
/// remaining protocol settings and the seed list.
struct SweepConfig {
    CircuitSpec circuit{};
    std::vector<Regime> regimes = {Regime::FixedPauliZ, Regime::LearnableShared,
                                   Regime::LearnableSeparate};
    std::vector<double> noises = {0.1, 0.2, 0.3};
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    std::size_t epochs = 30;
    std::size_t batch_size = 20;
    std::size_t total_samples = 300;
    std::size_t train_size = 200;
    std::size_t test_size = 100;
    std::optional<OptimizerSpec> angle_optimizer;
    std::optional<OptimizerSpec> observable_optimizer;
    std::optional<ObservableInit> observable_init;

    ExperimentConfig cell(Regime regime, double noise) const;

    /// ConfigError on empty regime/noise lists or an invalid cell.
    void validate() const;
};

struct SweepResult {
    std::vector<RunSummary> runs;             ///< regime-major, then noise, then seed
    std::vector<AggregateReport> aggregates;  ///< per (regime, noise), same order
};

/// Runs every (regime, noise, seed) cell, writes one run CSV per run and
/// one aggregate JSON per cell into out_dir, and returns everything. Runs
/// are independent; jobs > 1 executes them on a small worker pool. Results
/// and files are identical for any job count; only the progress line order
/// (written to `progress` when non-null) may differ.
SweepResult run_sweep(const SweepConfig& config, const std::filesystem::path& out_dir,
                      std::size_t jobs = 1, std::ostream* progress = nullptr);

} // namespace qm

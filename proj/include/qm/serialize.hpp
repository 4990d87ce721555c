#pragma once

#include <filesystem>
#include <string>

#include "qm/experiment.hpp"
#include "qm/observable.hpp"

namespace qm {

/// Stable wire format for observables:
///
///   {"layout": {"kind": "local", "target": 0}
///              | {"kind": "full", "n_qubits": 4},
///    "dim": N, "d": [...], "a": [...], "c": [...]}
///
/// "d" holds the diagonal, "a"/"c" the real/imaginary off-diagonal parts in
/// row-major (i < j) lexicographic pair order.
std::string observable_to_json(const Observable& obs);

/// Throws ParseError on malformed JSON, ValidationError/ConfigError on
/// inconsistent contents.
Observable observable_from_json(const std::string& text);

void save_observable(const Observable& obs, const std::filesystem::path& path);
Observable load_observable(const std::filesystem::path& path);

/// Sweep configuration wire format (every key optional, defaults apply):
///
///   {"circuit": {"n_qubits": 4, "n_layers": 2},
///    "regimes": ["fixed_pauli_z", "learnable_shared", "learnable_separate"],
///    "noises": [0.1, 0.2, 0.3],
///    "seeds": [0, 1, 2, 3, 4],
///    "epochs": 30, "batch_size": 20,
///    "total_samples": 300, "train_size": 200, "test_size": 100,
///    "optimizers": {"angles": {"kind": "rmsprop", "lr": 0.01},
///                   "observables": {"kind": "adam", "lr": 0.1}},
///    "observable_init": "random"}
///
/// Optimizer entries accept optional "decay", "beta1", "beta2", "eps".
/// Omitted optimizer groups / init fall back to the per-regime defaults.
/// Unknown keys anywhere raise ConfigError (typo guard).
std::string sweep_config_to_json(const SweepConfig& config);
SweepConfig sweep_config_from_json(const std::string& text);

void save_sweep_config(const SweepConfig& config, const std::filesystem::path& path);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Applies one "key=value" command-line override in place. Keys are the
/// dotted JSON paths above (e.g. epochs, circuit.n_qubits,
/// optimizers.angles.lr, optimizers.observables.kind, observable_init);
/// list-valued keys (regimes, noises, seeds) take comma-separated values.
/// Overriding an optimizer field materializes that group's default first.
/// ConfigError on unknown keys or unparseable values.
void apply_override(SweepConfig& config, const std::string& key, const std::string& value);

} // namespace qm

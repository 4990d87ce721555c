// Acceptance gate for the library: each numbered criterion prints exactly one
// [PASS]/[FAIL] line with its measured values, tolerances, and time budget,
// and the process exits with the number of failed criteria. Criteria are
// independent; an exception inside one fails that criterion only.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "qm/experiment.hpp"
#include "qm/gradients.hpp"
#include "qm/io.hpp"
#include "qm/observable.hpp"
#include "qm/rng.hpp"
#include "qm/statevector.hpp"

namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;
using qm::Regime;

int failures = 0;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::string num(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void report(int criterion, const std::string& title, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << " ("
              << title << "): " << detail << std::endl;
    if (!pass) ++failures;
}

/// Runs one criterion body, converting any escaped exception into a FAIL.
void guarded(int criterion, const std::string& title, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(criterion, title, false, std::string("aborted: ") + e.what());
    }
}

// --- criterion 1: analytic gradients vs finite differences ---------------

void criterion_gradients() {
    const auto start = clock_type::now();
    const std::vector<qm::GradCheck> checks = qm::run_gradcheck(100, 20260814);
    const double elapsed = seconds_since(start);

    bool ok = elapsed < 30.0;
    std::string detail;
    for (const qm::GradCheck& c : checks) {
        ok = ok && c.passed();
        detail += c.name + " max err " + num(c.max_abs_error) + " (tol " +
                  num(c.tolerance) + "), ";
    }
    detail += "elapsed " + num(elapsed) + "s of 30s";
    report(1, "gradient correctness, 100 seeded instances", ok, detail);
}

// --- criterion 2: strided simulator vs dense matrix oracle ---------------

void criterion_oracle_equivalence() {
    const auto start = clock_type::now();
    qm::Rng rng(22);
    const int cases = 120;
    const int ops_per_case = 12;
    double worst = 0.0;

    for (int c = 0; c < cases; ++c) {
        const std::size_t n = 1 + rng.below(5);
        qm::StateVector psi = oracle::random_state(n, rng);
        std::vector<qm::cplx> dense = psi.amplitudes();

        for (int op = 0; op < ops_per_case; ++op) {
            if (n >= 2 && rng.uniform() < 0.35) {
                const std::size_t control = rng.below(n);
                const std::size_t target = (control + 1 + rng.below(n - 1)) % n;
                psi.apply_cnot(control, target);
                dense = oracle::matvec(oracle::cnot_matrix(control, target, n), dense);
            } else {
                const qm::Gate2x2 g = oracle::random_unitary(rng);
                const std::size_t target = rng.below(n);
                psi.apply_gate(g, target);
                dense = oracle::matvec(oracle::embed_single_qubit(g, target, n), dense);
            }
        }
        worst = std::max(worst, oracle::max_amp_diff(psi.amplitudes(), dense));
    }

    const double elapsed = seconds_since(start);
    const bool ok = worst < 1e-12 && elapsed < 10.0;
    report(2, "simulator equals the dense Kronecker oracle", ok,
           std::to_string(cases) + " circuits up to 5 qubits, worst amplitude diff " +
               num(worst) + " (tol 1e-12), elapsed " + num(elapsed) + "s of 10s");
}

// --- criterion 3: expectations stay inside the spectrum ------------------

void criterion_rayleigh_bounds() {
    qm::Rng rng(33);
    int checked = 0;
    double worst_violation = 0.0; // positive = outside the allowed band

    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const qm::StateVector psi = oracle::random_state(n, rng);
        const qm::ObservableLayout layout = (trial % 2 == 0)
                                                ? qm::ObservableLayout::local(rng.below(n))
                                                : qm::ObservableLayout::full(n);
        const qm::HermitianParams params = oracle::random_params(layout.dim(), rng);

        const double e = qm::expectation(psi, params, layout);
        const std::vector<double> eigs = qm::spectrum(params);
        worst_violation = std::max({worst_violation, (eigs.front() - 1e-9) - e,
                                    e - (eigs.back() + 1e-9)});
        ++checked;
    }

    double worst_pauli = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const qm::StateVector psi = oracle::random_state(n, rng);
        const double e = qm::expectation(psi, qm::HermitianParams::pauli_z(),
                                         qm::ObservableLayout::local(rng.below(n)));
        worst_pauli = std::max({worst_pauli, (-1.0 - 1e-12) - e, e - (1.0 + 1e-12)});
        ++checked;
    }

    const bool ok = worst_violation <= 0.0 && worst_pauli <= 0.0;
    report(3, "expectations bounded by the observable spectrum", ok,
           std::to_string(checked) + " random state/observable pairs, worst spectrum "
                                     "overshoot " +
               num(std::max(worst_violation, 0.0)) + ", worst Pauli-Z overshoot " +
               num(std::max(worst_pauli, 0.0)) + " (slack 1e-9 / 1e-12)");
}

// --- criterion 4: the headline regime ordering ----------------------------

struct SweepArtifacts {
    qm::SweepConfig config;
    qm::SweepResult result;
    fs::path dir;
    bool valid = false;
};

SweepArtifacts criterion_headline_sweep() {
    SweepArtifacts artifacts;
    artifacts.config = qm::SweepConfig{}; // full protocol: 3 regimes x 3 noises x 5 seeds
    artifacts.dir = fs::temp_directory_path() / "qm_acceptance_sweep";
    fs::remove_all(artifacts.dir);

    const std::size_t hw = std::thread::hardware_concurrency();
    const std::size_t jobs = std::clamp<std::size_t>(hw == 0 ? 1 : hw, 1, 8);

    const auto start = clock_type::now();
    artifacts.result = qm::run_sweep(artifacts.config, artifacts.dir, jobs);
    const double elapsed = seconds_since(start);
    artifacts.valid = true;

    std::map<std::pair<std::string, double>, double> mean;
    for (const qm::AggregateReport& rep : artifacts.result.aggregates) {
        mean[{qm::regime_name(rep.regime), rep.noise}] = rep.final_test_acc_mean;
    }

    bool ok = elapsed < 600.0;
    std::string detail;
    for (const double noise : artifacts.config.noises) {
        const double fixed = mean.at({"fixed_pauli_z", noise});
        const double shared = mean.at({"learnable_shared", noise});
        const double separate = mean.at({"learnable_separate", noise});
        ok = ok && separate >= shared && shared >= fixed && separate - fixed >= 0.02;
        detail += "noise " + num(noise, "%.1f") + ": " + num(fixed, "%.3f") + " <= " +
                  num(shared, "%.3f") + " <= " + num(separate, "%.3f") + "; ";
    }
    detail += "45 runs in " + num(elapsed) + "s of 600s (" + std::to_string(jobs) +
              " jobs), ordering fixed <= shared <= separate with separate - fixed >= "
              "0.02 per noise";
    report(4, "learned measurements beat fixed Pauli-Z", ok, detail);
    return artifacts;
}

// --- criterion 5: learned spectra spread out ------------------------------

void criterion_spectral_spreading(const SweepArtifacts& artifacts) {
    if (!artifacts.valid) {
        report(5, "observable spectra spread during training", false,
               "no sweep data (criterion 4 aborted)");
        return;
    }
    std::size_t runs_checked = 0;
    std::size_t runs_spread = 0;
    std::string detail;
    for (const qm::RunSummary& run : artifacts.result.runs) {
        if (run.regime != Regime::LearnableSeparate || run.noise != 0.1) continue;
        ++runs_checked;
        const qm::EpochMetrics& first = run.history.front();
        const qm::EpochMetrics& last = run.history.back();
        bool spread = false;
        for (std::size_t k = 0; k < first.eig_min.size(); ++k) {
            const double spread_first = first.eig_max[k] - first.eig_min[k];
            const double spread_last = last.eig_max[k] - last.eig_min[k];
            spread = spread || spread_last > spread_first;
        }
        runs_spread += spread ? 1 : 0;
        detail += "seed " + std::to_string(run.seed) + (spread ? " widened; " : " flat; ");
    }
    const bool ok = runs_checked == 5 && runs_spread == runs_checked;
    report(5, "observable spectra spread during training", ok,
           detail + std::to_string(runs_spread) + "/" + std::to_string(runs_checked) +
               " separate-regime runs at noise 0.1 end with a wider spectrum than "
               "after epoch 1 for at least one class");
}

// --- criterion 6: frozen learnable regime equals the fixed regime ---------

void criterion_regime_equivalence() {
    qm::ExperimentConfig fixed;
    fixed.regime = Regime::FixedPauliZ;
    fixed.epochs = 5;

    qm::ExperimentConfig frozen = fixed;
    frozen.regime = Regime::LearnableShared;
    frozen.observable_optimizer = qm::OptimizerSpec::rmsprop(0.0);
    frozen.observable_init = qm::ObservableInit::PauliZ;

    const qm::RunSummary a = qm::train_run(fixed, 0);
    const qm::RunSummary b = qm::train_run(frozen, 0);

    bool identical = a.history.size() == b.history.size() &&
                     a.model.angles == b.model.angles &&
                     a.model.observables == b.model.observables;
    for (std::size_t i = 0; identical && i < a.history.size(); ++i) {
        const qm::EpochMetrics& x = a.history[i];
        const qm::EpochMetrics& y = b.history[i];
        identical = x.train_loss == y.train_loss && x.train_acc == y.train_acc &&
                    x.test_acc == y.test_acc && x.eig_min == y.eig_min &&
                    x.eig_max == y.eig_max;
    }
    report(6, "zero-rate learnable regime reproduces the fixed regime", identical,
           "fixed_pauli_z vs learnable_shared with observable lr 0 and Pauli-Z init, "
           "5 epochs, seed 0: metrics, angles, and observables " +
               std::string(identical ? "bit-identical" : "DIFFER"));
}

// --- criterion 7: byte-stable artifacts -----------------------------------

void criterion_reproducible_files(const SweepArtifacts& artifacts) {
    if (!artifacts.valid) {
        report(7, "run CSVs are byte-identical across executions", false,
               "no sweep data (criterion 4 aborted)");
        return;
    }
    const fs::path replay_dir = fs::temp_directory_path() / "qm_acceptance_replay";
    fs::remove_all(replay_dir);
    fs::create_directories(replay_dir);

    const std::vector<std::pair<Regime, std::pair<double, std::uint64_t>>> picks = {
        {Regime::LearnableSeparate, {0.1, 0}},
        {Regime::FixedPauliZ, {0.3, 4}},
    };
    bool ok = true;
    std::string detail;
    for (const auto& [regime, cell] : picks) {
        const auto [noise, seed] = cell;
        const qm::RunSummary rerun =
            qm::train_run(artifacts.config.cell(regime, noise), seed);
        const std::string name = qm::run_csv_name(regime, noise, seed);
        qm::save_run_csv(rerun, replay_dir / name);
        const bool same =
            qm::read_file(replay_dir / name) == qm::read_file(artifacts.dir / name);
        ok = ok && same;
        detail += name + (same ? " matches; " : " DIFFERS; ");
    }
    report(7, "run CSVs are byte-identical across executions", ok,
           detail + "independent re-training compared byte-for-byte against the "
                    "(parallel) sweep output");
    fs::remove_all(replay_dir);
}

} // namespace

int main() {
    std::cout << "acceptance checks (tolerances and budgets pinned in "
                 "tests/acceptance_main.cpp)\n";

    guarded(1, "gradient correctness, 100 seeded instances", criterion_gradients);
    guarded(2, "simulator equals the dense Kronecker oracle", criterion_oracle_equivalence);
    guarded(3, "expectations bounded by the observable spectrum", criterion_rayleigh_bounds);

    SweepArtifacts artifacts;
    guarded(4, "learned measurements beat fixed Pauli-Z",
            [&artifacts] { artifacts = criterion_headline_sweep(); });
    guarded(5, "observable spectra spread during training",
            [&artifacts] { criterion_spectral_spreading(artifacts); });
    guarded(6, "zero-rate learnable regime reproduces the fixed regime",
            criterion_regime_equivalence);
    guarded(7, "run CSVs are byte-identical across executions",
            [&artifacts] { criterion_reproducible_files(artifacts); });

    std::cout << "[SKIP] criterion 8 (execution on quantum hardware): declared out of "
                 "scope for this simulator-only build; not counted.\n";

    if (artifacts.valid) {
        std::error_code ec;
        fs::remove_all(artifacts.dir, ec);
    }
    std::cout << (failures == 0 ? "all acceptance criteria passed"
                                : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures;
}

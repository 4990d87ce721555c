#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qm/circuit.hpp"
#include "qm/observable.hpp"

namespace qm {

struct Sample {
    std::vector<double> features;
    int label = 0;
};

/// The two gradient blocks of the model: rotation angles and the real
/// parameters of each class observable.
struct GradientBundle {
    std::vector<double> d_angles;
    std::vector<HermitianGrad> d_observables;
};

/// d<B>/d theta_m via the parameter-shift rule,
///   [E(theta_m + pi/2) - E(theta_m - pi/2)] / 2,
/// exact for the RY/RZ gate set used here (all Pauli-generated).
std::vector<double> expectation_grad_angles(std::span<const double> x,
                                            const AngleParams& angles,
                                            const CircuitSpec& spec,
                                            const HermitianParams& params,
                                            const ObservableLayout& layout);

/// Central finite differences [f(p + h e_m) - f(p - h e_m)] / (2h).
/// Testing oracle; throws NumericError when f returns a non-finite value.
std::vector<double> finite_difference_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> point, double h);

struct LossGrad {
    double loss = 0.0;
    std::vector<double> d_expectations;
};

/// Softmax cross-entropy over the class expectations treated as logits,
/// stabilized with log-sum-exp. d_expectations = softmax - one_hot(label).
LossGrad loss_and_grad(std::span<const double> expectations, int label);

struct BatchGrad {
    double loss = 0.0;
    GradientBundle grad;
};

/// Mean loss and mean gradient over the batch, samples reduced in the given
/// order. Per sample, angle gradients chain the loss gradient through the
/// parameter-shift rule (shifted states are shared across the class
/// observables), and observable gradients chain it through
/// grad_expectation_b on the unshifted forward state.
BatchGrad model_grad(std::span<const Sample> batch, const AngleParams& angles,
                     const CircuitSpec& spec, std::span<const Observable> observables);

struct GradCheck {
    std::string name;
    double max_abs_error = 0.0;
    double tolerance = 0.0;
    std::size_t trials = 0;

    bool passed() const { return max_abs_error < tolerance; }
};

/// Self-contained seeded comparison of every analytic gradient path against
/// finite differences: observable gradients (tol 1e-6), angle
/// parameter-shift (tol 1e-6), and the assembled whole-model batch-loss
/// gradient (tol 1e-5). `corrupt` perturbs each analytic gradient first and
/// must make every check fail (negative control).
std::vector<GradCheck> run_gradcheck(std::size_t trials, std::uint64_t seed,
                                     bool corrupt = false);

} // namespace qm

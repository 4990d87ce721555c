#include "qm/gradients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qm/rng.hpp"

namespace qm {

namespace {

constexpr double kShift = std::numbers::pi / 2.0;

std::vector<double> class_expectations(const StateVector& state,
                                       std::span<const Observable> observables) {
    std::vector<double> out(observables.size());
    for (std::size_t k = 0; k < observables.size(); ++k) {
        out[k] = expectation(state, observables[k].params, observables[k].layout);
    }
    return out;
}

} // namespace

std::vector<double> expectation_grad_angles(std::span<const double> x,
                                            const AngleParams& angles,
                                            const CircuitSpec& spec,
                                            const HermitianParams& params,
                                            const ObservableLayout& layout) {
    spec.validate();
    if (angles.size() != spec.n_angles()) {
        throw ValidationError("angle count does not match circuit");
    }
    std::vector<double> grad(angles.size());
    AngleParams shifted = angles;
    for (std::size_t m = 0; m < angles.size(); ++m) {
        shifted[m] = angles[m] + kShift;
        const double plus = expectation(forward_state(x, shifted, spec), params, layout);
        shifted[m] = angles[m] - kShift;
        const double minus = expectation(forward_state(x, shifted, spec), params, layout);
        shifted[m] = angles[m];
        grad[m] = 0.5 * (plus - minus);
    }
    return grad;
}

std::vector<double> finite_difference_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> point, double h) {
    if (!(h > 0.0)) {
        throw ValidationError("finite difference step must be positive");
    }
    std::vector<double> p(point.begin(), point.end());
    std::vector<double> grad(p.size());
    for (std::size_t m = 0; m < p.size(); ++m) {
        const double saved = p[m];
        p[m] = saved + h;
        const double fp = f(p);
        p[m] = saved - h;
        const double fm = f(p);
        p[m] = saved;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericError("finite differences hit a non-finite function value");
        }
        grad[m] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

LossGrad loss_and_grad(std::span<const double> expectations, int label) {
    if (expectations.size() < 2) {
        throw ValidationError("need at least 2 class expectations");
    }
    if (label < 0 || static_cast<std::size_t>(label) >= expectations.size()) {
        throw ValidationError("label " + std::to_string(label) + " out of range");
    }
    const double zmax = *std::max_element(expectations.begin(), expectations.end());
    double sum = 0.0;
    for (double z : expectations) sum += std::exp(z - zmax);
    const double log_sum = std::log(sum);

    LossGrad out;
    out.loss = -(expectations[label] - zmax) + log_sum;
    out.d_expectations.resize(expectations.size());
    for (std::size_t k = 0; k < expectations.size(); ++k) {
        out.d_expectations[k] = std::exp(expectations[k] - zmax) / sum;
    }
    out.d_expectations[label] -= 1.0;
    return out;
}

BatchGrad model_grad(std::span<const Sample> batch, const AngleParams& angles,
                     const CircuitSpec& spec, std::span<const Observable> observables) {
    if (batch.empty()) {
        throw ValidationError("batch must not be empty");
    }
    const std::size_t n_classes = observables.size();
    if (n_classes < 2) {
        throw ValidationError("need at least 2 class observables");
    }

    BatchGrad out;
    out.grad.d_angles.assign(angles.size(), 0.0);
    for (const Observable& obs : observables) {
        out.grad.d_observables.push_back(HermitianParams::zeros(obs.params.dim));
    }

    AngleParams shifted = angles;
    for (const Sample& sample : batch) {
        const StateVector state = forward_state(sample.features, angles, spec);
        const std::vector<double> expectations = class_expectations(state, observables);
        const LossGrad lg = loss_and_grad(expectations, sample.label);
        out.loss += lg.loss;

        // Angle block: one pair of shifted circuits per angle, the resulting
        // state reused for every class observable.
        for (std::size_t m = 0; m < angles.size(); ++m) {
            double d = 0.0;
            for (const double sign : {1.0, -1.0}) {
                shifted[m] = angles[m] + sign * kShift;
                const StateVector s = forward_state(sample.features, shifted, spec);
                const std::vector<double> e = class_expectations(s, observables);
                for (std::size_t k = 0; k < n_classes; ++k) {
                    d += sign * 0.5 * lg.d_expectations[k] * e[k];
                }
            }
            shifted[m] = angles[m];
            out.grad.d_angles[m] += d;
        }

        // Observable block: linear in the parameters, read off the forward
        // state directly.
        for (std::size_t k = 0; k < n_classes; ++k) {
            const HermitianGrad g = grad_expectation_b(state, observables[k].layout);
            const double w = lg.d_expectations[k];
            HermitianGrad& acc = out.grad.d_observables[k];
            for (std::size_t i = 0; i < g.diag.size(); ++i) acc.diag[i] += w * g.diag[i];
            for (std::size_t i = 0; i < g.off_re.size(); ++i) acc.off_re[i] += w * g.off_re[i];
            for (std::size_t i = 0; i < g.off_im.size(); ++i) acc.off_im[i] += w * g.off_im[i];
        }
    }

    const double inv = 1.0 / static_cast<double>(batch.size());
    out.loss *= inv;
    for (double& g : out.grad.d_angles) g *= inv;
    for (HermitianGrad& og : out.grad.d_observables) {
        for (double& g : og.diag) g *= inv;
        for (double& g : og.off_re) g *= inv;
        for (double& g : og.off_im) g *= inv;
    }
    if (!std::isfinite(out.loss)) {
        throw NumericError("batch loss is not finite");
    }
    return out;
}

namespace {

constexpr double kFdStep = 1e-5;

struct Instance {
    CircuitSpec spec{4, 2};
    std::vector<double> features;
    AngleParams angles;
};

Instance random_instance(Rng& rng) {
    Instance inst;
    inst.features = {rng.uniform(-std::numbers::pi, std::numbers::pi),
                     rng.uniform(-std::numbers::pi, std::numbers::pi)};
    inst.angles.resize(inst.spec.n_angles());
    for (double& a : inst.angles) a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    return inst;
}

HermitianParams random_params(std::size_t dim, Rng& rng) {
    HermitianParams p = HermitianParams::zeros(dim);
    for (double& x : p.diag) x = rng.normal();
    for (double& x : p.off_re) x = rng.normal();
    for (double& x : p.off_im) x = rng.normal();
    return p;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

std::vector<GradCheck> run_gradcheck(std::size_t trials, std::uint64_t seed, bool corrupt) {
    if (trials == 0) {
        throw ValidationError("gradcheck needs at least one trial");
    }
    GradCheck obs_check{"observable-gradient", 0.0, 1e-6, trials};
    GradCheck angle_check{"angle-parameter-shift", 0.0, 1e-6, trials};
    const std::size_t model_trials = std::max<std::size_t>(2, trials / 20);
    GradCheck model_check{"whole-model", 0.0, 1e-5, model_trials};

    Rng rng(sub_seed(seed, 0x6772616463686bULL)); // "gradchk"

    for (std::size_t t = 0; t < trials; ++t) {
        const Instance inst = random_instance(rng);
        const ObservableLayout layout = (t % 2 == 0)
                                            ? ObservableLayout::local(rng.below(inst.spec.n_qubits))
                                            : ObservableLayout::full(inst.spec.n_qubits);
        const StateVector state = forward_state(inst.features, inst.angles, inst.spec);

        // Observable gradient vs finite differences over the flat params.
        HermitianGrad analytic = grad_expectation_b(state, layout);
        if (corrupt) analytic.diag[0] += 1e-3;
        const HermitianParams at_point = random_params(layout.dim(), rng);
        const auto fd = finite_difference_grad(
            [&](std::span<const double> flat) {
                return expectation(state, HermitianParams::from_flat(layout.dim(), flat),
                                   layout);
            },
            at_point.to_flat(), kFdStep);
        obs_check.max_abs_error =
            std::max(obs_check.max_abs_error, max_abs_diff(analytic.to_flat(), fd));

        // Parameter-shift vs finite differences over the angles.
        const HermitianParams params = random_params(layout.dim(), rng);
        std::vector<double> shift_grad =
            expectation_grad_angles(inst.features, inst.angles, inst.spec, params, layout);
        if (corrupt) shift_grad[0] += 1e-3;
        const auto fd_angles = finite_difference_grad(
            [&](std::span<const double> a) {
                const AngleParams angles(a.begin(), a.end());
                return expectation(forward_state(inst.features, angles, inst.spec), params,
                                   layout);
            },
            inst.angles, kFdStep);
        angle_check.max_abs_error =
            std::max(angle_check.max_abs_error, max_abs_diff(shift_grad, fd_angles));
    }

    for (std::size_t t = 0; t < model_trials; ++t) {
        const Instance inst = random_instance(rng);
        std::vector<Observable> observables;
        for (std::size_t k = 0; k < 2; ++k) {
            observables.push_back({random_params(2, rng), ObservableLayout::local(k)});
        }
        std::vector<Sample> batch;
        for (int i = 0; i < 4; ++i) {
            batch.push_back({{rng.uniform(-std::numbers::pi, std::numbers::pi),
                              rng.uniform(-std::numbers::pi, std::numbers::pi)},
                             static_cast<int>(rng.below(2))});
        }

        const BatchGrad bg = model_grad(batch, inst.angles, inst.spec, observables);
        std::vector<double> analytic = bg.grad.d_angles;
        for (const HermitianGrad& g : bg.grad.d_observables) {
            const auto flat = g.to_flat();
            analytic.insert(analytic.end(), flat.begin(), flat.end());
        }
        if (corrupt) analytic[0] += 1e-3;

        std::vector<double> point = inst.angles;
        for (const Observable& obs : observables) {
            const auto flat = obs.params.to_flat();
            point.insert(point.end(), flat.begin(), flat.end());
        }
        const std::size_t n_angles = inst.angles.size();
        const auto fd = finite_difference_grad(
            [&](std::span<const double> p) {
                const AngleParams angles(p.begin(), p.begin() + n_angles);
                std::vector<Observable> obs = observables;
                std::size_t off = n_angles;
                for (Observable& o : obs) {
                    o.params = HermitianParams::from_flat(
                        o.params.dim, p.subspan(off, o.params.n_params()));
                    off += o.params.n_params();
                }
                double loss = 0.0;
                for (const Sample& s : batch) {
                    const StateVector st = forward_state(s.features, angles, inst.spec);
                    std::vector<double> e(obs.size());
                    for (std::size_t k = 0; k < obs.size(); ++k) {
                        e[k] = expectation(st, obs[k].params, obs[k].layout);
                    }
                    loss += loss_and_grad(e, s.label).loss;
                }
                return loss / static_cast<double>(batch.size());
            },
            point, kFdStep);
        model_check.max_abs_error =
            std::max(model_check.max_abs_error, max_abs_diff(analytic, fd));
    }

    return {obs_check, angle_check, model_check};
}

} // namespace qm

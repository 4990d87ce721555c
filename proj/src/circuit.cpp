#include "qm/circuit.hpp"

#include <cmath>
#include <string>

namespace qm {

void CircuitSpec::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("circuit n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                          "], got " + std::to_string(n_qubits));
    }
    if (n_layers < 1) {
        throw ConfigError("circuit n_layers must be >= 1");
    }
}

StateVector encode(std::span<const double> x, const CircuitSpec& spec) {
    spec.validate();
    if (x.empty()) {
        throw ValidationError("feature vector must not be empty");
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw ValidationError("feature values must be finite");
    }
    StateVector state(spec.n_qubits);
    for (std::size_t q = 0; q < spec.n_qubits; ++q) {
        state.apply_gate(gates::ry(x[q % x.size()]), q);
    }
    return state;
}

StateVector apply_variational(StateVector state, const AngleParams& angles,
                              const CircuitSpec& spec) {
    spec.validate();
    if (angles.size() != spec.n_angles()) {
        throw ValidationError("angle count " + std::to_string(angles.size()) +
                              " does not match circuit (" + std::to_string(spec.n_angles()) +
                              ")");
    }
    for (double a : angles) {
        if (!std::isfinite(a)) throw ValidationError("angles must be finite");
    }
    if (state.n_qubits() != spec.n_qubits) {
        throw ValidationError("state size does not match circuit");
    }
    const std::size_t n = spec.n_qubits;
    for (std::size_t layer = 0; layer < spec.n_layers; ++layer) {
        if (n >= 2) {
            const std::size_t ring = (n == 2) ? 1 : n; // drop the wrap gate at n=2
            for (std::size_t q = 0; q < ring; ++q) {
                state.apply_cnot(q, (q + 1) % n);
            }
        }
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t o = spec.angle_offset(layer, q);
            state.apply_gate(gates::rotation_zyz(angles[o], angles[o + 1], angles[o + 2]), q);
        }
    }
    return state;
}

StateVector forward_state(std::span<const double> x, const AngleParams& angles,
                          const CircuitSpec& spec) {
    return apply_variational(encode(x, spec), angles, spec);
}

} // namespace qm

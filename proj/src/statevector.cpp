#include "qm/statevector.hpp"

#include <cmath>
#include <string>

namespace qm {

namespace {

double abs2(const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); }

} // namespace

bool Gate2x2::is_unitary(double tol) const {
    // Rows of G^dagger G against the identity.
    const cplx d00 = std::conj(m00) * m00 + std::conj(m10) * m10;
    const cplx d01 = std::conj(m00) * m01 + std::conj(m10) * m11;
    const cplx d11 = std::conj(m01) * m01 + std::conj(m11) * m11;
    return std::abs(d00 - cplx{1.0, 0.0}) <= tol && std::abs(d01) <= tol &&
           std::abs(d11 - cplx{1.0, 0.0}) <= tol;
}

Gate2x2 operator*(const Gate2x2& a, const Gate2x2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

namespace gates {

Gate2x2 identity() { return {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }
Gate2x2 pauli_x() { return {{0, 0}, {1, 0}, {1, 0}, {0, 0}}; }
Gate2x2 pauli_y() { return {{0, 0}, {0, -1}, {0, 1}, {0, 0}}; }
Gate2x2 pauli_z() { return {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}; }

Gate2x2 ry(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {{c, 0}, {-s, 0}, {s, 0}, {c, 0}};
}

Gate2x2 rz(double theta) {
    const cplx e_minus = std::polar(1.0, -theta / 2.0);
    const cplx e_plus = std::polar(1.0, theta / 2.0);
    return {e_minus, {0, 0}, {0, 0}, e_plus};
}

Gate2x2 rotation_zyz(double alpha, double beta, double gamma) {
    return rz(gamma) * ry(beta) * rz(alpha);
}

} // namespace gates

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                          "], got " + std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = cplx{1.0, 0.0};
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += abs2(a);
    return std::sqrt(s);
}

void StateVector::apply_gate(const Gate2x2& g, std::size_t target) {
    if (target >= n_qubits_) {
        throw IndexError("gate target " + std::to_string(target) + " out of range for " +
                         std::to_string(n_qubits_) + " qubits");
    }
    if (!g.is_unitary()) {
        throw ValidationError("gate is not unitary within tolerance");
    }
    // Qubit 0 is the MSB, so the bit position of `target` counts from the top.
    const std::size_t shift = n_qubits_ - 1 - target;
    const std::size_t stride = std::size_t{1} << shift;
    const std::size_t half = amps_.size() >> 1;
    const std::size_t low_mask = stride - 1;
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = ((k & ~low_mask) << 1) | (k & low_mask);
        const std::size_t i1 = i0 | stride;
        const cplx a0 = amps_[i0];
        const cplx a1 = amps_[i1];
        amps_[i0] = g.m00 * a0 + g.m01 * a1;
        amps_[i1] = g.m10 * a0 + g.m11 * a1;
    }
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
    if (control >= n_qubits_ || target >= n_qubits_) {
        throw IndexError("cnot qubit out of range for " + std::to_string(n_qubits_) +
                         " qubits");
    }
    if (control == target) {
        throw ValidationError("cnot control and target must differ");
    }
    const std::size_t cmask = std::size_t{1} << (n_qubits_ - 1 - control);
    const std::size_t tmask = std::size_t{1} << (n_qubits_ - 1 - target);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(amps_[i], amps_[i | tmask]);
        }
    }
}

StateVector ground_state(std::size_t n_qubits) { return StateVector(n_qubits); }

StateVector apply_single_qubit_gate(StateVector state, const Gate2x2& g, std::size_t target) {
    state.apply_gate(g, target);
    return state;
}

StateVector apply_cnot(StateVector state, std::size_t control, std::size_t target) {
    state.apply_cnot(control, target);
    return state;
}

} // namespace qm

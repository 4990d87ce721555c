#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qm/errors.hpp"

namespace qm {

using cplx = std::complex<double>;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr std::size_t kMaxQubits = 20;

/// 2x2 complex matrix in row-major order. Everything fed to
/// StateVector::apply_gate must be unitary within kUnitaryTol.
struct Gate2x2 {
    cplx m00, m01, m10, m11;

    bool is_unitary(double tol = kUnitaryTol) const;
    Gate2x2 adjoint() const { return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }
};

Gate2x2 operator*(const Gate2x2& a, const Gate2x2& b);

namespace gates {

Gate2x2 identity();
Gate2x2 pauli_x();
Gate2x2 pauli_y();
Gate2x2 pauli_z();

/// RY(theta) = exp(-i theta Y / 2).
Gate2x2 ry(double theta);
/// RZ(theta) = exp(-i theta Z / 2) = diag(e^{-i theta/2}, e^{i theta/2}).
Gate2x2 rz(double theta);
/// General single-qubit rotation RZ(gamma) * RY(beta) * RZ(alpha);
/// alpha acts first.
Gate2x2 rotation_zyz(double alpha, double beta, double gamma);

} // namespace gates

/// Dense complex amplitudes of an n-qubit register.
///
/// Bit convention: qubit 0 is the MOST significant bit of the amplitude
/// index, i.e. |q0 q1 ... q_{n-1}> lives at index
/// q0*2^{n-1} + q1*2^{n-2} + ... + q_{n-1}. The dense Kronecker oracle used
/// by the tests must build kron chains with qubit 0 leftmost to match.
class StateVector {
  public:
    /// Constructs the ground state |0...0>. Throws ConfigError unless
    /// 1 <= n_qubits <= kMaxQubits.
    explicit StateVector(std::size_t n_qubits);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx& operator[](std::size_t i) { return amps_[i]; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;

    /// In-place single-qubit gate on `target`. Throws IndexError for a bad
    /// target and ValidationError for a non-unitary gate.
    void apply_gate(const Gate2x2& g, std::size_t target);

    /// In-place CNOT: flips `target` where `control` is 1. Pure amplitude
    /// permutation, so the norm is preserved exactly.
    void apply_cnot(std::size_t control, std::size_t target);

    bool operator==(const StateVector&) const = default;

  private:
    std::size_t n_qubits_;
    std::vector<cplx> amps_;
};

StateVector ground_state(std::size_t n_qubits);

StateVector apply_single_qubit_gate(StateVector state, const Gate2x2& g, std::size_t target);

StateVector apply_cnot(StateVector state, std::size_t control, std::size_t target);

} // namespace qm

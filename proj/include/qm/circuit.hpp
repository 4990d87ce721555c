#pragma once

#include <span>
#include <vector>

#include "qm/statevector.hpp"

namespace qm {

enum class EncodingKind { AngleY };
enum class EntanglerKind { CnotRing };

/// Circuit topology: an angle-encoding layer followed by n_layers blocks of
/// [CNOT ring, then per-qubit ZYZ rotation].
struct CircuitSpec {
    std::size_t n_qubits = 4;
    std::size_t n_layers = 2;
    EncodingKind encoding = EncodingKind::AngleY;
    EntanglerKind entangler = EntanglerKind::CnotRing;

    /// Angles are packed [layer][qubit][alpha, beta, gamma].
    std::size_t n_angles() const { return n_layers * n_qubits * 3; }

    std::size_t angle_offset(std::size_t layer, std::size_t qubit) const {
        return (layer * n_qubits + qubit) * 3;
    }

    void validate() const;
};

using AngleParams = std::vector<double>;

/// U(x)|0...0>: qubit q receives RY(x[q mod x.size()]), i.e. features are
/// tiled cyclically when there are fewer features than qubits.
StateVector encode(std::span<const double> x, const CircuitSpec& spec);

/// Applies the variational block W to `state`: per layer, a CNOT ring
/// q -> q+1 mod n (the wrap gate is dropped at n=2 so the two gates do not
/// cancel; n=1 has no entangler), then RZ(gamma)RY(beta)RZ(alpha) on each
/// qubit.
StateVector apply_variational(StateVector state, const AngleParams& angles,
                              const CircuitSpec& spec);

/// apply_variational(encode(x)).
StateVector forward_state(std::span<const double> x, const AngleParams& angles,
                          const CircuitSpec& spec);

} // namespace qm

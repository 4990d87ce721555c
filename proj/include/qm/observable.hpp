#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qm/statevector.hpp"

namespace qm {

/// Where an observable acts on the register.
struct ObservableLayout {
    enum class Kind { FullHermitian, LocalSingleQubit };

    Kind kind = Kind::LocalSingleQubit;
    std::size_t n_qubits = 0; ///< FullHermitian only: register size, dim = 2^n.
    std::size_t target = 0;   ///< LocalSingleQubit only: the measured qubit.

    static ObservableLayout full(std::size_t n_qubits);
    static ObservableLayout local(std::size_t target);

    /// Matrix dimension N of the parameterized observable (2 for local).
    std::size_t dim() const;

    bool operator==(const ObservableLayout&) const = default;
};

/// Real parameterization of an N x N Hermitian matrix, N^2 reals in total:
///
///   diag[i]                  -> entry (i, i)
///   off_re[k] + i*off_im[k]  -> entry (i, j) for i < j, k = pair_index(i, j)
///
/// with entry (j, i) the complex conjugate. Pairs are ordered row-major
/// lexicographically: (0,1), (0,2), ..., (0,N-1), (1,2), ... This ordering
/// is part of the serialized format and must not change.
struct HermitianParams {
    std::size_t dim = 2;
    std::vector<double> diag;
    std::vector<double> off_re;
    std::vector<double> off_im;

    static HermitianParams zeros(std::size_t dim);
    /// N=2 observable diag(1, -1).
    static HermitianParams pauli_z();

    std::size_t n_off_diag() const { return dim * (dim - 1) / 2; }
    std::size_t n_params() const { return dim * dim; }

    /// Throws ValidationError on shape mismatch or non-finite entries;
    /// ConfigError when dim is not a power of two.
    void validate() const;

    /// Flat layout [diag..., off_re..., off_im...], used by the optimizer
    /// groups and the finite-difference oracles.
    std::vector<double> to_flat() const;
    static HermitianParams from_flat(std::size_t dim, std::span<const double> flat);

    bool operator==(const HermitianParams&) const = default;
};

/// Index of pair (i, j), i < j, in the off-diagonal ordering above.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t dim);

/// Dense row-major complex matrix.
struct CMatrix {
    std::size_t n = 0;
    std::vector<cplx> a;

    CMatrix() = default;
    explicit CMatrix(std::size_t n_) : n(n_), a(n_ * n_, cplx{0.0, 0.0}) {}

    cplx& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Builds the Hermitian matrix; the result equals its conjugate transpose
/// bit-exactly because mirrored entries are written from the same params.
CMatrix materialize(const HermitianParams& params);

/// <psi|B|psi>. The raw complex contraction must have |imaginary part| <
/// 1e-10 (Hermiticity); the real part is returned. For LocalSingleQubit the
/// contraction runs over the target-qubit index directly and never
/// materializes the 2^n x 2^n embedding.
double expectation(const StateVector& state, const HermitianParams& params,
                   const ObservableLayout& layout);

/// Gradient of expectation() with respect to the real parameters, evaluated
/// from the forward state psi alone (the expectation is linear in the
/// params, so the gradient does not depend on their current values):
///
///   d<B>/d diag[k]   = |psi_k|^2
///   d<B>/d off_re[k] = 2 Re(conj(psi_i) psi_j)
///   d<B>/d off_im[k] = -2 Im(conj(psi_i) psi_j)
///
/// For LocalSingleQubit the same formulas apply with the amplitudes summed
/// over the partner pairs of the target qubit.
using HermitianGrad = HermitianParams;
HermitianGrad grad_expectation_b(const StateVector& state, const ObservableLayout& layout);

struct EigenSystem {
    std::vector<double> eigenvalues; ///< ascending
    CMatrix eigenvectors;            ///< column k pairs with eigenvalues[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Converges when the off-diagonal Frobenius norm drops below
/// 1e-12; throws NumericError if 100 sweeps do not get there.
EigenSystem eigh(const CMatrix& matrix);

/// Ascending eigenvalues of the parameterized observable. For a local
/// layout this is the spectrum of the 2x2 matrix itself; its embedding has
/// the same extreme eigenvalues.
std::vector<double> spectrum(const HermitianParams& params);

/// Draws every parameter i.i.d. from 0.1 * N(0, 1), in the order diag,
/// off_re, off_im. Deterministic given the seed.
HermitianParams init_observable(const ObservableLayout& layout, std::uint64_t seed);

/// An observable bound to its place on the register.
struct Observable {
    HermitianParams params;
    ObservableLayout layout;

    bool operator==(const Observable&) const = default;
};

} // namespace qm

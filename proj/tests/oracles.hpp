#pragma once

// Dense-matrix reference implementations for the statevector kernels: slow,
// index-free, and obviously correct. Operators are assembled as explicit
// Kronecker products with qubit 0 as the LEFTMOST factor, matching the
// library convention that qubit 0 is the most significant amplitude bit.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qm/observable.hpp"
#include "qm/rng.hpp"
#include "qm/statevector.hpp"

namespace oracle {

using qm::CMatrix;
using qm::cplx;

inline CMatrix eye(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.n * b.n);
    for (std::size_t i = 0; i < a.n; ++i) {
        for (std::size_t j = 0; j < a.n; ++j) {
            for (std::size_t k = 0; k < b.n; ++k) {
                for (std::size_t l = 0; l < b.n; ++l) {
                    out.at(i * b.n + k, j * b.n + l) = a.at(i, j) * b.at(k, l);
                }
            }
        }
    }
    return out;
}

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.n);
    for (std::size_t i = 0; i < a.n; ++i) {
        for (std::size_t k = 0; k < a.n; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < a.n; ++j) {
                out.at(i, j) += aik * b.at(k, j);
            }
        }
    }
    return out;
}

inline std::vector<cplx> matvec(const CMatrix& m, const std::vector<cplx>& x) {
    std::vector<cplx> y(m.n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) {
            y[i] += m.at(i, j) * x[j];
        }
    }
    return y;
}

inline CMatrix gate_matrix(const qm::Gate2x2& g) {
    CMatrix m(2);
    m.at(0, 0) = g.m00;
    m.at(0, 1) = g.m01;
    m.at(1, 0) = g.m10;
    m.at(1, 1) = g.m11;
    return m;
}

/// I (x) ... (x) gate (x) ... (x) I with the gate at `target`.
inline CMatrix embed_single_qubit(const qm::Gate2x2& g, std::size_t target,
                                  std::size_t n_qubits) {
    CMatrix out(1);
    out.at(0, 0) = 1.0;
    for (std::size_t q = 0; q < n_qubits; ++q) {
        out = kron(out, q == target ? gate_matrix(g) : eye(2));
    }
    return out;
}

/// |0><0|_c (x) I + |1><1|_c (x) X_t, as a full kron chain.
inline CMatrix cnot_matrix(std::size_t control, std::size_t target,
                           std::size_t n_qubits) {
    CMatrix p0(2), p1(2);
    p0.at(0, 0) = 1.0;
    p1.at(1, 1) = 1.0;
    CMatrix keep(1), flip(1);
    keep.at(0, 0) = 1.0;
    flip.at(0, 0) = 1.0;
    for (std::size_t q = 0; q < n_qubits; ++q) {
        keep = kron(keep, q == control ? p0 : eye(2));
        if (q == control) {
            flip = kron(flip, p1);
        } else if (q == target) {
            flip = kron(flip, gate_matrix(qm::gates::pauli_x()));
        } else {
            flip = kron(flip, eye(2));
        }
    }
    CMatrix out(keep.n);
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = keep.a[i] + flip.a[i];
    return out;
}

/// The observable as a dense 2^n x 2^n matrix (embedding local layouts).
inline CMatrix embed_observable(const qm::HermitianParams& params,
                                const qm::ObservableLayout& layout,
                                std::size_t n_qubits) {
    const CMatrix b = qm::materialize(params);
    if (layout.kind == qm::ObservableLayout::Kind::FullHermitian) {
        return b;
    }
    CMatrix out(1);
    out.at(0, 0) = 1.0;
    for (std::size_t q = 0; q < n_qubits; ++q) {
        out = kron(out, q == layout.target ? b : eye(2));
    }
    return out;
}

/// Re(psi^dagger M psi); also reports the imaginary residual if wanted.
inline double expectation_dense(const std::vector<cplx>& amps, const CMatrix& m,
                                double* imag_residual = nullptr) {
    cplx acc{0.0, 0.0};
    const std::vector<cplx> mpsi = matvec(m, amps);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::conj(amps[i]) * mpsi[i];
    }
    if (imag_residual != nullptr) *imag_residual = std::abs(acc.imag());
    return acc.real();
}

/// Random unit vector with i.i.d. complex Gaussian amplitudes.
inline qm::StateVector random_state(std::size_t n_qubits, qm::Rng& rng) {
    qm::StateVector psi(n_qubits);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        psi[i] = cplx{rng.normal(), rng.normal()};
        norm2 += std::norm(psi[i]);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < psi.dim(); ++i) psi[i] *= inv;
    return psi;
}

/// Random U(2) element: ZYZ rotation times a global phase.
inline qm::Gate2x2 random_unitary(qm::Rng& rng) {
    const double two_pi = 2.0 * std::numbers::pi;
    qm::Gate2x2 g = qm::gates::rotation_zyz(rng.uniform(0.0, two_pi),
                                            rng.uniform(0.0, two_pi),
                                            rng.uniform(0.0, two_pi));
    const cplx phase = std::polar(1.0, rng.uniform(0.0, two_pi));
    g.m00 *= phase;
    g.m01 *= phase;
    g.m10 *= phase;
    g.m11 *= phase;
    return g;
}

inline qm::HermitianParams random_params(std::size_t dim, qm::Rng& rng,
                                         double scale = 1.0) {
    qm::HermitianParams p = qm::HermitianParams::zeros(dim);
    for (double& x : p.diag) x = scale * rng.normal();
    for (double& x : p.off_re) x = scale * rng.normal();
    for (double& x : p.off_im) x = scale * rng.normal();
    return p;
}

inline double max_amp_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace oracle

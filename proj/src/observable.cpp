#include "qm/observable.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qm/rng.hpp"

namespace qm {

namespace {

constexpr double kImagResidualTol = 1e-10;
constexpr double kJacobiOffTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

double abs2(const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); }

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw ValidationError(std::string("non-finite value in ") + what);
        }
    }
}

/// Local-layout contraction: sums over all amplitude pairs that differ only
/// in the target qubit's bit. Returns (p0, p1, z) with
/// p0 = sum |psi_i0|^2, p1 = sum |psi_i1|^2, z = sum conj(psi_i0) psi_i1.
struct LocalContraction {
    double p0 = 0.0, p1 = 0.0;
    cplx z{0.0, 0.0};
};

LocalContraction contract_local(const StateVector& state, std::size_t target) {
    if (target >= state.n_qubits()) {
        throw ValidationError("local observable target " + std::to_string(target) +
                              " out of range for " + std::to_string(state.n_qubits()) +
                              " qubits");
    }
    const std::size_t stride = std::size_t{1} << (state.n_qubits() - 1 - target);
    const std::size_t low_mask = stride - 1;
    const std::size_t half = state.dim() >> 1;
    LocalContraction out;
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = ((k & ~low_mask) << 1) | (k & low_mask);
        const cplx a0 = state[i0];
        const cplx a1 = state[i0 | stride];
        out.p0 += abs2(a0);
        out.p1 += abs2(a1);
        out.z += std::conj(a0) * a1;
    }
    return out;
}

double take_real(const cplx& raw) {
    if (std::abs(raw.imag()) >= kImagResidualTol) {
        throw NumericError("expectation has non-negligible imaginary part " +
                           std::to_string(raw.imag()));
    }
    return raw.real();
}

} // namespace

ObservableLayout ObservableLayout::full(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("full observable n_qubits must be in [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
    ObservableLayout l;
    l.kind = Kind::FullHermitian;
    l.n_qubits = n_qubits;
    return l;
}

ObservableLayout ObservableLayout::local(std::size_t target) {
    ObservableLayout l;
    l.kind = Kind::LocalSingleQubit;
    l.target = target;
    return l;
}

std::size_t ObservableLayout::dim() const {
    return kind == Kind::FullHermitian ? (std::size_t{1} << n_qubits) : 2;
}

HermitianParams HermitianParams::zeros(std::size_t dim) {
    if (!is_power_of_two(dim)) {
        throw ConfigError("observable dim must be a power of two, got " +
                          std::to_string(dim));
    }
    HermitianParams p;
    p.dim = dim;
    p.diag.assign(dim, 0.0);
    p.off_re.assign(dim * (dim - 1) / 2, 0.0);
    p.off_im.assign(dim * (dim - 1) / 2, 0.0);
    return p;
}

HermitianParams HermitianParams::pauli_z() {
    HermitianParams p = zeros(2);
    p.diag = {1.0, -1.0};
    return p;
}

void HermitianParams::validate() const {
    if (!is_power_of_two(dim)) {
        throw ConfigError("observable dim must be a power of two, got " +
                          std::to_string(dim));
    }
    if (diag.size() != dim || off_re.size() != n_off_diag() || off_im.size() != n_off_diag()) {
        throw ValidationError("observable parameter vectors do not match dim " +
                              std::to_string(dim));
    }
    check_finite(diag, "observable diag");
    check_finite(off_re, "observable off_re");
    check_finite(off_im, "observable off_im");
}

std::vector<double> HermitianParams::to_flat() const {
    std::vector<double> flat;
    flat.reserve(n_params());
    flat.insert(flat.end(), diag.begin(), diag.end());
    flat.insert(flat.end(), off_re.begin(), off_re.end());
    flat.insert(flat.end(), off_im.begin(), off_im.end());
    return flat;
}

HermitianParams HermitianParams::from_flat(std::size_t dim, std::span<const double> flat) {
    HermitianParams p = zeros(dim);
    if (flat.size() != p.n_params()) {
        throw ValidationError("flat observable vector has " + std::to_string(flat.size()) +
                              " entries, expected " + std::to_string(p.n_params()));
    }
    const std::size_t m = p.n_off_diag();
    std::copy(flat.begin(), flat.begin() + dim, p.diag.begin());
    std::copy(flat.begin() + dim, flat.begin() + dim + m, p.off_re.begin());
    std::copy(flat.begin() + dim + m, flat.end(), p.off_im.begin());
    return p;
}

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t dim) {
    if (i >= j || j >= dim) {
        throw IndexError("pair_index requires i < j < dim");
    }
    // Pairs with first index < i come first, then (i, i+1) .. (i, j).
    return i * dim - i * (i + 1) / 2 + (j - i - 1);
}

CMatrix materialize(const HermitianParams& params) {
    params.validate();
    CMatrix m(params.dim);
    for (std::size_t i = 0; i < params.dim; ++i) {
        m.at(i, i) = cplx{params.diag[i], 0.0};
        for (std::size_t j = i + 1; j < params.dim; ++j) {
            const std::size_t k = pair_index(i, j, params.dim);
            m.at(i, j) = cplx{params.off_re[k], params.off_im[k]};
            m.at(j, i) = cplx{params.off_re[k], -params.off_im[k]};
        }
    }
    return m;
}

double expectation(const StateVector& state, const HermitianParams& params,
                   const ObservableLayout& layout) {
    params.validate();
    if (params.dim != layout.dim()) {
        throw ValidationError("observable params dim " + std::to_string(params.dim) +
                              " does not match layout dim " + std::to_string(layout.dim()));
    }
    if (layout.kind == ObservableLayout::Kind::LocalSingleQubit) {
        const LocalContraction c = contract_local(state, layout.target);
        // <B> = d0 p0 + d1 p1 + B01 z + conj(B01 z), computed as the raw
        // complex sum so the residual check still sees rounding.
        const cplx b01{params.off_re[0], params.off_im[0]};
        const cplx raw = cplx{params.diag[0] * c.p0 + params.diag[1] * c.p1, 0.0} +
                         b01 * c.z + std::conj(b01 * c.z);
        return take_real(raw);
    }
    if (state.dim() != params.dim) {
        throw ValidationError("full observable dim " + std::to_string(params.dim) +
                              " does not match state dim " + std::to_string(state.dim()));
    }
    const CMatrix b = materialize(params);
    cplx raw{0.0, 0.0};
    for (std::size_t i = 0; i < b.n; ++i) {
        cplx row{0.0, 0.0};
        for (std::size_t j = 0; j < b.n; ++j) {
            row += b.at(i, j) * state[j];
        }
        raw += std::conj(state[i]) * row;
    }
    return take_real(raw);
}

HermitianGrad grad_expectation_b(const StateVector& state, const ObservableLayout& layout) {
    if (layout.kind == ObservableLayout::Kind::LocalSingleQubit) {
        const LocalContraction c = contract_local(state, layout.target);
        HermitianGrad g = HermitianParams::zeros(2);
        g.diag[0] = c.p0;
        g.diag[1] = c.p1;
        g.off_re[0] = 2.0 * c.z.real();
        g.off_im[0] = -2.0 * c.z.imag();
        return g;
    }
    const std::size_t dim = layout.dim();
    if (state.dim() != dim) {
        throw ValidationError("full observable layout does not match state dim");
    }
    HermitianGrad g = HermitianParams::zeros(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        g.diag[i] = abs2(state[i]);
        for (std::size_t j = i + 1; j < dim; ++j) {
            const cplx z = std::conj(state[i]) * state[j];
            const std::size_t k = pair_index(i, j, dim);
            g.off_re[k] = 2.0 * z.real();
            g.off_im[k] = -2.0 * z.imag();
        }
    }
    return g;
}

EigenSystem eigh(const CMatrix& matrix) {
    const std::size_t n = matrix.n;
    if (n == 0) throw ValidationError("eigh of empty matrix");

    CMatrix a = matrix;
    CMatrix v(n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = cplx{1.0, 0.0};

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) s += abs2(a.at(i, j));
            }
        }
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < kJacobiMaxSweeps; ++sweep) {
        if (off_norm() < kJacobiOffTol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a.at(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                // Unitary rotation J zeroing entry (p, q):
                //   J[p][p] = c, J[p][q] = s*phase,
                //   J[q][p] = -s*conj(phase), J[q][q] = c,
                // with phase = apq / |apq| and (c, s) the classic symmetric
                // Jacobi pair for tau = (aqq - app) / (2 |apq|).
                const cplx phase = apq / r;
                const double tau = (a.at(q, q).real() - a.at(p, p).real()) / (2.0 * r);
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // A <- A J (columns p, q), then A <- J^dagger A (rows p, q).
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a.at(k, p);
                    const cplx akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * std::conj(phase) * akq;
                    a.at(k, q) = s * phase * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a.at(p, k);
                    const cplx aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * phase * aqk;
                    a.at(q, k) = s * std::conj(phase) * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v.at(k, p);
                    const cplx vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * std::conj(phase) * vkq;
                    v.at(k, q) = s * phase * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == kJacobiMaxSweeps && off_norm() >= kJacobiOffTol) {
        throw NumericError("Jacobi eigensolver did not converge in " +
                           std::to_string(kJacobiMaxSweeps) +
                           " sweeps; off-diagonal norm = " + std::to_string(off_norm()));
    }

    // Sort eigenvalues ascending, carrying eigenvector columns along.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a.at(x, x).real() < a.at(y, y).real();
    });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a.at(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors.at(i, k) = v.at(i, order[k]);
        }
    }
    return out;
}

std::vector<double> spectrum(const HermitianParams& params) {
    return eigh(materialize(params)).eigenvalues;
}

HermitianParams init_observable(const ObservableLayout& layout, std::uint64_t seed) {
    HermitianParams p = HermitianParams::zeros(layout.dim());
    Rng rng(seed);
    constexpr double kInitScale = 0.1;
    for (auto& x : p.diag) x = kInitScale * rng.normal();
    for (auto& x : p.off_re) x = kInitScale * rng.normal();
    for (auto& x : p.off_im) x = kInitScale * rng.normal();
    return p;
}

} // namespace qm

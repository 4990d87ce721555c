#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "qm/circuit.hpp"
#include "qm/errors.hpp"
#include "qm/rng.hpp"

using qm::CircuitSpec;
using qm::cplx;
using qm::StateVector;

namespace {

/// Dense operator for the full variational block, assembled gate by gate.
qm::CMatrix variational_matrix(const qm::AngleParams& angles, const CircuitSpec& spec) {
    const std::size_t n = spec.n_qubits;
    qm::CMatrix op = oracle::eye(std::size_t{1} << n);
    for (std::size_t layer = 0; layer < spec.n_layers; ++layer) {
        if (n == 2) {
            op = oracle::matmul(oracle::cnot_matrix(0, 1, n), op);
        } else if (n > 2) {
            for (std::size_t q = 0; q < n; ++q) {
                op = oracle::matmul(oracle::cnot_matrix(q, (q + 1) % n, n), op);
            }
        }
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t o = spec.angle_offset(layer, q);
            const qm::Gate2x2 rot =
                qm::gates::rotation_zyz(angles[o], angles[o + 1], angles[o + 2]);
            op = oracle::matmul(oracle::embed_single_qubit(rot, q, n), op);
        }
    }
    return op;
}

} // namespace

TEST_CASE("encode maps zero features to the ground state") {
    const CircuitSpec spec{4, 2};
    const StateVector psi = qm::encode(std::vector<double>{0.0, 0.0}, spec);
    CHECK(psi[0] == cplx{1.0, 0.0});
    for (std::size_t i = 1; i < psi.dim(); ++i) CHECK(std::abs(psi[i]) == 0.0);
}

TEST_CASE("encode rotates a single qubit by pi onto |1>") {
    const CircuitSpec spec{1, 1};
    const StateVector psi = qm::encode(std::vector<double>{std::numbers::pi}, spec);
    CHECK(std::abs(psi[0]) < 1e-12);
    CHECK(std::abs(psi[1] - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("encode tiles features cyclically and matches the product form") {
    const CircuitSpec spec{4, 2};
    const std::vector<double> x = {0.3, -0.7};
    const StateVector psi = qm::encode(x, spec);

    // Closed form: qubit q holds (cos(x_q/2), sin(x_q/2)) with x tiled, so
    // amplitude of |q0 q1 q2 q3> is the product of the per-qubit factors.
    for (std::size_t idx = 0; idx < psi.dim(); ++idx) {
        double expected = 1.0;
        for (std::size_t q = 0; q < 4; ++q) {
            const double half = x[q % 2] / 2.0;
            const bool bit = (idx >> (3 - q)) & 1U;
            expected *= bit ? std::sin(half) : std::cos(half);
        }
        CHECK(std::abs(psi[idx] - cplx{expected, 0.0}) < 1e-12);
    }

    // Cross-check against the dense kron oracle applied to the ground state.
    std::vector<cplx> amps = qm::ground_state(4).amplitudes();
    for (std::size_t q = 0; q < 4; ++q) {
        amps = oracle::matvec(
            oracle::embed_single_qubit(qm::gates::ry(x[q % 2]), q, 4), amps);
    }
    CHECK(oracle::max_amp_diff(psi.amplitudes(), amps) < 1e-12);
}

TEST_CASE("encode rejects bad feature vectors") {
    const CircuitSpec spec{2, 1};
    CHECK_THROWS_AS(qm::encode(std::vector<double>{}, spec), qm::ValidationError);
    CHECK_THROWS_AS(qm::encode(std::vector<double>{std::nan("")}, spec),
                    qm::ValidationError);
}

TEST_CASE("variational block with zero angles is identity-like on 1 qubit") {
    const CircuitSpec spec{1, 1};
    const qm::AngleParams zeros(spec.n_angles(), 0.0);
    const StateVector out = qm::apply_variational(qm::ground_state(1), zeros, spec);
    // No entangler on one qubit and RZ(0)RY(0)RZ(0) has no effect beyond a
    // possible global phase: overlap modulus with |0> must be 1.
    CHECK(std::abs(out[0]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-qubit zero-angle layer equals its gate-by-gate oracle") {
    const CircuitSpec spec{2, 1};
    const qm::AngleParams zeros(spec.n_angles(), 0.0);

    StateVector psi = qm::ground_state(2);
    psi.apply_gate(qm::gates::pauli_x(), 0); // |10>
    const std::vector<cplx> before = psi.amplitudes();

    const StateVector out = qm::apply_variational(psi, zeros, spec);
    const std::vector<cplx> expected =
        oracle::matvec(variational_matrix(zeros, spec), before);
    CHECK(oracle::max_amp_diff(out.amplitudes(), expected) < 1e-12);
    // With zero rotations this is exactly the single CNOT(0,1): |10> -> |11>.
    CHECK(std::abs(out[3] - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("random variational block matches the dense oracle and keeps norm") {
    qm::Rng rng(42);
    const CircuitSpec spec{4, 2};
    qm::AngleParams angles(spec.n_angles());
    for (double& a : angles) a = rng.uniform(-std::numbers::pi, std::numbers::pi);

    StateVector psi = oracle::random_state(4, rng);
    const std::vector<cplx> before = psi.amplitudes();
    const StateVector out = qm::apply_variational(psi, angles, spec);

    CHECK(std::abs(out.norm() - 1.0) < 1e-10);
    const std::vector<cplx> expected =
        oracle::matvec(variational_matrix(angles, spec), before);
    CHECK(oracle::max_amp_diff(out.amplitudes(), expected) < 1e-12);
}

TEST_CASE("apply_variational rejects a wrong angle count") {
    const CircuitSpec spec{3, 2};
    const qm::AngleParams wrong(spec.n_angles() - 1, 0.0);
    CHECK_THROWS_AS(qm::apply_variational(qm::ground_state(3), wrong, spec),
                    qm::ValidationError);
}

TEST_CASE("forward_state composes encode and the variational block") {
    qm::Rng rng(77);
    const CircuitSpec spec{4, 2};
    const std::vector<double> x = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    qm::AngleParams angles(spec.n_angles());
    for (double& a : angles) a = rng.uniform(-std::numbers::pi, std::numbers::pi);

    const StateVector direct = qm::forward_state(x, angles, spec);
    const StateVector composed = qm::apply_variational(qm::encode(x, spec), angles, spec);
    CHECK(direct == composed); // bit-exact by construction

    CHECK(std::abs(direct.norm() - 1.0) < 1e-10);
}

TEST_CASE("forward_state with all zeros returns the ground state up to phase") {
    const CircuitSpec spec{3, 2};
    const qm::AngleParams zeros(spec.n_angles(), 0.0);
    const StateVector out = qm::forward_state(std::vector<double>{0.0, 0.0}, zeros, spec);
    CHECK(std::abs(out[0]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("circuit spec validation") {
    CHECK_THROWS_AS((CircuitSpec{0, 1}.validate()), qm::ConfigError);
    CHECK_THROWS_AS((CircuitSpec{2, 0}.validate()), qm::ConfigError);
    CHECK_THROWS_AS((CircuitSpec{21, 1}.validate()), qm::ConfigError);
    CHECK_NOTHROW((CircuitSpec{4, 2}.validate()));
    CHECK(CircuitSpec{4, 2}.n_angles() == 24);
}

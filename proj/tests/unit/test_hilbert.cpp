// test_hilbert.cpp — Truncated spaces, ladder operators, states

#include "dtc/hilbert.hpp"

#include <doctest.h>

#include <cmath>

using namespace dtc;

TEST_CASE("hilbert: dimensions and budget") {
    CHECK(SpaceSpec::with_qubits(10, 3).dimension() == 80);
    CHECK(SpaceSpec::holstein_primakoff(10, 4).dimension() == 50);
    CHECK_THROWS_AS(SpaceSpec::with_qubits(1 << 12, 12), DimensionError);
}

TEST_CASE("hilbert: canonical commutator holds below the cutoff") {
    const SpaceSpec s = SpaceSpec::bosonic(30);
    const auto c = commutator(annihilation(s), creation(s)) - TruncatedOperator::identity(s);
    CHECK(restrict_to_fock_levels(c, 29).cwiseAbs().maxCoeff() < 1e-13);
    // The top level carries the truncation defect −cutoff.
    CHECK(std::abs(c.dense()(29, 29) + 30.0) < 1e-12);
}

TEST_CASE("hilbert: exact quadratic forms agree with products away from the edge") {
    const SpaceSpec s = SpaceSpec::bosonic(40);
    const auto q = quadratures(s);
    const auto x2 = q.X * q.X - x_squared(s);
    const auto p2 = q.P * q.P - p_squared(s);
    CHECK(restrict_to_fock_levels(x2, 38).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(restrict_to_fock_levels(p2, 38).cwiseAbs().maxCoeff() < 1e-12);
    const auto xp = q.X * q.P + q.P * q.X - xp_symmetric(s);
    CHECK(restrict_to_fock_levels(xp, 38).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hilbert: qubit ordering puts qubit 0 in the most significant bit, e = bit 0") {
    const SpaceSpec s = SpaceSpec::with_qubits(2, 2);
    const auto z0 = qubit_op(s, 0, Pauli::z).dense();
    // Basis index n*4 + q, q = (b0 b1): q=0 is |e e>, q=2 is |g e>.
    CHECK(z0(0, 0).real() == doctest::Approx(1.0));
    CHECK(z0(2, 2).real() == doctest::Approx(-1.0));
    CHECK(z0(1, 1).real() == doctest::Approx(1.0));
    CHECK(ground_factor_index(s) == 3);
}

TEST_CASE("hilbert: coherent state moments") {
    const SpaceSpec s = SpaceSpec::bosonic(80);
    const cplx xi(0.7, -1.3);
    const auto psi = coherent_state(s, xi);
    const auto q = quadratures(s);
    CHECK(psi.expectation_real(number(s)) == doctest::Approx(std::norm(xi)).epsilon(1e-12));
    CHECK(psi.expectation_real(q.X) == doctest::Approx(std::sqrt(2.0) * xi.real()).epsilon(1e-12));
    CHECK(psi.expectation_real(q.P) == doctest::Approx(std::sqrt(2.0) * xi.imag()).epsilon(1e-12));
    CHECK(psi.variance(q.X) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(psi.edge_population(4) < 1e-20);
}

TEST_CASE("hilbert: parity is diagonal ±1 and matches parity_signs") {
    const SpaceSpec s = SpaceSpec::with_qubits(6, 2);
    const auto P = parity(s).dense();
    const auto signs = parity_signs(s);
    for (Index i = 0; i < P.rows(); ++i) CHECK(P(i, i).real() == doctest::Approx(signs[static_cast<std::size_t>(i)]));
    // |0> ⊗ |g g> has no excitations.
    CHECK(signs[ground_factor_index(s)] == 1);
}

TEST_CASE("hilbert: infidelity is phase-blind and cancellation-free") {
    Vector u(3);
    u << cplx(1, 0), cplx(0, 1), cplx(0.5, 0);
    u.normalize();
    const Vector v = u * std::exp(cplx(0.0, 0.8));
    CHECK(infidelity(u, v) < 1e-16);
    Vector w = u;
    w[2] += 1e-7;
    w.normalize();
    CHECK(infidelity(u, w) > 0.0);
    CHECK(infidelity(u, w) < 1e-13);
}

// test_models.cpp — Parameter algebra and Hamiltonian builders

#include "dtc/models.hpp"
#include "dtc/spectra.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace dtc;

TEST_CASE("models: coupling parameter and rejection of omega <= 2G") {
    const ModelParams p = ModelParams::from_g(0.8, 20.0, 0.1, 4, 3.0);
    // g = sqrt(K) λ / sqrt(Ω (ω − 2G))
    CHECK(std::sqrt(3.0) * p.lambda() / std::sqrt(20.0 * 0.8) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(p.K() == doctest::Approx(3.0));
    CHECK(p.beta() == doctest::Approx(20.0));
    CHECK_THROWS_AS(ModelParams(10.0, 0.1, 0.5, 1), std::domain_error);
}

TEST_CASE("models: effective alphas") {
    const ModelParams p = ModelParams::from_g(0.5, 20.0, 0.1, 1, 1.0);
    CHECK(alpha_normal(p) == doctest::Approx(0.8 * 0.75 / 2.0).epsilon(1e-14));
    const ModelParams q = ModelParams::from_g(2.0, 20.0, 0.1, 1, 1.0);
    // (ω−2G)(3g²+1)(g²−1)/(8g⁴) = 0.8·13·3/128
    CHECK(alpha_superradiant(q) == doctest::Approx(0.8 * 13.0 * 3.0 / 128.0).epsilon(1e-14));
    CHECK_THROWS_AS(superradiant_effective(p), PhaseDomainError);
}

TEST_CASE("models: normal effective frequency is 2 sqrt(alpha (alpha + 2G))") {
    const ModelParams p = ModelParams::from_g(0.5, 20.0, 0.1, 1, 1.0);
    const double a = alpha_normal(p);
    CHECK(normal_effective(p).frequency() == doctest::Approx(2.0 * std::sqrt(a * (a + 0.2))).epsilon(1e-14));
}

TEST_CASE("models: quadratic model round-trips through its operator") {
    QuadraticModel m{0.3, 0.7, -0.2, 0.1, -0.4, 1.5, QuadraticOrigin::custom};
    const auto back = QuadraticModel::from_operator(m.to_operator(SpaceSpec::bosonic(20)));
    CHECK(back.cXX == doctest::Approx(m.cXX));
    CHECK(back.cPP == doctest::Approx(m.cPP));
    CHECK(back.cXP == doctest::Approx(m.cXP));
    CHECK(back.cX == doctest::Approx(m.cX));
    CHECK(back.cP == doctest::Approx(m.cP));
    CHECK(back.c0 == doctest::Approx(m.c0));
}

TEST_CASE("models: full Hamiltonian is Hermitian, parity-symmetric, and breaks U(1) only with G") {
    const SpaceSpec s = SpaceSpec::with_qubits(16, 2);
    const ModelParams p = ModelParams::from_g(0.7, 5.0, 0.1, 2, 2.0);
    const auto H = full_hamiltonian(p, s);
    CHECK(H.hermiticity_error() < 1e-14);
    CHECK(commutator(parity(s), H).max_abs() < 1e-12);
    CHECK(commutator(excitation_number(s), H).max_abs() > 1e-3);
    const auto H0 = full_hamiltonian(ModelParams::from_g(0.7, 5.0, 0.0, 2, 2.0), s);
    CHECK(commutator(excitation_number(s), H0).max_abs() < 1e-12);
}

TEST_CASE("models: derivative operators match finite differences of H") {
    const SpaceSpec s = SpaceSpec::with_qubits(10, 2);
    const ModelParams p = ModelParams::from_g(0.7, 5.0, 0.1, 2, 2.0);
    const double h = 1e-6;
    const auto dl = (full_hamiltonian(p.with_lambda(p.lambda() + h), s) - full_hamiltonian(p.with_lambda(p.lambda() - h), s)) *
                    cplx(0.5 / h, 0.0);
    CHECK((dl - full_dlambda(p, s)).max_abs() < 1e-8);
    const auto dO = (full_hamiltonian(p.with_Omega(p.Omega() + h), s) - full_hamiltonian(p.with_Omega(p.Omega() - h), s)) *
                    cplx(0.5 / h, 0.0);
    CHECK((dO - full_dOmega(p, s)).max_abs() < 1e-8);
}

TEST_CASE("models: HP form reproduces the two-level spectrum at N=1") {
    const ModelParams p = ModelParams::from_g(0.9, 20.0, 0.1, 1, 1.0);
    const auto a = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(full_hamiltonian(p, SpaceSpec::with_qubits(30, 1)).dense_real()).eigenvalues();
    const auto b = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hp_hamiltonian(p, SpaceSpec::holstein_primakoff(30, 1)).dense_real()).eigenvalues();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("models: HP collective spin obeys the su(2) algebra in the symmetric subspace") {
    const SpaceSpec s = SpaceSpec::holstein_primakoff(3, 4);
    const auto jz = hp_jz(s), jp = hp_jplus(s);
    const auto lhs = commutator(jp, jp.adjoint());
    CHECK((lhs - 2.0 * jz).max_abs() < 1e-12);
    CHECK((commutator(jz, jp) - jp).max_abs() < 1e-12);
}

TEST_CASE("models: full-model ground energy approaches the normal effective model at large beta") {
    const ModelParams base = ModelParams::from_g(0.5, 200.0, 0.1, 2, 2.0);
    const double full = eig_lowest_sector(full_hamiltonian(base, SpaceSpec::with_qubits(40, 2)), +1, 1).eigenvalues[0];
    const auto np = normal_effective(base);
    // Ground energy of the quadratic model: ε/2 − (α + G) − KΩ/2.
    const double a = alpha_normal(base);
    const double e_np = np.frequency() / 2.0 - (a + 0.1) - base.K() * base.Omega() / 2.0;
    CHECK(std::abs(full - e_np) < 2e-3);
}

TEST_CASE("models: quartic correction coefficients scale as 1/K at fixed N") {
    const auto c1 = correction_coefficients(ModelParams::from_g(0.5, 30.0, 0.1, 1, 2.0));
    const auto c2 = correction_coefficients(ModelParams::from_g(0.5, 30.0, 0.1, 1, 4.0));
    CHECK(c2.quartic / c1.quartic == doctest::Approx(0.5).epsilon(1e-12));
}

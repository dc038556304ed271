// test_spectra.cpp — Dense and Lanczos eigensolvers, parity sectors

#include "dtc/models.hpp"
#include "dtc/spectra.hpp"

#include <doctest.h>

#include <cmath>

using namespace dtc;

TEST_CASE("spectra: harmonic oscillator levels") {
    const SpaceSpec s = SpaceSpec::bosonic(50);
    const auto H = number(s) + 0.5 * TruncatedOperator::identity(s);
    const auto r = eig_lowest(H, 4);
    for (int i = 0; i < 4; ++i) CHECK(r.eigenvalues[static_cast<std::size_t>(i)] == doctest::Approx(i + 0.5).epsilon(1e-12));
    CHECK(r.gap() == doctest::Approx(1.0));
}

TEST_CASE("spectra: Lanczos agrees with dense diagonalization") {
    const SpaceSpec s = SpaceSpec::with_qubits(40, 3);
    const auto H = full_hamiltonian(ModelParams::from_g(0.8, 10.0, 0.1, 3, 2.5), s);
    EigenOptions dense, iter;
    dense.solver = SolverKind::dense;
    iter.solver = SolverKind::iterative;
    const auto a = eig_lowest(H, 3, dense);
    const auto b = eig_lowest(H, 3, iter);
    CHECK(b.solver == SolverKind::iterative);
    for (int i = 0; i < 3; ++i) {
        CHECK(b.eigenvalues[static_cast<std::size_t>(i)] == doctest::Approx(a.eigenvalues[static_cast<std::size_t>(i)]).epsilon(1e-10));
        CHECK(b.residuals[static_cast<std::size_t>(i)] < 1e-8 * b.norm_estimate);
    }
}

TEST_CASE("spectra: non-convergence reports residual diagnostics") {
    const SpaceSpec s = SpaceSpec::with_qubits(60, 3);
    const auto H = full_hamiltonian(ModelParams::from_g(0.8, 10.0, 0.1, 3, 2.5), s);
    EigenOptions o;
    o.solver = SolverKind::iterative;
    o.max_iterations = 5;
    o.krylov_dim = 4;
    CHECK_THROWS_AS(eig_lowest(H, 2, o), NumericalError);
}

TEST_CASE("spectra: parity sectors and symmetry guard") {
    const SpaceSpec s = SpaceSpec::with_qubits(30, 2);
    const auto H = full_hamiltonian(ModelParams::from_g(1.3, 10.0, 0.1, 2, 2.0), s);
    CHECK(parity_leakage(H) == 0.0);
    const double even = eig_lowest_sector(H, +1, 1).eigenvalues[0];
    const double odd = eig_lowest_sector(H, -1, 1).eigenvalues[0];
    const auto all = eig_lowest(H, 2);
    CHECK(std::min(even, odd) == doctest::Approx(all.eigenvalues[0]).epsilon(1e-10));
    // Deep in the superradiant phase the parity doublet is nearly degenerate.
    CHECK(std::abs(even - odd) < 1e-2);

    const auto broken = H + 0.1 * qubit_op(s, 0, Pauli::x);
    CHECK(parity_leakage(broken) > 0.0);
    CHECK_THROWS_AS(eig_lowest_sector(broken, +1, 1), SymmetryError);
}

TEST_CASE("spectra: full vs effective agreement improves with beta") {
    const ModelParams p = ModelParams::from_g(0.5, 10.0, 0.1, 2, 2.0);
    SpectralOptions o;
    o.fock_cutoff = 60;
    const std::vector<double> betas{10.0, 30.0, 100.0};
    const auto rows = spectral_agreement(p, betas, SpectralObservable::ground_energy, o);
    CHECK(rows[0].abs_error > rows[1].abs_error);
    CHECK(rows[1].abs_error > rows[2].abs_error);
    for (const auto& r : rows) CHECK_FALSE(r.truncation_warning);
}

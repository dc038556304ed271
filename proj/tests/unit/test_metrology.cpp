// test_metrology.cpp — Gaussian and Fock dynamics, QFI, homodyne sampling

#include "dtc/metrology.hpp"

#include <doctest.h>

#include <cmath>

using namespace dtc;

namespace {
const double kA = 0.03136, kG = 0.1;
const cplx kXi(0.0, 3.0);
}  // namespace

TEST_CASE("metrology: flow at the first revival is minus the identity") {
    const double tau = revival_time(kA, kG, 1);
    const auto f = quadratic_flow(squeezed_oscillator(kA, kG), tau);
    CHECK((f.S + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(f.S.determinant() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("metrology: Gaussian evolution keeps a pure state pure") {
    auto s = GaussianState::coherent(kXi);
    for (double t : {1.0, 5.0, 13.0}) {
        const auto e = evolve_gaussian(squeezed_oscillator(kA, kG), s, t);
        CHECK(e.uncertainty_product() == doctest::Approx(0.25).epsilon(1e-10));
    }
}

TEST_CASE("metrology: Gaussian and Fock moments agree") {
    for (double t : {3.0, 9.0}) {
        const auto g = quadrature_moments(kA, kG, kXi, t, QfiMethod::gaussian);
        const auto f = quadrature_moments(kA, kG, kXi, t, QfiMethod::fock);
        CHECK(f.meanX == doctest::Approx(g.meanX).epsilon(1e-8));
        CHECK(f.varX == doctest::Approx(g.varX).epsilon(1e-8));
        const auto c = quadrature_stats_closed_form(kA, kG, kXi, t);
        CHECK(c.meanX == doctest::Approx(g.meanX).epsilon(1e-10));
        CHECK(c.varX == doctest::Approx(g.varX).epsilon(1e-10));
    }
}

TEST_CASE("metrology: QFI engines agree") {
    const double t = revival_time(kA, kG, 1) / 2.0;
    const double F = qfi_numeric(kA, kG, kXi, t);
    SensingOptions gen;
    gen.method = QfiMethod::generator;
    CHECK(qfi_numeric(kA, kG, kXi, t, gen) == doctest::Approx(F).epsilon(1e-6));
    SensingOptions fock;
    fock.method = QfiMethod::fock;
    CHECK(qfi_numeric(kA, kG, kXi, t, fock) == doctest::Approx(F).epsilon(1e-6));
}

TEST_CASE("metrology: generator identities hold on the interior") {
    const auto r = operator_identity_check(kA, kG, 64, 1e-10);
    CHECK(r.passed);
    CHECK(r.Delta == doctest::Approx(sensing_delta(kA, kG)));
}

TEST_CASE("metrology: inverted variance at the revival matches the closed form and obeys I <= F") {
    const double tau = revival_time(kA, kG, 1);
    const double I = inverted_variance_numeric(kA, kG, kXi, tau);
    CHECK(I == doctest::Approx(inverted_variance_closed_form(kA, kG, kXi, 1)).epsilon(1e-6));
    CHECK(I <= qfi_numeric(kA, kG, kXi, tau) * (1.0 + 1e-6));
    CHECK(inverted_variance_numeric(kA, kG, cplx(1.0, 3.0), tau) == doctest::Approx(I).epsilon(1e-6));
}

TEST_CASE("metrology: per-g quantities follow the chain rule") {
    const ModelParams p = ModelParams::from_g(0.96, 20.0, 0.1, 1, 1.0);
    const double a = alpha_prime(p);
    const double tau = revival_time(a, p.G(), 1);
    SensingOptions o;
    o.wrt_g = true;
    const double d = dalpha_prime_dg(p);
    CHECK(inverted_variance_numeric(p, kXi, tau, o) == doctest::Approx(d * d * inverted_variance_numeric(a, p.G(), kXi, tau)).epsilon(1e-6));
}

TEST_CASE("metrology: counter-based normals are reproducible and standard") {
    CHECK(counter_normal(3, 1, 77) == counter_normal(3, 1, 77));
    CHECK(counter_normal(3, 1, 77) != counter_normal(3, 2, 77));
    double m = 0.0, v = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = counter_normal(11, 0, static_cast<std::uint64_t>(i));
        m += x;
        v += x * x;
    }
    m /= n;
    v = v / n - m * m;
    CHECK(std::abs(m) < 5.0 / std::sqrt(n));
    CHECK(v == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("metrology: homodyne estimate is seed-deterministic and unbiased") {
    const double tau = revival_time(kA, kG, 1);
    const auto a = homodyne_estimate(kA, kG, kXi, tau, 50000, 5);
    const auto b = homodyne_estimate(kA, kG, kXi, tau, 50000, 5);
    CHECK(a.I_est == b.I_est);
    CHECK(a.meanX_est == b.meanX_est);
    const auto exact = quadrature_stats_closed_form(kA, kG, kXi, tau);
    CHECK(std::abs(a.meanX_est - exact.meanX) < 5.0 * std::sqrt(exact.varX / 50000.0));
    CHECK_THROWS_AS(homodyne_estimate(kA, kG, kXi, tau, 1, 5), std::invalid_argument);
}

TEST_CASE("metrology: Fock evolution refuses to run into the truncation edge") {
    const SpaceSpec s = SpaceSpec::bosonic(40);
    const auto H = squeezed_oscillator(kA, kG).to_operator(s);
    CHECK_THROWS_WITH_AS(evolve_fock(H, coherent_state(s, cplx(0.0, 3.0)), 12.0), doctest::Contains("truncation edge"),
                         NumericalError);
}

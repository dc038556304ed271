// test_scaling.cpp — Finite-beta ratios and the quartic correction

#include "dtc/geometry.hpp"
#include "dtc/scaling.hpp"

#include <doctest.h>

#include <cmath>

using namespace dtc;

TEST_CASE("scaling: HP and two-level models give the same readout at N=1") {
    const ModelParams p = ModelParams::from_g(0.96, 30.0, 0.1, 1, 1.0);
    const double tau = revival_time(alpha_prime(p), p.G(), 1);
    ScalingOptions o;
    o.fock_cutoff = 50;
    const auto a = finite_beta_inverted_variance(p, cplx(0.0, 1.0), tau, FiniteBetaModel::full, o);
    const auto b = finite_beta_inverted_variance(p, cplx(0.0, 1.0), tau, FiniteBetaModel::hp, o);
    CHECK(b.I_g == doctest::Approx(a.I_g).epsilon(1e-10));
    CHECK(b.meanX == doctest::Approx(a.meanX).epsilon(1e-10));
}

TEST_CASE("scaling: calibration gate passes on the ideal model") {
    CHECK(calibration_gate(ModelParams::from_g(0.96, 20.0, 0.1, 1, 1.0), cplx(0.0, 1.0), 0.02) < 1e-6);
}

TEST_CASE("scaling: ratio tends to one as beta grows") {
    const std::vector<double> betas{1e2, 1e4, 1e6};
    const std::vector<ScalingVariant> v{{2, 2.0, cplx(0.0, 1.0)}};
    const auto run = ratio_vs_beta(0.96, 0.1, betas, v);
    CHECK(run.points[0].ratio < run.points[1].ratio);
    CHECK(run.points[1].ratio < run.points[2].ratio);
    CHECK(run.points[2].ratio == doctest::Approx(1.0).epsilon(0.01));
    CHECK(run.points[2].ratio <= 1.05);
}

TEST_CASE("scaling: ratio grows with N at fixed beta") {
    const std::vector<int> Ns{1, 2, 4};
    const std::vector<double> betas{200.0};
    const auto run = ratio_vs_N(0.96, 0.1, cplx(0.0, 1.0), Ns, betas);
    CHECK(run.points[0].ratio < run.points[1].ratio);
    CHECK(run.points[1].ratio < run.points[2].ratio);
}

TEST_CASE("scaling: deterministic across thread counts") {
    const std::vector<double> betas{50.0, 500.0};
    const std::vector<ScalingVariant> v{{2, 2.0, cplx(0.0, 1.0)}, {3, 3.0, cplx(0.0, 1.0)}};
    ScalingOptions one, three;
    three.threads = 3;
    const auto a = ratio_vs_beta(0.96, 0.1, betas, v, FiniteBetaModel::hp, one);
    const auto b = ratio_vs_beta(0.96, 0.1, betas, v, FiniteBetaModel::hp, three);
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].ratio == b.points[i].ratio);
}

TEST_CASE("scaling: quartic-correction effect falls as 1/K") {
    const std::vector<double> Ks{2.0, 4.0, 8.0, 16.0, 32.0};
    const auto rows = quartic_correction_effect(ModelParams::from_g(0.5, 30.0, 0.1, 1, 1.0), CorrectionObservable::ground_energy, Ks, 60);
    std::vector<double> d;
    for (const auto& r : rows) d.push_back(r.difference);
    CHECK(loglog_slope(Ks, d) == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("scaling: sweeps are restricted to the normal phase") {
    const std::vector<double> betas{50.0};
    const std::vector<ScalingVariant> v{{1, 1.0, cplx(0.0, 1.0)}};
    CHECK_THROWS_AS(ratio_vs_beta(1.2, 0.1, betas, v), PhaseDomainError);
}

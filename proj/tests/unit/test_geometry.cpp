// test_geometry.cpp — Quantum metric engines and Berry curvature

#include "dtc/geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace dtc;

namespace {

void check_close(const MetricTensor& m, const MetricComponents& c, double tol) {
    CHECK(m.g_ll == doctest::Approx(c.g_ll).epsilon(tol));
    CHECK(m.g_OO == doctest::Approx(c.g_OO).epsilon(tol));
    CHECK(m.g_lO == doctest::Approx(c.g_lO).epsilon(tol));
}

}  // namespace

TEST_CASE("geometry: closed form, sum over states and overlaps agree in both phases") {
    for (double g : {0.6, 0.93, 1.07, 1.4}) {
        const ModelParams p = ModelParams::from_g(g, 20.0, 0.1, 5, 4.5);
        MetricRequest req(p);
        req.model = g < 1.0 ? MetricModel::normal_effective : MetricModel::superradiant_effective;
        const auto closed = metric_components(p);
        check_close(metric_sum_over_states(req), closed, 1e-8);
        req.engine = MetricEngine::overlap_fd;
        check_close(metric_overlap_fd(req), closed, 1e-4);
    }
}

TEST_CASE("geometry: metric is positive semidefinite") {
    for (double g : {0.5, 0.99, 1.01, 1.5}) {
        const auto m = metric_components(ModelParams::from_g(g, 20.0, 0.1, 20, 17.3));
        CHECK(m.g_ll > 0.0);
        CHECK(m.g_OO > 0.0);
        CHECK(m.determinant() >= -1e-12 * m.g_ll * m.g_OO);
    }
}

TEST_CASE("geometry: stencil shrinks near the critical point") {
    MetricRequest far(ModelParams::from_g(0.5, 20.0, 0.1, 1, 1.0));
    MetricRequest near(ModelParams::from_g(0.999, 20.0, 0.1, 1, 1.0));
    const auto a = stencil_steps(far), b = stencil_steps(near);
    CHECK(b.d_lambda / near.params.lambda() < a.d_lambda / far.params.lambda());
}

TEST_CASE("geometry: metric diverges as |g - 1|^-2 close to the critical point") {
    std::vector<double> x, y;
    for (double e : {1e-5, 2e-5, 5e-5, 1e-4}) {
        x.push_back(e);
        y.push_back(metric_components(ModelParams::from_g(1.0 - e, 20.0, 0.1, 5, 4.5)).g_ll);
    }
    CHECK(loglog_slope(x, y) == doctest::Approx(-2.0).epsilon(0.01));
}

TEST_CASE("geometry: Berry curvature vanishes for real Hamiltonians") {
    MetricRequest req(ModelParams::from_g(0.8, 20.0, 0.1, 5, 4.5));
    CHECK(std::abs(berry_curvature_fd(req)) < 1e-8);
    MetricRequest full(ModelParams::from_g(0.5, 8.0, 0.1, 2, 2.0));
    full.model = MetricModel::full;
    full.fock_cutoff = 20;
    CHECK(std::abs(berry_curvature_fd(full)) < 1e-8);
}

TEST_CASE("geometry: full-model engines agree with each other") {
    MetricRequest req(ModelParams::from_g(0.5, 10.0, 0.1, 2, 2.0));
    req.model = MetricModel::full;
    req.fock_cutoff = 30;
    const auto a = metric_sum_over_states(req);
    req.engine = MetricEngine::overlap_fd;
    const auto b = metric_overlap_fd(req);
    CHECK(b.g_ll == doctest::Approx(a.g_ll).epsilon(1e-4));
    CHECK(b.g_OO == doctest::Approx(a.g_OO).epsilon(1e-4));
}

// geometry.hpp — Ground-state quantum metric and Berry curvature over (λ, Ω)

#pragma once

#include "dtc/analytic.hpp"
#include "dtc/spectra.hpp"

#include <span>
#include <string>
#include <vector>

namespace dtc {

enum class MetricModel { full, normal_effective, superradiant_effective, corrected };
enum class MetricEngine { sum_over_states, overlap_fd };

std::string to_string(MetricModel m);
std::string to_string(MetricEngine e);
MetricModel parse_metric_model(const std::string& name);
MetricEngine parse_metric_engine(const std::string& name);

struct MetricRequest {
    ModelParams params;
    MetricModel model{MetricModel::normal_effective};
    MetricEngine engine{MetricEngine::sum_over_states};
    int fock_cutoff{200};
    // Stencil widths; zero selects rel_step times the natural scale of each parameter.
    double d_lambda{0.0};
    double d_Omega{0.0};
    double rel_step{1e-4};
    EigenOptions eig{};

    explicit MetricRequest(ModelParams p) : params(std::move(p)) {}
};

struct MetricTensor {
    double g_ll{0.0};
    double g_OO{0.0};
    double g_lO{0.0};
    MetricModel model{MetricModel::normal_effective};
    MetricEngine engine{MetricEngine::sum_over_states};
    double gap{0.0};          // smallest gap entering the sum (sum-over-states only)
    double d_lambda{0.0};     // stencil actually used (overlap only)
    double d_Omega{0.0};

    double determinant() const noexcept { return g_ll * g_OO - g_lO * g_lO; }
    MetricComponents components() const { return {g_ll, g_OO, g_lO}; }
};

struct StencilSteps {
    double d_lambda;
    double d_Omega;
};

// Stencil widths after the near-critical shrink (span in g below 10% of |g − 1|).
StencilSteps stencil_steps(const MetricRequest& req);

MetricTensor metric_sum_over_states(const MetricRequest& req);
MetricTensor metric_overlap_fd(const MetricRequest& req);
MetricTensor compute_metric(const MetricRequest& req);

// F_λΩ from the phase of the four-overlap loop around a (d_lambda × d_Omega) plaquette.
double berry_curvature_fd(const MetricRequest& req);

struct MetricScanRow {
    double g;
    MetricTensor metric;
};

// Metric along g at fixed Ω, G, and weights (λ follows g).
std::vector<MetricScanRow> metric_divergence_scan(const MetricRequest& base, std::span<const double> g_values);

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace dtc

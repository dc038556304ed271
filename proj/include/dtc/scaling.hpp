// scaling.hpp — Finite-β and finite-N degradation of the sensing protocol

#pragma once

#include "dtc/metrology.hpp"

#include <span>
#include <string>
#include <vector>

namespace dtc {

enum class FiniteBetaModel { full, hp, corrected };
std::string to_string(FiniteBetaModel m);
FiniteBetaModel parse_finite_beta_model(const std::string& name);

struct ScalingOptions {
    int fock_cutoff{0};       // 0 chooses from |ξ| and the squeezing reached
    double rel_step{1e-4};    // g step for the susceptibility, relative to g
    double richardson_tol{1e-3};
    double calibration_tol{0.02};
    int threads{1};
    EvolutionOptions evolution{};
};

struct FiniteBetaResult {
    double I_g{0.0};
    double meanX{0.0};
    double varX{0.0};
    int fock_cutoff{0};
};

// I_g at time t for the lab-frame model (full, HP, or quartic-corrected) prepared in |ξ⟩ ⊗ |g⟩^N.
FiniteBetaResult finite_beta_inverted_variance(const ModelParams& p, cplx xi, double t, FiniteBetaModel model,
                                               const ScalingOptions& opts = {});

// (dα′/dg)² I_α′(τ₁) from the closed form, the β → ∞ reference.
double ideal_inverted_variance_g(const ModelParams& p, cplx xi);

struct ScalingVariant {
    int N{1};
    double K{1.0};
    cplx xi{0.0, 1.0};
};

struct ScalingPoint {
    double beta{0.0};
    int N{0};
    double K{0.0};
    cplx xi{};
    double tau{0.0};
    double I_beta{0.0};
    double I_ideal{0.0};
    double ratio{0.0};
    double meanX{0.0};
    double varX{0.0};
};

struct ScalingRun {
    double g{0.0};
    double G{0.0};
    std::string axis;  // "beta" or "N"
    FiniteBetaModel model{FiniteBetaModel::hp};
    std::vector<ScalingPoint> points;
    double calibration_error{0.0};  // worst |I_numeric/I_closed − 1| on the ideal model
};

// Relative error between the Gaussian-engine I(τ₁) and the closed form; throws above tol.
double calibration_gate(const ModelParams& p, cplx xi, double tol);

ScalingRun ratio_vs_beta(double g, double G, std::span<const double> betas, std::span<const ScalingVariant> variants,
                         FiniteBetaModel model = FiniteBetaModel::hp, const ScalingOptions& opts = {});

// HP model with x_j = K/N; K defaults to N (unit weights).
ScalingRun ratio_vs_N(double g, double G, cplx xi, std::span<const int> Ns, std::span<const double> betas,
                      double K_per_qubit = 1.0, const ScalingOptions& opts = {});

enum class CorrectionObservable { ground_energy, metric_ll, inverted_variance };
std::string to_string(CorrectionObservable o);
CorrectionObservable parse_correction_observable(const std::string& name);

struct CorrectionRow {
    double K;
    double uncorrected;
    double corrected;
    double difference;  // |corrected − uncorrected|
};

// Effective-model observable without and with the finite-β quartic correction as K varies at fixed N, g, β.
std::vector<CorrectionRow> quartic_correction_effect(const ModelParams& p, CorrectionObservable observable,
                                                     std::span<const double> Ks, int fock_cutoff = 80,
                                                     cplx xi = cplx(0.0, 1.0), const ScalingOptions& opts = {});

}  // namespace dtc

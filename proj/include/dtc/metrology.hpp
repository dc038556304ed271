// metrology.hpp — Sensing dynamics, quantum Fisher information, and homodyne estimation
//
// The sensed family is H_α′ = 2G P² + α′(X² + P²) with the field prepared in |ξ⟩.
// Quantities "wrt g" follow from the chain rule with dα′/dg at fixed Ω, G, K.

#pragma once

#include "dtc/analytic.hpp"
#include "dtc/hilbert.hpp"
#include "dtc/models.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dtc {

struct GaussianState {
    Eigen::Vector2d mean{Eigen::Vector2d::Zero()};  // (⟨X⟩, ⟨P⟩)
    Eigen::Matrix2d cov{Eigen::Matrix2d::Identity() / 2.0};  // ½⟨{ΔR_i, ΔR_j}⟩; vacuum = I/2

    static GaussianState coherent(cplx xi);
    double uncertainty_product() const { return cov.determinant(); }
};

// Symplectic flow e^{Mt} of a quadratic model and its affine drive term.
struct SymplecticFlow {
    Eigen::Matrix2d S;
    Eigen::Vector2d shift;
};
SymplecticFlow quadratic_flow(const QuadraticModel& model, double t);

GaussianState evolve_gaussian(const QuadraticModel& model, const GaussianState& init, double t);

// QFI of a pure single-mode Gaussian family from states at θ ± h.
double gaussian_qfi(const GaussianState& minus, const GaussianState& centre, const GaussianState& plus, double h);

struct EvolutionOptions {
    int steps{1};                 // Krylov substeps (dense path ignores)
    double norm_tol{1e-10};
    double edge_tol{1e-6};        // allowed population at the truncation edge
    int krylov_dim{30};
    Index dense_threshold{kDenseThreshold};
};

// e^{−iHt}ψ₀ by dense eigendecomposition or Krylov stepping.
QuantumState evolve_fock(const TruncatedOperator& H, const QuantumState& psi0, double t,
                         const EvolutionOptions& opts = {});
// Levels counted as the truncation edge for a given cutoff.
int edge_levels(int cutoff);

struct IdentityReport {
    double Delta{0.0};
    double residual_A{0.0};       // ‖A − (−4G(XP+PX))‖ on the interior
    double residual_B{0.0};       // ‖B − (−16Gα′X² + 16G(α′+2G)P²)‖
    double residual_nested{0.0};  // ‖[H,[H,[H′₀,H′₁]]] − Δ[H′₀,H′₁]‖
    double residual_lambda{0.0};  // ‖[H,Λ] − √Δ Λ‖
    int interior_levels{0};
    bool passed{false};

    double max_residual() const;
};

IdentityReport operator_identity_check(double alpha_prime, double G, int cutoff = 64, double tol = 1e-8);
IdentityReport operator_identity_check(const ModelParams& p, int cutoff = 64, double tol = 1e-8);

enum class GeneratorTerms { all, b_only };

// h = H′₁ t + (cos√Δt − 1)/Δ · A − (sin√Δt − √Δt)/Δ^{3/2} · B.
TruncatedOperator local_generator(double alpha_prime, double G, double t, const SpaceSpec& space,
                                  GeneratorTerms terms = GeneratorTerms::all);
TruncatedOperator local_generator(const ModelParams& p, double t, const SpaceSpec& space,
                                  GeneratorTerms terms = GeneratorTerms::all);

enum class QfiMethod { gaussian, fock, generator };
std::string to_string(QfiMethod m);
QfiMethod parse_qfi_method(const std::string& name);

struct SensingOptions {
    QfiMethod method{QfiMethod::gaussian};
    int fock_cutoff{0};      // 0 chooses from |ξ| and the squeezing reached
    double rel_step{1e-5};   // finite-difference step relative to α′
    double richardson_tol{1e-3};
    bool wrt_g{false};       // report per g instead of per α′
    GeneratorTerms generator_terms{GeneratorTerms::all};
};

// Cutoff used by the Fock paths when opts.fock_cutoff == 0.
int auto_fock_cutoff(double alpha_prime, double G, cplx xi);

double qfi_numeric(double alpha_prime, double G, cplx xi, double t, const SensingOptions& opts = {});
double qfi_numeric(const ModelParams& p, cplx xi, double t, const SensingOptions& opts = {});

struct QuadratureMoments {
    double meanX;
    double varX;
};
QuadratureMoments quadrature_moments(double alpha_prime, double G, cplx xi, double t,
                                     QfiMethod engine = QfiMethod::gaussian, int fock_cutoff = 0);

// I = χ²/(ΔX)² with χ = ∂⟨X⟩_t/∂α′ by Richardson-checked central differences.
double inverted_variance_numeric(double alpha_prime, double G, cplx xi, double t, const SensingOptions& opts = {});
double inverted_variance_numeric(const ModelParams& p, cplx xi, double t, const SensingOptions& opts = {});

struct ProtocolResult {
    std::vector<double> times;
    std::vector<double> meanX;
    std::vector<double> varX;
    std::vector<double> qfi;
    std::vector<double> inv_var;
    QfiMethod engine{QfiMethod::gaussian};
    double alpha_prime{0.0};
    double G{0.0};
    double var_p2{0.0};  // Var[P²] of the initial state
};

ProtocolResult run_protocol(const ModelParams& p, cplx xi, std::span<const double> times,
                            const SensingOptions& opts = {});

// Counter-based normal deviates: sample i of stream s under seed is a pure function of (seed, s, i).
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

struct HomodyneResult {
    double meanX_est{0.0};
    double varX_est{0.0};
    double chi_est{0.0};
    double I_est{0.0};
    double step{0.0};  // α′ step of the two-setting susceptibility
    long long shots{0};
};

struct HomodyneOptions {
    double step{0.0};         // 0 picks a step resolving χ above shot noise
    double snr_target{200.0}; // difference signal over its shot-noise standard error
    bool wrt_g{false};
};

HomodyneResult homodyne_estimate(double alpha_prime, double G, cplx xi, double t, long long shots,
                                 std::uint64_t seed, const HomodyneOptions& opts = {});
HomodyneResult homodyne_estimate(const ModelParams& p, cplx xi, double t, long long shots, std::uint64_t seed,
                                 const HomodyneOptions& opts = {});

}  // namespace dtc

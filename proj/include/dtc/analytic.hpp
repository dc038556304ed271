// analytic.hpp — Closed-form spectra, ground-state energies, metric, and sensing formulas

#pragma once

#include "dtc/models.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dtc {

// |g − 1| below this returns a flagged critical record instead of divergent values.
inline constexpr double kCriticalWindow = 1e-8;

enum class Phase { normal, superradiant, critical };
std::string to_string(Phase p);
Phase phase_of(const ModelParams& p);

struct PhaseQuantities {
    Phase phase{Phase::normal};
    double alpha{0.0};     // α_n or α_s
    double epsilon{0.0};   // excitation energy 2√(α(α+2G))
    double r{0.0};         // squeezing parameter ¼ ln[α/(α+2G)]
    double E_ground{0.0};  // ε/2 − (α+G) − (phase constant)
    std::optional<double> alpha0;       // displacement (superradiant only)
    std::optional<double> gamma_ratio;  // (g²+1)/(g²−1) (superradiant only)
    std::optional<double> c_plus;
    std::optional<double> c_minus;

    bool critical() const noexcept { return phase == Phase::critical; }
};

PhaseQuantities phase_quantities(const ModelParams& p);

// α′ used by the sensing protocol: α_n for g ≤ 1, α_s for g > 1.
double alpha_prime(const ModelParams& p);
// dα′/dg at fixed Ω, G, K.
double dalpha_prime_dg(const ModelParams& p);

enum class EnergyBranch {
    full,         // ε/2 − (α+G) − constant, per phase
    approximate,  // −KΩ/2 below g_c and −KΩ(g²+g⁻²)/4 above
};

struct EnergyPoint {
    double g;
    double E;
    double d2E;  // closed-form d²E/dg²
};

// Ground-state energy and its second derivative along g (Ω, G, K fixed).
std::vector<EnergyPoint> ground_energy_curve(const ModelParams& base, std::span<const double> g_values,
                                             EnergyBranch branch = EnergyBranch::full);
EnergyPoint ground_energy_point(const ModelParams& base, double g, EnergyBranch branch = EnergyBranch::full);
// d²E/dg² by twice-Richardson-extrapolated central differences of E evaluated in extended precision,
// step min(1e-2, |g − 1|/10).
// NaN inside the critical window or when the stencil would reach g ≤ 0.
double ground_energy_d2_fd(const ModelParams& base, double g, EnergyBranch branch = EnergyBranch::full);

struct MetricComponents {
    double g_ll{0.0};
    double g_OO{0.0};
    double g_lO{0.0};

    double determinant() const noexcept { return g_ll * g_OO - g_lO * g_lO; }
};

// Ground-state quantum metric over (λ, Ω) for the phase selected by g.
MetricComponents metric_components(const ModelParams& p);

// Δ = 16α′(α′ + 2G).
double sensing_delta(double alpha_prime, double G);
// τ_n = 2nπ/√Δ.
double revival_time(double alpha_prime, double G, int n = 1);

// QFI approximation 1024 G²(α′+2G)² [sin(√Δt) − √Δt]²/Δ³ · Var[P²].
double qfi_closed_form(double alpha_prime, double G, double t, double var_p2);
double qfi_closed_form(const ModelParams& p, double t, double var_p2);

struct QuadratureStats {
    double meanX;
    double varX;
};

// ⟨X⟩_t and (ΔX)² for the coherent initial state |ξ⟩ evolved with e^{−iH_α′ t}.
QuadratureStats quadrature_stats_closed_form(double alpha_prime, double G, cplx xi, double t);
QuadratureStats quadrature_stats_closed_form(const ModelParams& p, cplx xi, double t);

// I(τ_n) = 4096 ξ_i²(α′+G)²(α′+2G)² Δ⁻² τ_n².
double inverted_variance_closed_form(double alpha_prime, double G, cplx xi, int n = 1);
double inverted_variance_closed_form(const ModelParams& p, cplx xi, int n = 1);

// Var[P²] of the coherent state |ξ⟩, evaluated on a truncated Fock space.
// cutoff ≤ 0 picks a cutoff with ample headroom above |ξ|².
double coherent_var_p2(cplx xi, int cutoff = 0);

}  // namespace dtc

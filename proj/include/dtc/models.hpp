// models.hpp — Hamiltonian builders for the parametrically driven Tavis-Cummings model
//
// Frequencies are expressed in units of the field frequency ω (ω = 1 by default
// but kept explicit in every formula).

#pragma once

#include "dtc/hilbert.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dtc {

// Parameters outside a formula's phase domain (e.g. superradiant quantities at g ≤ 1).
class PhaseDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Physical parameters. Qubit j has λ_j = x_j λ and Ω_j = x_j Ω.
// Derived: K = Σ x_j, β = Ω/ω, g = √K λ / √(Ω(ω − 2G)).
class ModelParams {
public:
    ModelParams(double Omega, double lambda, double G, int n_qubits, std::vector<double> weights = {},
                double omega = 1.0);

    // λ chosen so that the coupling parameter equals g. Weights default to K/N each.
    static ModelParams from_g(double g, double Omega, double G, int n_qubits, double K = -1.0,
                              double omega = 1.0);
    static ModelParams from_g(double g, double Omega, double G, std::vector<double> weights,
                              double omega = 1.0);

    double omega() const noexcept { return omega_; }
    double Omega() const noexcept { return Omega_; }
    double lambda() const noexcept { return lambda_; }
    double G() const noexcept { return G_; }
    int n_qubits() const noexcept { return static_cast<int>(weights_.size()); }
    const std::vector<double>& weights() const noexcept { return weights_; }

    double K() const noexcept { return K_; }
    double beta() const noexcept { return beta_; }
    double g() const noexcept { return g_; }
    // ω − 2G, the renormalized field frequency.
    double omega_eff() const noexcept { return omega_ - 2.0 * G_; }
    bool homogeneous() const;

    ModelParams with_lambda(double lambda) const;
    ModelParams with_Omega(double Omega) const;
    ModelParams with_g(double g) const;

private:
    double omega_;
    double Omega_;
    double lambda_;
    double G_;
    std::vector<double> weights_;
    double K_{0.0};
    double beta_{0.0};
    double g_{0.0};
};

std::vector<double> uniform_weights(int n_qubits, double K);

enum class QuadraticOrigin { normal_effective, superradiant_effective, corrected, custom };
std::string to_string(QuadraticOrigin o);

// H = cXX X² + cPP P² + cXP (XP + PX) + cX X + cP P + c0.
struct QuadraticModel {
    double cXX{0.0};
    double cPP{0.0};
    double cXP{0.0};
    double cX{0.0};
    double cP{0.0};
    double c0{0.0};
    QuadraticOrigin origin{QuadraticOrigin::custom};

    TruncatedOperator to_operator(const SpaceSpec& space) const;
    // Reads the coefficients back from the matrix elements of a quadratic operator.
    static QuadraticModel from_operator(const TruncatedOperator& op);
    // 2√(cXX cPP − cXP²): the excitation frequency; NaN when unstable.
    double frequency() const;
};

// H_α′ = 2G P² + α′(X² + P²), the family whose α′-derivative is the sensing generator.
QuadraticModel squeezed_oscillator(double alpha_prime, double G);

// α_n = (ω − 2G)(1 − g²)/2.
double alpha_normal(const ModelParams& p);
// α_s = (ω − 2G)(3g² + 1)(g² − 1)/(8g⁴).
double alpha_superradiant(const ModelParams& p);

// H_np = 2(α_n + G)a†a − G(a² + a†²) − KΩ/2.
QuadraticModel normal_effective(const ModelParams& p);
// H_sp = 2(α_s + G)a†a − G(a² + a†²) − (K/4)Ω(g² + g⁻²). Requires g > 1.
QuadraticModel superradiant_effective(const ModelParams& p);

// Full Hamiltonian on Fock ⊗ qubit^N.
TruncatedOperator full_hamiltonian(const ModelParams& p, const SpaceSpec& s);
// ∂H/∂λ = Σ x_j (a†σ⁻_j + aσ⁺_j) and ∂H/∂Ω = Σ x_j σ^z_j / 2.
TruncatedOperator full_dlambda(const ModelParams& p, const SpaceSpec& s);
TruncatedOperator full_dOmega(const ModelParams& p, const SpaceSpec& s);

// Displacement α₀ = √(K²λ²/(4(ω−2G)²) − Ω²/(4λ²)). Requires g > 1.
double displacement_alpha0(const ModelParams& p);
// Rotation angle θ with tan 2θ = 2λα/Ω for α = sign·α₀ (identical for all qubits).
double rotation_angle(const ModelParams& p, int sign);

// Displaced-frame Hamiltonian with rotated qubits, expressed in the bare qubit basis.
TruncatedOperator displaced_rotated_hamiltonian(const ModelParams& p, const SpaceSpec& s, int sign = +1);

// H_np plus the leading finite-β corrections (quadratic shifts and quartic potential).
TruncatedOperator corrected_normal_effective(const ModelParams& p, const SpaceSpec& s);
struct CorrectionCoefficients {
    double number;   // coefficient of a†a
    double squeeze;  // coefficient of (a² + a†²)
    double quartic;  // coefficient of a†a a†a
};
CorrectionCoefficients correction_coefficients(const ModelParams& p);

// Holstein-Primakoff form on Fock ⊗ b-boson; requires homogeneous weights.
TruncatedOperator hp_hamiltonian(const ModelParams& p, const SpaceSpec& s);
// Collective J_z, J_+ in the HP representation.
TruncatedOperator hp_jz(const SpaceSpec& s);
TruncatedOperator hp_jplus(const SpaceSpec& s);

}  // namespace dtc

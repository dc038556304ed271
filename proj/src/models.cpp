// models.cpp — Hamiltonian builders and quadratic reductions

#include "dtc/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dtc {

namespace {

void require_qubit_space(const ModelParams& p, const SpaceSpec& s, const char* who) {
    s.validate();
    if (s.hp_mode) {
        throw std::invalid_argument(std::string(who) + ": space must use an explicit qubit register");
    }
    if (s.n_qubits != p.n_qubits()) {
        throw std::invalid_argument(std::string(who) + ": space qubit count does not match parameters");
    }
}

TruncatedOperator squeeze_pair(const SpaceSpec& s) {
    return annihilation_squared(s) + creation_squared(s);
}

TruncatedOperator hermitian(TruncatedOperator op) {
    return {op.space(), op.matrix(), true};
}

}  // namespace

// ------------------------------------------------------------- ModelParams

ModelParams::ModelParams(double Omega, double lambda, double G, int n_qubits, std::vector<double> weights,
                         double omega)
    : omega_(omega), Omega_(Omega), lambda_(lambda), G_(G), weights_(std::move(weights)) {
    if (n_qubits < 0) throw std::invalid_argument("ModelParams: n_qubits must be >= 0");
    if (weights_.empty()) weights_.assign(static_cast<std::size_t>(n_qubits), 1.0);
    if (static_cast<int>(weights_.size()) != n_qubits) {
        throw std::invalid_argument("ModelParams: weights must have one entry per qubit");
    }
    if (std::any_of(weights_.begin(), weights_.end(), [](double x) { return !(x > 0.0); })) {
        throw std::invalid_argument("ModelParams: weights must be positive");
    }
    if (!(omega_ > 0.0) || !(Omega_ > 0.0)) {
        throw std::invalid_argument("ModelParams: omega and Omega must be positive");
    }
    if (!(lambda_ >= 0.0) || !(G_ >= 0.0)) {
        throw std::invalid_argument("ModelParams: lambda and G must be non-negative");
    }
    if (!(omega_ - 2.0 * G_ > 0.0)) {
        throw std::domain_error("ModelParams: requires omega - 2G > 0 (unstable squeezing is not modeled)");
    }
    K_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    beta_ = Omega_ / omega_;
    g_ = std::sqrt(K_) * lambda_ / std::sqrt(Omega_ * (omega_ - 2.0 * G_));
}

ModelParams ModelParams::from_g(double g, double Omega, double G, int n_qubits, double K, double omega) {
    std::vector<double> w = K < 0.0 ? std::vector<double>(static_cast<std::size_t>(n_qubits), 1.0)
                                    : uniform_weights(n_qubits, K);
    return from_g(g, Omega, G, std::move(w), omega);
}

ModelParams ModelParams::from_g(double g, double Omega, double G, std::vector<double> weights, double omega) {
    const double K = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (g != 0.0 && !(K > 0.0)) throw std::invalid_argument("ModelParams::from_g: g > 0 requires K > 0");
    if (!(omega - 2.0 * G > 0.0)) {
        throw std::domain_error("ModelParams: requires omega - 2G > 0 (unstable squeezing is not modeled)");
    }
    const double lambda = K > 0.0 ? g * std::sqrt(Omega * (omega - 2.0 * G) / K) : 0.0;
    const int n = static_cast<int>(weights.size());
    return ModelParams(Omega, lambda, G, n, std::move(weights), omega);
}

bool ModelParams::homogeneous() const {
    return std::all_of(weights_.begin(), weights_.end(), [&](double x) { return x == weights_.front(); });
}

ModelParams ModelParams::with_lambda(double lambda) const {
    return ModelParams(Omega_, lambda, G_, n_qubits(), weights_, omega_);
}

ModelParams ModelParams::with_Omega(double Omega) const {
    return ModelParams(Omega, lambda_, G_, n_qubits(), weights_, omega_);
}

ModelParams ModelParams::with_g(double g) const {
    return from_g(g, Omega_, G_, weights_, omega_);
}

std::vector<double> uniform_weights(int n_qubits, double K) {
    if (n_qubits <= 0) return {};
    return std::vector<double>(static_cast<std::size_t>(n_qubits), K / n_qubits);
}

// ---------------------------------------------------------- QuadraticModel

std::string to_string(QuadraticOrigin o) {
    switch (o) {
        case QuadraticOrigin::normal_effective: return "normal_effective";
        case QuadraticOrigin::superradiant_effective: return "superradiant_effective";
        case QuadraticOrigin::corrected: return "corrected";
        case QuadraticOrigin::custom: return "custom";
    }
    return "custom";
}

TruncatedOperator QuadraticModel::to_operator(const SpaceSpec& space) const {
    const auto q = quadratures(space);
    auto h = cXX * x_squared(space) + cPP * p_squared(space) + cXP * xp_symmetric(space) + cX * q.X +
             cP * q.P + c0 * TruncatedOperator::identity(space);
    return hermitian(std::move(h));
}

QuadraticModel QuadraticModel::from_operator(const TruncatedOperator& op) {
    const SpaceSpec& s = op.space();
    if (s.fock_cutoff < 3) throw std::invalid_argument("QuadraticModel::from_operator: cutoff must be >= 3");
    const auto f = static_cast<Index>(s.factor_dim());
    const Index q = static_cast<Index>(ground_factor_index(s));
    const SparseMatrix& m = op.matrix();
    const cplx h00 = m.coeff(q, q);
    const cplx h11 = m.coeff(f + q, f + q);
    const cplx h01 = m.coeff(q, f + q);
    const cplx h02 = m.coeff(q, 2 * f + q);

    const double u = (h11 - h00).real();
    const cplx v = h02 / std::sqrt(2.0);
    QuadraticModel out;
    out.cXX = 0.5 * (u + 2.0 * v.real());
    out.cPP = 0.5 * (u - 2.0 * v.real());
    out.cXP = -v.imag();
    out.cX = std::sqrt(2.0) * h01.real();
    out.cP = -std::sqrt(2.0) * h01.imag();
    out.c0 = h00.real() - 0.5 * (out.cXX + out.cPP);
    return out;
}

double QuadraticModel::frequency() const {
    const double d = cXX * cPP - cXP * cXP;
    return d >= 0.0 ? 2.0 * std::sqrt(d) : std::nan("");
}

QuadraticModel squeezed_oscillator(double alpha_prime, double G) {
    QuadraticModel m;
    m.cXX = alpha_prime;
    m.cPP = alpha_prime + 2.0 * G;
    m.origin = QuadraticOrigin::custom;
    return m;
}

double alpha_normal(const ModelParams& p) {
    const double g = p.g();
    return p.omega_eff() * (1.0 - g * g) / 2.0;
}

double alpha_superradiant(const ModelParams& p) {
    const double g2 = p.g() * p.g();
    return p.omega_eff() * (3.0 * g2 + 1.0) * (g2 - 1.0) / (8.0 * g2 * g2);
}

QuadraticModel normal_effective(const ModelParams& p) {
    const double a = alpha_normal(p);
    QuadraticModel m = squeezed_oscillator(a, p.G());
    m.c0 = -(a + p.G()) - p.K() * p.Omega() / 2.0;
    m.origin = QuadraticOrigin::normal_effective;
    return m;
}

QuadraticModel superradiant_effective(const ModelParams& p) {
    const double g = p.g();
    if (!(g > 1.0)) {
        throw PhaseDomainError("superradiant_effective: requires g > 1");
    }
    const double a = alpha_superradiant(p);
    QuadraticModel m = squeezed_oscillator(a, p.G());
    m.c0 = -(a + p.G()) - p.K() * p.Omega() * (g * g + 1.0 / (g * g)) / 4.0;
    m.origin = QuadraticOrigin::superradiant_effective;
    return m;
}

// ------------------------------------------------------------ full model

TruncatedOperator full_hamiltonian(const ModelParams& p, const SpaceSpec& s) {
    require_qubit_space(p, s, "full_hamiltonian");
    const auto a = annihilation(s);
    const auto ad = creation(s);
    TruncatedOperator h = p.omega() * number(s) - p.G() * squeeze_pair(s);
    for (int j = 0; j < p.n_qubits(); ++j) {
        const double x = p.weights()[static_cast<std::size_t>(j)];
        h += (0.5 * x * p.Omega()) * qubit_op(s, j, Pauli::z);
        h += (x * p.lambda()) * (ad * qubit_op(s, j, Pauli::minus) + a * qubit_op(s, j, Pauli::plus));
    }
    return hermitian(std::move(h));
}

TruncatedOperator full_dlambda(const ModelParams& p, const SpaceSpec& s) {
    require_qubit_space(p, s, "full_dlambda");
    const auto a = annihilation(s);
    const auto ad = creation(s);
    auto d = TruncatedOperator::zero(s);
    for (int j = 0; j < p.n_qubits(); ++j) {
        const double x = p.weights()[static_cast<std::size_t>(j)];
        d += x * (ad * qubit_op(s, j, Pauli::minus) + a * qubit_op(s, j, Pauli::plus));
    }
    return hermitian(std::move(d));
}

TruncatedOperator full_dOmega(const ModelParams& p, const SpaceSpec& s) {
    require_qubit_space(p, s, "full_dOmega");
    auto d = TruncatedOperator::zero(s);
    for (int j = 0; j < p.n_qubits(); ++j) {
        d += (0.5 * p.weights()[static_cast<std::size_t>(j)]) * qubit_op(s, j, Pauli::z);
    }
    return hermitian(std::move(d));
}

// ------------------------------------------------------- superradiant frame

double displacement_alpha0(const ModelParams& p) {
    if (!(p.g() > 1.0)) {
        throw PhaseDomainError("displacement_alpha0: requires g > 1 (alpha0 is imaginary otherwise)");
    }
    const double K = p.K(), lam = p.lambda(), w = p.omega_eff(), Om = p.Omega();
    const double a2 = K * K * lam * lam / (4.0 * w * w) - Om * Om / (4.0 * lam * lam);
    return std::sqrt(std::max(0.0, a2));
}

double rotation_angle(const ModelParams& p, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("rotation_angle: sign must be +1 or -1");
    const double alpha = sign * displacement_alpha0(p);
    return 0.5 * std::atan2(2.0 * p.lambda() * alpha, p.Omega());
}

TruncatedOperator displaced_rotated_hamiltonian(const ModelParams& p, const SpaceSpec& s, int sign) {
    require_qubit_space(p, s, "displaced_rotated_hamiltonian");
    const double g = p.g();
    const double theta = rotation_angle(p, sign);
    const double c = std::cos(theta), sn = std::sin(theta);

    // |ẽ⟩ = c|e⟩ + s|g⟩, |g̃⟩ = −s|e⟩ + c|g⟩ in the (e, g) basis.
    Eigen::Matrix2cd sz_t, sp_t;
    sz_t << c * c - sn * sn, 2.0 * c * sn, 2.0 * c * sn, sn * sn - c * c;
    sp_t << -c * sn, c * c, -sn * sn, c * sn;
    const Eigen::Matrix2cd sm_t = sp_t.adjoint();

    const auto a = annihilation(s);
    const auto ad = creation(s);
    TruncatedOperator h = p.omega() * number(s) - p.G() * squeeze_pair(s);
    for (int j = 0; j < p.n_qubits(); ++j) {
        const double x = p.weights()[static_cast<std::size_t>(j)];
        const double omega_t = g * g * x * p.Omega();
        const double lambda_t = x * p.lambda() * (1.0 + 1.0 / (g * g)) / 2.0;
        h += (0.5 * omega_t) * qubit_matrix(s, j, sz_t);
        h += lambda_t * (ad * qubit_matrix(s, j, sm_t) + a * qubit_matrix(s, j, sp_t));
    }
    h += (p.K() * p.Omega() * (g * g - 1.0 / (g * g)) / 4.0) * TruncatedOperator::identity(s);
    return hermitian(std::move(h));
}

// ------------------------------------------------------ finite-β corrections

CorrectionCoefficients correction_coefficients(const ModelParams& p) {
    const double g2 = p.g() * p.g();
    const double w = p.omega_eff();
    const double KO = p.K() * p.Omega();
    const double N = p.n_qubits();
    if (!(KO > 0.0)) return {0.0, 0.0, 0.0};
    return {
        -p.omega() * w * g2 * N / KO,
        p.G() * w * g2 * N / KO,
        w * w * g2 * g2 / KO,
    };
}

TruncatedOperator corrected_normal_effective(const ModelParams& p, const SpaceSpec& s) {
    s.validate();
    if (s.hp_mode || s.n_qubits != 0) {
        throw std::invalid_argument("corrected_normal_effective: requires a bosonic-only space");
    }
    const auto c = correction_coefficients(p);
    const auto n = number(s);
    auto h = normal_effective(p).to_operator(s) + c.number * n + c.squeeze * squeeze_pair(s) +
             c.quartic * (n * n);
    return hermitian(std::move(h));
}

// --------------------------------------------------------- Holstein-Primakoff

namespace {

SparseMatrix hp_lowering_factor(const SpaceSpec& s) {
    const double two_j = s.n_qubits;
    std::vector<Eigen::Triplet<cplx>> t;
    for (int m = 1; m < s.hp_cutoff; ++m) {
        const double root = std::sqrt(std::max(0.0, two_j - (m - 1)));
        t.emplace_back(m - 1, m, root * std::sqrt(static_cast<double>(m)));
    }
    SparseMatrix jm(s.hp_cutoff, s.hp_cutoff);
    jm.setFromTriplets(t.begin(), t.end());
    return jm;
}

void require_hp_space(const SpaceSpec& s, const char* who) {
    s.validate();
    if (!s.hp_mode) throw std::invalid_argument(std::string(who) + ": space must be in HP mode");
}

}  // namespace

TruncatedOperator hp_jz(const SpaceSpec& s) {
    require_hp_space(s, "hp_jz");
    return hermitian(hp_number(s) - (0.5 * s.n_qubits) * TruncatedOperator::identity(s));
}

TruncatedOperator hp_jplus(const SpaceSpec& s) {
    require_hp_space(s, "hp_jplus");
    return embed_factor(s, SparseMatrix(hp_lowering_factor(s).adjoint()));
}

TruncatedOperator hp_hamiltonian(const ModelParams& p, const SpaceSpec& s) {
    require_hp_space(s, "hp_hamiltonian");
    if (s.n_qubits != p.n_qubits()) {
        throw std::invalid_argument("hp_hamiltonian: space qubit count does not match parameters");
    }
    if (!p.homogeneous()) {
        throw std::invalid_argument("hp_hamiltonian: collective HP form requires homogeneous weights");
    }
    const double x = p.n_qubits() > 0 ? p.weights().front() : 1.0;
    const double omega_q = x * p.Omega();
    const double lambda_q = x * p.lambda();

    const auto jm = embed_factor(s, hp_lowering_factor(s));
    const auto jp = jm.adjoint();
    auto h = p.omega() * number(s) + omega_q * hp_jz(s) +
             lambda_q * (creation(s) * jm + annihilation(s) * jp) - p.G() * squeeze_pair(s);
    return hermitian(std::move(h));
}

}  // namespace dtc

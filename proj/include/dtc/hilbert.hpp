// hilbert.hpp — Truncated boson/qubit spaces, sparse operators, and pure states
//
// Basis ordering is boson ⊗ qubit_1 ⊗ ... ⊗ qubit_N. A basis index is
// n * factor_dim + q, where q packs the qubit bits with qubit_1 as the most
// significant bit. Qubit levels: |e⟩ = bit 0, |g⟩ = bit 1, so σ_z|e⟩ = +|e⟩.
// In hp_mode the qubit register is replaced by a second truncated boson b.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dtc {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultDimensionBudget = std::size_t{1} << 22;
inline constexpr Index kDenseThreshold = 4096;

// Thrown when a requested space would exceed the configured dimension budget.
class DimensionError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Numerical failures (non-convergence, norm drift, truncation-edge leakage).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SpaceSpec {
    int fock_cutoff{2};
    int n_qubits{0};
    bool hp_mode{false};
    int hp_cutoff{0};
    std::size_t dimension_budget{kDefaultDimensionBudget};

    static SpaceSpec bosonic(int cutoff);
    static SpaceSpec with_qubits(int cutoff, int n_qubits);
    // hp_cutoff < 0 selects the exact symmetric-subspace size n_qubits + 1.
    static SpaceSpec holstein_primakoff(int cutoff, int n_qubits, int hp_cutoff = -1);

    // Dimension of the non-photonic factor: 2^N, or hp_cutoff in hp_mode.
    std::size_t factor_dim() const;
    std::size_t dimension() const;
    void validate() const;

    // Same layout with a different photon cutoff.
    SpaceSpec with_cutoff(int cutoff) const;

    bool operator==(const SpaceSpec& o) const {
        return fock_cutoff == o.fock_cutoff && n_qubits == o.n_qubits && hp_mode == o.hp_mode &&
               hp_cutoff == o.hp_cutoff;
    }
    bool operator!=(const SpaceSpec& o) const { return !(*this == o); }
};

std::string describe(const SpaceSpec& s);

class TruncatedOperator {
public:
    TruncatedOperator(SpaceSpec space, SparseMatrix data, bool hermitian_hint = false);

    static TruncatedOperator zero(const SpaceSpec& space);
    static TruncatedOperator identity(const SpaceSpec& space);

    const SpaceSpec& space() const noexcept { return space_; }
    const SparseMatrix& matrix() const noexcept { return data_; }
    bool hermitian_hint() const noexcept { return hermitian_hint_; }
    Index dimension() const noexcept { return data_.rows(); }

    DenseMatrix dense() const { return DenseMatrix(data_); }
    // Real part as a dense matrix; only meaningful when is_real() holds.
    Eigen::MatrixXd dense_real() const;
    bool is_real(double tol = 0.0) const;
    double hermiticity_error() const;
    double max_abs() const;

    TruncatedOperator adjoint() const;
    Vector apply(const Vector& v) const { return data_ * v; }

    TruncatedOperator& operator+=(const TruncatedOperator& o);
    TruncatedOperator& operator-=(const TruncatedOperator& o);
    TruncatedOperator& operator*=(cplx s);

    friend TruncatedOperator operator+(TruncatedOperator a, const TruncatedOperator& b) { return a += b; }
    friend TruncatedOperator operator-(TruncatedOperator a, const TruncatedOperator& b) { return a -= b; }
    friend TruncatedOperator operator*(TruncatedOperator a, cplx s) { return a *= s; }
    friend TruncatedOperator operator*(cplx s, TruncatedOperator a) { return a *= s; }
    friend TruncatedOperator operator*(double s, TruncatedOperator a) { return a *= cplx(s, 0.0); }
    friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b);

private:
    SpaceSpec space_;
    SparseMatrix data_;
    bool hermitian_hint_{false};
};

TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b);
// Keeps rows and columns of basis states whose photon number is below `levels`.
DenseMatrix restrict_to_fock_levels(const TruncatedOperator& op, int levels);

enum class Gauge { none, largest_real };

class QuantumState {
public:
    // Normalizes the amplitudes; applies the gauge convention if requested.
    QuantumState(SpaceSpec space, Vector amplitudes, Gauge gauge = Gauge::none);

    const SpaceSpec& space() const noexcept { return space_; }
    const Vector& amplitudes() const noexcept { return amps_; }
    Gauge gauge() const noexcept { return gauge_; }
    Index dimension() const noexcept { return amps_.size(); }

    QuantumState gauge_fixed() const;

    cplx expectation(const TruncatedOperator& op) const;
    double expectation_real(const TruncatedOperator& op) const { return expectation(op).real(); }
    double variance(const TruncatedOperator& hermitian_op) const;
    // Total probability carried by photon numbers ≥ cutoff − levels.
    double edge_population(int levels = 1) const;

private:
    SpaceSpec space_;
    Vector amps_;
    Gauge gauge_{Gauge::none};
};

// Rotates v by a global phase so its largest-modulus entry is real positive.
void fix_gauge(Vector& v);

// ---------------------------------------------------------------- builders

// a ⊗ I (or a ⊗ I_b in hp_mode).
TruncatedOperator annihilation(const SpaceSpec& space);
TruncatedOperator creation(const SpaceSpec& space);
TruncatedOperator number(const SpaceSpec& space);
// a², a†², exactly (no intermediate truncation).
TruncatedOperator annihilation_squared(const SpaceSpec& space);
TruncatedOperator creation_squared(const SpaceSpec& space);

enum class Pauli { x, y, z, plus, minus };
Pauli parse_pauli(const std::string& name);

// Pauli or ladder operator on qubit j (0-based), identity elsewhere.
TruncatedOperator qubit_op(const SpaceSpec& space, int j, Pauli which);
// Arbitrary 2x2 matrix (basis e, g) acting on qubit j.
TruncatedOperator qubit_matrix(const SpaceSpec& space, int j, const Eigen::Matrix2cd& m);
// The 2x2 Pauli/ladder matrix in the (e, g) basis.
Eigen::Matrix2cd pauli_matrix(Pauli which);

// Second boson (b) of an hp_mode space.
TruncatedOperator hp_annihilation(const SpaceSpec& space);
TruncatedOperator hp_number(const SpaceSpec& space);

struct Quadratures {
    TruncatedOperator X;
    TruncatedOperator P;
};
// X = (a + a†)/√2, P = i(a† − a)/√2.
Quadratures quadratures(const SpaceSpec& space);

// Exact normal-ordered forms (free of top-level truncation defects):
//   X² = (a² + a†² + 2a†a + 1)/2, P² = (2a†a + 1 − a² − a†²)/2, XP + PX = i(a†² − a²).
TruncatedOperator x_squared(const SpaceSpec& space);
TruncatedOperator p_squared(const SpaceSpec& space);
TruncatedOperator xp_symmetric(const SpaceSpec& space);

// Z₂ parity exp(iπ(a†a + Σ σ⁺σ⁻)) (or exp(iπ(a†a + b†b))); diagonal ±1.
TruncatedOperator parity(const SpaceSpec& space);
// a†a + Σ σ⁺σ⁻ (or a†a + b†b).
TruncatedOperator excitation_number(const SpaceSpec& space);
// Parity eigenvalue (±1) of each basis state.
std::vector<int> parity_signs(const SpaceSpec& space);

// Embeds a photon-space matrix as M ⊗ I.
TruncatedOperator embed_boson(const SpaceSpec& space, const SparseMatrix& boson);
// Embeds a factor-space matrix as I ⊗ M.
TruncatedOperator embed_factor(const SpaceSpec& space, const SparseMatrix& factor);

// Kronecker product and its inverse for product operators A ⊗ B.
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);
std::pair<DenseMatrix, DenseMatrix> kron_split(const DenseMatrix& m, Index dim_a, Index dim_b);

// ------------------------------------------------------------------ states

QuantumState fock_state(const SpaceSpec& space, int n);
// Normalized |ξ⟩ ⊗ |g⟩^⊗N (or ⊗ |0⟩_b). Requires |ξ|² ≤ cutoff/4.
QuantumState coherent_state(const SpaceSpec& space, cplx xi);
// Index of the all-ground qubit configuration within the factor space.
std::size_t ground_factor_index(const SpaceSpec& space);

cplx overlap(const QuantumState& u, const QuantumState& v);
// 1 − |⟨u|v⟩| evaluated as ‖u − e^{iφ}v‖²/2, free of cancellation.
double infidelity(const Vector& u, const Vector& v);

}  // namespace dtc

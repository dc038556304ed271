// hilbert.cpp — Truncated spaces, operator builders, and state utilities

#include "dtc/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace dtc {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseMatrix from_triplets(Index dim, const std::vector<Triplet>& t) {
    SparseMatrix m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

SparseMatrix boson_ladder(int cutoff, bool raise) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(cutoff));
    for (int n = 1; n < cutoff; ++n) {
        const double amp = std::sqrt(static_cast<double>(n));
        if (raise) {
            t.emplace_back(n, n - 1, amp);
        } else {
            t.emplace_back(n - 1, n, amp);
        }
    }
    return from_triplets(cutoff, t);
}

SparseMatrix boson_ladder_squared(int cutoff, bool raise) {
    std::vector<Triplet> t;
    for (int n = 2; n < cutoff; ++n) {
        const double amp = std::sqrt(static_cast<double>(n) * (n - 1));
        if (raise) {
            t.emplace_back(n, n - 2, amp);
        } else {
            t.emplace_back(n - 2, n, amp);
        }
    }
    return from_triplets(cutoff, t);
}

SparseMatrix boson_diag(int cutoff, double (*f)(int)) {
    std::vector<Triplet> t;
    for (int n = 0; n < cutoff; ++n) {
        const double v = f(n);
        if (v != 0.0) t.emplace_back(n, n, v);
    }
    return from_triplets(cutoff, t);
}

// 2x2 matrix element ⟨out|σ|in⟩ in the (e, g) = (0, 1) basis.
cplx pauli_element(Pauli which, int out, int in) {
    switch (which) {
        case Pauli::x: return out != in ? cplx(1.0) : cplx(0.0);
        case Pauli::y:
            if (out == 0 && in == 1) return {0.0, -1.0};
            if (out == 1 && in == 0) return {0.0, 1.0};
            return 0.0;
        case Pauli::z: return out == in ? cplx(in == 0 ? 1.0 : -1.0) : cplx(0.0);
        case Pauli::plus: return (out == 0 && in == 1) ? cplx(1.0) : cplx(0.0);
        case Pauli::minus: return (out == 1 && in == 0) ? cplx(1.0) : cplx(0.0);
    }
    return 0.0;
}

}  // namespace

// ---------------------------------------------------------------- SpaceSpec

SpaceSpec SpaceSpec::bosonic(int cutoff) {
    SpaceSpec s;
    s.fock_cutoff = cutoff;
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::with_qubits(int cutoff, int n_qubits) {
    SpaceSpec s;
    s.fock_cutoff = cutoff;
    s.n_qubits = n_qubits;
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::holstein_primakoff(int cutoff, int n_qubits, int hp_cutoff) {
    SpaceSpec s;
    s.fock_cutoff = cutoff;
    s.n_qubits = n_qubits;
    s.hp_mode = true;
    s.hp_cutoff = hp_cutoff < 0 ? n_qubits + 1 : hp_cutoff;
    s.validate();
    return s;
}

std::size_t SpaceSpec::factor_dim() const {
    if (hp_mode) return static_cast<std::size_t>(hp_cutoff);
    return std::size_t{1} << n_qubits;
}

std::size_t SpaceSpec::dimension() const {
    return static_cast<std::size_t>(fock_cutoff) * factor_dim();
}

void SpaceSpec::validate() const {
    if (fock_cutoff < 2) {
        throw std::invalid_argument("SpaceSpec: fock_cutoff must be >= 2");
    }
    if (n_qubits < 0) {
        throw std::invalid_argument("SpaceSpec: n_qubits must be >= 0");
    }
    if (hp_mode) {
        if (hp_cutoff < 1 || hp_cutoff > n_qubits + 1) {
            throw std::invalid_argument("SpaceSpec: hp_cutoff must lie in [1, n_qubits + 1]");
        }
    } else if (n_qubits > 40) {
        throw DimensionError("SpaceSpec: too many qubits for an explicit register");
    }
    const double dim = static_cast<double>(fock_cutoff) * static_cast<double>(factor_dim());
    if (dim > static_cast<double>(dimension_budget)) {
        std::ostringstream os;
        os << "SpaceSpec: dimension " << dim << " exceeds budget " << dimension_budget;
        throw DimensionError(os.str());
    }
}

SpaceSpec SpaceSpec::with_cutoff(int cutoff) const {
    SpaceSpec s = *this;
    s.fock_cutoff = cutoff;
    s.validate();
    return s;
}

std::string describe(const SpaceSpec& s) {
    std::ostringstream os;
    os << "Fock(" << s.fock_cutoff << ")";
    if (s.hp_mode) {
        os << " x HP(" << s.hp_cutoff << ", N=" << s.n_qubits << ")";
    } else if (s.n_qubits > 0) {
        os << " x qubit^" << s.n_qubits;
    }
    return os.str();
}

// -------------------------------------------------------- TruncatedOperator

TruncatedOperator::TruncatedOperator(SpaceSpec space, SparseMatrix data, bool hermitian_hint)
    : space_(std::move(space)), data_(std::move(data)), hermitian_hint_(hermitian_hint) {
    const auto dim = static_cast<Index>(space_.dimension());
    if (data_.rows() != data_.cols()) {
        throw std::invalid_argument("TruncatedOperator: matrix must be square");
    }
    if (data_.rows() != dim) {
        throw std::invalid_argument("TruncatedOperator: matrix dimension does not match space");
    }
    data_.makeCompressed();
#ifndef NDEBUG
    if (hermitian_hint_ && hermiticity_error() >= 1e-12) {
        throw std::invalid_argument("TruncatedOperator: hermitian_hint set on a non-Hermitian matrix");
    }
#endif
}

TruncatedOperator TruncatedOperator::zero(const SpaceSpec& space) {
    const auto dim = static_cast<Index>(space.dimension());
    return {space, SparseMatrix(dim, dim), true};
}

TruncatedOperator TruncatedOperator::identity(const SpaceSpec& space) {
    const auto dim = static_cast<Index>(space.dimension());
    SparseMatrix id(dim, dim);
    id.setIdentity();
    return {space, std::move(id), true};
}

Eigen::MatrixXd TruncatedOperator::dense_real() const {
    return DenseMatrix(data_).real();
}

bool TruncatedOperator::is_real(double tol) const {
    for (Index k = 0; k < data_.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(data_, k); it; ++it) {
            if (std::abs(it.value().imag()) > tol) return false;
        }
    }
    return true;
}

double TruncatedOperator::hermiticity_error() const {
    const SparseMatrix diff = data_ - SparseMatrix(data_.adjoint());
    double err = 0.0;
    for (Index k = 0; k < diff.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
            err = std::max(err, std::abs(it.value()));
        }
    }
    return err;
}

double TruncatedOperator::max_abs() const {
    double m = 0.0;
    for (Index k = 0; k < data_.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(data_, k); it; ++it) {
            m = std::max(m, std::abs(it.value()));
        }
    }
    return m;
}

TruncatedOperator TruncatedOperator::adjoint() const {
    return {space_, SparseMatrix(data_.adjoint()), hermitian_hint_};
}

TruncatedOperator& TruncatedOperator::operator+=(const TruncatedOperator& o) {
    if (o.space_ != space_) throw std::invalid_argument("TruncatedOperator: space mismatch in +");
    data_ = data_ + o.data_;
    hermitian_hint_ = hermitian_hint_ && o.hermitian_hint_;
    return *this;
}

TruncatedOperator& TruncatedOperator::operator-=(const TruncatedOperator& o) {
    if (o.space_ != space_) throw std::invalid_argument("TruncatedOperator: space mismatch in -");
    data_ = data_ - o.data_;
    hermitian_hint_ = hermitian_hint_ && o.hermitian_hint_;
    return *this;
}

TruncatedOperator& TruncatedOperator::operator*=(cplx s) {
    data_ *= s;
    hermitian_hint_ = hermitian_hint_ && s.imag() == 0.0;
    return *this;
}

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
    if (a.space() != b.space()) {
        throw std::invalid_argument("TruncatedOperator: space mismatch in product");
    }
    SparseMatrix p = (a.matrix() * b.matrix()).pruned();
    return {a.space(), std::move(p), false};
}

TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) {
    return a * b - b * a;
}

DenseMatrix restrict_to_fock_levels(const TruncatedOperator& op, int levels) {
    const auto f = static_cast<Index>(op.space().factor_dim());
    const Index keep = std::min<Index>(levels, op.space().fock_cutoff) * f;
    return DenseMatrix(op.matrix()).topLeftCorner(keep, keep);
}

// ------------------------------------------------------------- QuantumState

void fix_gauge(Vector& v) {
    if (v.size() == 0) return;
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs <= 0.0) return;
    const cplx phase = std::conj(v[best]) / best_abs;
    v *= phase;
    v[best] = cplx(best_abs, 0.0);
}

QuantumState::QuantumState(SpaceSpec space, Vector amplitudes, Gauge gauge)
    : space_(std::move(space)), amps_(std::move(amplitudes)), gauge_(gauge) {
    if (amps_.size() != static_cast<Index>(space_.dimension())) {
        throw std::invalid_argument("QuantumState: amplitude count does not match space");
    }
    const double nrm = amps_.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw std::invalid_argument("QuantumState: amplitudes must have finite nonzero norm");
    }
    amps_ /= nrm;
    if (gauge_ == Gauge::largest_real) fix_gauge(amps_);
}

QuantumState QuantumState::gauge_fixed() const {
    return {space_, amps_, Gauge::largest_real};
}

cplx QuantumState::expectation(const TruncatedOperator& op) const {
    if (op.space() != space_) throw std::invalid_argument("expectation: space mismatch");
    return amps_.dot(op.matrix() * amps_);
}

double QuantumState::variance(const TruncatedOperator& op) const {
    if (op.space() != space_) throw std::invalid_argument("variance: space mismatch");
    const Vector w = op.matrix() * amps_;
    const double mean = amps_.dot(w).real();
    return std::max(0.0, w.squaredNorm() - mean * mean);
}

double QuantumState::edge_population(int levels) const {
    const auto f = static_cast<Index>(space_.factor_dim());
    const Index start = std::max(0, space_.fock_cutoff - levels) * f;
    return amps_.tail(amps_.size() - start).squaredNorm();
}

// ----------------------------------------------------------------- builders

TruncatedOperator embed_boson(const SpaceSpec& space, const SparseMatrix& boson) {
    space.validate();
    if (boson.rows() != space.fock_cutoff || boson.cols() != space.fock_cutoff) {
        throw std::invalid_argument("embed_boson: matrix must be fock_cutoff x fock_cutoff");
    }
    const auto f = static_cast<Index>(space.factor_dim());
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(boson.nonZeros() * f));
    for (Index k = 0; k < boson.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(boson, k); it; ++it) {
            for (Index q = 0; q < f; ++q) t.emplace_back(it.row() * f + q, it.col() * f + q, it.value());
        }
    }
    return {space, from_triplets(static_cast<Index>(space.dimension()), t)};
}

TruncatedOperator embed_factor(const SpaceSpec& space, const SparseMatrix& factor) {
    space.validate();
    const auto f = static_cast<Index>(space.factor_dim());
    if (factor.rows() != f || factor.cols() != f) {
        throw std::invalid_argument("embed_factor: matrix must be factor_dim x factor_dim");
    }
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(factor.nonZeros() * space.fock_cutoff));
    for (Index n = 0; n < space.fock_cutoff; ++n) {
        for (Index k = 0; k < factor.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(factor, k); it; ++it) {
                t.emplace_back(n * f + it.row(), n * f + it.col(), it.value());
            }
        }
    }
    return {space, from_triplets(static_cast<Index>(space.dimension()), t)};
}

TruncatedOperator annihilation(const SpaceSpec& space) {
    return embed_boson(space, boson_ladder(space.fock_cutoff, false));
}

TruncatedOperator creation(const SpaceSpec& space) {
    return embed_boson(space, boson_ladder(space.fock_cutoff, true));
}

TruncatedOperator number(const SpaceSpec& space) {
    auto op = embed_boson(space, boson_diag(space.fock_cutoff, [](int n) { return double(n); }));
    return {space, op.matrix(), true};
}

TruncatedOperator annihilation_squared(const SpaceSpec& space) {
    return embed_boson(space, boson_ladder_squared(space.fock_cutoff, false));
}

TruncatedOperator creation_squared(const SpaceSpec& space) {
    return embed_boson(space, boson_ladder_squared(space.fock_cutoff, true));
}

Pauli parse_pauli(const std::string& name) {
    if (name == "x") return Pauli::x;
    if (name == "y") return Pauli::y;
    if (name == "z") return Pauli::z;
    if (name == "+" || name == "plus") return Pauli::plus;
    if (name == "-" || name == "minus") return Pauli::minus;
    throw std::invalid_argument("parse_pauli: unknown component '" + name + "'");
}

Eigen::Matrix2cd pauli_matrix(Pauli which) {
    Eigen::Matrix2cd m;
    for (int out = 0; out < 2; ++out) {
        for (int in = 0; in < 2; ++in) m(out, in) = pauli_element(which, out, in);
    }
    return m;
}

TruncatedOperator qubit_matrix(const SpaceSpec& space, int j, const Eigen::Matrix2cd& m) {
    space.validate();
    if (space.hp_mode) {
        throw std::invalid_argument("qubit_op: space is in Holstein-Primakoff mode");
    }
    if (j < 0 || j >= space.n_qubits) {
        throw std::out_of_range("qubit_op: qubit index out of range");
    }
    const auto f = static_cast<Index>(space.factor_dim());
    const int shift = space.n_qubits - 1 - j;
    std::vector<Triplet> t;
    for (Index q = 0; q < f; ++q) {
        const int in = static_cast<int>((q >> shift) & 1);
        for (int out = 0; out < 2; ++out) {
            const cplx el = m(out, in);
            if (el == cplx(0.0)) continue;
            const Index q_out = (q & ~(Index{1} << shift)) | (Index{out} << shift);
            t.emplace_back(q_out, q, el);
        }
    }
    SparseMatrix factor(f, f);
    factor.setFromTriplets(t.begin(), t.end());
    return embed_factor(space, factor);
}

TruncatedOperator qubit_op(const SpaceSpec& space, int j, Pauli which) {
    auto op = qubit_matrix(space, j, pauli_matrix(which));
    const bool herm = which == Pauli::x || which == Pauli::y || which == Pauli::z;
    return {space, op.matrix(), herm};
}

TruncatedOperator hp_annihilation(const SpaceSpec& space) {
    if (!space.hp_mode) throw std::invalid_argument("hp_annihilation: space is not in HP mode");
    return embed_factor(space, boson_ladder(space.hp_cutoff, false));
}

TruncatedOperator hp_number(const SpaceSpec& space) {
    if (!space.hp_mode) throw std::invalid_argument("hp_number: space is not in HP mode");
    auto op = embed_factor(space, boson_diag(space.hp_cutoff, [](int n) { return double(n); }));
    return {space, op.matrix(), true};
}

Quadratures quadratures(const SpaceSpec& space) {
    const auto a = annihilation(space);
    const auto ad = creation(space);
    const double s = 1.0 / std::sqrt(2.0);
    TruncatedOperator x{space, ((a + ad) * s).matrix(), true};
    TruncatedOperator p{space, ((ad - a) * cplx(0.0, s)).matrix(), true};
    return {std::move(x), std::move(p)};
}

TruncatedOperator x_squared(const SpaceSpec& space) {
    auto op = (annihilation_squared(space) + creation_squared(space) + 2.0 * number(space) +
               TruncatedOperator::identity(space)) *
              cplx(0.5);
    return {space, op.matrix(), true};
}

TruncatedOperator p_squared(const SpaceSpec& space) {
    auto op = (2.0 * number(space) + TruncatedOperator::identity(space) - annihilation_squared(space) -
               creation_squared(space)) *
              cplx(0.5);
    return {space, op.matrix(), true};
}

TruncatedOperator xp_symmetric(const SpaceSpec& space) {
    auto op = (creation_squared(space) - annihilation_squared(space)) * cplx(0.0, 1.0);
    return {space, op.matrix(), true};
}

std::vector<int> parity_signs(const SpaceSpec& space) {
    space.validate();
    const std::size_t f = space.factor_dim();
    std::vector<int> signs(space.dimension());
    for (std::size_t n = 0; n < static_cast<std::size_t>(space.fock_cutoff); ++n) {
        for (std::size_t q = 0; q < f; ++q) {
            std::size_t excitations = n;
            if (space.hp_mode) {
                excitations += q;
            } else {
                excitations += static_cast<std::size_t>(space.n_qubits) -
                               static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(q)));
            }
            signs[n * f + q] = excitations % 2 == 0 ? 1 : -1;
        }
    }
    return signs;
}

TruncatedOperator parity(const SpaceSpec& space) {
    const auto signs = parity_signs(space);
    std::vector<Triplet> t;
    t.reserve(signs.size());
    for (std::size_t i = 0; i < signs.size(); ++i) {
        t.emplace_back(static_cast<Index>(i), static_cast<Index>(i), double(signs[i]));
    }
    return {space, from_triplets(static_cast<Index>(signs.size()), t), true};
}

TruncatedOperator excitation_number(const SpaceSpec& space) {
    space.validate();
    const std::size_t f = space.factor_dim();
    std::vector<Triplet> t;
    for (std::size_t n = 0; n < static_cast<std::size_t>(space.fock_cutoff); ++n) {
        for (std::size_t q = 0; q < f; ++q) {
            double exc = static_cast<double>(n);
            if (space.hp_mode) {
                exc += static_cast<double>(q);
            } else {
                exc += space.n_qubits - std::popcount(static_cast<std::uint64_t>(q));
            }
            if (exc != 0.0) t.emplace_back(static_cast<Index>(n * f + q), static_cast<Index>(n * f + q), exc);
        }
    }
    return {space, from_triplets(static_cast<Index>(space.dimension()), t), true};
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

std::pair<DenseMatrix, DenseMatrix> kron_split(const DenseMatrix& m, Index dim_a, Index dim_b) {
    if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
        throw std::invalid_argument("kron_split: dimensions do not factor the matrix");
    }
    Index pi = 0, pj = 0;
    m.cwiseAbs().maxCoeff(&pi, &pj);
    const cplx pivot = m(pi, pj);
    if (pivot == cplx(0.0)) return {DenseMatrix::Zero(dim_a, dim_a), DenseMatrix::Zero(dim_b, dim_b)};
    const Index ia = pi / dim_b, ib = pi % dim_b, ja = pj / dim_b, jb = pj % dim_b;
    DenseMatrix a(dim_a, dim_a), b(dim_b, dim_b);
    for (Index k = 0; k < dim_a; ++k) {
        for (Index l = 0; l < dim_a; ++l) a(k, l) = m(k * dim_b + ib, l * dim_b + jb);
    }
    b = m.block(ia * dim_b, ja * dim_b, dim_b, dim_b) / pivot;
    return {a, b};
}

// ------------------------------------------------------------------- states

std::size_t ground_factor_index(const SpaceSpec& space) {
    if (space.hp_mode) return 0;
    return space.factor_dim() - 1;
}

QuantumState fock_state(const SpaceSpec& space, int n) {
    space.validate();
    if (n < 0 || n >= space.fock_cutoff) throw std::out_of_range("fock_state: level outside cutoff");
    Vector v = Vector::Zero(static_cast<Index>(space.dimension()));
    v[static_cast<Index>(static_cast<std::size_t>(n) * space.factor_dim() + ground_factor_index(space))] = 1.0;
    return {space, std::move(v)};
}

QuantumState coherent_state(const SpaceSpec& space, cplx xi) {
    space.validate();
    const double n_mean = std::norm(xi);
    if (n_mean > space.fock_cutoff / 4.0) {
        std::ostringstream os;
        os << "coherent_state: |xi|^2 = " << n_mean << " exceeds cutoff/4 = " << space.fock_cutoff / 4.0
           << "; raise fock_cutoff to at least " << static_cast<int>(std::ceil(4.0 * n_mean));
        throw std::invalid_argument(os.str());
    }
    const std::size_t f = space.factor_dim();
    const std::size_t g = ground_factor_index(space);
    Vector v = Vector::Zero(static_cast<Index>(space.dimension()));
    cplx c = std::exp(-0.5 * n_mean);
    v[static_cast<Index>(g)] = c;
    for (int n = 1; n < space.fock_cutoff; ++n) {
        c *= xi / std::sqrt(static_cast<double>(n));
        v[static_cast<Index>(static_cast<std::size_t>(n) * f + g)] = c;
    }
    return {space, std::move(v)};
}

cplx overlap(const QuantumState& u, const QuantumState& v) {
    if (u.space() != v.space()) throw std::invalid_argument("overlap: space mismatch");
    return u.amplitudes().dot(v.amplitudes());
}

double infidelity(const Vector& u, const Vector& v) {
    const cplx ov = u.dot(v);
    const double mag = std::abs(ov);
    if (mag == 0.0) return 1.0;
    const cplx phase = std::conj(ov) / mag;
    return 0.5 * (u - phase * v).squaredNorm();
}

}  // namespace dtc

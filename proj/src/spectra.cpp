// spectra.cpp — Dense and restarted-Lanczos eigensolvers with parity sectors

#include "dtc/spectra.hpp"

#include "dtc/analytic.hpp"
#include "dtc/truncation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dtc {

namespace {

struct RawEigen {
    Eigen::VectorXd values;
    DenseMatrix vectors;  // columns
    std::vector<double> residuals;
    SolverKind solver{SolverKind::dense};
    double norm{0.0};
    int iterations{0};
};

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Vector seeded_start(Index n, std::uint64_t seed) {
    Vector v(n);
    std::uint64_t s = seed;
    for (Index i = 0; i < n; ++i) {
        const double re = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53 - 0.5;
        const double im = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53 - 0.5;
        v[i] = cplx(re, im);
    }
    return v.normalized();
}

bool sparse_is_real(const SparseMatrix& m) {
    for (Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it)
            if (it.value().imag() != 0.0) return false;
    return true;
}

std::vector<double> residual_norms(const SparseMatrix& H, const Eigen::VectorXd& values, const DenseMatrix& vecs) {
    std::vector<double> out(static_cast<std::size_t>(values.size()));
    for (Index i = 0; i < values.size(); ++i) {
        const Vector v = vecs.col(i);
        out[static_cast<std::size_t>(i)] = (H * v - values[i] * v).norm();
    }
    return out;
}

RawEigen solve_dense(const SparseMatrix& H, int k) {
    RawEigen r;
    r.solver = SolverKind::dense;
    if (sparse_is_real(H)) {
        const Eigen::MatrixXd dense = DenseMatrix(H).real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
        if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
        r.values = es.eigenvalues().head(k);
        r.vectors = es.eigenvectors().leftCols(k).cast<cplx>();
        r.norm = es.eigenvalues().cwiseAbs().maxCoeff();
    } else {
        const DenseMatrix dense(H);
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(dense);
        if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
        r.values = es.eigenvalues().head(k);
        r.vectors = es.eigenvectors().leftCols(k);
        r.norm = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    r.residuals = residual_norms(H, r.values, r.vectors);
    return r;
}

// Orthogonalizes w against the first `cols` columns of V twice (full reorthogonalization).
void orthogonalize(const DenseMatrix& V, Index cols, Vector& w) {
    for (int pass = 0; pass < 2; ++pass) {
        if (cols == 0) return;
        const Vector c = V.leftCols(cols).adjoint() * w;
        w.noalias() -= V.leftCols(cols) * c;
    }
}

// Thick-restart Lanczos with full reorthogonalization and explicit Rayleigh-Ritz.
RawEigen solve_lanczos(const SparseMatrix& H, int k, const EigenOptions& opts) {
    const Index n = H.rows();
    const Index m = std::min<Index>(n, opts.krylov_dim > 0 ? opts.krylov_dim : std::max(2 * k + 20, 40));
    if (m <= k) throw std::invalid_argument("Krylov dimension must exceed the number of requested eigenpairs");

    DenseMatrix V(n, m), W(n, m);
    Index cols = 0;
    Vector next = seeded_start(n, opts.seed);
    int matvecs = 0;
    double norm = 0.0;
    RawEigen r;
    r.solver = SolverKind::iterative;
    std::vector<double> last_res;

    while (true) {
        // Expand the basis to m columns.
        while (cols < m) {
            orthogonalize(V, cols, next);
            double nn = next.norm();
            if (nn < 1e-12) {
                // Invariant subspace reached; continue with a fresh random direction.
                next = seeded_start(n, opts.seed + 7919ULL * static_cast<std::uint64_t>(matvecs + cols + 1));
                orthogonalize(V, cols, next);
                nn = next.norm();
                if (nn < 1e-12) break;
            }
            V.col(cols) = next / nn;
            W.col(cols) = H * V.col(cols);
            ++matvecs;
            next = W.col(cols);
            ++cols;
        }

        const DenseMatrix T = V.leftCols(cols).adjoint() * W.leftCols(cols);
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (T + T.adjoint()));
        if (es.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz eigensolve failed");
        const Eigen::VectorXd theta = es.eigenvalues();
        norm = std::max(norm, theta.cwiseAbs().maxCoeff());
        const Index kk = std::min<Index>(k, cols);

        const DenseMatrix S = es.eigenvectors();
        const DenseMatrix X = V.leftCols(cols) * S.leftCols(kk);
        const DenseMatrix HX = W.leftCols(cols) * S.leftCols(kk);
        last_res.assign(static_cast<std::size_t>(kk), 0.0);
        Index first_unconverged = -1;
        const double threshold = opts.tol * std::max(norm, 1e-300);
        for (Index i = 0; i < kk; ++i) {
            last_res[static_cast<std::size_t>(i)] = (HX.col(i) - theta[i] * X.col(i)).norm();
            if (first_unconverged < 0 && last_res[static_cast<std::size_t>(i)] > threshold) first_unconverged = i;
        }

        if (first_unconverged < 0 || cols == n) {
            r.values = theta.head(kk);
            r.vectors = X;
            break;
        }
        if (matvecs >= opts.max_iterations) {
            std::ostringstream msg;
            msg << "Lanczos did not converge after " << matvecs << " matrix-vector products; residuals:";
            for (double x : last_res) msg << ' ' << x;
            msg << " (threshold " << threshold << ")";
            throw NumericalError(msg.str());
        }

        // Thick restart: keep the lowest Ritz vectors and continue along the residual direction.
        const Index keep = std::min<Index>(cols - 1, kk + (m - kk) / 2);
        const DenseMatrix Sk = S.leftCols(keep);
        next = HX.col(first_unconverged) - theta[first_unconverged] * X.col(first_unconverged);
        DenseMatrix Vk = V.leftCols(cols) * Sk;
        DenseMatrix Wk = W.leftCols(cols) * Sk;
        V.leftCols(keep) = Vk;
        W.leftCols(keep) = Wk;
        cols = keep;
    }

    r.norm = norm;
    r.iterations = matvecs;
    r.residuals = residual_norms(H, r.values, r.vectors);
    return r;
}

RawEigen solve_raw(const SparseMatrix& H, int k, const EigenOptions& opts) {
    const Index n = H.rows();
    if (k < 1 || k > n) throw std::invalid_argument("requested eigenpair count out of range");
    SolverKind kind = opts.solver;
    if (kind == SolverKind::automatic) kind = n <= opts.dense_threshold ? SolverKind::dense : SolverKind::iterative;
    if (kind == SolverKind::iterative && n <= std::max(2 * k + 20, 40)) kind = SolverKind::dense;
    return kind == SolverKind::dense ? solve_dense(H, k) : solve_lanczos(H, k, opts);
}

EigenResult package(const SpaceSpec& space, const RawEigen& raw, const std::vector<Index>* embed) {
    EigenResult out;
    out.solver = raw.solver;
    out.norm_estimate = raw.norm;
    out.iterations = raw.iterations;
    out.residuals = raw.residuals;
    const Index dim = static_cast<Index>(space.dimension());
    for (Index i = 0; i < raw.values.size(); ++i) {
        out.eigenvalues.push_back(raw.values[i]);
        Vector v;
        if (embed) {
            v = Vector::Zero(dim);
            for (std::size_t j = 0; j < embed->size(); ++j) v[(*embed)[j]] = raw.vectors(static_cast<Index>(j), i);
        } else {
            v = raw.vectors.col(i);
        }
        out.eigenstates.emplace_back(space, std::move(v), Gauge::largest_real);
    }
    return out;
}

}  // namespace

std::string to_string(SolverKind k) {
    switch (k) {
        case SolverKind::automatic: return "automatic";
        case SolverKind::dense: return "dense";
        case SolverKind::iterative: return "iterative";
    }
    return "unknown";
}

EigenResult eig_lowest(const TruncatedOperator& H, int k, const EigenOptions& opts) {
    return package(H.space(), solve_raw(H.matrix(), k, opts), nullptr);
}

double parity_leakage(const TruncatedOperator& H) {
    const auto signs = parity_signs(H.space());
    const SparseMatrix& m = H.matrix();
    double worst = 0.0;
    for (Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it)
            if (signs[static_cast<std::size_t>(it.row())] != signs[static_cast<std::size_t>(it.col())])
                worst = std::max(worst, std::abs(it.value()));
    return worst;
}

EigenResult eig_lowest_sector(const TruncatedOperator& H, int sector, int k, const EigenOptions& opts) {
    if (sector != 1 && sector != -1) throw std::invalid_argument("parity sector must be +1 or -1");
    const double leak = parity_leakage(H);
    if (leak > 1e-12 * std::max(1.0, H.max_abs())) {
        std::ostringstream msg;
        msg << "Hamiltonian does not commute with parity (largest cross-sector element " << leak << ")";
        throw SymmetryError(msg.str());
    }
    const auto signs = parity_signs(H.space());
    std::vector<Index> idx;
    std::vector<Index> pos(signs.size(), -1);
    for (std::size_t i = 0; i < signs.size(); ++i)
        if (signs[i] == sector) {
            pos[i] = static_cast<Index>(idx.size());
            idx.push_back(static_cast<Index>(i));
        }
    const Index ns = static_cast<Index>(idx.size());
    SparseMatrix sub(ns, ns);
    std::vector<Eigen::Triplet<cplx>> trips;
    const SparseMatrix& m = H.matrix();
    for (Index a = 0; a < ns; ++a)
        for (SparseMatrix::InnerIterator it(m, idx[static_cast<std::size_t>(a)]); it; ++it) {
            const Index b = pos[static_cast<std::size_t>(it.col())];
            if (b >= 0) trips.emplace_back(a, b, it.value());
        }
    sub.setFromTriplets(trips.begin(), trips.end());
    return package(H.space(), solve_raw(sub, k, opts), &idx);
}

QuantumState parity_resolved_ground(const TruncatedOperator& H, int sector, const EigenOptions& opts) {
    return eig_lowest_sector(H, sector, 1, opts).eigenstates.front();
}

std::string to_string(SpectralObservable o) {
    return o == SpectralObservable::ground_energy ? "ground_energy" : "gap";
}

SpectralObservable parse_spectral_observable(const std::string& name) {
    if (name == "ground_energy") return SpectralObservable::ground_energy;
    if (name == "gap") return SpectralObservable::gap;
    throw std::invalid_argument("unknown spectral observable '" + name + "' (expected ground_energy or gap)");
}

double full_model_observable(const ModelParams& p, SpectralObservable observable, int fock_cutoff,
                             const EigenOptions& opts) {
    const SpaceSpec s = SpaceSpec::with_qubits(fock_cutoff, p.n_qubits());
    const TruncatedOperator H = full_hamiltonian(p, s);
    if (observable == SpectralObservable::ground_energy) return eig_lowest_sector(H, +1, 1, opts).eigenvalues[0];
    if (p.g() < 1.0) return eig_lowest(H, 2, opts).gap(1);
    return eig_lowest_sector(H, +1, 2, opts).gap(1);
}

std::vector<SpectralRow> spectral_agreement(const ModelParams& p, std::span<const double> betas,
                                            SpectralObservable observable, const SpectralOptions& opts) {
    std::vector<SpectralRow> rows;
    for (double beta : betas) {
        if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
        const ModelParams q = ModelParams::from_g(p.g(), beta * p.omega(), p.G(), p.weights(), p.omega());
        const PhaseQuantities pq = phase_quantities(q);
        if (pq.critical()) throw PhaseDomainError("spectral agreement is undefined at g = 1");
        const double eff = observable == SpectralObservable::ground_energy ? pq.E_ground : pq.epsilon;
        const auto check = check_truncation(
            [&](int cutoff) { return full_model_observable(q, observable, cutoff, opts.eig); }, opts.fock_cutoff,
            opts.truncation_tol);
        rows.push_back({beta, check.value, eff, std::abs(check.value - eff), check.warning});
    }
    return rows;
}

}  // namespace dtc

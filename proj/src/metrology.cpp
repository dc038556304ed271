// metrology.cpp — Gaussian and Fock sensing dynamics, QFI engines, homodyne sampling

#include "dtc/metrology.hpp"

#include "dtc/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dtc {

// ------------------------------------------------------------------ Gaussian

GaussianState GaussianState::coherent(cplx xi) {
    GaussianState s;
    s.mean = Eigen::Vector2d(std::sqrt(2.0) * xi.real(), std::sqrt(2.0) * xi.imag());
    return s;
}

namespace {

// cos(νt), sin(νt)/ν, (1 − cos νt)/ν² for ν² of either sign, stable as ν² → 0.
struct FlowCoefficients {
    double c, s1, s2;
};

FlowCoefficients flow_coefficients(double nu2, double t) {
    const double z = nu2 * t * t;
    if (std::abs(z) < 1e-6) {
        return {1.0 - z / 2.0 + z * z / 24.0, t * (1.0 - z / 6.0 + z * z / 120.0),
                t * t * (0.5 - z / 24.0 + z * z / 720.0)};
    }
    if (nu2 > 0.0) {
        const double nu = std::sqrt(nu2);
        return {std::cos(nu * t), std::sin(nu * t) / nu, (1.0 - std::cos(nu * t)) / nu2};
    }
    const double mu = std::sqrt(-nu2);
    return {std::cosh(mu * t), std::sinh(mu * t) / mu, (1.0 - std::cosh(mu * t)) / nu2};
}

}  // namespace

SymplecticFlow quadratic_flow(const QuadraticModel& m, double t) {
    Eigen::Matrix2d M;
    M << 2.0 * m.cXP, 2.0 * m.cPP, -2.0 * m.cXX, -2.0 * m.cXP;
    const Eigen::Vector2d b(m.cP, -m.cX);
    // M² = −ν² I with ν² = 4(cXX cPP − cXP²).
    const double nu2 = 4.0 * (m.cXX * m.cPP - m.cXP * m.cXP);
    const auto k = flow_coefficients(nu2, t);
    SymplecticFlow f;
    f.S = k.c * Eigen::Matrix2d::Identity() + k.s1 * M;
    f.shift = (k.s1 * Eigen::Matrix2d::Identity() + k.s2 * M) * b;
    return f;
}

GaussianState evolve_gaussian(const QuadraticModel& model, const GaussianState& init, double t) {
    const auto f = quadratic_flow(model, t);
    GaussianState out;
    out.mean = f.S * init.mean + f.shift;
    out.cov = f.S * init.cov * f.S.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    return out;
}

double gaussian_qfi(const GaussianState& minus, const GaussianState& centre, const GaussianState& plus, double h) {
    const Eigen::Matrix2d dcov = (plus.cov - minus.cov) / (2.0 * h);
    const Eigen::Vector2d dmean = (plus.mean - minus.mean) / (2.0 * h);
    const Eigen::Matrix2d inv = centre.cov.inverse();
    const Eigen::Matrix2d q = inv * dcov;
    return 0.25 * (q * q).trace() + dmean.dot(inv * dmean);
}

// ---------------------------------------------------------------------- Fock

int edge_levels(int cutoff) { return std::max(2, cutoff / 16); }

namespace {

void check_evolved(const Vector& v, const SpaceSpec& space, const EvolutionOptions& opts) {
    const double drift = std::abs(v.norm() - 1.0);
    if (drift > opts.norm_tol) {
        std::ostringstream msg;
        msg << "time evolution norm drift " << drift << " exceeds " << opts.norm_tol;
        throw NumericalError(msg.str());
    }
    const QuantumState probe(space, v);
    const int levels = edge_levels(space.fock_cutoff);
    const double edge = probe.edge_population(levels);
    if (edge > opts.edge_tol) {
        std::ostringstream msg;
        msg << "truncation edge occupancy " << edge << " in the top " << levels << " Fock levels exceeds "
            << opts.edge_tol << " (raise fock_cutoff above " << space.fock_cutoff << ")";
        throw NumericalError(msg.str());
    }
}

// One Krylov step e^{−iH dt}v; returns false when the error estimate exceeds tol.
bool krylov_step(const SparseMatrix& H, Vector& v, double dt, int m, double tol) {
    const Index n = v.size();
    m = static_cast<int>(std::min<Index>(m, n));
    DenseMatrix V(n, m + 1);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m), beta = Eigen::VectorXd::Zero(m);
    const double v_norm = v.norm();
    V.col(0) = v / v_norm;
    int used = m;
    double beta_last = 0.0;
    for (int j = 0; j < m; ++j) {
        Vector w = H * V.col(j);
        alpha[j] = V.col(j).dot(w).real();
        w -= alpha[j] * V.col(j);
        if (j > 0) w -= beta[j - 1] * V.col(j - 1);
        for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
        const double b = w.norm();
        if (b < 1e-14 * std::max(1.0, std::abs(alpha[j]))) {
            used = j + 1;
            beta_last = 0.0;
            break;
        }
        if (j + 1 < m) {
            beta[j] = b;
            V.col(j + 1) = w / b;
        } else {
            beta_last = b;
            V.col(j + 1) = w / b;
        }
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(used, used);
    for (int j = 0; j < used; ++j) {
        T(j, j) = alpha[j];
        if (j + 1 < used) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::MatrixXd& Q = es.eigenvectors();
    Vector phase(used);
    for (int j = 0; j < used; ++j) phase[j] = std::exp(cplx(0.0, -es.eigenvalues()[j] * dt)) * Q(0, j);
    const Vector y = Q.cast<cplx>() * phase;
    const double err = beta_last * std::abs(y[used - 1]);
    if (err > tol) return false;
    v = v_norm * (V.leftCols(used) * y);
    return true;
}

}  // namespace

namespace {

// e^{−iHt} restricted to the basis states idx (an invariant block of H).
void evolve_block(const SparseMatrix& H, Vector& v, double t, const std::vector<Index>& idx) {
    const Index n = static_cast<Index>(idx.size());
    if (n == 0) return;
    std::vector<Index> pos(static_cast<std::size_t>(H.rows()), -1);
    for (Index a = 0; a < n; ++a) pos[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])] = a;
    DenseMatrix h = DenseMatrix::Zero(n, n);
    bool real = true;
    for (Index a = 0; a < n; ++a)
        for (SparseMatrix::InnerIterator it(H, idx[static_cast<std::size_t>(a)]); it; ++it) {
            const Index b = pos[static_cast<std::size_t>(it.col())];
            if (b < 0) continue;
            h(a, b) = it.value();
            real = real && it.value().imag() == 0.0;
        }
    Vector c(n);
    for (Index a = 0; a < n; ++a) c[a] = v[idx[static_cast<std::size_t>(a)]];
    Vector out;
    if (real) {
        const Eigen::MatrixXd hr = h.real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hr);
        if (es.info() != Eigen::Success) throw NumericalError("evolve_fock: eigensolver failed");
        const Eigen::MatrixXd& U = es.eigenvectors();
        const Eigen::VectorXd cr = U.transpose() * c.real(), ci = U.transpose() * c.imag();
        Eigen::VectorXd pr(n), pi(n);
        for (Index i = 0; i < n; ++i) {
            const cplx z = std::exp(cplx(0.0, -es.eigenvalues()[i] * t)) * cplx(cr[i], ci[i]);
            pr[i] = z.real();
            pi[i] = z.imag();
        }
        out = (U * pr).cast<cplx>() + cplx(0.0, 1.0) * (U * pi).cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
        if (es.info() != Eigen::Success) throw NumericalError("evolve_fock: eigensolver failed");
        Vector phased = es.eigenvectors().adjoint() * c;
        for (Index i = 0; i < n; ++i) phased[i] *= std::exp(cplx(0.0, -es.eigenvalues()[i] * t));
        out = es.eigenvectors() * phased;
    }
    for (Index a = 0; a < n; ++a) v[idx[static_cast<std::size_t>(a)]] = out[a];
}

}  // namespace

QuantumState evolve_fock(const TruncatedOperator& H, const QuantumState& psi0, double t, const EvolutionOptions& opts) {
    if (H.space() != psi0.space()) throw std::invalid_argument("evolve_fock: state and Hamiltonian spaces differ");
    Vector v = psi0.amplitudes();
    if (t == 0.0) return psi0;
    if (H.dimension() <= opts.dense_threshold) {
        // Parity blocks are diagonalized separately when H conserves parity.
        std::vector<Index> even, odd;
        if (parity_leakage(H) == 0.0) {
            const auto signs = parity_signs(H.space());
            for (std::size_t i = 0; i < signs.size(); ++i) (signs[i] > 0 ? even : odd).push_back(static_cast<Index>(i));
        } else {
            even.resize(static_cast<std::size_t>(H.dimension()));
            for (Index i = 0; i < H.dimension(); ++i) even[static_cast<std::size_t>(i)] = i;
        }
        evolve_block(H.matrix(), v, t, even);
        evolve_block(H.matrix(), v, t, odd);
    } else {
        const int steps = std::max(1, opts.steps);
        double remaining = t;
        double dt = t / steps;
        int guard = 0;
        while (std::abs(remaining) > 0.0) {
            if (std::abs(dt) > std::abs(remaining)) dt = remaining;
            Vector trial = v;
            if (krylov_step(H.matrix(), trial, dt, opts.krylov_dim, 1e-12)) {
                v = trial;
                remaining -= dt;
            } else {
                dt /= 2.0;
            }
            if (++guard > 100000) throw NumericalError("evolve_fock: Krylov stepping did not finish");
        }
    }
    check_evolved(v, psi0.space(), opts);
    return QuantumState(psi0.space(), v);
}

// ---------------------------------------------------------- operator identities

double IdentityReport::max_residual() const {
    return std::max({residual_A, residual_B, residual_nested, residual_lambda});
}

namespace {

double interior_norm(const TruncatedOperator& op, int levels) {
    const DenseMatrix d = restrict_to_fock_levels(op, levels);
    return d.cwiseAbs().maxCoeff();
}

}  // namespace

IdentityReport operator_identity_check(double alpha_prime, double G, int cutoff, double tol) {
    const SpaceSpec s = SpaceSpec::bosonic(cutoff);
    const auto X2 = x_squared(s), P2 = p_squared(s), XP = xp_symmetric(s);
    const TruncatedOperator H0 = (2.0 * G) * P2;
    const TruncatedOperator H1 = X2 + P2;
    const TruncatedOperator H = H0 + alpha_prime * H1;
    const double Delta = sensing_delta(alpha_prime, G);
    const cplx i(0.0, 1.0);

    const auto C = commutator(H0, H1);
    const TruncatedOperator A = -i * C;
    const TruncatedOperator B = -1.0 * commutator(H, C);
    const TruncatedOperator A_ref = (-4.0 * G) * XP;
    const TruncatedOperator B_ref = (-16.0 * G * alpha_prime) * X2 + (16.0 * G * (alpha_prime + 2.0 * G)) * P2;

    IdentityReport r;
    r.Delta = Delta;
    r.interior_levels = cutoff - 4;
    r.residual_A = interior_norm(A - A_ref, r.interior_levels);
    r.residual_B = interior_norm(B - B_ref, r.interior_levels);
    r.residual_nested = interior_norm(commutator(H, commutator(H, C)) - Delta * C, r.interior_levels);
    if (Delta > 0.0) {
        const TruncatedOperator L = (i * std::sqrt(Delta)) * A - B;
        r.residual_lambda = interior_norm(commutator(H, L) - std::sqrt(Delta) * L, r.interior_levels);
    }
    r.passed = r.max_residual() < tol;
    return r;
}

IdentityReport operator_identity_check(const ModelParams& p, int cutoff, double tol) {
    return operator_identity_check(alpha_prime(p), p.G(), cutoff, tol);
}

TruncatedOperator local_generator(double alpha_prime, double G, double t, const SpaceSpec& space,
                                  GeneratorTerms terms) {
    const double Delta = sensing_delta(alpha_prime, G);
    if (!(Delta > 0.0)) throw std::domain_error("local generator requires Delta > 0");
    const double sd = std::sqrt(Delta);
    const auto X2 = x_squared(space), P2 = p_squared(space), XP = xp_symmetric(space);
    const TruncatedOperator A = (-4.0 * G) * XP;
    const TruncatedOperator B = (-16.0 * G * alpha_prime) * X2 + (16.0 * G * (alpha_prime + 2.0 * G)) * P2;
    const double cb = -(std::sin(sd * t) - sd * t) / (Delta * sd);
    if (terms == GeneratorTerms::b_only) return cb * B;
    const double ca = (std::cos(sd * t) - 1.0) / Delta;
    return t * (X2 + P2) + ca * A + cb * B;
}

TruncatedOperator local_generator(const ModelParams& p, double t, const SpaceSpec& space, GeneratorTerms terms) {
    return local_generator(alpha_prime(p), p.G(), t, space, terms);
}

// ----------------------------------------------------------------- QFI engines

std::string to_string(QfiMethod m) {
    switch (m) {
        case QfiMethod::gaussian: return "gaussian";
        case QfiMethod::fock: return "fock";
        case QfiMethod::generator: return "generator";
    }
    return "unknown";
}

QfiMethod parse_qfi_method(const std::string& name) {
    if (name == "gaussian") return QfiMethod::gaussian;
    if (name == "fock") return QfiMethod::fock;
    if (name == "generator") return QfiMethod::generator;
    throw std::invalid_argument("unknown QFI method '" + name + "' (expected gaussian, fock or generator)");
}

int auto_fock_cutoff(double alpha_prime, double G, cplx xi) {
    const double kappa2 = std::max(1.0, (alpha_prime + 2.0 * G) / alpha_prime);
    const double n_max = kappa2 * (std::norm(xi) + 0.5);
    const double spread = std::sqrt(kappa2) * std::sqrt(2.0 * n_max) + kappa2;
    return static_cast<int>(std::ceil(n_max + 8.0 * spread + 32.0));
}

namespace {

void require_delta(double alpha_prime, double G) {
    if (!(sensing_delta(alpha_prime, G) > 0.0) || !(alpha_prime > 0.0))
        throw std::domain_error("sensing requires alpha' > 0 (Delta > 0)");
}

GaussianState gaussian_at(double alpha_prime, double G, cplx xi, double t) {
    return evolve_gaussian(squeezed_oscillator(alpha_prime, G), GaussianState::coherent(xi), t);
}

Vector fock_at(double alpha_prime, double G, cplx xi, double t, int cutoff) {
    const SpaceSpec s = SpaceSpec::bosonic(cutoff);
    const TruncatedOperator H = squeezed_oscillator(alpha_prime, G).to_operator(s);
    return evolve_fock(H, coherent_state(s, xi), t).amplitudes();
}

// Richardson-checked central difference of a scalar-valued or state-valued estimator.
template <class F>
double richardson(F&& estimate, double h, double tol, const char* what) {
    const double coarse = estimate(h);
    const double fine = estimate(h / 2.0);
    const double scale = std::max(std::abs(fine), 1e-300);
    if (std::abs(coarse - fine) > tol * scale && std::abs(coarse - fine) > 1e-12) {
        std::ostringstream msg;
        msg << what << ": finite-difference pair did not converge (" << coarse << " vs " << fine << ")";
        throw NumericalError(msg.str());
    }
    return (4.0 * fine - coarse) / 3.0;
}

double chain_factor(const ModelParams& p, bool wrt_g) {
    if (!wrt_g) return 1.0;
    const double d = dalpha_prime_dg(p);
    return d * d;
}

}  // namespace

double qfi_numeric(double alpha_prime, double G, cplx xi, double t, const SensingOptions& opts) {
    require_delta(alpha_prime, G);
    if (t == 0.0) return 0.0;
    const double h0 = opts.rel_step * alpha_prime;
    switch (opts.method) {
        case QfiMethod::gaussian: {
            const GaussianState c = gaussian_at(alpha_prime, G, xi, t);
            return richardson(
                [&](double h) {
                    return gaussian_qfi(gaussian_at(alpha_prime - h, G, xi, t), c,
                                        gaussian_at(alpha_prime + h, G, xi, t), h);
                },
                h0, opts.richardson_tol, "gaussian QFI");
        }
        case QfiMethod::fock: {
            const int cutoff = opts.fock_cutoff > 0 ? opts.fock_cutoff : auto_fock_cutoff(alpha_prime, G, xi);
            const Vector c = fock_at(alpha_prime, G, xi, t, cutoff);
            return richardson(
                [&](double h) {
                    const Vector d = (fock_at(alpha_prime + h, G, xi, t, cutoff) -
                                      fock_at(alpha_prime - h, G, xi, t, cutoff)) /
                                     (2.0 * h);
                    return 4.0 * (d.squaredNorm() - std::norm(c.dot(d)));
                },
                h0, opts.richardson_tol, "Fock QFI");
        }
        case QfiMethod::generator: {
            const int cutoff = opts.fock_cutoff > 0 ? opts.fock_cutoff
                                                    : static_cast<int>(std::ceil(std::norm(xi) + 12.0 * std::abs(xi) + 64.0));
            const SpaceSpec s = SpaceSpec::bosonic(cutoff);
            const QuantumState psi = coherent_state(s, xi);
            return 4.0 * psi.variance(local_generator(alpha_prime, G, t, s, opts.generator_terms));
        }
    }
    return 0.0;
}

double qfi_numeric(const ModelParams& p, cplx xi, double t, const SensingOptions& opts) {
    return chain_factor(p, opts.wrt_g) * qfi_numeric(alpha_prime(p), p.G(), xi, t, opts);
}

QuadratureMoments quadrature_moments(double alpha_prime, double G, cplx xi, double t, QfiMethod engine,
                                     int fock_cutoff) {
    if (engine == QfiMethod::fock) {
        const int cutoff = fock_cutoff > 0 ? fock_cutoff : auto_fock_cutoff(alpha_prime, G, xi);
        const SpaceSpec s = SpaceSpec::bosonic(cutoff);
        const QuantumState psi(s, fock_at(alpha_prime, G, xi, t, cutoff));
        const auto q = quadratures(s);
        const double m = psi.expectation_real(q.X);
        return {m, psi.expectation_real(x_squared(s)) - m * m};
    }
    const GaussianState g = gaussian_at(alpha_prime, G, xi, t);
    return {g.mean[0], g.cov(0, 0)};
}

double inverted_variance_numeric(double alpha_prime, double G, cplx xi, double t, const SensingOptions& opts) {
    require_delta(alpha_prime, G);
    const QfiMethod engine = opts.method == QfiMethod::fock ? QfiMethod::fock : QfiMethod::gaussian;
    const auto centre = quadrature_moments(alpha_prime, G, xi, t, engine, opts.fock_cutoff);
    if (t == 0.0) return 0.0;
    const double chi = richardson(
        [&](double h) {
            const double up = quadrature_moments(alpha_prime + h, G, xi, t, engine, opts.fock_cutoff).meanX;
            const double dn = quadrature_moments(alpha_prime - h, G, xi, t, engine, opts.fock_cutoff).meanX;
            return (up - dn) / (2.0 * h);
        },
        opts.rel_step * alpha_prime, opts.richardson_tol, "susceptibility");
    return chi * chi / centre.varX;
}

double inverted_variance_numeric(const ModelParams& p, cplx xi, double t, const SensingOptions& opts) {
    return chain_factor(p, opts.wrt_g) * inverted_variance_numeric(alpha_prime(p), p.G(), xi, t, opts);
}

ProtocolResult run_protocol(const ModelParams& p, cplx xi, std::span<const double> times, const SensingOptions& opts) {
    ProtocolResult r;
    r.engine = opts.method;
    r.alpha_prime = alpha_prime(p);
    r.G = p.G();
    r.var_p2 = coherent_var_p2(xi);
    const double factor = chain_factor(p, opts.wrt_g);
    const QfiMethod moments_engine = opts.method == QfiMethod::fock ? QfiMethod::fock : QfiMethod::gaussian;
    for (double t : times) {
        const auto m = quadrature_moments(r.alpha_prime, r.G, xi, t, moments_engine, opts.fock_cutoff);
        r.times.push_back(t);
        r.meanX.push_back(m.meanX);
        r.varX.push_back(m.varX);
        r.qfi.push_back(factor * qfi_numeric(r.alpha_prime, r.G, xi, t, opts));
        r.inv_var.push_back(factor * inverted_variance_numeric(r.alpha_prime, r.G, xi, t, opts));
    }
    return r;
}

// ------------------------------------------------------------------ homodyne

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double to_unit_open(std::uint64_t bits) {
    // (0, 1]: never zero, so the logarithm below stays finite.
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

struct SampleStats {
    double mean;
    double var;  // 1/shots normalization
};

SampleStats sample_quadrature(double mean, double var, long long shots, std::uint64_t seed, std::uint64_t stream) {
    const double sd = std::sqrt(var);
    // Welford accumulation keeps the variance accurate for large shot counts.
    double m = 0.0, s2 = 0.0;
    for (long long i = 0; i < shots; ++i) {
        const double x = mean + sd * counter_normal(seed, stream, static_cast<std::uint64_t>(i));
        const double d = x - m;
        m += d / static_cast<double>(i + 1);
        s2 += d * (x - m);
    }
    return {m, s2 / static_cast<double>(shots)};
}

}  // namespace

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    // Box–Muller on two hashed counters; the cosine branch only, so each index is independent.
    const std::uint64_t key = mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
    const double u1 = to_unit_open(mix64(key ^ (2 * index)));
    const double u2 = to_unit_open(mix64(key ^ (2 * index + 1)));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

HomodyneResult homodyne_estimate(double alpha_prime, double G, cplx xi, double t, long long shots,
                                 std::uint64_t seed, const HomodyneOptions& opts) {
    if (shots < 2) throw std::invalid_argument("homodyne estimation needs at least 2 shots");
    require_delta(alpha_prime, G);
    const auto centre = quadrature_moments(alpha_prime, G, xi, t);

    double h = opts.step;
    if (!(h > 0.0)) {
        // Resolve the two-setting difference above its shot-noise standard error.
        const double h_probe = 1e-5 * alpha_prime;
        const double chi = (quadrature_moments(alpha_prime + h_probe, G, xi, t).meanX -
                            quadrature_moments(alpha_prime - h_probe, G, xi, t).meanX) /
                           (2.0 * h_probe);
        const double noise = std::sqrt(2.0 * centre.varX / static_cast<double>(shots));
        h = std::abs(chi) > 0.0 ? opts.snr_target * noise / (2.0 * std::abs(chi)) : 1e-3 * alpha_prime;
        h = std::clamp(h, 1e-6 * alpha_prime, 2e-2 * alpha_prime);
    }

    const auto up = quadrature_moments(alpha_prime + h, G, xi, t);
    const auto dn = quadrature_moments(alpha_prime - h, G, xi, t);
    const SampleStats c = sample_quadrature(centre.meanX, centre.varX, shots, seed, 0);
    const SampleStats u = sample_quadrature(up.meanX, up.varX, shots, seed, 1);
    const SampleStats d = sample_quadrature(dn.meanX, dn.varX, shots, seed, 2);

    HomodyneResult r;
    r.shots = shots;
    r.step = h;
    r.meanX_est = c.mean;
    r.varX_est = c.var;
    r.chi_est = (u.mean - d.mean) / (2.0 * h);
    r.I_est = r.chi_est * r.chi_est / r.varX_est;
    return r;
}

HomodyneResult homodyne_estimate(const ModelParams& p, cplx xi, double t, long long shots, std::uint64_t seed,
                                 const HomodyneOptions& opts) {
    HomodyneResult r = homodyne_estimate(alpha_prime(p), p.G(), xi, t, shots, seed, opts);
    if (opts.wrt_g) {
        const double d = dalpha_prime_dg(p);
        r.chi_est *= d;
        r.I_est *= d * d;
    }
    return r;
}

}  // namespace dtc

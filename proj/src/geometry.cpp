// geometry.cpp — Sum-over-states and overlap engines for the ground-state metric

#include "dtc/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace dtc {

namespace {

struct OperatorPair {
    TruncatedOperator d_lambda;
    TruncatedOperator d_Omega;
};

// One tensor factor of the ground state. Factorized models contribute additively.
struct Factor {
    std::function<TruncatedOperator(const ModelParams&)> H;
    std::function<OperatorPair(const ModelParams&)> dH;
    int sector{+1};  // parity sector of the ground state; 0 = no restriction
    int multiplicity{1};
};

ModelParams at(const ModelParams& base, double lambda, double Omega) {
    return ModelParams(Omega, lambda, base.G(), base.n_qubits(), base.weights(), base.omega());
}

void require_phase(const ModelParams& p, bool normal, const char* who) {
    if (normal ? !(p.g() < 1.0) : !(p.g() > 1.0)) {
        std::ostringstream msg;
        msg << who << ": requires g " << (normal ? "< 1" : "> 1") << " (got g = " << p.g() << ")";
        throw PhaseDomainError(msg.str());
    }
}

// Central differences of the operator itself; for families without a closed-form derivative.
OperatorPair numeric_derivative(const std::function<TruncatedOperator(const ModelParams&)>& H,
                                const ModelParams& p) {
    const double hl = 1e-5 * std::max(p.lambda(), 1e-3);
    const double hO = 1e-5 * p.Omega();
    auto dl = (H(at(p, p.lambda() + hl, p.Omega())) - H(at(p, p.lambda() - hl, p.Omega()))) * (1.0 / (2.0 * hl));
    auto dO = (H(at(p, p.lambda(), p.Omega() + hO)) - H(at(p, p.lambda(), p.Omega() - hO))) * (1.0 / (2.0 * hO));
    return {std::move(dl), std::move(dO)};
}

std::vector<Factor> build_family(const MetricRequest& req) {
    const ModelParams& p0 = req.params;
    const int cutoff = req.fock_cutoff;
    std::vector<Factor> out;

    switch (req.model) {
        case MetricModel::full: {
            const SpaceSpec s = SpaceSpec::with_qubits(cutoff, p0.n_qubits());
            Factor f;
            f.H = [s](const ModelParams& p) { return full_hamiltonian(p, s); };
            f.dH = [s](const ModelParams& p) { return OperatorPair{full_dlambda(p, s), full_dOmega(p, s)}; };
            out.push_back(std::move(f));
            break;
        }
        case MetricModel::normal_effective: {
            require_phase(p0, true, "normal_effective metric");
            const SpaceSpec s = SpaceSpec::bosonic(cutoff);
            Factor f;
            f.H = [s](const ModelParams& p) { return normal_effective(p).to_operator(s); };
            // ∂H_np/∂λ = −2(ω−2G)g²/λ a†a, ∂H_np/∂Ω = (ω−2G)g²/Ω a†a, written without 1/λ.
            f.dH = [s](const ModelParams& p) {
                const auto n = number(s);
                const double l = p.lambda(), O = p.Omega(), K = p.K();
                return OperatorPair{(-2.0 * K * l / O) * n, (K * l * l / (O * O)) * n};
            };
            out.push_back(std::move(f));
            break;
        }
        case MetricModel::superradiant_effective: {
            require_phase(p0, false, "superradiant_effective metric");
            const SpaceSpec s = SpaceSpec::bosonic(cutoff);
            Factor boson;
            boson.H = [s](const ModelParams& p) { return superradiant_effective(p).to_operator(s); };
            boson.dH = [s](const ModelParams& p) {
                const double g = p.g();
                const double da_dg = p.omega_eff() * (std::pow(g, -3) + std::pow(g, -5)) / 2.0;
                const auto n = number(s);
                return OperatorPair{(2.0 * da_dg * g / p.lambda()) * n, (-da_dg * g / p.Omega()) * n};
            };
            out.push_back(std::move(boson));

            // Each qubit sits in the ground state of (Ω̃_j/2) σ̃_z(θ), Ω̃_j = g² x_j Ω, cos 2θ = g⁻².
            std::map<double, int> counts;
            for (double x : p0.weights()) ++counts[x];
            const SpaceSpec q = SpaceSpec::bosonic(2);
            for (const auto& [x, count] : counts) {
                Factor f;
                f.sector = 0;
                f.multiplicity = count;
                f.H = [q, x](const ModelParams& p) {
                    const double th = rotation_angle(p, +1);
                    const double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);
                    SparseMatrix m(2, 2);
                    const double w = 0.5 * p.g() * p.g() * x * p.Omega();
                    m.insert(0, 0) = w * c2;
                    m.insert(0, 1) = w * s2;
                    m.insert(1, 0) = w * s2;
                    m.insert(1, 1) = -w * c2;
                    return TruncatedOperator(q, m, true);
                };
                f.dH = [q, x](const ModelParams& p) {
                    const double g = p.g();
                    const double th = rotation_angle(p, +1);
                    const double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);
                    const double w = 0.5 * g * g * x * p.Omega();
                    const double dth_dg = std::pow(g, -3) / std::sqrt(1.0 - std::pow(g, -4));
                    const double dg_dl = g / p.lambda(), dg_dO = -g / (2.0 * p.Omega());
                    const double dw_dl = 2.0 * w / p.lambda(), dw_dO = 0.0;
                    auto build = [&](double dw, double dth) {
                        SparseMatrix m(2, 2);
                        m.insert(0, 0) = dw * c2 - 2.0 * w * s2 * dth;
                        m.insert(0, 1) = dw * s2 + 2.0 * w * c2 * dth;
                        m.insert(1, 0) = dw * s2 + 2.0 * w * c2 * dth;
                        m.insert(1, 1) = -dw * c2 + 2.0 * w * s2 * dth;
                        return TruncatedOperator(q, m, true);
                    };
                    return OperatorPair{build(dw_dl, dth_dg * dg_dl), build(dw_dO, dth_dg * dg_dO)};
                };
                out.push_back(std::move(f));
            }
            break;
        }
        case MetricModel::corrected: {
            require_phase(p0, true, "corrected metric");
            const SpaceSpec s = SpaceSpec::bosonic(cutoff);
            Factor f;
            f.H = [s](const ModelParams& p) { return corrected_normal_effective(p, s); };
            f.dH = [h = f.H](const ModelParams& p) { return numeric_derivative(h, p); };
            out.push_back(std::move(f));
            break;
        }
    }
    return out;
}

std::vector<Index> sector_indices(const SpaceSpec& space, int sector) {
    std::vector<Index> idx;
    if (sector == 0) {
        idx.resize(space.dimension());
        std::iota(idx.begin(), idx.end(), Index{0});
        return idx;
    }
    const auto signs = parity_signs(space);
    for (std::size_t i = 0; i < signs.size(); ++i)
        if (signs[i] == sector) idx.push_back(static_cast<Index>(i));
    return idx;
}

DenseMatrix dense_block(const SparseMatrix& m, const std::vector<Index>& idx) {
    std::vector<Index> pos(static_cast<std::size_t>(m.rows()), -1);
    for (std::size_t i = 0; i < idx.size(); ++i) pos[static_cast<std::size_t>(idx[i])] = static_cast<Index>(i);
    const Index n = static_cast<Index>(idx.size());
    DenseMatrix out = DenseMatrix::Zero(n, n);
    for (Index a = 0; a < n; ++a)
        for (SparseMatrix::InnerIterator it(m, idx[static_cast<std::size_t>(a)]); it; ++it) {
            const Index b = pos[static_cast<std::size_t>(it.col())];
            if (b >= 0) out(a, b) = it.value();
        }
    return out;
}

Vector ground_of(const Factor& f, const ModelParams& p, const EigenOptions& eig) {
    const TruncatedOperator H = f.H(p);
    if (f.sector == 0) return eig_lowest(H, 1, eig).eigenstates.front().amplitudes();
    return eig_lowest_sector(H, f.sector, 1, eig).eigenstates.front().amplitudes();
}

struct FactorMetric {
    double ll{0.0}, OO{0.0}, lO{0.0};
    double gap{0.0};
};

// Projected conjugate gradient for (H − E0)x = b with b ⟂ |0⟩.
Vector solve_response(const SparseMatrix& H, double E0, const Vector& ground, Vector b) {
    auto project = [&](Vector& v) { v -= ground * ground.dot(v); };
    project(b);
    Vector x = Vector::Zero(b.size());
    Vector r = b, d = b;
    double rr = r.squaredNorm();
    const double target = 1e-26 * std::max(rr, 1e-300);
    for (int it = 0; it < 20000 && rr > target; ++it) {
        Vector Ad = H * d - E0 * d;
        project(Ad);
        const double alpha = rr / d.dot(Ad).real();
        x += alpha * d;
        r -= alpha * Ad;
        project(r);
        const double rr_new = r.squaredNorm();
        d = r + (rr_new / rr) * d;
        rr = rr_new;
    }
    if (rr > 1e-16 * std::max(b.squaredNorm(), 1e-300))
        throw NumericalError("metric response solve did not converge");
    return x;
}

FactorMetric sum_over_states_factor(const Factor& f, const ModelParams& p, const EigenOptions& eig) {
    const TruncatedOperator H = f.H(p);
    const OperatorPair dH = f.dH(p);
    const auto idx = sector_indices(H.space(), f.sector);
    const Index n = static_cast<Index>(idx.size());
    FactorMetric out;

    if (n <= eig.dense_threshold) {
        const DenseMatrix h = dense_block(H.matrix(), idx);
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
        if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed in metric");
        const auto& E = es.eigenvalues();
        const DenseMatrix& U = es.eigenvectors();
        if (n < 2) return out;
        out.gap = E[1] - E[0];
        if (!(out.gap > 1e-10)) throw NumericalError("degenerate ground state: metric by sum over states undefined");
        const Vector u0 = U.col(0);
        const Vector wl = U.adjoint() * (dense_block(dH.d_lambda.matrix(), idx) * u0);
        const Vector wO = U.adjoint() * (dense_block(dH.d_Omega.matrix(), idx) * u0);
        for (Index m = 1; m < n; ++m) {
            const double w = 1.0 / ((E[m] - E[0]) * (E[m] - E[0]));
            out.ll += std::norm(wl[m]) * w;
            out.OO += std::norm(wO[m]) * w;
            out.lO += (std::conj(wl[m]) * wO[m]).real() * w;
        }
        return out;
    }

    const EigenResult er = f.sector == 0 ? eig_lowest(H, 2, eig) : eig_lowest_sector(H, f.sector, 2, eig);
    out.gap = er.gap(1);
    if (!(out.gap > 1e-10)) throw NumericalError("degenerate ground state: metric by sum over states undefined");
    const Vector& u0 = er.eigenstates.front().amplitudes();
    const double E0 = er.eigenvalues.front();
    const Vector xl = solve_response(H.matrix(), E0, u0, dH.d_lambda.apply(u0));
    const Vector xO = solve_response(H.matrix(), E0, u0, dH.d_Omega.apply(u0));
    out.ll = xl.squaredNorm();
    out.OO = xO.squaredNorm();
    out.lO = xl.dot(xO).real();
    return out;
}

// −ln|⟨φ(a)|φ(b)⟩| summed over factors, evaluated without cancellation.
double log_distance(const std::vector<Factor>& fam, const ModelParams& a, const ModelParams& b,
                    const EigenOptions& eig) {
    double d = 0.0;
    for (const auto& f : fam) {
        const double eps = infidelity(ground_of(f, a, eig), ground_of(f, b, eig));
        d += f.multiplicity * -std::log1p(-eps);
    }
    return d;
}

void require_same_phase(const ModelParams& centre, std::initializer_list<ModelParams> points) {
    const bool normal = centre.g() < 1.0;
    for (const auto& q : points)
        if ((q.g() < 1.0) != normal || std::abs(q.g() - 1.0) < kCriticalWindow)
            throw PhaseDomainError("finite-difference stencil crosses the critical point g = 1");
}

}  // namespace

std::string to_string(MetricModel m) {
    switch (m) {
        case MetricModel::full: return "full";
        case MetricModel::normal_effective: return "normal_effective";
        case MetricModel::superradiant_effective: return "superradiant_effective";
        case MetricModel::corrected: return "corrected";
    }
    return "unknown";
}

std::string to_string(MetricEngine e) {
    return e == MetricEngine::sum_over_states ? "sum_over_states" : "overlap_fd";
}

MetricModel parse_metric_model(const std::string& name) {
    if (name == "full") return MetricModel::full;
    if (name == "normal_effective") return MetricModel::normal_effective;
    if (name == "superradiant_effective") return MetricModel::superradiant_effective;
    if (name == "corrected") return MetricModel::corrected;
    throw std::invalid_argument("unknown metric model '" + name + "'");
}

MetricEngine parse_metric_engine(const std::string& name) {
    if (name == "sum_over_states") return MetricEngine::sum_over_states;
    if (name == "overlap_fd") return MetricEngine::overlap_fd;
    throw std::invalid_argument("unknown metric engine '" + name + "'");
}

StencilSteps stencil_steps(const MetricRequest& req) {
    const ModelParams& p = req.params;
    const double K = std::max(p.K(), 1e-300);
    const double dg_dl = std::sqrt(K / (p.Omega() * p.omega_eff()));
    const double lambda_scale = p.lambda() > 0.0 ? p.lambda() : 1.0 / dg_dl;
    double dl = req.d_lambda > 0.0 ? req.d_lambda : req.rel_step * lambda_scale;
    double dO = req.d_Omega > 0.0 ? req.d_Omega : req.rel_step * p.Omega();
    const double span = dg_dl * dl + p.g() / (2.0 * p.Omega()) * dO;
    const double limit = 0.1 * std::abs(p.g() - 1.0);
    if (span >= limit && span > 0.0) {
        const double shrink = 0.99 * limit / span;
        dl *= shrink;
        dO *= shrink;
    }
    return {dl, dO};
}

MetricTensor metric_sum_over_states(const MetricRequest& req) {
    const auto fam = build_family(req);
    MetricTensor out;
    out.model = req.model;
    out.engine = MetricEngine::sum_over_states;
    out.gap = std::numeric_limits<double>::infinity();
    for (const auto& f : fam) {
        const FactorMetric m = sum_over_states_factor(f, req.params, req.eig);
        out.g_ll += f.multiplicity * m.ll;
        out.g_OO += f.multiplicity * m.OO;
        out.g_lO += f.multiplicity * m.lO;
        out.gap = std::min(out.gap, m.gap);
    }
    return out;
}

MetricTensor metric_overlap_fd(const MetricRequest& req) {
    const auto fam = build_family(req);
    const auto [dl, dO] = stencil_steps(req);
    const ModelParams& p = req.params;
    const double l = p.lambda(), O = p.Omega();

    const ModelParams lm = at(p, l - dl / 2, O), lp = at(p, l + dl / 2, O);
    const ModelParams om = at(p, l, O - dO / 2), op = at(p, l, O + dO / 2);
    const ModelParams dm = at(p, l - dl / 2, O - dO / 2), dp = at(p, l + dl / 2, O + dO / 2);
    require_same_phase(p, {lm, lp, om, op, dm, dp});

    const double Dl = log_distance(fam, lm, lp, req.eig);
    const double DO = log_distance(fam, om, op, req.eig);
    const double Dd = log_distance(fam, dm, dp, req.eig);

    MetricTensor out;
    out.model = req.model;
    out.engine = MetricEngine::overlap_fd;
    out.d_lambda = dl;
    out.d_Omega = dO;
    out.g_ll = 2.0 * Dl / (dl * dl);
    out.g_OO = 2.0 * DO / (dO * dO);
    out.g_lO = (Dd - Dl - DO) / (dl * dO);
    return out;
}

MetricTensor compute_metric(const MetricRequest& req) {
    return req.engine == MetricEngine::sum_over_states ? metric_sum_over_states(req) : metric_overlap_fd(req);
}

double berry_curvature_fd(const MetricRequest& req) {
    const auto fam = build_family(req);
    const auto [dl, dO] = stencil_steps(req);
    const ModelParams& p = req.params;
    const double l = p.lambda(), O = p.Omega();
    const ModelParams c1 = at(p, l - dl / 2, O - dO / 2), c2 = at(p, l + dl / 2, O - dO / 2);
    const ModelParams c3 = at(p, l + dl / 2, O + dO / 2), c4 = at(p, l - dl / 2, O + dO / 2);
    require_same_phase(p, {c1, c2, c3, c4});

    double phase = 0.0;
    for (const auto& f : fam) {
        const Vector v1 = ground_of(f, c1, req.eig), v2 = ground_of(f, c2, req.eig);
        const Vector v3 = ground_of(f, c3, req.eig), v4 = ground_of(f, c4, req.eig);
        const cplx loop = v1.dot(v2) * v2.dot(v3) * v3.dot(v4) * v4.dot(v1);
        phase += f.multiplicity * std::arg(loop);
    }
    return -phase / (dl * dO);
}

std::vector<MetricScanRow> metric_divergence_scan(const MetricRequest& base, std::span<const double> g_values) {
    std::vector<MetricScanRow> rows;
    rows.reserve(g_values.size());
    for (double g : g_values) {
        if (std::abs(g - 1.0) < kCriticalWindow) throw PhaseDomainError("metric scan must exclude g = 1");
        MetricRequest r = base;
        r.params = base.params.with_g(g);
        rows.push_back({g, compute_metric(r)});
    }
    return rows;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs matching samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("loglog_slope needs positive samples");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dtc

// scaling.cpp — Finite-β sensing ratios on full, HP, and quartic-corrected models

#include "dtc/scaling.hpp"

#include "dtc/geometry.hpp"
#include "dtc/parallel.hpp"
#include "dtc/spectra.hpp"

#include <cmath>
#include <sstream>

namespace dtc {

std::string to_string(FiniteBetaModel m) {
    switch (m) {
        case FiniteBetaModel::full: return "full";
        case FiniteBetaModel::hp: return "hp";
        case FiniteBetaModel::corrected: return "corrected";
    }
    return "unknown";
}

FiniteBetaModel parse_finite_beta_model(const std::string& name) {
    if (name == "full") return FiniteBetaModel::full;
    if (name == "hp") return FiniteBetaModel::hp;
    if (name == "corrected") return FiniteBetaModel::corrected;
    throw std::invalid_argument("unknown finite-beta model '" + name + "' (expected full, hp or corrected)");
}

std::string to_string(CorrectionObservable o) {
    switch (o) {
        case CorrectionObservable::ground_energy: return "ground_energy";
        case CorrectionObservable::metric_ll: return "metric_ll";
        case CorrectionObservable::inverted_variance: return "inverted_variance";
    }
    return "unknown";
}

CorrectionObservable parse_correction_observable(const std::string& name) {
    if (name == "ground_energy") return CorrectionObservable::ground_energy;
    if (name == "metric_ll") return CorrectionObservable::metric_ll;
    if (name == "inverted_variance") return CorrectionObservable::inverted_variance;
    throw std::invalid_argument("unknown correction observable '" + name + "'");
}

namespace {

SpaceSpec model_space(FiniteBetaModel model, int cutoff, int n_qubits) {
    switch (model) {
        case FiniteBetaModel::full: return SpaceSpec::with_qubits(cutoff, n_qubits);
        case FiniteBetaModel::hp: return SpaceSpec::holstein_primakoff(cutoff, n_qubits);
        case FiniteBetaModel::corrected: return SpaceSpec::bosonic(cutoff);
    }
    return SpaceSpec::bosonic(cutoff);
}

TruncatedOperator model_hamiltonian(FiniteBetaModel model, const ModelParams& p, const SpaceSpec& s) {
    switch (model) {
        case FiniteBetaModel::full: return full_hamiltonian(p, s);
        case FiniteBetaModel::hp: return hp_hamiltonian(p, s);
        case FiniteBetaModel::corrected: return corrected_normal_effective(p, s);
    }
    return full_hamiltonian(p, s);
}

struct Moments {
    double meanX, varX;
};

Moments evolved_moments(FiniteBetaModel model, const ModelParams& p, cplx xi, double t, const SpaceSpec& s,
                        const EvolutionOptions& evo) {
    const TruncatedOperator H = model_hamiltonian(model, p, s);
    const QuantumState psi = evolve_fock(H, coherent_state(s, xi), t, evo);
    const double m = psi.expectation_real(quadratures(s).X);
    return {m, psi.expectation_real(x_squared(s)) - m * m};
}

int initial_cutoff(const ModelParams& p, cplx xi) {
    const double a = alpha_prime(p);
    const double kappa2 = std::max(1.0, (a + 2.0 * p.G()) / a);
    const double n_max = kappa2 * (std::norm(xi) + 0.5);
    const double spread = std::sqrt(kappa2 * 2.0 * n_max) + kappa2;
    return static_cast<int>(std::ceil(n_max + 3.0 * spread + 16.0));
}

bool is_truncation_failure(const NumericalError& e) {
    return std::string(e.what()).find("truncation edge") != std::string::npos;
}

}  // namespace

FiniteBetaResult finite_beta_inverted_variance(const ModelParams& p, cplx xi, double t, FiniteBetaModel model,
                                               const ScalingOptions& opts) {
    int cutoff = opts.fock_cutoff > 0 ? opts.fock_cutoff : initial_cutoff(p, xi);
    const bool escalate = opts.fock_cutoff <= 0;
    for (int attempt = 0;; ++attempt) {
        try {
            const SpaceSpec s = model_space(model, cutoff, p.n_qubits());
            const Moments centre = evolved_moments(model, p, xi, t, s, opts.evolution);
            auto chi_at = [&](double h) {
                const double up = evolved_moments(model, p.with_g(p.g() + h), xi, t, s, opts.evolution).meanX;
                const double dn = evolved_moments(model, p.with_g(p.g() - h), xi, t, s, opts.evolution).meanX;
                return (up - dn) / (2.0 * h);
            };
            const double h = opts.rel_step * p.g();
            const double coarse = chi_at(h), fine = chi_at(h / 2.0);
            if (std::abs(coarse - fine) > opts.richardson_tol * std::abs(fine) && std::abs(coarse - fine) > 1e-10) {
                std::ostringstream msg;
                msg << "finite-beta susceptibility did not converge (" << coarse << " vs " << fine << ")";
                throw NumericalError(msg.str());
            }
            const double chi = (4.0 * fine - coarse) / 3.0;
            return {chi * chi / centre.varX, centre.meanX, centre.varX, cutoff};
        } catch (const NumericalError& e) {
            if (!escalate || !is_truncation_failure(e) || attempt >= 4) throw;
            cutoff = cutoff + cutoff / 2;
        }
    }
}

double ideal_inverted_variance_g(const ModelParams& p, cplx xi) {
    const double d = dalpha_prime_dg(p);
    return d * d * inverted_variance_closed_form(p, xi, 1);
}

double calibration_gate(const ModelParams& p, cplx xi, double tol) {
    const double a = alpha_prime(p);
    const double tau = revival_time(a, p.G(), 1);
    const double numeric = inverted_variance_numeric(a, p.G(), xi, tau);
    const double closed = inverted_variance_closed_form(a, p.G(), xi, 1);
    const double err = std::abs(numeric / closed - 1.0);
    if (!(err <= tol)) {
        std::ostringstream msg;
        msg << "calibration gate failed: numeric I(tau_1) differs from the closed form by " << err;
        throw NumericalError(msg.str());
    }
    return err;
}

namespace {

ScalingPoint evaluate_point(double g, double G, double beta, int N, double K, cplx xi, FiniteBetaModel model,
                            const ScalingOptions& opts) {
    const ModelParams p = ModelParams::from_g(g, beta, G, uniform_weights(N, K));
    ScalingPoint pt;
    pt.beta = beta;
    pt.N = N;
    pt.K = K;
    pt.xi = xi;
    pt.tau = revival_time(alpha_prime(p), G, 1);
    const auto r = finite_beta_inverted_variance(p, xi, pt.tau, model, opts);
    pt.I_beta = r.I_g;
    pt.I_ideal = ideal_inverted_variance_g(p, xi);
    pt.ratio = pt.I_beta / pt.I_ideal;
    pt.meanX = r.meanX;
    pt.varX = r.varX;
    return pt;
}

}  // namespace

ScalingRun ratio_vs_beta(double g, double G, std::span<const double> betas, std::span<const ScalingVariant> variants,
                         FiniteBetaModel model, const ScalingOptions& opts) {
    if (!(g < 1.0)) throw PhaseDomainError("ratio sweeps use the normal-phase protocol (g < 1)");
    ScalingRun run;
    run.g = g;
    run.G = G;
    run.axis = "beta";
    run.model = model;
    for (const auto& v : variants) {
        const ModelParams ref = ModelParams::from_g(g, betas.empty() ? 1.0 : betas.front(), G, uniform_weights(v.N, v.K));
        run.calibration_error = std::max(run.calibration_error, calibration_gate(ref, v.xi, opts.calibration_tol));
    }
    run.points.resize(betas.size() * variants.size());
    parallel_for(run.points.size(), opts.threads, [&](std::size_t i) {
        const auto& v = variants[i / betas.size()];
        const double beta = betas[i % betas.size()];
        run.points[i] = evaluate_point(g, G, beta, v.N, v.K, v.xi, model, opts);
    });
    return run;
}

ScalingRun ratio_vs_N(double g, double G, cplx xi, std::span<const int> Ns, std::span<const double> betas,
                      double K_per_qubit, const ScalingOptions& opts) {
    if (!(g < 1.0)) throw PhaseDomainError("ratio sweeps use the normal-phase protocol (g < 1)");
    ScalingRun run;
    run.g = g;
    run.G = G;
    run.axis = "N";
    run.model = FiniteBetaModel::hp;
    if (!Ns.empty()) {
        const ModelParams ref = ModelParams::from_g(g, 1.0, G, uniform_weights(Ns.front(), K_per_qubit * Ns.front()));
        run.calibration_error = calibration_gate(ref, xi, opts.calibration_tol);
    }
    run.points.resize(Ns.size() * betas.size());
    parallel_for(run.points.size(), opts.threads, [&](std::size_t i) {
        const double beta = betas[i / Ns.size()];
        const int N = Ns[i % Ns.size()];
        run.points[i] = evaluate_point(g, G, beta, N, K_per_qubit * N, xi, FiniteBetaModel::hp, opts);
    });
    return run;
}

std::vector<CorrectionRow> quartic_correction_effect(const ModelParams& p, CorrectionObservable observable,
                                                     std::span<const double> Ks, int fock_cutoff, cplx xi,
                                                     const ScalingOptions& opts) {
    if (!(p.g() < 1.0)) throw PhaseDomainError("quartic correction applies in the normal phase");
    std::vector<CorrectionRow> rows(Ks.size());
    parallel_for(Ks.size(), opts.threads, [&](std::size_t i) {
        const double K = Ks[i];
        const ModelParams q = ModelParams::from_g(p.g(), p.Omega(), p.G(), uniform_weights(p.n_qubits(), K), p.omega());
        CorrectionRow row{K, 0.0, 0.0, 0.0};
        switch (observable) {
            case CorrectionObservable::ground_energy: {
                row.uncorrected = phase_quantities(q).E_ground;
                const SpaceSpec s = SpaceSpec::bosonic(fock_cutoff);
                row.corrected = eig_lowest_sector(corrected_normal_effective(q, s), +1, 1).eigenvalues[0];
                break;
            }
            case CorrectionObservable::metric_ll: {
                row.uncorrected = metric_components(q).g_ll;
                MetricRequest req(q);
                req.model = MetricModel::corrected;
                req.fock_cutoff = fock_cutoff;
                row.corrected = metric_sum_over_states(req).g_ll;
                break;
            }
            case CorrectionObservable::inverted_variance: {
                row.uncorrected = ideal_inverted_variance_g(q, xi);
                ScalingOptions o = opts;
                o.fock_cutoff = fock_cutoff;
                const double tau = revival_time(alpha_prime(q), q.G(), 1);
                row.corrected = finite_beta_inverted_variance(q, xi, tau, FiniteBetaModel::corrected, o).I_g;
                break;
            }
        }
        row.difference = std::abs(row.corrected - row.uncorrected);
        rows[i] = row;
    });
    return rows;
}

}  // namespace dtc

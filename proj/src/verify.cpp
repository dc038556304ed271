// verify.cpp — Oracle suites behind `dtc verify`

#include "dtc/experiment.hpp"

#include "dtc/analytic.hpp"
#include "dtc/geometry.hpp"
#include "dtc/metrology.hpp"
#include "dtc/scaling.hpp"
#include "dtc/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

namespace dtc {

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::format() const {
    std::string out = "suite " + suite + "\n";
    for (const auto& c : checks) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "  %-4s %-66s %.3e %s %.3g\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                      c.measured, c.relation.c_str(), c.threshold);
        out += buf;
    }
    out += passed() ? "suite passed\n" : "suite FAILED\n";
    return out;
}

namespace {

CheckResult below(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, "<", measured < threshold};
}

CheckResult above(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, ">", measured > threshold};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ---------------------------------------------------------------- operators

std::vector<CheckResult> operators_suite() {
    std::vector<CheckResult> out;
    const SpaceSpec b = SpaceSpec::bosonic(64);
    const auto ccr = commutator(annihilation(b), creation(b)) - TruncatedOperator::identity(b);
    out.push_back(below("[a, a+] - 1 on the interior (cutoff 64)", restrict_to_fock_levels(ccr, 60).cwiseAbs().maxCoeff(), 1e-10));

    const ModelParams p = ModelParams::from_g(0.8, 10.0, 0.1, 3, 2.5);
    const SpaceSpec s = SpaceSpec::with_qubits(24, 3);
    const auto H = full_hamiltonian(p, s);
    out.push_back(below("[parity, H] (N=3, G=0.1)", commutator(parity(s), H).max_abs(), 1e-12));
    out.push_back(above("[excitation number, H] with G=0.1", commutator(excitation_number(s), H).max_abs(), 1e-6));
    const ModelParams p0 = ModelParams::from_g(0.8, 10.0, 0.0, 3, 2.5);
    out.push_back(below("[excitation number, H] with G=0", commutator(excitation_number(s), full_hamiltonian(p0, s)).max_abs(), 1e-12));
    out.push_back(below("hermiticity of H (N=3)", H.hermiticity_error(), 1e-12));

    // N = 1: the HP form and the two-level model share their spectrum.
    const ModelParams p1 = ModelParams::from_g(0.9, 20.0, 0.1, 1, 1.0);
    const Eigen::VectorXd e_full =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(full_hamiltonian(p1, SpaceSpec::with_qubits(40, 1)).dense_real()).eigenvalues();
    const Eigen::VectorXd e_hp = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                     hp_hamiltonian(p1, SpaceSpec::holstein_primakoff(40, 1)).dense_real()).eigenvalues();
    out.push_back(below("HP vs two-level spectrum at N=1", (e_full - e_hp).cwiseAbs().maxCoeff(), 1e-10));

    for (double g : {0.96, 1.2}) {
        const auto rep = operator_identity_check(ModelParams::from_g(g, 20.0, 0.1, 1, 1.0), 64, 1e-10);
        char tag[32];
        std::snprintf(tag, sizeof tag, " (g=%.2f)", g);
        out.push_back(below(std::string("A = -4G(XP+PX) residual") + tag, rep.residual_A, 1e-10));
        out.push_back(below(std::string("B residual") + tag, rep.residual_B, 1e-10));
        out.push_back(below(std::string("[H,[H,[H0',H1']]] = Delta [H0',H1'] residual") + tag, rep.residual_nested, 1e-10));
        out.push_back(below(std::string("[H,Lambda] = sqrt(Delta) Lambda residual") + tag, rep.residual_lambda, 1e-10));
    }
    return out;
}

// ---------------------------------------------------------------- phases

std::vector<CheckResult> phases_suite() {
    std::vector<CheckResult> out;
    for (auto [N, K] : {std::pair{5, 4.5}, std::pair{20, 17.3}}) {
        const ModelParams base = ModelParams::from_g(0.5, 20.0, 0.1, N, K);
        char tag[48];
        std::snprintf(tag, sizeof tag, " (N=%d, K=%.1f)", N, K);
        const double d = 2e-8;  // just outside the critical window; the O(d²) physical difference is ~1e-13
        const auto lo = ground_energy_point(base, 1.0 - d, EnergyBranch::approximate);
        const auto hi = ground_energy_point(base, 1.0 + d, EnergyBranch::approximate);
        out.push_back(below(std::string("E_G branch mismatch at g=1") + tag, std::abs(hi.E - lo.E), 1e-12));

        auto jump = [&](double delta) {
            return ground_energy_point(base, 1.0 + delta, EnergyBranch::approximate).d2E -
                   ground_energy_point(base, 1.0 - delta, EnergyBranch::approximate).d2E;
        };
        const double J = 2.0 * jump(5e-7) - jump(1e-6);
        out.push_back(below(std::string("d2E_G jump vs -2 K Omega (relative)") + tag, rel(J, -2.0 * K * 20.0), 1e-8));

        double worst = 0.0;
        for (double g : {0.5, 0.7, 0.9, 0.97, 1.03, 1.1, 1.3, 1.5}) {
            for (auto branch : {EnergyBranch::full, EnergyBranch::approximate}) {
                const double fd = ground_energy_d2_fd(base, g, branch);
                const double exact = ground_energy_point(base, g, branch).d2E;
                worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
            }
        }
        out.push_back(below(std::string("d2E_G closed form vs finite differences") + tag, worst, 1e-8));
    }

    const ModelParams sw = ModelParams::from_g(0.5, 10.0, 0.1, 2, 2.0);
    SpectralOptions so;
    so.fock_cutoff = 128;
    const std::vector<double> betas{10.0, 30.0, 100.0};
    const auto energy = spectral_agreement(sw, betas, SpectralObservable::ground_energy, so);
    const bool monotone = energy[0].abs_error > energy[1].abs_error && energy[1].abs_error > energy[2].abs_error;
    out.push_back(below("non-monotone |E_full - E_np| over beta=10,30,100 (0 = decreasing)", monotone ? 0.0 : 1.0, 0.5));
    const std::vector<double> b100{100.0};
    const auto gap = spectral_agreement(sw, b100, SpectralObservable::gap, so);
    out.push_back(below("gap error vs epsilon_np at beta=100 (relative)", gap[0].abs_error / std::abs(gap[0].effective), 0.05));
    out.push_back(below("spectral truncation warnings", static_cast<double>(std::count_if(energy.begin(), energy.end(),
                                                                                              [](const SpectralRow& r) { return r.truncation_warning; })),
                        0.5));
    return out;
}

// ---------------------------------------------------------------- geometry

std::vector<CheckResult> geometry_suite() {
    std::vector<CheckResult> out;
    for (auto [N, K] : {std::pair{5, 4.5}, std::pair{20, 17.3}}) {
        double sos = 0.0, fd = 0.0;
        for (double g : {0.5, 0.9, 0.95, 1.05, 1.2, 1.5}) {
            const ModelParams p = ModelParams::from_g(g, 20.0, 0.1, N, K);
            const auto closed = metric_components(p);
            MetricRequest req(p);
            req.model = g < 1.0 ? MetricModel::normal_effective : MetricModel::superradiant_effective;
            req.engine = MetricEngine::sum_over_states;
            const auto a = metric_sum_over_states(req);
            req.engine = MetricEngine::overlap_fd;
            const auto b = metric_overlap_fd(req);
            const double scale = std::max({std::abs(closed.g_ll), std::abs(closed.g_OO), std::abs(closed.g_lO)});
            auto worst = [&](const MetricTensor& m) {
                return std::max({std::abs(m.g_ll - closed.g_ll) / std::abs(closed.g_ll),
                                 std::abs(m.g_OO - closed.g_OO) / std::abs(closed.g_OO),
                                 std::abs(m.g_lO - closed.g_lO) / scale});
            };
            sos = std::max(sos, worst(a));
            fd = std::max(fd, worst(b));
        }
        char tag[48];
        std::snprintf(tag, sizeof tag, " (N=%d, K=%.1f)", N, K);
        out.push_back(below(std::string("closed form vs sum-over-states") + tag, sos, 1e-4));
        out.push_back(below(std::string("closed form vs overlap finite differences") + tag, fd, 1e-4));
    }
    double berry = 0.0;
    for (double g : {0.6, 0.95, 1.1}) {
        MetricRequest req(ModelParams::from_g(g, 20.0, 0.1, 5, 4.5));
        req.model = g < 1.0 ? MetricModel::normal_effective : MetricModel::superradiant_effective;
        berry = std::max(berry, std::abs(berry_curvature_fd(req)));
    }
    {
        MetricRequest req(ModelParams::from_g(0.5, 8.0, 0.1, 2, 2.0));
        req.model = MetricModel::full;
        req.fock_cutoff = 24;
        berry = std::max(berry, std::abs(berry_curvature_fd(req)));
    }
    out.push_back(below("max |Berry curvature| (effective and full models)", berry, 1e-8));

    MetricRequest full(ModelParams::from_g(0.5, 10.0, 0.1, 2, 2.0));
    full.model = MetricModel::full;
    full.fock_cutoff = 32;
    const auto a = metric_sum_over_states(full);
    full.engine = MetricEngine::overlap_fd;
    const auto b = metric_overlap_fd(full);
    out.push_back(below("full model: sum-over-states vs overlap (g_ll, relative)", rel(b.g_ll, a.g_ll), 1e-4));
    return out;
}

// ---------------------------------------------------------------- metrology

std::vector<CheckResult> metrology_suite() {
    std::vector<CheckResult> out;
    const cplx xi(0.0, 3.0);
    int violations = 0;
    for (double g : {0.90, 0.92, 0.94, 0.96, 0.98}) {
        const ModelParams p = ModelParams::from_g(g, 20.0, 0.1, 1, 1.0);
        const double tau = revival_time(alpha_prime(p), p.G(), 1);
        for (int k = 1; k <= 10; ++k) {
            const double t = 2.0 * tau * k / 10.0;
            const double I = inverted_variance_numeric(p, xi, t);
            const double F = qfi_numeric(p, xi, t);
            if (I > F * (1.0 + 1e-6)) ++violations;
        }
    }
    out.push_back(below("Cramer-Rao violations I > F over a 50-point (g, t) grid", violations, 0.5));

    const ModelParams p = ModelParams::from_g(0.96, 20.0, 0.1, 1, 1.0);
    const double a = alpha_prime(p);
    const double tau = revival_time(a, p.G(), 1);
    SensingOptions gen;
    gen.method = QfiMethod::generator;
    SensingOptions fock;
    fock.method = QfiMethod::fock;
    const double Fg = qfi_numeric(a, p.G(), xi, tau / 2.0);
    out.push_back(below("QFI: states vs generator variance at tau_1/2 (relative)", rel(qfi_numeric(a, p.G(), xi, tau / 2.0, gen), Fg), 1e-2));
    out.push_back(below("QFI: Gaussian vs Fock states at tau_1/2 (relative)", rel(qfi_numeric(a, p.G(), xi, tau / 2.0, fock), Fg), 1e-2));

    const auto mg = quadrature_moments(a, p.G(), xi, tau, QfiMethod::gaussian);
    const auto mf = quadrature_moments(a, p.G(), xi, tau, QfiMethod::fock);
    out.push_back(below("Gaussian vs Fock <X> at tau_1 (absolute)", std::abs(mg.meanX - mf.meanX), 1e-6));
    out.push_back(below("Gaussian vs Fock (dX)^2 at tau_1 (relative)", rel(mf.varX, mg.varX), 1e-6));

    const double I = inverted_variance_numeric(a, p.G(), xi, tau);
    out.push_back(below("I(tau_1) vs closed form (relative)", rel(I, inverted_variance_closed_form(a, p.G(), xi, 1)), 0.02));
    out.push_back(below("I(tau_1): xi=3i vs xi=1+3i (relative)", rel(inverted_variance_numeric(a, p.G(), cplx(1.0, 3.0), tau), I), 1e-3));

    const auto h1 = homodyne_estimate(a, p.G(), xi, tau, 200000, 7);
    const auto h2 = homodyne_estimate(a, p.G(), xi, tau, 200000, 7);
    out.push_back(below("homodyne estimate: bitwise difference between equal seeds",
                        (h1.I_est == h2.I_est && h1.meanX_est == h2.meanX_est && h1.varX_est == h2.varX_est) ? 0.0 : 1.0, 0.5));
    out.push_back(below("homodyne I at 2e5 shots vs deterministic (relative)", rel(h1.I_est, I), 0.05));
    return out;
}

// ---------------------------------------------------------------- scaling

std::vector<CheckResult> scaling_suite() {
    std::vector<CheckResult> out;
    const ModelParams ideal = ModelParams::from_g(0.96, 20.0, 0.1, 1, 1.0);
    out.push_back(below("calibration gate |I_numeric/I_closed - 1|", calibration_gate(ideal, cplx(0.0, 1.0), 0.02), 0.02));

    const ModelParams p1 = ModelParams::from_g(0.96, 20.0, 0.1, 1, 1.0);
    const double tau = revival_time(alpha_prime(p1), p1.G(), 1);
    ScalingOptions so;
    so.fock_cutoff = 60;
    const auto full = finite_beta_inverted_variance(p1, cplx(0.0, 1.0), tau, FiniteBetaModel::full, so);
    const auto hp = finite_beta_inverted_variance(p1, cplx(0.0, 1.0), tau, FiniteBetaModel::hp, so);
    out.push_back(below("HP vs two-level model I at N=1 (relative)", rel(hp.I_g, full.I_g), 1e-10));

    const std::vector<double> Ks{2.0, 4.0, 8.0, 16.0, 32.0};
    const auto rows = quartic_correction_effect(ModelParams::from_g(0.5, 30.0, 0.1, 1, 1.0),
                                                CorrectionObservable::ground_energy, Ks, 60);
    std::vector<double> diffs;
    for (const auto& r : rows) diffs.push_back(r.difference);
    out.push_back(below("quartic correction: |slope of log diff vs log K + 1|", std::abs(loglog_slope(Ks, diffs) + 1.0), 0.05));

    const std::vector<double> betas{100.0, 1000.0};
    const std::vector<ScalingVariant> variants{{2, 2.0, cplx(0.0, 1.0)}, {5, 5.0, cplx(0.0, 1.0)}, {2, 2.0, cplx(0.0, 2.0)}};
    const auto run = ratio_vs_beta(0.96, 0.1, betas, variants);
    const auto& pts = run.points;  // variant-major
    out.push_back(above("ratio(beta=1000) - ratio(beta=100) at N=2, xi=i", pts[1].ratio - pts[0].ratio, 0.0));
    out.push_back(above("ratio(N=5) - ratio(N=2) at beta=1000, xi=i", pts[3].ratio - pts[1].ratio, 0.0));
    out.push_back(above("ratio(xi=i) - ratio(xi=2i) at N=2, beta=1000", pts[1].ratio - pts[5].ratio, 0.0));
    double worst = 0.0;
    for (const auto& pt : pts) worst = std::max(worst, pt.ratio);
    out.push_back(below("largest ratio (must stay below 1 + 0.05)", worst, 1.05));
    return out;
}

const std::map<std::string, std::function<std::vector<CheckResult>()>>& suites() {
    static const std::map<std::string, std::function<std::vector<CheckResult>()>> m = {
        {"operators", operators_suite}, {"phases", phases_suite},   {"geometry", geometry_suite},
        {"metrology", metrology_suite}, {"scaling", scaling_suite}};
    return m;
}

}  // namespace

std::vector<std::string> verify_suite_names() { return {"operators", "phases", "geometry", "metrology", "scaling"}; }

VerifyReport verify_suite(const std::string& suite) {
    const auto it = suites().find(suite);
    if (it == suites().end()) throw ConfigError("unknown verify suite '" + suite + "'");
    return {suite, it->second()};
}

}  // namespace dtc

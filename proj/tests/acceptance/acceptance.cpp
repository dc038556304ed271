// acceptance.cpp — One pass/fail line per acceptance criterion, with measured values and runtimes

#include "dtc/analytic.hpp"
#include "dtc/geometry.hpp"
#include "dtc/metrology.hpp"
#include "dtc/scaling.hpp"
#include "dtc/spectra.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace dtc;

namespace {

struct Outcome {
    bool passed{false};
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds
    std::function<Outcome()> body;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fix(double v, int digits = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

const std::pair<int, double> kPanels[] = {{5, 4.5}, {20, 17.3}};

// 1. E_G continuous at g=1, d2E jumps by 2KΩ, symbolic and FD second derivatives agree.
Outcome kink() {
    double mismatch = 0.0, jump_sym = 0.0, jump_fd = 0.0, grid = 0.0;
    for (auto [N, K] : kPanels) {
        const ModelParams base = ModelParams::from_g(0.5, 20.0, 0.1, N, K);
        const double d = 2e-8;
        mismatch = std::max(mismatch, std::abs(ground_energy_point(base, 1.0 + d, EnergyBranch::approximate).E -
                                               ground_energy_point(base, 1.0 - d, EnergyBranch::approximate).E));
        const double target = -2.0 * K * 20.0;
        auto sym = [&](double delta) {
            return ground_energy_point(base, 1.0 + delta, EnergyBranch::approximate).d2E -
                   ground_energy_point(base, 1.0 - delta, EnergyBranch::approximate).d2E;
        };
        auto fd = [&](double delta) {
            return ground_energy_d2_fd(base, 1.0 + delta, EnergyBranch::approximate) -
                   ground_energy_d2_fd(base, 1.0 - delta, EnergyBranch::approximate);
        };
        jump_sym = std::max(jump_sym, rel(2.0 * sym(5e-7) - sym(1e-6), target));
        // The jump carries O(δ) and O(δ²) offsets; eliminate both.
        jump_fd = std::max(jump_fd, rel((8.0 * fd(2.5e-4) - 6.0 * fd(5e-4) + fd(1e-3)) / 3.0, target));
        for (int i = 0; i < 200; ++i) {
            const double g = 0.5 + i / 199.0;
            for (auto b : {EnergyBranch::full, EnergyBranch::approximate}) {
                const double exact = ground_energy_point(base, g, b).d2E;
                const double f = ground_energy_d2_fd(base, g, b);
                if (std::isnan(f)) continue;
                grid = std::max(grid, std::abs(f - exact) / std::max(1.0, std::abs(exact)));
            }
        }
    }
    const bool ok = mismatch < 1e-12 && jump_sym < 1e-8 && jump_fd < 1e-8 && grid < 1e-8;
    return {ok, "branch mismatch " + sci(mismatch) + " (<1e-12), jump rel err symbolic " + sci(jump_sym) + " / fd " +
                    sci(jump_fd) + " (<1e-8), fd vs closed-form d2E over fig1 grid " + sci(grid) + " (<1e-8)"};
}

// 2. Closed form vs sum-over-states vs overlap FD within 1%; g_ll exponent −2 ± 0.05 on both sides.
Outcome metric_equivalence() {
    double worst = 0.0, worst_slope = 0.0;
    std::ostringstream slopes;
    for (auto [N, K] : kPanels) {
        for (int side : {-1, +1}) {
            for (int i = 0; i < 10; ++i) {
                const double g = side < 0 ? 0.5 + 0.05 * i : 1.05 + 0.05 * i;
                const ModelParams p = ModelParams::from_g(g, 20.0, 0.1, N, K);
                const auto closed = metric_components(p);
                MetricRequest req(p);
                req.model = side < 0 ? MetricModel::normal_effective : MetricModel::superradiant_effective;
                req.fock_cutoff = 200;
                const auto sos = metric_sum_over_states(req);
                const auto fd = metric_overlap_fd(req);
                for (const auto& m : {sos, fd}) {
                    worst = std::max({worst, rel(m.g_ll, closed.g_ll), rel(m.g_OO, closed.g_OO),
                                      rel(m.g_lO, closed.g_lO)});
                }
            }
            auto slope = [&](double lo) {
                std::vector<double> dist, gll;
                for (int i = 0; i <= 8; ++i) {
                    const double d = lo * std::pow(100.0, i / 8.0);
                    dist.push_back(d);
                    gll.push_back(metric_components(ModelParams::from_g(1.0 + side * d, 20.0, 0.1, N, K)).g_ll);
                }
                return loglog_slope(dist, gll);
            };
            const double s = slope(1e-4);
            worst_slope = std::max(worst_slope, std::abs(s + 2.0));
            // Informational: the superradiant side has a subleading |1-g|^-1 term that fades closer in.
            slopes << " N=" << N << (side < 0 ? " g<1 " : " g>1 ") << fix(s, 3) << " ([1e-7,1e-5]: " << fix(slope(1e-7), 4)
                   << ");";
        }
    }
    const bool ok = worst < 0.01 && worst_slope <= 0.05;
    return {ok, "max engine deviation over g in [0.5,0.95]u[1.05,1.5] " + sci(worst) +
                    " (<1e-2); g_ll exponent on |1-g| in [1e-4,1e-2]:" + slopes.str() + " worst |slope+2| " +
                    fix(worst_slope, 3) + " (<=0.05)"};
}

// 3. Operator identities at cutoff 64.
Outcome identities() {
    double worst = 0.0;
    for (double g : {0.5, 0.96, 1.05, 1.5}) {
        const auto r = operator_identity_check(ModelParams::from_g(g, 20.0, 0.1, 1, 1.0), 64, 1e-10);
        worst = std::max(worst, r.max_residual());
    }
    return {worst < 1e-10, "max interior residual (A, B, nested, Lambda) " + sci(worst) + " (<1e-10)"};
}

// 4. QFI engines vs the closed form, and the Cramér-Rao bound on a 50-point grid.
Outcome qfi_consistency() {
    const cplx xi(0.0, 3.0);
    const ModelParams p = ModelParams::from_g(0.96, 20.0, 0.1, 1, 1.0);
    const double a = alpha_prime(p), G = p.G();
    const double tau = revival_time(a, G, 1);
    const double var_p2 = coherent_var_p2(xi);
    double engines = 0.0, closed = 0.0;
    std::ostringstream vals;
    SensingOptions gen;
    gen.method = QfiMethod::generator;
    for (double t : {tau / 2.0, tau}) {
        const double F_states = qfi_numeric(a, G, xi, t);
        const double F_gen = qfi_numeric(a, G, xi, t, gen);
        const double F_eq = qfi_closed_form(a, G, t, var_p2);
        engines = std::max(engines, rel(F_gen, F_states));
        closed = std::max(closed, rel(F_eq, F_states));
        vals << " t=" << fix(t / tau, 1) << "tau: F_states " << fix(F_states, 1) << ", F_generator " << fix(F_gen, 1)
             << ", F_closed " << fix(F_eq, 1) << ";";
    }
    int violations = 0;
    for (int i = 0; i < 5; ++i) {
        const ModelParams q = ModelParams::from_g(0.90 + 0.02 * i, 20.0, 0.1, 1, 1.0);
        const double tq = revival_time(alpha_prime(q), G, 1);
        for (int k = 1; k <= 10; ++k) {
            const double t = 2.0 * tq * k / 10.0;
            if (inverted_variance_numeric(q, xi, t) > qfi_numeric(q, xi, t) * (1.0 + 1e-6)) ++violations;
        }
    }
    const bool ok = engines < 0.02 && closed < 0.02 && violations == 0;
    return {ok, "states vs generator " + sci(engines) + ", closed form vs states " + sci(closed) + " (<2e-2);" +
                    vals.str() + " Cramer-Rao violations " + std::to_string(violations) + "/50"};
}

// 5. I(τ₁) vs closed form, ξ_r invariance, α′^-3 law.
Outcome inverted_variance() {
    const cplx xi(0.0, 3.0);
    const double G = 0.1;
    const ModelParams p = ModelParams::from_g(0.96, 20.0, G, 1, 1.0);
    const double a = alpha_prime(p);
    const double tau = revival_time(a, G, 1);
    const double I = inverted_variance_numeric(a, G, xi, tau);
    const double err = rel(I, inverted_variance_closed_form(a, G, xi, 1));
    const double shift = rel(inverted_variance_numeric(a, G, cplx(1.0, 3.0), tau), I);
    std::vector<double> alphas, Is;
    for (int i = 0; i <= 8; ++i) {
        const double ap = 1e-4 * std::pow(100.0, i / 8.0);
        alphas.push_back(ap);
        Is.push_back(inverted_variance_numeric(ap, G, xi, revival_time(ap, G, 1)));
    }
    const double slope = loglog_slope(alphas, Is);
    const bool ok = err < 0.02 && shift < 1e-3 && std::abs(slope + 3.0) <= 0.1;
    return {ok, "I(tau_1) vs closed form " + sci(err) + " (<2e-2), xi=3i vs 1+3i " + sci(shift) +
                    " (<1e-3), slope vs alpha' on [1e-4,1e-2] " + fix(slope, 4) + " (-3 +- 0.1)"};
}

// 6. Schrieffer-Wolff validity at g=0.5, N=2.
Outcome schrieffer_wolff() {
    const ModelParams p = ModelParams::from_g(0.5, 10.0, 0.1, 2, 2.0);
    SpectralOptions o;
    o.fock_cutoff = 128;
    const std::vector<double> betas{10.0, 30.0, 100.0};
    const auto e = spectral_agreement(p, betas, SpectralObservable::ground_energy, o);
    const std::vector<double> b100{100.0};
    const auto gap = spectral_agreement(p, b100, SpectralObservable::gap, o);
    const bool mono = e[0].abs_error > e[1].abs_error && e[1].abs_error > e[2].abs_error;
    const double gap_err = gap[0].abs_error / std::abs(gap[0].effective);
    return {mono && gap_err < 0.05 && !gap[0].truncation_warning,
            "|E_full - E_np| at beta=10/30/100: " + sci(e[0].abs_error) + "/" + sci(e[1].abs_error) + "/" +
                sci(e[2].abs_error) + (mono ? " (decreasing)" : " (NOT decreasing)") + ", gap error at beta=100 " +
                sci(gap_err) + " (<5e-2)"};
}

// 7. Ratio trends, N=1 anchor, and the figs/fig6 grid runtime.
Outcome scaling_trends() {
    const double g = 0.96, G = 0.1;
    const std::vector<double> betas{1e2, 1e3, 1e4};
    const std::vector<ScalingVariant> v{{5, 4.5, cplx(0.0, 1.0)}, {20, 17.3, cplx(0.0, 1.0)},
                                        {5, 4.5, cplx(0.0, 2.0)}, {5, 4.5, cplx(0.0, 3.0)}};
    ScalingOptions so;
    so.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const auto run = ratio_vs_beta(g, G, betas, v, FiniteBetaModel::hp, so);
    auto r = [&](std::size_t var, std::size_t b) { return run.points[var * betas.size() + b].ratio; };
    bool beta_up = true, n_up = true, xi_down = true;
    for (std::size_t var = 0; var < v.size(); ++var)
        for (std::size_t b = 1; b < betas.size(); ++b) beta_up = beta_up && r(var, b) > r(var, b - 1);
    for (std::size_t b = 0; b < betas.size(); ++b) {
        n_up = n_up && r(1, b) > r(0, b);
        xi_down = xi_down && r(0, b) > r(2, b) && r(2, b) > r(3, b);
    }

    const ModelParams p1 = ModelParams::from_g(g, 20.0, G, 1, 1.0);
    const double tau = revival_time(alpha_prime(p1), G, 1);
    ScalingOptions fixed;
    fixed.fock_cutoff = 60;
    const double anchor = rel(finite_beta_inverted_variance(p1, cplx(0.0, 1.0), tau, FiniteBetaModel::hp, fixed).I_g,
                              finite_beta_inverted_variance(p1, cplx(0.0, 1.0), tau, FiniteBetaModel::full, fixed).I_g);

    std::vector<int> Ns;
    for (int n = 1; n <= 20; ++n) Ns.push_back(n);
    const std::vector<double> fig6_betas{10.0, 20.0, 40.0};
    const auto t0 = std::chrono::steady_clock::now();
    const auto fig6 = ratio_vs_N(g, G, cplx(0.0, 1.0), Ns, fig6_betas, 1.0, so);
    const double fig6_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream drops;
    bool fig6_up = true;
    for (std::size_t b = 0; b < fig6_betas.size(); ++b)
        for (std::size_t i = 1; i < Ns.size(); ++i) {
            const double lo = fig6.points[b * Ns.size() + i - 1].ratio, hi = fig6.points[b * Ns.size() + i].ratio;
            if (hi > lo) continue;
            fig6_up = false;
            drops << " [beta=" << fig6_betas[b] << " N=" << Ns[i - 1] << "->" << Ns[i] << ": " << sci(lo) << "->"
                  << sci(hi) << "]";
        }
    const double largest = fig6.points.back().ratio;

    const bool ok = beta_up && n_up && xi_down && anchor < 1e-10 && fig6_up && fig6_time < 600.0;
    std::ostringstream d;
    d << "beta=1e2..1e4: increases with beta " << (beta_up ? "yes" : "NO") << ", with N " << (n_up ? "yes" : "NO")
      << ", as |xi| decreases " << (xi_down ? "yes" : "NO") << " (ratios N=5,xi=i: " << fix(r(0, 0)) << "/"
      << fix(r(0, 1)) << "/" << fix(r(0, 2)) << "); HP N=1 anchor " << sci(anchor) << " (<1e-10); fig6 grid "
      << fix(fig6_time, 1) << " s on " << so.threads << " thread(s) (<600), ratio increasing in N for every beta "
      << (fig6_up ? "yes" : "NO") << drops.str() << ", ratio at N=20, beta=40 " << fix(largest);
    return {ok, d.str()};
}

// 8. Homodyne pipeline.
Outcome homodyne() {
    const cplx xi(0.0, 3.0);
    const ModelParams p = ModelParams::from_g(0.96, 20.0, 0.1, 1, 1.0);
    const double a = alpha_prime(p);
    const double tau = revival_time(a, p.G(), 1);
    const double I = inverted_variance_numeric(a, p.G(), xi, tau);
    const auto h1 = homodyne_estimate(a, p.G(), xi, tau, 1000000, 2024);
    const auto h2 = homodyne_estimate(a, p.G(), xi, tau, 1000000, 2024);
    const bool same = h1.I_est == h2.I_est && h1.meanX_est == h2.meanX_est && h1.varX_est == h2.varX_est;
    const double err = rel(h1.I_est, I);
    return {err < 0.05 && same, "I_est at 1e6 shots vs deterministic " + sci(err) + " (<5e-2), seed-reproducible " +
                                    (same ? "bitwise" : "NO")};
}

// 9. Symmetries and Berry curvature.
Outcome symmetry() {
    double parity_err = 0.0, u1_off = 0.0, u1_on = 1e300;
    for (double g : {0.5, 1.3}) {
        const SpaceSpec s = SpaceSpec::with_qubits(20, 3);
        const auto H = full_hamiltonian(ModelParams::from_g(g, 10.0, 0.1, 3, 2.5), s);
        parity_err = std::max(parity_err, commutator(parity(s), H).max_abs());
        u1_on = std::min(u1_on, commutator(excitation_number(s), H).max_abs());
        const auto H0 = full_hamiltonian(ModelParams::from_g(g, 10.0, 0.0, 3, 2.5), s);
        u1_off = std::max(u1_off, commutator(excitation_number(s), H0).max_abs());
    }
    double berry = 0.0;
    for (double g : {0.6, 0.9, 1.1, 1.4}) {
        MetricRequest req(ModelParams::from_g(g, 20.0, 0.1, 5, 4.5));
        req.model = g < 1.0 ? MetricModel::normal_effective : MetricModel::superradiant_effective;
        berry = std::max(berry, std::abs(berry_curvature_fd(req)));
        MetricRequest full(ModelParams::from_g(g, 8.0, 0.1, 2, 2.0));
        full.model = MetricModel::full;
        full.fock_cutoff = 24;
        berry = std::max(berry, std::abs(berry_curvature_fd(full)));
    }
    const bool ok = parity_err < 1e-12 && u1_off < 1e-12 && u1_on > 1e-6 && berry < 1e-8;
    return {ok, "||[Pi,H]|| " + sci(parity_err) + " (<1e-12), ||[N_exc,H]|| G=0: " + sci(u1_off) + " / G=0.1: " +
                    sci(u1_on) + ", max |F| " + sci(berry) + " (<1e-8)"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "phase-transition kink", 1.0, kink},
        {2, "metric engine equivalence", 120.0, metric_equivalence},
        {3, "operator identities", 5.0, identities},
        {4, "QFI consistency", 60.0, qfi_consistency},
        {5, "inverted variance", 60.0, inverted_variance},
        {6, "Schrieffer-Wolff validity", 120.0, schrieffer_wolff},
        {7, "scaling trends", 600.0, scaling_trends},
        {8, "homodyne pipeline", 60.0, homodyne},
        {9, "symmetry suite", 10.0, symmetry},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = dt < c.time_limit;
        const bool pass = o.passed && in_time;
        if (!pass) ++failed;
        std::printf("criterion %d %s: %s | %s | runtime %.2f s (limit %.0f s%s)\n", c.id, pass ? "PASS" : "FAIL",
                    c.name.c_str(), o.detail.c_str(), dt, c.time_limit, in_time ? "" : ", EXCEEDED");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

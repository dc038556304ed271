// analytic.cpp — Closed-form phase quantities, metric components, and sensing formulas

#include "dtc/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dtc {

namespace {

void require_stable(const ModelParams& p) {
    if (!(p.omega_eff() > 0.0))
        throw std::domain_error("unstable squeezing: requires omega > 2G");
}

double sq(double x) { return x * x; }

// √u and its first two derivatives along g, given u, u′, u″.
struct RootDerivs {
    double value, d2;
};
RootDerivs root_derivs(double u, double du, double d2u) {
    const double s = std::sqrt(u);
    return {s, d2u / (2.0 * s) - du * du / (4.0 * u * s)};
}

// E_G alone, generic in the scalar type so finite differences can run in extended precision.
template <class T>
T energy_value(T KO, T c, T G, T g, EnergyBranch branch) {
    const T g2 = g * g;
    if (g < T(1)) {
        if (branch == EnergyBranch::approximate) return -KO / 2;
        const T a = c * (1 - g2) / 2;
        return std::sqrt(a * (a + 2 * G)) - (a + G) - KO / 2;
    }
    const T constant = KO * (g2 + 1 / g2) / 4;
    if (branch == EnergyBranch::approximate) return -constant;
    const T a = c * (3 * g2 + 1) * (g2 - 1) / (8 * g2 * g2);
    return std::sqrt(a * (a + 2 * G)) - (a + G) - constant;
}

}  // namespace

std::string to_string(Phase p) {
    switch (p) {
        case Phase::normal: return "normal";
        case Phase::superradiant: return "superradiant";
        case Phase::critical: return "critical";
    }
    return "unknown";
}

Phase phase_of(const ModelParams& p) {
    const double d = p.g() - 1.0;
    if (std::abs(d) < kCriticalWindow) return Phase::critical;
    return d < 0.0 ? Phase::normal : Phase::superradiant;
}

PhaseQuantities phase_quantities(const ModelParams& p) {
    require_stable(p);
    PhaseQuantities q;
    q.phase = phase_of(p);
    const double G = p.G();
    const double KO = p.K() * p.Omega();

    if (q.phase == Phase::critical) {
        q.alpha = 0.0;
        q.epsilon = 0.0;
        q.r = G > 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
        q.E_ground = -G - KO / 2.0;
        return q;
    }

    const bool normal = q.phase == Phase::normal;
    q.alpha = normal ? alpha_normal(p) : alpha_superradiant(p);
    q.epsilon = 2.0 * std::sqrt(q.alpha * (q.alpha + 2.0 * G));
    q.r = G > 0.0 ? 0.25 * std::log(q.alpha / (q.alpha + 2.0 * G)) : 0.0;
    const double g2 = sq(p.g());
    const double constant = normal ? KO / 2.0 : KO * (g2 + 1.0 / g2) / 4.0;
    q.E_ground = q.epsilon / 2.0 - (q.alpha + G) - constant;
    if (!normal) {
        q.alpha0 = displacement_alpha0(p);
        q.gamma_ratio = (g2 + 1.0) / (g2 - 1.0);
        q.c_plus = std::sqrt((1.0 + 1.0 / g2) / 2.0);
        q.c_minus = std::sqrt((1.0 - 1.0 / g2) / 2.0);
    }
    return q;
}

double alpha_prime(const ModelParams& p) {
    require_stable(p);
    return p.g() > 1.0 ? alpha_superradiant(p) : alpha_normal(p);
}

double dalpha_prime_dg(const ModelParams& p) {
    require_stable(p);
    const double g = p.g();
    const double c = p.omega_eff();
    if (g > 1.0) return c * (std::pow(g, -3) + std::pow(g, -5)) / 2.0;
    return -c * g;
}

EnergyPoint ground_energy_point(const ModelParams& base, double g, EnergyBranch branch) {
    require_stable(base);
    const double KO = base.K() * base.Omega();
    const double c = base.omega_eff();
    const double G = base.G();
    const double g2 = g * g;

    if (std::abs(g - 1.0) < kCriticalWindow) return {g, -KO / 2.0 - (branch == EnergyBranch::full ? G : 0.0), 0.0};

    if (g < 1.0) {
        if (branch == EnergyBranch::approximate) return {g, -KO / 2.0, 0.0};
        const double a = c * (1.0 - g2) / 2.0;
        const double da = -c * g;
        const double d2a = -c;
        const double u = a * (a + 2.0 * G);
        const double du = (2.0 * a + 2.0 * G) * da;
        const double d2u = 2.0 * da * da + (2.0 * a + 2.0 * G) * d2a;
        const auto root = root_derivs(u, du, d2u);
        return {g, root.value - (a + G) - KO / 2.0, root.d2 - d2a};
    }

    const double constant = KO * (g2 + 1.0 / g2) / 4.0;
    const double d2constant = KO * (2.0 + 6.0 / (g2 * g2)) / 4.0;
    if (branch == EnergyBranch::approximate) return {g, -constant, -d2constant};
    const double a = c * (3.0 * g2 + 1.0) * (g2 - 1.0) / (8.0 * g2 * g2);
    const double da = c * (std::pow(g, -3) + std::pow(g, -5)) / 2.0;
    const double d2a = -c * (3.0 * std::pow(g, -4) + 5.0 * std::pow(g, -6)) / 2.0;
    const double u = a * (a + 2.0 * G);
    const double du = (2.0 * a + 2.0 * G) * da;
    const double d2u = 2.0 * da * da + (2.0 * a + 2.0 * G) * d2a;
    const auto root = root_derivs(u, du, d2u);
    return {g, root.value - (a + G) - constant, root.d2 - d2a - d2constant};
}

double ground_energy_d2_fd(const ModelParams& base, double g, EnergyBranch branch) {
    const double h = std::min(1e-2, std::abs(g - 1.0) / 10.0);
    if (std::abs(g - 1.0) < kCriticalWindow || g - 2.0 * h <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    require_stable(base);
    using X = long double;
    const X KO = X(base.K()) * X(base.Omega());
    const X c = base.omega_eff(), G = base.G(), gx = g;
    auto E = [&](X x) { return energy_value<X>(KO, c, G, x, branch); };
    const X e0 = E(gx);
    auto D = [&](X s) { return (E(gx + s) - 2 * e0 + E(gx - s)) / (s * s); };
    const X d1 = D(h), d2 = D(X(h) / 2), d4 = D(X(h) / 4);
    const X r1 = (4 * d2 - d1) / 3, r2 = (4 * d4 - d2) / 3;
    return static_cast<double>((16 * r2 - r1) / 15);
}

std::vector<EnergyPoint> ground_energy_curve(const ModelParams& base, std::span<const double> g_values,
                                             EnergyBranch branch) {
    std::vector<EnergyPoint> out;
    out.reserve(g_values.size());
    for (double g : g_values) out.push_back(ground_energy_point(base, g, branch));
    return out;
}

MetricComponents metric_components(const ModelParams& p) {
    require_stable(p);
    const Phase phase = phase_of(p);
    if (phase == Phase::critical) throw PhaseDomainError("metric components diverge at g = 1");

    const double c = p.omega_eff();
    const double G = p.G();
    const double g = p.g();
    const double K = p.K();
    const double O = p.Omega();
    const double N = static_cast<double>(p.n_qubits());
    MetricComponents m;

    if (phase == Phase::normal) {
        const double a = alpha_normal(p);
        const double den = sq(a) * sq(a + 2.0 * G);
        m.g_ll = c * G * G * g * g * K / (8.0 * O * den);
        m.g_OO = c * c * G * G * std::pow(g, 4) / (32.0 * O * O * den);
        m.g_lO = -std::pow(c, 1.5) * G * G * std::pow(g, 3) * std::sqrt(K) / (16.0 * std::pow(O, 1.5) * den);
        return m;
    }

    const double a = alpha_superradiant(p);
    const double den = sq(a) * sq(a + 2.0 * G);
    const double s = sq(1.0 + g * g);
    const double q = (1.0 + 3.0 * g * g) / ((1.0 + g * g) * a);
    m.g_ll = c * G * G * s * K / (32.0 * std::pow(g, 10) * O * den) + q * N * K / (8.0 * std::pow(g, 6) * O);
    m.g_OO = c * c * G * G * s / (128.0 * std::pow(g, 8) * O * O * den) + c * q * N / (32.0 * std::pow(g, 4) * O * O);
    m.g_lO = -std::pow(c, 1.5) * G * G * s * std::sqrt(K) / (64.0 * std::pow(g, 9) * std::pow(O, 1.5) * den) -
             std::sqrt(c) * q * N * std::sqrt(K) / (16.0 * std::pow(g, 5) * std::pow(O, 1.5));
    return m;
}

double sensing_delta(double alpha_prime, double G) { return 16.0 * alpha_prime * (alpha_prime + 2.0 * G); }

namespace {
double checked_delta(double alpha_prime, double G) {
    const double d = sensing_delta(alpha_prime, G);
    if (!(d > 0.0)) throw std::domain_error("sensing formulas require Delta > 0");
    return d;
}
}  // namespace

double revival_time(double alpha_prime, double G, int n) {
    if (n < 1) throw std::invalid_argument("revival index must be >= 1");
    return 2.0 * n * std::numbers::pi / std::sqrt(checked_delta(alpha_prime, G));
}

double qfi_closed_form(double alpha_prime, double G, double t, double var_p2) {
    const double d = checked_delta(alpha_prime, G);
    const double sd = std::sqrt(d);
    const double bracket = std::sin(sd * t) - sd * t;
    return 1024.0 * G * G * sq(alpha_prime + 2.0 * G) * bracket * bracket / (d * d * d) * var_p2;
}

double qfi_closed_form(const ModelParams& p, double t, double var_p2) {
    return qfi_closed_form(alpha_prime(p), p.G(), t, var_p2);
}

// Mean sign follows the Heisenberg solution of H_α′ (dX/dt = 2(α′+2G)P).
QuadratureStats quadrature_stats_closed_form(double alpha_prime, double G, cplx xi, double t) {
    const double d = checked_delta(alpha_prime, G);
    const double sd = std::sqrt(d);
    const double c = std::cos(sd * t / 2.0);
    const double s = std::sin(sd * t / 2.0);
    const double b = alpha_prime + 2.0 * G;
    QuadratureStats out;
    out.meanX = std::sqrt(2.0) * xi.real() * c + 4.0 * std::sqrt(2.0) * xi.imag() * b / sd * s;
    out.varX = 0.5 * c * c + 8.0 * b * b / d * s * s;
    return out;
}

QuadratureStats quadrature_stats_closed_form(const ModelParams& p, cplx xi, double t) {
    return quadrature_stats_closed_form(alpha_prime(p), p.G(), xi, t);
}

double inverted_variance_closed_form(double alpha_prime, double G, cplx xi, int n) {
    const double d = checked_delta(alpha_prime, G);
    const double tau = revival_time(alpha_prime, G, n);
    return 4096.0 * sq(xi.imag()) * sq(alpha_prime + G) * sq(alpha_prime + 2.0 * G) / (d * d) * tau * tau;
}

double inverted_variance_closed_form(const ModelParams& p, cplx xi, int n) {
    return inverted_variance_closed_form(alpha_prime(p), p.G(), xi, n);
}

double coherent_var_p2(cplx xi, int cutoff) {
    const double n = std::norm(xi);
    if (cutoff <= 0) cutoff = static_cast<int>(std::ceil(4.0 * n + 12.0 * std::sqrt(n) + 40.0));
    const SpaceSpec space = SpaceSpec::bosonic(cutoff);
    const QuantumState state = coherent_state(space, xi);
    const Vector p2 = p_squared(space).apply(state.amplitudes());
    // ⟨P⁴⟩ = ‖P²ψ‖²; P² is applied exactly, and |ξ⟩ has negligible weight near the cutoff.
    const double m2 = state.amplitudes().dot(p2).real();
    const double m4 = p2.squaredNorm();
    return m4 - m2 * m2;
}

}  // namespace dtc

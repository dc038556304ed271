// spectra.hpp — Lowest eigenpairs, parity-sector ground states, and effective-model agreement

#pragma once

#include "dtc/hilbert.hpp"
#include "dtc/models.hpp"
#include "dtc/truncation.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace dtc {

// H does not commute with the parity operator.
class SymmetryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class SolverKind { automatic, dense, iterative };
std::string to_string(SolverKind k);

struct EigenOptions {
    SolverKind solver{SolverKind::automatic};
    Index dense_threshold{kDenseThreshold};
    double tol{1e-10};           // residual tolerance relative to ‖H‖
    int max_iterations{10000};   // total matrix-vector products
    int krylov_dim{0};           // 0 picks max(2k + 20, 40)
    std::uint64_t seed{0x5eed5eedULL};
};

struct EigenResult {
    std::vector<double> eigenvalues;          // ascending
    std::vector<QuantumState> eigenstates;    // gauge-fixed
    std::vector<double> residuals;            // ‖Hv − Ev‖₂
    SolverKind solver{SolverKind::dense};
    double norm_estimate{0.0};                // spectral-norm estimate of H
    int iterations{0};

    double gap(int i = 1) const { return eigenvalues.at(i) - eigenvalues.at(0); }
};

EigenResult eig_lowest(const TruncatedOperator& H, int k, const EigenOptions& opts = {});

// Lowest k eigenpairs restricted to the parity sector ±1.
EigenResult eig_lowest_sector(const TruncatedOperator& H, int sector, int k, const EigenOptions& opts = {});
QuantumState parity_resolved_ground(const TruncatedOperator& H, int sector, const EigenOptions& opts = {});

// Largest |H_ij| connecting basis states of opposite parity (zero when [H, Π] = 0).
double parity_leakage(const TruncatedOperator& H);

enum class SpectralObservable { ground_energy, gap };
std::string to_string(SpectralObservable o);
SpectralObservable parse_spectral_observable(const std::string& name);

struct SpectralOptions {
    int fock_cutoff{40};
    double truncation_tol{kTruncationTolerance};
    EigenOptions eig{};
};

struct SpectralRow {
    double beta;
    double full;
    double effective;
    double abs_error;
    bool truncation_warning;
};

// Full-model vs effective-model ground energy or gap as β = Ω/ω varies at fixed g.
// In the superradiant phase the gap is taken inside the even-parity sector.
std::vector<SpectralRow> spectral_agreement(const ModelParams& p, std::span<const double> betas,
                                            SpectralObservable observable, const SpectralOptions& opts = {});

// Full-model observable at one parameter point (used by spectral_agreement).
double full_model_observable(const ModelParams& p, SpectralObservable observable, int fock_cutoff,
                             const EigenOptions& opts = {});

}  // namespace dtc

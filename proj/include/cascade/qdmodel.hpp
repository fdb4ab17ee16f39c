// qdmodel.hpp — four-level biexciton cascade: parameters, phonon rates, Lindblad generator

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cascade/constants.hpp"

namespace cascade {

using cplx = std::complex<double>;

// Level indices of the dot. X_H sits S above X_V.
namespace level {
inline constexpr int ground = 0;
inline constexpr int exciton_v = 1;
inline constexpr int exciton_h = 2;
inline constexpr int biexciton = 3;
inline constexpr int count = 4;
} // namespace level

// kappa_ref reproduced by `cascade_discord calibrate-kappa --target 11` at the
// other defaults below (see configs/default.ini and scripts/calibrate.sh).
inline constexpr double kCalibratedKappaRef = 2.8880579e-05;

struct DotParams {
    double S = 2.5;            // fine structure splitting, µeV
    double T = 10.0;           // lattice temperature, K
    double gammaX_H = 0.625;   // X_H -> G, 1/ns
    double gammaX_V = 0.625;   // X_V -> G, 1/ns
    double gammaXX_H = 1.25;   // XX -> X_H, 1/ns
    double gammaXX_V = 1.25;   // XX -> X_V, 1/ns
    double kappa_ref = kCalibratedKappaRef; // phonon coupling at S_ref, 1/ns
    double S_ref = 2.5;        // µeV
    double eta = 1.0;          // indistinguishable fraction
    double g = 0.0;            // noise counts per signal count
    double tau_g = 0.5;        // gate opening delay, ns
    double w_g = 0.1;          // gate width, ns

    // Throws Error(Validation) naming the offending field.
    void validate() const;
};

struct PhononRates {
    double N_B = 0.0;
    double kappa = 0.0;
    double gamma_abs = 0.0; // X_V -> X_H
    double gamma_em = 0.0;  // X_H -> X_V
};

struct Liouvillian {
    int dim = 0;
    Eigen::MatrixXcd matrix; // dim²×dim², acts on column-stacked vec(ρ)
};

// N_B = 1 / (exp(S / kB T) - 1); exactly 0 at T = 0.
double bose_occupation(double S, double T);

// κ(S) = kappa_ref (S / S_ref)³, gamma_abs = κ N_B, gamma_em = κ (N_B + 1).
PhononRates phonon_rates(const DotParams& params);

// Generic generator -i/ħ[H,·] + Σ D[A_k] on column-stacked density matrices.
// H is in µeV, jump operators already carry √rate (1/√ns).
Liouvillian lindblad_generator(const Eigen::MatrixXcd& hamiltonian,
                               const std::vector<Eigen::MatrixXcd>& jumps);

Liouvillian build_liouvillian(const DotParams& params);

// |i><j| on the dot's four-level space.
Eigen::MatrixXcd level_projector(int i, int j);

// Row functional vec(I)^† · L; vanishes for trace-preserving generators.
Eigen::RowVectorXcd trace_functional(const Liouvillian& liouvillian);

} // namespace cascade

// pairstate.hpp — gated two-photon polarization state and its matrix-file format

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "cascade/dynamics.hpp"
#include "cascade/qdmodel.hpp"

namespace cascade {

// Basis order of the two-photon space; first letter is the biexciton photon.
enum PairBasis : int { HH = 0, HV = 1, VH = 2, VV = 3 };

// 4×4 density matrix in {HH, HV, VH, VV}. Only the diagonal and the (HH,VV)
// coherence may be nonzero.
class TwoPhotonState {
public:
    static constexpr double kStructureTol = 1e-12;

    explicit TwoPhotonState(const Eigen::Matrix4cd& elements);

    const Eigen::Matrix4cd& elements() const { return elements_; }
    cplx coherence() const { return elements_(HH, VV); }
    DensityMatrix density() const { return DensityMatrix(elements_); }

private:
    Eigen::Matrix4cd elements_;
};

// Gate-integrated correlator ∫_{τ_g}^{τ_g+w_g} G(τ) dτ, adaptive G7–K15 panels.
struct GatedCorrelator {
    Eigen::Matrix4cd integral;
    double error_estimate = 0.0;
    int panels = 0;
};

GatedCorrelator integrate_gate(const Liouvillian& liouvillian, double tau_g, double w_g,
                               double abs_tol = 1e-10);

TwoPhotonState rho1_gated(const DotParams& params);
TwoPhotonState rho2_dephased(const TwoPhotonState& rho1);
// [η ρ₁ + (1-η) ρ₂ + g I/4] / (1 + g)
TwoPhotonState mix_state(const TwoPhotonState& rho1, const TwoPhotonState& rho2, double eta, double g);

// rho1_gated -> rho2_dephased -> mix_state with the parameters' η and g.
TwoPhotonState polarization_state(const DotParams& params);

// Plain-text matrix file: 4 lines of 4 "re+imj" literals, 17 significant digits.
std::string format_matrix(const Eigen::Matrix4cd& m);
Eigen::Matrix4cd parse_matrix(std::string_view text);
void write_matrix_file(const std::filesystem::path& path, const Eigen::Matrix4cd& m);
Eigen::Matrix4cd read_matrix_file(const std::filesystem::path& path);

} // namespace cascade

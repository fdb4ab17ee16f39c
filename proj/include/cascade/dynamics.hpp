// dynamics.hpp — propagation under a Liouvillian and the two-time photon correlator

#pragma once

#include <Eigen/Dense>

#include "cascade/qdmodel.hpp"

namespace cascade {

enum class Normalization { Normalized, Unnormalized };

// Hermitian, PSD matrix; unit trace unless flagged Unnormalized.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPositivityTol = 1e-9;

    explicit DensityMatrix(Eigen::MatrixXcd elements,
                           Normalization norm = Normalization::Normalized);

    int dim() const { return static_cast<int>(elements_.rows()); }
    const Eigen::MatrixXcd& elements() const { return elements_; }
    Normalization normalization() const { return norm_; }

private:
    Eigen::MatrixXcd elements_;
    Normalization norm_;
};

// Regressed QRT operator σ ρ σ'†: not Hermitian, not normalized, only finite.
class ConditionalOperator {
public:
    explicit ConditionalOperator(Eigen::MatrixXcd elements);

    int dim() const { return static_cast<int>(elements_.rows()); }
    const Eigen::MatrixXcd& elements() const { return elements_; }

private:
    Eigen::MatrixXcd elements_;
};

// e^{L t} as a dim²×dim² matrix (Padé scaling-and-squaring).
Eigen::MatrixXcd propagator(const Liouvillian& liouvillian, double t);

// Applies a propagator to a dim×dim operator through column-stacked vectorization.
Eigen::MatrixXcd apply_superoperator(const Eigen::MatrixXcd& superop, const Eigen::MatrixXcd& op);

DensityMatrix propagate(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t);
ConditionalOperator propagate(const Liouvillian& liouvillian, const ConditionalOperator& op0, double t);

// Two-photon correlator in the {HH, HV, VH, VV} ordering (first letter: biexciton
// photon). Entry (µν, µ'ν') is Tr[σ_{X,ν'}† σ_{X,ν} e^{Lτ}(σ_{XX,µ}|XX><XX|σ_{XX,µ'}†)].
Eigen::Matrix4cd pair_correlator(const Liouvillian& liouvillian, double tau);

// Same quantity from a precomputed e^{Lτ}.
Eigen::Matrix4cd pair_correlator_from_propagator(const Eigen::MatrixXcd& propagator);

} // namespace cascade

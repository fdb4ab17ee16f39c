// correlations.hpp — entropies, classical correlation, discord and concurrence of two photons

#pragma once

#include <array>

#include <Eigen/Dense>

#include "cascade/dynamics.hpp"
#include "cascade/pairstate.hpp"

namespace cascade {

// Bloch direction n = (sinθ cosφ, sinθ sinφ, cosθ) of a projective measurement
// {Π₊, Π₋} = {(I + n·σ)/2, (I - n·σ)/2} on the exciton photon.
struct MeasurementDirection {
    double theta = 0.0; // [0, π]
    double phi = 0.0;   // [0, 2π)

    // Maps arbitrary angles onto the canonical ranges, same axis.
    static MeasurementDirection canonical(double theta, double phi);

    Eigen::Vector3d axis() const;
    std::array<Eigen::Matrix2cd, 2> projectors() const;

    // Angle between the measurement axis (unsigned, n ≡ -n) and the z axis, in [0, π/2].
    double polar_offset() const;
};

struct ClassicalCorrelation {
    double bits = 0.0;
    MeasurementDirection direction;
    int evaluations = 0;
    // False when the local refinement did not improve on the grid/seed maximum.
    bool refinement_improved = false;
};

struct CorrelationReport {
    double mutual_info = 0.0;
    double classical = 0.0;
    double discord = 0.0; // mutual_info - classical
    double concurrence = 0.0;
    MeasurementDirection optimal_direction;
    int optimizer_evals = 0;
    bool refinement_improved = false;
};

// Optimizer grid resolution and refinement settings.
struct OptimizerSettings {
    int theta_points = 37;
    int phi_points = 19;
    int refine_starts = 3;
    double value_tol = 1e-10;
    int max_iterations = 400;
};

double von_neumann_entropy(const DensityMatrix& rho);
// Entropy from a spectrum; eigenvalues below -1e-6 signal NonPhysical.
double entropy_of_spectrum(const Eigen::VectorXd& eigenvalues);

Eigen::Matrix2cd reduced_biexciton(const Eigen::Matrix4cd& rho); // traces out the exciton photon
Eigen::Matrix2cd reduced_exciton(const Eigen::Matrix4cd& rho);   // traces out the biexciton photon

double mutual_information(const DensityMatrix& rho);

// S(ρ_XX) - Σ_j q_j S(ρ_XX^j) for one measurement direction on the exciton photon.
double measured_information(const Eigen::Matrix4cd& rho, const MeasurementDirection& direction);

ClassicalCorrelation classical_correlation(const DensityMatrix& rho, const OptimizerSettings& settings = {});
CorrelationReport quantum_discord(const DensityMatrix& rho, const OptimizerSettings& settings = {});
double concurrence(const DensityMatrix& rho);

inline CorrelationReport quantum_discord(const TwoPhotonState& rho) { return quantum_discord(rho.density()); }

} // namespace cascade

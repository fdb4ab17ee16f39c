#include "cascade/dynamics.hpp"

#include <array>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

void require_finite(const Eigen::MatrixXcd& m, const char* what)
{
    if (!m.allFinite()) {
        throw Error(ErrorKind::NonFinite, std::string(what) + " has non-finite entries");
    }
}

void require_square(const Eigen::MatrixXcd& m, const char* what)
{
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
    }
}

void require_dims(const Liouvillian& liouvillian, int dim)
{
    if (liouvillian.dim != dim || liouvillian.matrix.rows() != dim * dim) {
        throw Error(ErrorKind::DimensionMismatch,
                    "Liouvillian dimension " + std::to_string(liouvillian.dim) +
                        " does not match operator dimension " + std::to_string(dim));
    }
}

// Photon polarization index: H = 0, V = 1.
constexpr std::array<int, 2> kExcitonOf{level::exciton_h, level::exciton_v};

} // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd elements, Normalization norm)
    : elements_(std::move(elements)), norm_(norm)
{
    require_square(elements_, "density matrix");
    require_finite(elements_, "density matrix");

    const double herm = (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol) {
        throw Error(ErrorKind::NonPhysical, "density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    if (norm_ == Normalization::Normalized) {
        const double tr_err = std::abs(elements_.trace() - cplx(1.0, 0.0));
        if (tr_err > kTraceTol) {
            throw Error(ErrorKind::NonPhysical, "density matrix trace differs from 1 by " + std::to_string(tr_err));
        }
    }
    const Eigen::MatrixXcd herm_part = 0.5 * (elements_ + elements_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm_part, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPositivityTol) {
        throw Error(ErrorKind::NonPhysical, "density matrix has eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
    }
}

ConditionalOperator::ConditionalOperator(Eigen::MatrixXcd elements)
    : elements_(std::move(elements))
{
    require_square(elements_, "conditional operator");
    require_finite(elements_, "conditional operator");
}

Eigen::MatrixXcd propagator(const Liouvillian& liouvillian, double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorKind::Domain, "propagation time must be finite and >= 0");
    }
    if (t == 0.0) {
        return Eigen::MatrixXcd::Identity(liouvillian.matrix.rows(), liouvillian.matrix.cols());
    }
    Eigen::MatrixXcd lt = liouvillian.matrix * t;
    Eigen::MatrixXcd e = lt.exp();
    require_finite(e, "propagator");
    return e;
}

Eigen::MatrixXcd apply_superoperator(const Eigen::MatrixXcd& superop, const Eigen::MatrixXcd& op)
{
    const Eigen::Index n = op.rows();
    if (superop.rows() != n * n || superop.cols() != n * n) {
        throw Error(ErrorKind::DimensionMismatch, "superoperator does not match operator dimension");
    }
    const Eigen::VectorXcd v = superop * Eigen::Map<const Eigen::VectorXcd>(op.data(), n * n);
    Eigen::MatrixXcd out = Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n);
    require_finite(out, "propagated operator");
    return out;
}

DensityMatrix propagate(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t)
{
    require_dims(liouvillian, rho0.dim());
    if (t == 0.0) return rho0;
    Eigen::MatrixXcd rho = apply_superoperator(propagator(liouvillian, t), rho0.elements());
    // Scaling-and-squaring drifts the trace by ~eps·‖Lt‖ on stiff generators; the
    // exact map preserves it, so renormalize multiplicatively (zeros stay zero).
    if (rho0.normalization() == Normalization::Normalized) {
        const double tr = rho.trace().real();
        if (std::abs(tr - 1.0) < 1e-6) rho /= tr;
    }
    return DensityMatrix(std::move(rho), rho0.normalization());
}

ConditionalOperator propagate(const Liouvillian& liouvillian, const ConditionalOperator& op0, double t)
{
    require_dims(liouvillian, op0.dim());
    if (t == 0.0) return op0;
    return ConditionalOperator(apply_superoperator(propagator(liouvillian, t), op0.elements()));
}

Eigen::Matrix4cd pair_correlator_from_propagator(const Eigen::MatrixXcd& prop)
{
    // σ_{XX,µ}|XX><XX|σ_{XX,µ'}† = |x_µ><x_µ'|, and Tr[σ_{X,ν'}†σ_{X,ν} r] = r(x_ν, x_ν').
    Eigen::Matrix4cd G = Eigen::Matrix4cd::Zero();
    for (int mu = 0; mu < 2; ++mu) {
        for (int mu_p = 0; mu_p < 2; ++mu_p) {
            const Eigen::MatrixXcd seed = level_projector(kExcitonOf[mu], kExcitonOf[mu_p]);
            const Eigen::MatrixXcd r = apply_superoperator(prop, seed);
            for (int nu = 0; nu < 2; ++nu) {
                for (int nu_p = 0; nu_p < 2; ++nu_p) {
                    G(2 * mu + nu, 2 * mu_p + nu_p) = r(kExcitonOf[nu], kExcitonOf[nu_p]);
                }
            }
        }
    }
    return G;
}

Eigen::Matrix4cd pair_correlator(const Liouvillian& liouvillian, double tau)
{
    require_dims(liouvillian, level::count);
    return pair_correlator_from_propagator(propagator(liouvillian, tau));
}

} // namespace cascade

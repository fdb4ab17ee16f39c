#include "cascade/qdmodel.hpp"

#include <cmath>
#include <string>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

void require(bool ok, const char* field, const std::string& rule)
{
    if (!ok) {
        throw Error(ErrorKind::Validation, std::string(field) + " must satisfy " + rule);
    }
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace

void DotParams::validate() const
{
    const auto finite = [](double v) { return std::isfinite(v); };
    require(finite(S) && S > 0.0, "S", "S > 0");
    require(finite(T) && T >= 0.0, "T", "T >= 0");
    require(finite(gammaX_H) && gammaX_H >= 0.0, "gammaX_H", "rate >= 0");
    require(finite(gammaX_V) && gammaX_V >= 0.0, "gammaX_V", "rate >= 0");
    require(finite(gammaXX_H) && gammaXX_H >= 0.0, "gammaXX_H", "rate >= 0");
    require(finite(gammaXX_V) && gammaXX_V >= 0.0, "gammaXX_V", "rate >= 0");
    require(gammaX_H + gammaX_V > 0.0, "gammaX_H", "gammaX_H + gammaX_V > 0");
    require(gammaXX_H + gammaXX_V > 0.0, "gammaXX_H", "gammaXX_H + gammaXX_V > 0");
    require(finite(kappa_ref) && kappa_ref >= 0.0, "kappa_ref", "kappa_ref >= 0");
    require(finite(S_ref) && S_ref > 0.0, "S_ref", "S_ref > 0");
    require(finite(eta) && eta >= 0.0 && eta <= 1.0, "eta", "0 <= eta <= 1");
    require(finite(g) && g >= 0.0, "g", "g >= 0");
    require(finite(tau_g) && tau_g >= 0.0, "tau_g", "tau_g >= 0");
    require(finite(w_g) && w_g > 0.0, "w_g", "w_g > 0");
}

double bose_occupation(double S, double T)
{
    if (!(S > 0.0) || !std::isfinite(S)) {
        throw Error(ErrorKind::Domain, "bose_occupation requires S > 0, got " + std::to_string(S));
    }
    if (!(T >= 0.0) || !std::isfinite(T)) {
        throw Error(ErrorKind::Domain, "bose_occupation requires T >= 0, got " + std::to_string(T));
    }
    if (T == 0.0) return 0.0;
    return 1.0 / std::expm1(S / (PhysConstants::kB * T));
}

PhononRates phonon_rates(const DotParams& params)
{
    PhononRates rates;
    rates.N_B = bose_occupation(params.S, params.T);
    const double ratio = params.S / params.S_ref;
    rates.kappa = params.kappa_ref * ratio * ratio * ratio;
    rates.gamma_abs = rates.kappa * rates.N_B;
    rates.gamma_em = rates.kappa * (rates.N_B + 1.0);
    return rates;
}

Eigen::MatrixXcd level_projector(int i, int j)
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(level::count, level::count);
    m(i, j) = 1.0;
    return m;
}

Liouvillian lindblad_generator(const Eigen::MatrixXcd& hamiltonian,
                               const std::vector<Eigen::MatrixXcd>& jumps)
{
    const Eigen::Index n = hamiltonian.rows();
    if (hamiltonian.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "Hamiltonian must be square");
    }
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const cplx minus_i_over_hbar(0.0, -1.0 / PhysConstants::hbar);

    // vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)
    Eigen::MatrixXcd L = minus_i_over_hbar * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
    for (const auto& a : jumps) {
        if (a.rows() != n || a.cols() != n) {
            throw Error(ErrorKind::DimensionMismatch, "jump operator dimension differs from Hamiltonian");
        }
        const Eigen::MatrixXcd ada = a.adjoint() * a;
        L += kron(a.conjugate(), a);
        L -= 0.5 * kron(id, ada);
        L -= 0.5 * kron(ada.transpose(), id);
    }
    return Liouvillian{static_cast<int>(n), std::move(L)};
}

Liouvillian build_liouvillian(const DotParams& params)
{
    params.validate();
    const PhononRates ph = phonon_rates(params);

    const Eigen::MatrixXcd H = params.S * level_projector(level::exciton_h, level::exciton_h);

    using namespace level;
    std::vector<Eigen::MatrixXcd> jumps;
    const auto add = [&](double rate, int to, int from) {
        if (rate > 0.0) jumps.push_back(std::sqrt(rate) * level_projector(to, from));
    };
    add(params.gammaXX_H, exciton_h, biexciton);
    add(params.gammaXX_V, exciton_v, biexciton);
    add(params.gammaX_H, ground, exciton_h);
    add(params.gammaX_V, ground, exciton_v);
    add(ph.gamma_abs, exciton_h, exciton_v);
    add(ph.gamma_em, exciton_v, exciton_h);
    return lindblad_generator(H, jumps);
}

Eigen::RowVectorXcd trace_functional(const Liouvillian& liouvillian)
{
    const int n = liouvillian.dim;
    Eigen::RowVectorXcd tr = Eigen::RowVectorXcd::Zero(n * n);
    for (int i = 0; i < n; ++i) tr(i * n + i) = 1.0;
    return tr * liouvillian.matrix;
}

} // namespace cascade

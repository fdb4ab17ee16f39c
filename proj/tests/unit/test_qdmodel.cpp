#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cascade/dynamics.hpp"
#include "cascade/errors.hpp"
#include "cascade/qdmodel.hpp"
#include "oracles.hpp"

using namespace cascade;

namespace {

DotParams random_params(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DotParams p;
    p.S = 0.1 + 20.0 * u(rng);
    p.T = 300.0 * u(rng);
    p.gammaX_H = 0.05 + 2.0 * u(rng);
    p.gammaX_V = 0.05 + 2.0 * u(rng);
    p.gammaXX_H = 0.05 + 3.0 * u(rng);
    p.gammaXX_V = 0.05 + 3.0 * u(rng);
    p.kappa_ref = std::pow(10.0, -5.0 + 5.0 * u(rng));
    p.S_ref = 0.5 + 5.0 * u(rng);
    return p;
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

} // namespace

TEST(BoseOccupation, UnitAtLn2)
{
    for (double T : {0.3, 4.0, 77.0, 300.0}) {
        const double S = PhysConstants::kB * T * std::numbers::ln2;
        EXPECT_NEAR(bose_occupation(S, T), 1.0, 1e-12);
    }
}

TEST(BoseOccupation, MatchesHighPrecisionValue)
{
    // 1/expm1(2.5/861.7333) evaluated with 40-digit arithmetic.
    EXPECT_NEAR(bose_occupation(2.5, 10.0), 344.19356176076764, 1e-9);
}

TEST(BoseOccupation, ZeroTemperatureAndMonotonicity)
{
    EXPECT_EQ(bose_occupation(2.5, 0.0), 0.0);
    EXPECT_LT(bose_occupation(2.5, 1e-3), 3e-13); // e^{-29}
    EXPECT_EQ(bose_occupation(2.5, 1e-5), 0.0);
    double prev = 0.0;
    for (double T = 0.5; T < 300.0; T *= 1.5) {
        const double n = bose_occupation(2.5, T);
        EXPECT_GT(n, prev);
        EXPECT_LT(bose_occupation(3.0, T), n);
        prev = n;
    }
}

TEST(BoseOccupation, DomainErrors)
{
    EXPECT_THROW(bose_occupation(0.0, 10.0), Error);
    EXPECT_THROW(bose_occupation(-1.0, 10.0), Error);
    EXPECT_THROW(bose_occupation(1.0, -0.1), Error);
    try {
        bose_occupation(1.0, -1.0);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
}

TEST(PhononRates, ExampleValues)
{
    DotParams p;
    p.kappa_ref = 0.01;
    const PhononRates r = phonon_rates(p);
    EXPECT_NEAR(r.gamma_abs, 3.4419356176076765, 1e-10);
    EXPECT_NEAR(r.gamma_em, 3.4519356176076765, 1e-10);

    p.T = 0.0;
    const PhononRates cold = phonon_rates(p);
    EXPECT_EQ(cold.N_B, 0.0);
    EXPECT_EQ(cold.gamma_abs, 0.0);
    EXPECT_EQ(cold.gamma_em, cold.kappa);
}

TEST(PhononRates, CubicLaw)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 50.0);
    for (int k = 0; k < 200; ++k) {
        DotParams p;
        p.kappa_ref = 0.37;
        p.S = u(rng);
        const double k1 = phonon_rates(p).kappa;
        p.S *= 2.0;
        EXPECT_NEAR(phonon_rates(p).kappa / k1, 8.0, 1e-13);
    }
    DotParams p;
    p.kappa_ref = 0.25;
    p.S = 2.0 * p.S_ref;
    EXPECT_DOUBLE_EQ(phonon_rates(p).kappa, 8.0 * p.kappa_ref);
}

TEST(PhononRates, DetailedBalance)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> logS(std::log(0.1), std::log(100.0));
    std::uniform_real_distribution<double> uT(0.01, 300.0);
    for (int k = 0; k < 2000; ++k) {
        DotParams p;
        p.kappa_ref = 1.0;
        p.S = std::exp(logS(rng));
        p.T = uT(rng);
        const PhononRates r = phonon_rates(p);
        if (r.gamma_abs == 0.0) continue; // exp underflow at S/kT > ~700
        const double expected = std::exp(-p.S / (PhysConstants::kB * p.T));
        EXPECT_NEAR(r.gamma_abs / r.gamma_em / expected, 1.0, 1e-9) << p.S << " " << p.T;
    }
}

TEST(Liouvillian, TraceAnnihilatingWithZeroMode)
{
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 1000; ++k) {
        const DotParams p = random_params(rng);
        const Liouvillian L = build_liouvillian(p);
        ASSERT_EQ(L.dim, 4);
        ASSERT_EQ(L.matrix.rows(), 16);
        const double scale = std::max(1.0, L.matrix.cwiseAbs().maxCoeff());
        EXPECT_LE(trace_functional(L).cwiseAbs().maxCoeff(), 1e-12 * scale);
        EXPECT_LE(L.matrix.eigenvalues().cwiseAbs().minCoeff(), 1e-10 * scale);
    }
}

TEST(Liouvillian, MatchesDirectMasterEquation)
{
    std::mt19937_64 rng(8);
    for (int k = 0; k < 50; ++k) {
        const DotParams p = random_params(rng);
        const Liouvillian L = build_liouvillian(p);
        const oracle::Mat4 rho = oracle::random_state(rng);
        const Eigen::MatrixXcd lrho = Eigen::Map<const Eigen::MatrixXcd>((L.matrix * vec(rho)).eval().data(), 4, 4);
        const oracle::Mat4 expected = oracle::lindblad_rhs(p, rho);
        EXPECT_LE((lrho - expected).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + expected.cwiseAbs().maxCoeff()));
    }
}

TEST(Liouvillian, PreservesHermiticity)
{
    std::mt19937_64 rng(17);
    for (int k = 0; k < 50; ++k) {
        const DotParams p = random_params(rng);
        const Liouvillian L = build_liouvillian(p);
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Random(4, 4);
        h = h + h.adjoint().eval();
        for (double t : {0.1, 1.0, 5.0}) {
            const Eigen::MatrixXcd out = apply_superoperator(propagator(L, t), h);
            EXPECT_LE((out - out.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(Liouvillian, BiexcitonDecay)
{
    DotParams p;
    p.gammaXX_H = 0.9;
    p.gammaXX_V = 1.6;
    const Liouvillian L = build_liouvillian(p);
    const DensityMatrix rho0(level_projector(level::biexciton, level::biexciton));
    for (double t : {0.0, 0.1, 0.4, 1.3, 4.0}) {
        const DensityMatrix rho = propagate(L, rho0, t);
        EXPECT_NEAR(rho.elements()(3, 3).real(), std::exp(-2.5 * t), 1e-8);
    }
}

TEST(Liouvillian, GroundStateIsAbsorbing)
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 10; ++k) {
        const DotParams p = random_params(rng);
        const double min_rate = std::min({p.gammaX_H, p.gammaX_V, p.gammaXX_H, p.gammaXX_V});
        const DensityMatrix rho0(oracle::random_state(rng));
        const DensityMatrix rho = propagate(build_liouvillian(p), rho0, 50.0 / min_rate);
        EXPECT_GT(rho.elements()(0, 0).real(), 1.0 - 1e-6);
    }
}

TEST(Liouvillian, UnitaryWithoutRates)
{
    // Zero rates are rejected by DotParams, so build the pure commutator directly.
    const Eigen::MatrixXcd H = 2.5 * level_projector(level::exciton_h, level::exciton_h);
    const Liouvillian L = lindblad_generator(H, {});
    const Eigen::Vector4cd psi = Eigen::Vector4cd(1.0, cplx(0.3, 0.2), cplx(-0.5, 0.1), 0.4).normalized();
    const Eigen::MatrixXcd pure = psi * psi.adjoint();
    const Eigen::MatrixXcd out = apply_superoperator(propagator(L, 3.7), pure);
    EXPECT_NEAR((out * out).trace().real(), 1.0, 1e-10);
}

TEST(Liouvillian, GaugeShiftLeavesCoherenceDynamicsUnchanged)
{
    // Adding c·I to H shifts no observable: the generator is identical.
    const Eigen::MatrixXcd H = 2.5 * level_projector(level::exciton_h, level::exciton_h);
    const Eigen::MatrixXcd shifted = H + 7.0 * Eigen::MatrixXcd::Identity(4, 4);
    const std::vector<Eigen::MatrixXcd> jumps{std::sqrt(0.7) * level_projector(0, 2)};
    EXPECT_LE((lindblad_generator(H, jumps).matrix - lindblad_generator(shifted, jumps).matrix).cwiseAbs().maxCoeff(),
              1e-12);
}

TEST(DotParams, ValidationNamesField)
{
    const auto message_for = [](auto mutate) {
        DotParams p;
        mutate(p);
        try {
            p.validate();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Validation);
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message_for([](DotParams& p) { p.S = -1.0; }).find("S"), std::string::npos);
    EXPECT_NE(message_for([](DotParams& p) { p.eta = 1.5; }).find("eta"), std::string::npos);
    EXPECT_NE(message_for([](DotParams& p) { p.w_g = 0.0; }).find("w_g"), std::string::npos);
    EXPECT_NE(message_for([](DotParams& p) { p.T = NAN; }).find("T"), std::string::npos);
    EXPECT_NO_THROW(DotParams{}.validate());
}

TEST(PhysConstants, PlanckConsistency)
{
    EXPECT_NEAR(PhysConstants::h, 2.0 * std::numbers::pi * PhysConstants::hbar, 1e-8);
}

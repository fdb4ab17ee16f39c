#include "cascade/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNegativeEigenTol = 1e-6;

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double binary_entropy(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

// Entropy (bits) of M / Tr M for a 2×2 PSD matrix M, via its Bloch length.
double qubit_entropy(const Eigen::Matrix2cd& m, double trace)
{
    const double dz = m(0, 0).real() - m(1, 1).real();
    double r = std::sqrt(dz * dz + 4.0 * std::norm(m(0, 1))) / trace;
    r = std::min(r, 1.0);
    return binary_entropy(0.5 * (1.0 + r));
}

// Blocks R^{cd}_{ab} = ρ_{(a,c),(b,d)} indexed by the exciton-photon pair (c, d).
struct ExcitonBlocks {
    Eigen::Matrix2cd r00, r01, r10, r11;

    explicit ExcitonBlocks(const Eigen::Matrix4cd& rho)
    {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                r00(a, b) = rho(2 * a + 0, 2 * b + 0);
                r01(a, b) = rho(2 * a + 0, 2 * b + 1);
                r10(a, b) = rho(2 * a + 1, 2 * b + 0);
                r11(a, b) = rho(2 * a + 1, 2 * b + 1);
            }
        }
    }
};

double measured_information_blocks(const ExcitonBlocks& blk, double s_marginal, const Eigen::Vector3d& n)
{
    // Tr_X[(I⊗Π±) ρ] = (A ± B)/2 with A = ρ_XX.
    const Eigen::Matrix2cd A = blk.r00 + blk.r11;
    const Eigen::Matrix2cd B = n.z() * (blk.r00 - blk.r11) + cplx(n.x(), -n.y()) * blk.r10 +
                               cplx(n.x(), n.y()) * blk.r01;
    double conditional = 0.0;
    for (double sign : {1.0, -1.0}) {
        const Eigen::Matrix2cd m = 0.5 * (A + sign * B);
        const double q = m.trace().real();
        if (q > 1e-15) conditional += q * qubit_entropy(m, q);
    }
    return s_marginal - conditional;
}

Eigen::Vector3d axis_of(double theta, double phi)
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

struct Vertex {
    double theta;
    double phi;
    double value;
};

// Nelder–Mead maximization in (θ, φ); the objective is periodic so no bounds are needed.
template <typename F>
Vertex nelder_mead(F&& f, Vertex start, double step, const OptimizerSettings& settings, int& evals)
{
    std::array<Vertex, 3> simplex{start, start, start};
    simplex[1].theta += step;
    simplex[2].phi += step;
    for (int k = 1; k < 3; ++k) {
        simplex[k].value = f(simplex[k].theta, simplex[k].phi);
        ++evals;
    }
    const auto by_value = [](const Vertex& a, const Vertex& b) { return a.value > b.value; };

    for (int it = 0; it < settings.max_iterations; ++it) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        const double spread = simplex[0].value - simplex[2].value;
        const double size = std::max(std::abs(simplex[0].theta - simplex[2].theta) +
                                         std::abs(simplex[0].phi - simplex[2].phi),
                                     std::abs(simplex[0].theta - simplex[1].theta) +
                                         std::abs(simplex[0].phi - simplex[1].phi));
        if (spread < 1e-2 * settings.value_tol && size < 1e-8) break;
        if (size < 1e-12) break;

        const double ct = 0.5 * (simplex[0].theta + simplex[1].theta);
        const double cp = 0.5 * (simplex[0].phi + simplex[1].phi);
        const auto at = [&](double coef) {
            Vertex v{ct + coef * (simplex[2].theta - ct), cp + coef * (simplex[2].phi - cp), 0.0};
            v.value = f(v.theta, v.phi);
            ++evals;
            return v;
        };

        const Vertex reflected = at(-1.0);
        if (reflected.value > simplex[0].value) {
            const Vertex expanded = at(-2.0);
            simplex[2] = expanded.value > reflected.value ? expanded : reflected;
        } else if (reflected.value > simplex[1].value) {
            simplex[2] = reflected;
        } else {
            const Vertex contracted = reflected.value > simplex[2].value ? at(-0.5) : at(0.5);
            if (contracted.value > std::max(reflected.value, simplex[2].value)) {
                simplex[2] = contracted;
            } else {
                for (int k = 1; k < 3; ++k) {
                    simplex[k].theta = simplex[0].theta + 0.5 * (simplex[k].theta - simplex[0].theta);
                    simplex[k].phi = simplex[0].phi + 0.5 * (simplex[k].phi - simplex[0].phi);
                    simplex[k].value = f(simplex[k].theta, simplex[k].phi);
                    ++evals;
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_value);
    return simplex[0];
}

} // namespace

MeasurementDirection MeasurementDirection::canonical(double theta, double phi)
{
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    if (theta > std::numbers::pi) {
        theta = kTwoPi - theta;
        phi += std::numbers::pi;
    }
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    if (phi >= kTwoPi) phi = 0.0;
    return {theta, phi};
}

Eigen::Vector3d MeasurementDirection::axis() const { return axis_of(theta, phi); }

std::array<Eigen::Matrix2cd, 2> MeasurementDirection::projectors() const
{
    const Eigen::Vector3d n = axis();
    Eigen::Matrix2cd ns;
    ns << n.z(), cplx(n.x(), -n.y()), cplx(n.x(), n.y()), -n.z();
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    return {0.5 * (id + ns), 0.5 * (id - ns)};
}

double MeasurementDirection::polar_offset() const { return std::min(theta, std::numbers::pi - theta); }

double entropy_of_spectrum(const Eigen::VectorXd& eigenvalues)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double lambda = eigenvalues(i);
        if (lambda < -kNegativeEigenTol) {
            throw Error(ErrorKind::NonPhysical, "negative eigenvalue " + std::to_string(lambda));
        }
        s -= xlog2x(std::max(lambda, 0.0));
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.elements(), Eigen::EigenvaluesOnly);
    return entropy_of_spectrum(es.eigenvalues());
}

Eigen::Matrix2cd reduced_biexciton(const Eigen::Matrix4cd& rho)
{
    Eigen::Matrix2cd out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out(a, b) = rho(2 * a, 2 * b) + rho(2 * a + 1, 2 * b + 1);
    return out;
}

Eigen::Matrix2cd reduced_exciton(const Eigen::Matrix4cd& rho)
{
    Eigen::Matrix2cd out;
    for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(c, d) = rho(c, d) + rho(2 + c, 2 + d);
    return out;
}

namespace {

Eigen::Matrix4cd as_two_qubit(const DensityMatrix& rho)
{
    if (rho.dim() != 4) {
        throw Error(ErrorKind::DimensionMismatch, "two-photon measures need a 4x4 density matrix");
    }
    return rho.elements();
}

} // namespace

double mutual_information(const DensityMatrix& rho)
{
    const Eigen::Matrix4cd m = as_two_qubit(rho);
    return qubit_entropy(reduced_biexciton(m), 1.0) + qubit_entropy(reduced_exciton(m), 1.0) -
           von_neumann_entropy(rho);
}

double measured_information(const Eigen::Matrix4cd& rho, const MeasurementDirection& direction)
{
    const ExcitonBlocks blk(rho);
    return measured_information_blocks(blk, qubit_entropy(reduced_biexciton(rho), 1.0), direction.axis());
}

ClassicalCorrelation classical_correlation(const DensityMatrix& rho, const OptimizerSettings& settings)
{
    const Eigen::Matrix4cd m = as_two_qubit(rho);
    const ExcitonBlocks blk(m);
    const double s_marginal = qubit_entropy(reduced_biexciton(m), 1.0);
    const auto f = [&](double theta, double phi) {
        return measured_information_blocks(blk, s_marginal, axis_of(theta, phi));
    };

    int evals = 0;
    std::vector<Vertex> grid;
    grid.reserve(static_cast<std::size_t>(settings.theta_points * settings.phi_points));
    const double dtheta = std::numbers::pi / (settings.theta_points - 1);
    const double dphi = kTwoPi / (settings.phi_points - 1);
    for (int i = 0; i < settings.theta_points; ++i) {
        for (int j = 0; j < settings.phi_points; ++j) {
            const double theta = i * dtheta;
            const double phi = j * dphi;
            grid.push_back({theta, phi, f(theta, phi)});
            ++evals;
        }
    }
    std::stable_sort(grid.begin(), grid.end(), [](const Vertex& a, const Vertex& b) { return a.value > b.value; });

    // Canonical bases are always candidates: σ_z and the transverse σ_x, σ_y axes.
    std::vector<Vertex> starts(grid.begin(), grid.begin() + std::min<std::size_t>(settings.refine_starts, grid.size()));
    for (auto [theta, phi] : {std::pair{0.0, 0.0}, std::pair{std::numbers::pi / 2, 0.0},
                              std::pair{std::numbers::pi / 2, std::numbers::pi / 2}}) {
        starts.push_back({theta, phi, f(theta, phi)});
        ++evals;
    }

    Vertex best = starts.front();
    for (const auto& s : starts)
        if (s.value > best.value) best = s;
    const double seed_best = best.value;

    const double step = 0.5 * std::min(dtheta, dphi);
    for (const auto& s : starts) {
        const Vertex v = nelder_mead(f, s, step, settings, evals);
        if (v.value > best.value) best = v;
    }

    ClassicalCorrelation out;
    out.bits = std::max(best.value, 0.0);
    out.direction = MeasurementDirection::canonical(best.theta, best.phi);
    out.evaluations = evals;
    out.refinement_improved = best.value > seed_best;
    return out;
}

double concurrence(const DensityMatrix& rho)
{
    const Eigen::Matrix4cd m = as_two_qubit(rho);
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Eigen::Matrix4cd tilde = yy * m.conjugate() * yy;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    Eigen::Vector4d ev = es.eigenvalues();
    if (ev.minCoeff() < -kNegativeEigenTol) {
        throw Error(ErrorKind::NonPhysical, "negative eigenvalue " + std::to_string(ev.minCoeff()));
    }
    const Eigen::Matrix4cd sqrt_rho =
        es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    Eigen::Matrix4cd r = sqrt_rho * tilde * sqrt_rho;
    r = 0.5 * (r + r.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> er(r, Eigen::EigenvaluesOnly);
    Eigen::Vector4d lambda = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(lambda.data(), lambda.data() + 4, std::greater<>());
    return std::clamp(lambda(0) - lambda(1) - lambda(2) - lambda(3), 0.0, 1.0);
}

CorrelationReport quantum_discord(const DensityMatrix& rho, const OptimizerSettings& settings)
{
    const ClassicalCorrelation cc = classical_correlation(rho, settings);
    CorrelationReport report;
    report.mutual_info = std::max(mutual_information(rho), 0.0);
    report.classical = std::min(cc.bits, report.mutual_info);
    report.discord = report.mutual_info - report.classical;
    report.concurrence = concurrence(rho);
    report.optimal_direction = cc.direction;
    report.optimizer_evals = cc.evaluations;
    report.refinement_improved = cc.refinement_improved;
    return report;
}

} // namespace cascade

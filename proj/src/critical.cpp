#include "cascade/critical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cascade/errors.hpp"
#include "cascade/pairstate.hpp"

namespace cascade {

namespace {

std::string format_value(double v)
{
    std::ostringstream os;
    os.precision(9);
    os << v;
    return os.str();
}

void check_range(const FinderRange& range)
{
    if (!(range.lo >= 0.0 && range.hi > range.lo)) {
        throw Error(ErrorKind::Domain, "finder range requires 0 <= lo < hi");
    }
    if (!(range.resolution > 0.0)) {
        throw Error(ErrorKind::Domain, "finder resolution must be > 0");
    }
}

DotParams at_temperature(DotParams params, double T)
{
    params.T = T;
    return params;
}

bool longitudinal_at(const DotParams& params, double T)
{
    return is_longitudinal(evaluate_point(at_temperature(params, T)).optimal_direction);
}

double concurrence_at(const DotParams& params, double T)
{
    return concurrence(polarization_state(at_temperature(params, T)).density());
}

// Quadratic through three points, in a local coordinate.
Eigen::Vector3d fit_quadratic(const std::array<double, 3>& u, const std::array<double, 3>& y)
{
    Eigen::Matrix3d V;
    Eigen::Vector3d b;
    for (int i = 0; i < 3; ++i) {
        V.row(i) << 1.0, u[i], u[i] * u[i];
        b(i) = y[i];
    }
    return V.partialPivLu().solve(b);
}

double slope_quadratic(const Eigen::Vector3d& c, double u) { return c(1) + 2.0 * c(2) * u; }

} // namespace

const char* axis_column(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::Temperature: return "T_K";
    case SweepAxis::Delay: return "tau_g_ns";
    case SweepAxis::Fss: return "S_ueV";
    }
    return "axis";
}

DotParams with_axis_value(DotParams params, SweepAxis axis, double value)
{
    switch (axis) {
    case SweepAxis::Temperature: params.T = value; break;
    case SweepAxis::Delay: params.tau_g = value; break;
    case SweepAxis::Fss: params.S = value; break;
    }
    return params;
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    if (n < 2) throw Error(ErrorKind::Domain, "linspace needs at least 2 points");
    std::vector<double> v(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
    v.back() = hi;
    return v;
}

CorrelationReport evaluate_point(const DotParams& params)
{
    return quantum_discord(polarization_state(params));
}

SweepTable sweep(const DotParams& params, SweepAxis axis, double lo, double hi, std::size_t n_points,
                 std::size_t workers)
{
    if (!(lo < hi) || n_points < 2) {
        throw Error(ErrorKind::Domain, "sweep requires lo < hi and n_points >= 2");
    }
    SweepTable table;
    table.axis_name = axis_column(axis);
    table.axis_values = linspace(lo, hi, n_points);
    std::function<SweepRow(std::size_t)> point = [&](std::size_t i) {
        SweepRow row;
        row.axis_value = table.axis_values[i];
        try {
            const CorrelationReport r = evaluate_point(with_axis_value(params, axis, row.axis_value));
            row.mutual = r.mutual_info;
            row.classical = r.classical;
            row.discord = r.discord;
            row.concurrence = r.concurrence;
            row.theta = r.optimal_direction.theta;
        } catch (const std::exception& e) {
            row.error = table.axis_name + "=" + format_value(row.axis_value) + ": " + e.what();
        }
        return row;
    };
    table.rows = ordered_parallel_map<SweepRow>(n_points, workers, point);
    return table;
}

bool is_longitudinal(const MeasurementDirection& direction)
{
    return direction.polar_offset() < 0.25 * std::numbers::pi;
}

std::optional<std::size_t> first_basis_switch(const SweepTable& table)
{
    if (table.rows.empty()) return std::nullopt;
    const auto cls = [](const SweepRow& r) { return is_longitudinal(MeasurementDirection::canonical(r.theta, 0.0)); };
    const bool first = cls(table.rows.front());
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (table.rows[i].error.empty() && cls(table.rows[i]) != first) return i;
    }
    return std::nullopt;
}

KinkWitness locate_kink(const std::function<double(double)>& f, double center, double half_width)
{
    constexpr int kPoints = 40;
    constexpr int kZoomLevels = 3;
    KinkWitness w;
    double location = center;

    for (int level = 0; level < kZoomLevels; ++level) {
        const double a = location - half_width;
        const double h = 2.0 * half_width / kPoints;
        std::vector<double> q(kPoints + 1);
        for (int k = 0; k <= kPoints; ++k) q[k] = f(a + k * h);

        // Slope change across node k; only a kink inside (t_{k-1}, t_{k+1}) makes it large.
        std::vector<double> dslope(kPoints, 0.0);
        for (int k = 1; k < kPoints; ++k) dslope[k] = (q[k + 1] - 2.0 * q[k] + q[k - 1]) / h;
        int kstar = 3;
        for (int k = 3; k <= kPoints - 3; ++k)
            if (std::abs(dslope[k]) > std::abs(dslope[kstar])) kstar = k;

        const Eigen::Vector3d left = fit_quadratic({-3.0, -2.0, -1.0}, {q[kstar - 3], q[kstar - 2], q[kstar - 1]});
        const Eigen::Vector3d right = fit_quadratic({1.0, 2.0, 3.0}, {q[kstar + 1], q[kstar + 2], q[kstar + 3]});
        const Eigen::Vector3d diff = left - right;

        double u = 0.0;
        bool found = false;
        if (std::abs(diff(2)) > 1e-14 * (std::abs(diff(1)) + std::abs(diff(0)))) {
            const double disc = diff(1) * diff(1) - 4.0 * diff(2) * diff(0);
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                for (double root : {(-diff(1) + sq) / (2.0 * diff(2)), (-diff(1) - sq) / (2.0 * diff(2))}) {
                    if (root >= -1.0 && root <= 1.0 && (!found || std::abs(root) < std::abs(u))) {
                        u = root;
                        found = true;
                    }
                }
            }
        }
        if (!found && diff(1) != 0.0) {
            const double root = -diff(0) / diff(1);
            if (root >= -1.0 && root <= 1.0) u = root;
        }

        const double t_k = a + kstar * h;
        location = t_k + u * h;

        if (level == 0) {
            std::vector<double> floor_samples;
            for (int k = 1; k < kPoints; ++k)
                if (std::abs(k - kstar) >= 3) floor_samples.push_back(std::abs(dslope[k]));
            std::nth_element(floor_samples.begin(), floor_samples.begin() + floor_samples.size() / 2,
                             floor_samples.end());
            w.noise_floor = floor_samples[floor_samples.size() / 2];
            w.slope_jump = std::abs(slope_quadratic(right, u) - slope_quadratic(left, u)) / h;
            w.fired = w.slope_jump > 5.0 * w.noise_floor;
        }
        half_width = 2.0 * h;
    }
    w.location = location;
    return w;
}

CriticalPoint find_sudden_change_T(const DotParams& params, const FinderRange& range)
{
    check_range(range);
    params.validate();
    double lo = range.lo;
    double hi = range.hi;
    const bool cls_lo = longitudinal_at(params, lo);
    const bool cls_hi = longitudinal_at(params, hi);
    if (cls_lo == cls_hi) {
        throw Error(ErrorKind::NoSuddenChange, "optimal measurement basis does not switch on [" + format_value(lo) +
                                                   ", " + format_value(hi) + "] K");
    }
    while (hi - lo > range.resolution) {
        const double mid = 0.5 * (lo + hi);
        if (longitudinal_at(params, mid) == cls_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    CriticalPoint cp;
    cp.value = 0.5 * (lo + hi);
    cp.kind = CriticalKind::SuddenChange;
    cp.bracket_lo = lo;
    cp.bracket_hi = hi;
    cp.detector = Detector::BasisSwitch;
    cp.resolution = range.resolution;

    const double half_width = std::min(std::max(0.5, 20.0 * range.resolution), 0.9 * cp.value);
    const auto discord_of = [&](double T) { return evaluate_point(at_temperature(params, T)).discord; };
    cp.kink = locate_kink(discord_of, cp.value, half_width);
    return cp;
}

CriticalPoint find_esd_T(const DotParams& params, const FinderRange& range)
{
    check_range(range);
    params.validate();
    double lo = range.lo;
    double hi = range.hi;
    if (!(concurrence_at(params, lo) > 0.0)) {
        throw Error(ErrorKind::AlreadyDead, "concurrence is zero at T = " + format_value(lo) + " K");
    }
    if (concurrence_at(params, hi) > 0.0) {
        throw Error(ErrorKind::NoDeathInRange, "concurrence still positive at T = " + format_value(hi) + " K");
    }
    while (hi - lo > range.resolution) {
        const double mid = 0.5 * (lo + hi);
        if (concurrence_at(params, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    CriticalPoint cp;
    cp.value = 0.5 * (lo + hi);
    cp.kind = CriticalKind::SuddenDeath;
    cp.bracket_lo = lo;
    cp.bracket_hi = hi;
    cp.detector = Detector::ConcurrenceZero;
    cp.resolution = range.resolution;

    bool monotone = true;
    double previous = concurrence_at(params, range.lo);
    for (double T : linspace(range.lo, hi, 10)) {
        const double c = concurrence_at(params, T);
        if (c > previous + 1e-12) monotone = false;
        previous = c;
    }
    cp.monotone_probe = monotone;
    return cp;
}

std::vector<CriticalRow> critical_vs(const DotParams& params, SweepAxis axis, double lo, double hi,
                                     std::size_t n_points, std::size_t workers, const FinderRange& tc_range,
                                     const FinderRange& td_range)
{
    if (axis == SweepAxis::Temperature) {
        throw Error(ErrorKind::Domain, "critical temperatures cannot be swept over temperature");
    }
    const std::vector<double> values = linspace(lo, hi, n_points);
    std::function<CriticalRow(std::size_t)> point = [&](std::size_t i) {
        CriticalRow row;
        row.axis_value = values[i];
        const DotParams p = with_axis_value(params, axis, values[i]);
        std::vector<std::string> errors;
        try {
            row.tc = find_sudden_change_T(p, tc_range);
        } catch (const std::exception& e) {
            errors.push_back(std::string("Tc: ") + e.what());
        }
        try {
            row.td = find_esd_T(p, td_range);
        } catch (const std::exception& e) {
            errors.push_back(std::string("Td: ") + e.what());
        }
        for (std::size_t k = 0; k < errors.size(); ++k) row.error += (k ? "; " : "") + errors[k];
        return row;
    };
    return ordered_parallel_map<CriticalRow>(n_points, workers, point);
}

KappaCalibration calibrate_kappa(const DotParams& params, double target_Tc, double kappa_lo, double kappa_hi,
                                 const FinderRange& tc_range, double tolerance_K)
{
    check_range(tc_range);
    if (!(target_Tc > tc_range.lo && target_Tc < tc_range.hi)) {
        throw Error(ErrorKind::NotBracketed, "target T_c = " + format_value(target_Tc) + " K lies outside [" +
                                                 format_value(tc_range.lo) + ", " + format_value(tc_range.hi) + "] K");
    }
    if (!(kappa_lo > 0.0 && kappa_hi > kappa_lo)) {
        throw Error(ErrorKind::Domain, "kappa bracket requires 0 < lo < hi");
    }
    // T_c(κ) > target exactly when the state at T = target is still in the longitudinal class.
    const auto above_target = [&](double kappa) {
        DotParams p = params;
        p.kappa_ref = kappa;
        return longitudinal_at(p, target_Tc);
    };
    const auto not_bracketed = [&] {
        return Error(ErrorKind::NotBracketed, "T_c(kappa) does not cross " + format_value(target_Tc) +
                                                  " K for kappa in [" + format_value(kappa_lo) + ", " +
                                                  format_value(kappa_hi) + "]");
    };
    if (!above_target(kappa_lo)) throw not_bracketed();

    // Doubling scan: at very large κ every correlation underflows and the basis
    // class is meaningless, so stop at the first crossing instead of probing κ_hi.
    KappaCalibration out;
    double lower = kappa_lo;
    double upper = kappa_lo;
    bool crossed = false;
    while (upper < kappa_hi) {
        lower = upper;
        upper = std::min(2.0 * upper, kappa_hi);
        ++out.iterations;
        if (!above_target(upper)) {
            crossed = true;
            break;
        }
    }
    if (!crossed) throw not_bracketed();

    double lo = std::log(lower);
    double hi = std::log(upper);
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        if (above_target(std::exp(mid))) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++out.iterations;
    }
    out.kappa_ref = std::exp(0.5 * (lo + hi));

    DotParams check = params;
    check.kappa_ref = out.kappa_ref;
    out.achieved_Tc = find_sudden_change_T(check, tc_range).value;
    if (std::abs(out.achieved_Tc - target_Tc) > tolerance_K) {
        throw Error(ErrorKind::NotBracketed, "calibrated kappa reproduces T_c = " + format_value(out.achieved_Tc) +
                                                 " K, off target by more than " + format_value(tolerance_K) + " K");
    }
    return out;
}

} // namespace cascade

// critical.hpp — parameter sweeps and the T_c / T_d finders

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cascade/correlations.hpp"
#include "cascade/qdmodel.hpp"

namespace cascade {

enum class SweepAxis { Temperature, Delay, Fss };

const char* axis_column(SweepAxis axis); // "T_K", "tau_g_ns", "S_ueV"
DotParams with_axis_value(DotParams params, SweepAxis axis, double value);

struct SweepRow {
    double axis_value = 0.0;
    double mutual = 0.0;
    double classical = 0.0;
    double discord = 0.0;
    double concurrence = 0.0;
    double theta = 0.0;
    std::string error; // empty on success
};

struct SweepTable {
    std::string axis_name;
    std::vector<double> axis_values;
    std::vector<SweepRow> rows;
};

// n evenly spaced points on [lo, hi] with both endpoints exact.
std::vector<double> linspace(double lo, double hi, std::size_t n);

// Runs fn(i) for i in [0, n) on up to `workers` threads; results keep index order.
template <typename T>
std::vector<T> ordered_parallel_map(std::size_t n, std::size_t workers, const std::function<T(std::size_t)>& fn);

// Full pipeline at one parameter point.
CorrelationReport evaluate_point(const DotParams& params);

SweepTable sweep(const DotParams& params, SweepAxis axis, double lo, double hi, std::size_t n_points,
                 std::size_t workers = 1);

// Measurement-basis class: true when the optimal axis is closer to σ_z than to the transverse plane.
bool is_longitudinal(const MeasurementDirection& direction);

// Index of the first row whose basis class differs from row 0, if any.
std::optional<std::size_t> first_basis_switch(const SweepTable& table);

enum class CriticalKind { SuddenChange, SuddenDeath };
enum class Detector { BasisSwitch, DerivativeKink, ConcurrenceZero };

// Independent location of a slope discontinuity of a scalar curve.
struct KinkWitness {
    double location = 0.0;
    double slope_jump = 0.0;
    double noise_floor = 0.0;
    bool fired = false; // slope_jump > 5 × noise_floor
};

struct CriticalPoint {
    double value = 0.0;
    CriticalKind kind = CriticalKind::SuddenChange;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    Detector detector = Detector::BasisSwitch;
    double resolution = 0.0;
    std::optional<KinkWitness> kink;     // sudden-change cross-check
    std::optional<bool> monotone_probe;  // sudden-death bracket probe
};

struct FinderRange {
    double lo = 0.5;
    double hi = 120.0;
    double resolution = 0.01;
};

inline constexpr FinderRange kSuddenChangeRange{0.5, 120.0, 0.01};
inline constexpr FinderRange kSuddenDeathRange{0.5, 1.0e5, 0.01};

// Locates a slope discontinuity of f on [center - half_width, center + half_width]
// from function values only.
KinkWitness locate_kink(const std::function<double(double)>& f, double center, double half_width);

CriticalPoint find_sudden_change_T(const DotParams& params, const FinderRange& range = kSuddenChangeRange);
CriticalPoint find_esd_T(const DotParams& params, const FinderRange& range = kSuddenDeathRange);

struct CriticalRow {
    double axis_value = 0.0;
    std::optional<CriticalPoint> tc;
    std::optional<CriticalPoint> td;
    std::string error; // per-finder failures, "; "-joined
};

std::vector<CriticalRow> critical_vs(const DotParams& params, SweepAxis axis, double lo, double hi,
                                     std::size_t n_points, std::size_t workers = 1,
                                     const FinderRange& tc_range = kSuddenChangeRange,
                                     const FinderRange& td_range = kSuddenDeathRange);

struct KappaCalibration {
    double kappa_ref = 0.0;
    double achieved_Tc = 0.0;
    int iterations = 0;
};

// Solves T_c(kappa_ref) = target_Tc with κ bracketed in [kappa_lo, kappa_hi].
KappaCalibration calibrate_kappa(const DotParams& params, double target_Tc, double kappa_lo = 1e-5,
                                 double kappa_hi = 10.0, const FinderRange& tc_range = kSuddenChangeRange,
                                 double tolerance_K = 0.1);

} // namespace cascade

#include "cascade/detail/parallel.hpp"

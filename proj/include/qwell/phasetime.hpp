#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qwell/dispersion.hpp"
#include "qwell/parallel.hpp"

namespace qwell {

// Uniform inclusive frequency grid. points >= 3 so central differences have
// interior points to act on.
struct FrequencyGrid {
    double f_min = 0.0;  // Hz
    double f_max = 0.0;  // Hz
    std::size_t points = 0;
    void validate() const;
    double step() const { return (f_max - f_min) / static_cast<double>(points - 1); }
    double at(std::size_t i) const { return f_min + step() * static_cast<double>(i); }
};

enum class Method { analytic, numeric, measured };

struct PhaseTimeProfile {
    FrequencyGrid grid;
    std::vector<double> phase_unwrapped;  // rad
    std::vector<double> tau;              // s
    Method method = Method::numeric;
};

// Minimal-jump unwrapping: each step is moved by the 2pi multiple that makes
// |delta| <= pi. Steps landing within 1e-6 of half a turn are ambiguous and
// raise UnwrapError (use a denser grid).
std::vector<double> unwrap_phase(std::span<const double> phase_principal_series);

// d/df by central differences, 3-point one-sided stencils at both ends.
std::vector<double> differentiate(std::span<const double> y, double step);

// Closed-form phase time of the waveguide well, exact a=0 limit handled
// analytically. Throws EvanescentError below cutoff.
double phase_time_analytic(const EmWaveguide& model, double f, double a);

// tau = (2pi)^{-1} dphi/df of the unwrapped transmission phase. Works for
// both dispersion variants; the only phase-time path for the qm variant.
PhaseTimeProfile phase_time_numeric(const DispersionModel& model, const FrequencyGrid& grid,
                                    double a, Execution exec = Execution::serial);

// Per-frequency transmission bundle used by the CLI sweep output.
struct SweepResult {
    FrequencyGrid grid;
    std::vector<std::complex<double>> F;
    std::vector<double> magnitude_sq;
    std::vector<double> phase_unwrapped;   // rad
    std::vector<double> tau_analytic;      // s, NaN for the qm variant
    std::vector<double> tau_numeric;       // s
};

SweepResult sweep(const DispersionModel& model, const FrequencyGrid& grid, double a,
                  Execution exec = Execution::serial);

// Sign threshold below which a cell counts as nonnegative: double precision
// noise at the ns scale of interest.
inline constexpr double kSignThreshold = 1e-15;  // s

struct RegionMap {
    std::vector<double> a_axis;  // m, inclusive
    FrequencyGrid f_axis;
    std::vector<double> tau_value;     // row-major [ia * f_points + jf], s
    std::vector<std::uint8_t> negative;  // 1 where tau < -kSignThreshold
    double min_tau = 0.0;
    std::size_t negative_cells = 0;
    double tau_at(std::size_t ia, std::size_t jf) const {
        return tau_value[ia * f_axis.points + jf];
    }
    bool negative_at(std::size_t ia, std::size_t jf) const {
        return negative[ia * f_axis.points + jf] != 0;
    }
};

RegionMap region_map(const EmWaveguide& model, double a_min, double a_max,
                     std::size_t a_points, const FrequencyGrid& f_axis,
                     Execution exec = Execution::serial);

// Probes the product v_gr * v_ph,well = (a / tau) * (omega / k') at
// geometrically spaced frequencies against the constant-n target (c/n)^2,
// and reports the relative weight of the oscillatory term the limit drops.
// The product itself does not converge pointwise for n > 1; the weight does.
struct HighFreqProbe {
    double f = 0.0;              // Hz
    double tau = 0.0;            // s, full formula
    double tau_limit_form = 0.0; // s, a*omega*n^2/(c^2 k')
    double product = 0.0;        // (a/tau)*(omega/k'), m^2/s^2
    double product_rel_error = 0.0;   // vs (c/n)^2
    double interference_weight = 0.0; // dropped numerator term envelope, relative
};

struct HighFreqReport {
    double target = 0.0;  // (c/n)^2
    std::vector<HighFreqProbe> probes;  // ascending f
};

HighFreqReport highfreq_limit_check(const EmWaveguide& model, double a,
                                    std::span<const double> probe_frequencies);
// default probes: 10, 100, 1000 GHz
HighFreqReport highfreq_limit_check(const EmWaveguide& model, double a);

// For each energy above the baseline, scans well widths for any negative
// phase time (local 3-point derivative in energy). The negative-capable
// energies are expected to sit below half the well depth; the report states
// what the grid found, it does not assume the theorem.
struct NegativeConditionReport {
    std::vector<double> energy_ratio;        // (E - E0)/V0, cell centers in (0,1)
    std::vector<std::uint8_t> has_negative;  // per energy
    // midpoint between the last capable and first incapable ratio, NaN if the
    // partition is not a prefix (reportable finding, not an assumption)
    double boundary_ratio = 0.0;
    bool clean_partition = false;
};

NegativeConditionReport negative_condition_scan(const QuantumWellSpec& spec,
                                                std::size_t energy_cells,
                                                double a_min, double a_max,
                                                std::size_t a_points,
                                                Execution exec = Execution::serial);

}  // namespace qwell

#include "qwell/phasetime.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qwell/errors.hpp"
#include "qwell/scattering.hpp"

namespace qwell {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

void FrequencyGrid::validate() const {
    if (points < 3) {
        throw DomainError("frequency grid needs at least 3 points");
    }
    if (!(f_min > 0.0) || !(f_max > f_min)) {
        throw DomainError("frequency grid needs 0 < f_min < f_max");
    }
}

std::vector<double> unwrap_phase(std::span<const double> series) {
    std::vector<double> out(series.size());
    if (series.empty()) {
        return out;
    }
    out[0] = series[0];
    for (std::size_t i = 1; i < series.size(); ++i) {
        // remainder is exact mod 2pi for the representable 2pi
        const double d = std::remainder(series[i] - out[i - 1], kTwoPi);
        if (std::abs(d) > kPi - 1e-6) {
            std::ostringstream msg;
            msg << "phase step at sample " << i << " is within 1e-6 of half a turn ("
                << d << " rad); the branch is ambiguous, use a denser grid";
            throw UnwrapError(msg.str(), i);
        }
        out[i] = out[i - 1] + d;
    }
    return out;
}

std::vector<double> differentiate(std::span<const double> y, double step) {
    const std::size_t n = y.size();
    if (n < 3) {
        throw DomainError("derivative needs at least 3 samples");
    }
    if (!(step > 0.0)) {
        throw DomainError("derivative needs a positive step");
    }
    std::vector<double> d(n);
    // one-sided stencils in difference form: exact zero for constant input,
    // smaller rounding error for nearby values than the monomial form
    d[0] = (4.0 * (y[1] - y[0]) - (y[2] - y[0])) / (2.0 * step);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (y[i + 1] - y[i - 1]) / (2.0 * step);
    }
    d[n - 1] = (4.0 * (y[n - 1] - y[n - 2]) - (y[n - 1] - y[n - 3])) / (2.0 * step);
    return d;
}

double phase_time_analytic(const EmWaveguide& model, double f, double a) {
    if (!(a >= 0.0)) {
        throw DomainError("well width a must be >= 0");
    }
    const double omega = kTwoPi * f;
    const WavenumberPair kk = em_wavenumbers(model, omega);
    const double c = model.constants.c;
    const double n = model.medium.refractive_index_n;
    const double k2 = kk.k * kk.k;
    const double kp2 = kk.kprime * kk.kprime;
    const double kp02 = kp2 - n * n * k2;  // constant in f
    const double x = kk.kprime * a;
    const double sinc2 = (x == 0.0) ? 2.0 : std::sin(2.0 * x) / x;
    const double sx = std::sin(x);
    const double num = 2.0 * n * n * k2 * (kp2 + k2) - (kp2 - k2) * kp02 * sinc2;
    const double den = 4.0 * k2 * kp2 + (kp2 - k2) * (kp2 - k2) * sx * sx;
    return (a * omega / (c * c * kk.k)) * num / den;
}

namespace {

// Shared sweep core: principal phases and F over the grid, computed in
// parallel after up-front validation so loop bodies cannot throw.
struct GridTransmission {
    std::vector<std::complex<double>> F;
    std::vector<double> phase_principal;
};

GridTransmission grid_transmission(const DispersionModel& model, const FrequencyGrid& grid,
                                   double a, Execution exec) {
    grid.validate();
    if (!(a >= 0.0)) {
        throw DomainError("well width a must be >= 0");
    }
    // validates model and rejects evanescent bands in one shot
    (void)wavenumbers_at_frequency(model, grid.f_min);
    GridTransmission out;
    out.F.resize(grid.points);
    out.phase_principal.resize(grid.points);
    parallel_for(exec, grid.points, [&](std::size_t i) {
        const WavenumberPair kk = wavenumbers_at_frequency(model, grid.at(i));
        const WellScatterer s{kk.k, kk.kprime, a};
        const std::complex<double> F = transmission_coefficient(s);
        out.F[i] = F;
        out.phase_principal[i] = std::arg(F);
    });
    return out;
}

}  // namespace

PhaseTimeProfile phase_time_numeric(const DispersionModel& model, const FrequencyGrid& grid,
                                    double a, Execution exec) {
    const GridTransmission gt = grid_transmission(model, grid, a, exec);
    PhaseTimeProfile out;
    out.grid = grid;
    out.method = Method::numeric;
    out.phase_unwrapped = unwrap_phase(gt.phase_principal);
    out.tau = differentiate(out.phase_unwrapped, grid.step());
    for (double& t : out.tau) {
        t /= kTwoPi;
    }
    return out;
}

SweepResult sweep(const DispersionModel& model, const FrequencyGrid& grid, double a,
                  Execution exec) {
    const GridTransmission gt = grid_transmission(model, grid, a, exec);
    SweepResult out;
    out.grid = grid;
    out.F = gt.F;
    out.magnitude_sq.resize(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) {
        out.magnitude_sq[i] = std::norm(gt.F[i]);
    }
    out.phase_unwrapped = unwrap_phase(gt.phase_principal);
    out.tau_numeric = differentiate(out.phase_unwrapped, grid.step());
    for (double& t : out.tau_numeric) {
        t /= kTwoPi;
    }
    out.tau_analytic.assign(grid.points, std::numeric_limits<double>::quiet_NaN());
    if (const auto* em = std::get_if<EmWaveguide>(&model)) {
        parallel_for(exec, grid.points, [&](std::size_t i) {
            out.tau_analytic[i] = phase_time_analytic(*em, grid.at(i), a);
        });
    }
    return out;
}

RegionMap region_map(const EmWaveguide& model, double a_min, double a_max,
                     std::size_t a_points, const FrequencyGrid& f_axis, Execution exec) {
    f_axis.validate();
    model.validate();
    if (!(a_min >= 0.0) || !(a_max > a_min) || a_points < 2) {
        throw DomainError("width axis needs 0 <= a_min < a_max and at least 2 points");
    }
    // reject evanescent bands before entering the parallel region
    (void)em_wavenumbers(model, kTwoPi * f_axis.f_min);

    RegionMap out;
    out.f_axis = f_axis;
    out.a_axis.resize(a_points);
    const double da = (a_max - a_min) / static_cast<double>(a_points - 1);
    for (std::size_t i = 0; i < a_points; ++i) {
        out.a_axis[i] = a_min + da * static_cast<double>(i);
    }
    const std::size_t cells = a_points * f_axis.points;
    out.tau_value.resize(cells);
    out.negative.resize(cells);
    parallel_for(exec, cells, [&](std::size_t idx) {
        const std::size_t ia = idx / f_axis.points;
        const std::size_t jf = idx % f_axis.points;
        const double tau = phase_time_analytic(model, f_axis.at(jf), out.a_axis[ia]);
        out.tau_value[idx] = tau;
        out.negative[idx] = tau < -kSignThreshold ? 1 : 0;
    });
    // reductions kept serial and deterministic
    out.min_tau = out.tau_value[0];
    for (std::size_t i = 0; i < cells; ++i) {
        if (out.tau_value[i] < out.min_tau) {
            out.min_tau = out.tau_value[i];
        }
        out.negative_cells += out.negative[i];
    }
    return out;
}

HighFreqReport highfreq_limit_check(const EmWaveguide& model, double a,
                                    std::span<const double> probe_frequencies) {
    if (!(a > 0.0)) {
        throw DomainError("limit check needs a > 0");
    }
    model.validate();
    const double c = model.constants.c;
    const double n = model.medium.refractive_index_n;
    HighFreqReport rep;
    rep.target = (c / n) * (c / n);
    for (const double f : probe_frequencies) {
        const double omega = kTwoPi * f;
        const WavenumberPair kk = em_wavenumbers(model, omega);
        HighFreqProbe p;
        p.f = f;
        p.tau = phase_time_analytic(model, f, a);
        p.tau_limit_form = a * omega * n * n / (c * c * kk.kprime);
        p.product = (a / p.tau) * (omega / kk.kprime);
        p.product_rel_error = std::abs(p.product / rep.target - 1.0);
        const double k2 = kk.k * kk.k;
        const double kp2 = kk.kprime * kk.kprime;
        const double kp02 = kp2 - n * n * k2;
        // envelope of the dropped sin(2k'a)/(k'a) term relative to the kept one
        p.interference_weight =
            (kp2 - k2) * kp02 / (kk.kprime * a) / (2.0 * n * n * k2 * (kp2 + k2));
        rep.probes.push_back(p);
    }
    return rep;
}

HighFreqReport highfreq_limit_check(const EmWaveguide& model, double a) {
    const double probes[] = {10e9, 100e9, 1000e9};
    return highfreq_limit_check(model, a, probes);
}

NegativeConditionReport negative_condition_scan(const QuantumWellSpec& spec,
                                                std::size_t energy_cells, double a_min,
                                                double a_max, std::size_t a_points,
                                                Execution exec) {
    spec.validate();
    if (energy_cells < 2 || a_points < 2 || !(a_min > 0.0) || !(a_max > a_min)) {
        throw DomainError("scan needs >= 2 energy cells and a positive geometric width range");
    }
    NegativeConditionReport rep;
    rep.energy_ratio.resize(energy_cells);
    rep.has_negative.assign(energy_cells, 0);
    for (std::size_t i = 0; i < energy_cells; ++i) {
        rep.energy_ratio[i] =
            (static_cast<double>(i) + 0.5) / static_cast<double>(energy_cells);
    }
    if (spec.depth_V0 == 0.0) {
        // no well at all: free propagation, nothing to scan
        rep.clean_partition = true;
        rep.boundary_ratio = 0.0;
        return rep;
    }

    std::vector<double> widths(a_points);
    const double ratio = std::pow(a_max / a_min, 1.0 / static_cast<double>(a_points - 1));
    for (std::size_t j = 0; j < a_points; ++j) {
        widths[j] = a_min * std::pow(ratio, static_cast<double>(j));
    }

    const double h_planck = kTwoPi * PhysicalConstants{}.hbar;
    const DispersionModel model = QmParticle{spec, {}};
    const double f_cutoff = spec.baseline_E0 / h_planck;
    std::vector<std::uint8_t> row_error(energy_cells, 0);
    parallel_for(exec, energy_cells, [&](std::size_t i) {
        const double f = (spec.baseline_E0 + rep.energy_ratio[i] * spec.depth_V0) / h_planck;
        const double hf = (f - f_cutoff) * 1e-4;
        const FrequencyGrid local{f - hf, f + hf, 3};
        try {
            for (const double a : widths) {
                const PhaseTimeProfile p =
                    phase_time_numeric(model, local, a, Execution::serial);
                if (p.tau[1] < -kSignThreshold) {
                    rep.has_negative[i] = 1;
                    break;
                }
            }
        } catch (const Error&) {
            row_error[i] = 1;  // rethrown after the parallel region
        }
    });
    for (std::size_t i = 0; i < energy_cells; ++i) {
        if (row_error[i]) {
            throw DomainError("negative-condition scan failed at energy ratio " +
                              std::to_string(rep.energy_ratio[i]));
        }
    }

    std::size_t first_false = energy_cells;
    for (std::size_t i = 0; i < energy_cells; ++i) {
        if (!rep.has_negative[i]) {
            first_false = i;
            break;
        }
    }
    rep.clean_partition = true;
    for (std::size_t i = first_false; i < energy_cells; ++i) {
        if (rep.has_negative[i]) {
            rep.clean_partition = false;
        }
    }
    if (!rep.clean_partition) {
        rep.boundary_ratio = std::numeric_limits<double>::quiet_NaN();
    } else if (first_false == 0) {
        rep.boundary_ratio = 0.0;
    } else if (first_false == energy_cells) {
        rep.boundary_ratio = 1.0;
    } else {
        rep.boundary_ratio =
            0.5 * (rep.energy_ratio[first_false - 1] + rep.energy_ratio[first_false]);
    }
    return rep;
}

}  // namespace qwell

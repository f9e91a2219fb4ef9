#include "qwell/packet.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "qwell/errors.hpp"
#include "qwell/scattering.hpp"

namespace qwell {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void PacketSpec::validate() const {
    if (!(f_center > 0.0) || !(sigma_f > 0.0)) {
        throw DomainError("packet needs positive f_center and sigma_f");
    }
    if (!(amplitude > 0.0)) {
        throw DomainError("packet amplitude must be positive");
    }
    grid.validate();
    const double slack = 1e-12 * f_center;
    if (grid.f_min > f_center - 5.0 * sigma_f + slack ||
        grid.f_max < f_center + 5.0 * sigma_f - slack) {
        throw DomainError("spectral grid must cover f_center +- 5 sigma_f");
    }
    if (time_points < 3) {
        throw DomainError("packet needs at least 3 time samples");
    }
    const double sigma_t = 1.0 / (kTwoPi * sigma_f);
    const double half = 0.5 * time_window;
    if (!(time_window > 0.0) ||
        std::exp(-half * half / (2.0 * sigma_t * sigma_t)) > 1e-6) {
        throw DomainError(
            "time window too short: envelope must decay below 1e-6 of peak at the edges");
    }
}

PacketSpec default_packet_spec(double f_center, double sigma_f) {
    PacketSpec spec;
    spec.f_center = f_center;
    spec.sigma_f = sigma_f;
    spec.grid = FrequencyGrid{f_center - 5.0 * sigma_f, f_center + 5.0 * sigma_f, 513};
    spec.time_window = 13.0 / (kTwoPi * sigma_f);  // 13 sigma_t
    spec.time_points = 8192;
    return spec;
}

namespace {

double refine_peak(const std::vector<double>& t, const std::vector<double>& env) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < env.size(); ++i) {
        if (env[i] > env[imax]) {
            imax = i;
        }
    }
    if (imax == 0 || imax + 1 == env.size()) {
        throw PeakError("envelope peak sits at the window edge; widen the time window");
    }
    // reject a second, equally tall local maximum: refinement would be arbitrary
    std::vector<std::size_t> cands;
    for (std::size_t i = 1; i + 1 < env.size(); ++i) {
        if (env[i] >= env[i - 1] && env[i] >= env[i + 1] &&
            env[i] >= env[imax] * (1.0 - 1e-9)) {
            if (!cands.empty() && i == cands.back() + 1) {
                cands.back() = i;  // plateau continuation
                continue;
            }
            cands.push_back(i);
        }
    }
    if (cands.size() > 1) {
        std::ostringstream msg;
        msg << "envelope has multiple near-equal peaks at t = {";
        for (std::size_t c = 0; c < cands.size(); ++c) {
            msg << (c ? ", " : " ") << t[cands[c]];
        }
        msg << " }; delay is ill-posed";
        throw PeakError(msg.str());
    }
    const double y0 = env[imax - 1];
    const double y1 = env[imax];
    const double y2 = env[imax + 1];
    const double curvature = y0 - 2.0 * y1 + y2;
    if (!(curvature < 0.0)) {
        throw PeakError("envelope is flat around its maximum; peak refinement is ill-posed");
    }
    const double dt = t[1] - t[0];
    return t[imax] + 0.5 * (y0 - y2) / curvature * dt;
}

}  // namespace

TransmittedPacket synthesize_and_transmit(const PacketSpec& spec, const DispersionModel& model,
                                          double a, Execution exec) {
    spec.validate();
    if (!(a >= 0.0)) {
        throw DomainError("well width a must be >= 0");
    }
    const double cutoff = cutoff_frequency(model);
    if (!(spec.f_center - 5.0 * spec.sigma_f > cutoff)) {
        std::ostringstream msg;
        msg << "packet spectrum leaks below the cutoff " << cutoff
            << " Hz: f_center - 5 sigma_f = " << spec.f_center - 5.0 * spec.sigma_f << " Hz";
        throw DomainError(msg.str());
    }
    (void)wavenumbers_at_frequency(model, spec.grid.f_min);  // rejects evanescent grids

    // the spectrum is synthesized at unit amplitude and scaled only on output,
    // so the refined peak times are bitwise independent of spec.amplitude
    const std::size_t nf = spec.grid.points;
    std::vector<double> amp(nf);
    std::vector<std::complex<double>> transfer(nf);
    parallel_for(exec, nf, [&](std::size_t j) {
        const double f = spec.grid.at(j);
        const double d = (f - spec.f_center) / spec.sigma_f;
        amp[j] = std::exp(-0.5 * d * d);
        const WavenumberPair kk = wavenumbers_at_frequency(model, f);
        transfer[j] = transmission_coefficient(WellScatterer{kk.k, kk.kprime, a});
    });

    TransmittedPacket out;
    const std::size_t nt = spec.time_points;
    const double dt = spec.time_window / static_cast<double>(nt - 1);
    const double df = spec.grid.step();
    const double scale = spec.amplitude;
    out.incident.t.resize(nt);
    out.incident.envelope.resize(nt);
    out.transmitted.t.resize(nt);
    out.transmitted.envelope.resize(nt);
    std::vector<double> base_in(nt);
    std::vector<double> base_out(nt);
    parallel_for(exec, nt, [&](std::size_t i) {
        const double t = -0.5 * spec.time_window + dt * static_cast<double>(i);
        std::complex<double> acc_in{0.0, 0.0};
        std::complex<double> acc_out{0.0, 0.0};
        for (std::size_t j = 0; j < nf; ++j) {
            const double phase = -kTwoPi * spec.grid.at(j) * t;
            const std::complex<double> e{std::cos(phase), std::sin(phase)};
            acc_in += amp[j] * e;
            acc_out += amp[j] * transfer[j] * e;
        }
        out.incident.t[i] = t;
        out.transmitted.t[i] = t;
        base_in[i] = std::abs(acc_in) * df;
        base_out[i] = std::abs(acc_out) * df;
        out.incident.envelope[i] = base_in[i] * scale;
        out.transmitted.envelope[i] = base_out[i] * scale;
    });
    out.incident.peak_time = refine_peak(out.incident.t, base_in);
    out.transmitted.peak_time = refine_peak(out.transmitted.t, base_out);
    double e_in = 0.0;
    double e_out = 0.0;
    for (std::size_t j = 0; j < nf; ++j) {
        e_in += amp[j] * amp[j];
        e_out += std::norm(amp[j] * transfer[j]);
    }
    out.spectral_energy_incident = e_in * scale * scale;
    out.spectral_energy_transmitted = e_out * scale * scale;
    return out;
}

double envelope_peak_time(const TimeTrace& trace) {
    if (trace.t.size() != trace.envelope.size() || trace.t.size() < 3) {
        throw DomainError("peak refinement needs matching t/envelope arrays of >= 3 samples");
    }
    return refine_peak(trace.t, trace.envelope);
}

double peak_delay(const TimeTrace& incident, const TimeTrace& transmitted) {
    if (incident.t.size() != transmitted.t.size() || incident.t.empty() ||
        incident.t.front() != transmitted.t.front() ||
        incident.t.back() != transmitted.t.back()) {
        throw DomainError("peak delay needs traces on one shared time grid");
    }
    return transmitted.peak_time - incident.peak_time;
}

double trace_energy(const TimeTrace& trace) {
    if (trace.t.size() < 2) {
        throw DomainError("trace energy needs at least 2 samples");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < trace.t.size(); ++i) {
        const double y0 = trace.envelope[i] * trace.envelope[i];
        const double y1 = trace.envelope[i + 1] * trace.envelope[i + 1];
        acc += 0.5 * (y0 + y1) * (trace.t[i + 1] - trace.t[i]);
    }
    return acc;
}

}  // namespace qwell

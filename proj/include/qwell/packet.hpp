#pragma once

#include <vector>

#include "qwell/dispersion.hpp"
#include "qwell/parallel.hpp"
#include "qwell/phasetime.hpp"

namespace qwell {

// Narrowband Gaussian test packet. sigma_f is the std of the spectral
// amplitude envelope exp(-(f-fc)^2 / (2 sigma_f^2)); the matching time
// envelope std is sigma_t = 1/(2 pi sigma_f).
struct PacketSpec {
    double f_center = 0.0;  // Hz
    double sigma_f = 0.0;   // Hz
    FrequencyGrid grid;     // must cover fc +- 5 sigma_f
    double time_window = 0.0;  // s, total width, centered on t = 0
    std::size_t time_points = 0;
    double amplitude = 1.0;  // spectral scale, must not affect delays
    void validate() const;
};

// grid fc +- 5 sigma at 513 points, window 13 sigma_t at 8192 points
PacketSpec default_packet_spec(double f_center, double sigma_f);

struct TimeTrace {
    std::vector<double> t;         // s
    std::vector<double> envelope;  // |analytic signal|, >= 0
    double peak_time = 0.0;        // s, parabola-refined
};

struct TransmittedPacket {
    TimeTrace incident;     // packet at the well entrance, x = 0
    TimeTrace transmitted;  // spectrum multiplied by F, referenced at x = a
    double spectral_energy_incident = 0.0;    // sum |A|^2
    double spectral_energy_transmitted = 0.0; // sum |A F|^2
};

// Spectral synthesis: s(t) = sum_j A_j [F_j] e^{-i 2 pi f_j t} df. The
// transfer function is exact per frequency, so the measured peak delay
// isolates the stationary-phase approximation error alone.
TransmittedPacket synthesize_and_transmit(const PacketSpec& spec, const DispersionModel& model,
                                          double a, Execution exec = Execution::serial);

// Parabola-refined location of the envelope maximum. Throws PeakError when
// the peak sits at a window edge, is flat, or has a near-equal rival.
double envelope_peak_time(const TimeTrace& trace);

// transmitted.peak_time - incident.peak_time; traces must share the grid.
double peak_delay(const TimeTrace& incident, const TimeTrace& transmitted);

// Trapezoid of envelope^2 over the window.
double trace_energy(const TimeTrace& trace);

}  // namespace qwell

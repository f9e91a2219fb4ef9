#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qwell/units.hpp"

namespace qwell {

// Guide cross-section and reference planes. well_width_a is the filled
// section; 0 <= a <= l.
struct GuideGeometry {
    double width_b = 0.0;         // m, broad wall
    double total_length_l = 0.0;  // m, port-to-port line length
    double well_width_a = 0.0;    // m
    void validate() const;
};

struct Medium {
    double refractive_index_n = 1.0;  // >= 1, frequency independent
    std::string name;
    void validate() const;
};

// Well parameters of the particle picture. depth_V0 >= 0 so the degenerate
// no-well case (n = 1 analogue) stays representable.
struct QuantumWellSpec {
    double baseline_E0 = 0.0;  // J, dispersion floor outside the well
    double depth_V0 = 0.0;     // J
    double mass_m = 0.0;       // kg
    void validate() const;
};

struct EmWaveguide {
    GuideGeometry geometry;
    Medium medium;
    PhysicalConstants constants;
    void validate() const;
};

struct QmParticle {
    QuantumWellSpec well;
    PhysicalConstants constants;
    void validate() const;
};

// One rule omega -> (k, k'). The em variant is the waveguide, the qm variant
// the massive particle; both are valid only above their cutoff.
using DispersionModel = std::variant<EmWaveguide, QmParticle>;

struct WavenumberPair {
    double k = 0.0;       // 1/m, outside the well
    double kprime = 0.0;  // 1/m, inside
};

struct CutoffPair {
    double omega0 = 0.0;   // rad/s, empty guide
    double omega_n = 0.0;  // rad/s, filled guide, omega0/n
};

CutoffPair cutoffs(const GuideGeometry& geometry, const Medium& medium,
                   const PhysicalConstants& constants = {});

// Throws EvanescentError at or below the relevant cutoff.
WavenumberPair em_wavenumbers(const EmWaveguide& model, double omega);
WavenumberPair qm_wavenumbers(const QmParticle& model, double energy);

// Shared entry point used by the sweep kernels. The axis variable is the
// frequency in Hz; for the qm variant it maps to energy E = h f, which makes
// the two variants share one cutoff frequency scale.
WavenumberPair wavenumbers_at_frequency(const DispersionModel& model, double f);
double cutoff_frequency(const DispersionModel& model);

// Waveguide <-> particle translation: E0 = hbar*omega0, V0 = hbar*(omega0-omega_n).
QuantumWellSpec energy_mapping(const GuideGeometry& geometry, const Medium& medium,
                               const PhysicalConstants& constants = {},
                               double mass = PhysicalConstants{}.electron_mass);

enum class Region { outer, well };

struct VelocityPair {
    double v_phase = 0.0;  // m/s
    double v_group = 0.0;  // m/s
};

VelocityPair velocities(const DispersionModel& model, double omega, Region region);

struct Preset {
    std::string name;
    EmWaveguide system;  // geometry.well_width_a left 0, set per run
};

const std::vector<Preset>& presets();
Preset find_preset(const std::string& name);  // throws DomainError listing names

}  // namespace qwell

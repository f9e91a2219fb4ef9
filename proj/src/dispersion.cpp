#include "qwell/dispersion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qwell/errors.hpp"

namespace qwell {

namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

void GuideGeometry::validate() const {
    if (!(width_b > 0.0)) {
        throw DomainError("guide width b must be positive");
    }
    if (!(total_length_l >= 0.0)) {
        throw DomainError("guide length l must be nonnegative");
    }
    if (!(well_width_a >= 0.0) || well_width_a > total_length_l) {
        throw DomainError("well width a must satisfy 0 <= a <= l");
    }
}

void Medium::validate() const {
    if (!(refractive_index_n >= 1.0)) {
        throw DomainError("refractive index n must be >= 1");
    }
}

void QuantumWellSpec::validate() const {
    if (!(depth_V0 >= 0.0)) {
        throw DomainError("well depth V0 must be >= 0");
    }
    if (!(mass_m > 0.0)) {
        throw DomainError("particle mass must be positive");
    }
    if (!(baseline_E0 >= 0.0)) {
        throw DomainError("baseline E0 must be >= 0");
    }
}

void EmWaveguide::validate() const {
    geometry.validate();
    medium.validate();
}

void QmParticle::validate() const {
    well.validate();
}

CutoffPair cutoffs(const GuideGeometry& geometry, const Medium& medium,
                   const PhysicalConstants& constants) {
    geometry.validate();
    medium.validate();
    CutoffPair out;
    out.omega0 = kPi * constants.c / geometry.width_b;
    out.omega_n = out.omega0 / medium.refractive_index_n;
    return out;
}

WavenumberPair em_wavenumbers(const EmWaveguide& model, double omega) {
    const CutoffPair co = cutoffs(model.geometry, model.medium, model.constants);
    if (!(omega > co.omega0)) {
        std::ostringstream msg;
        msg << "frequency " << omega / (2.0 * kPi) << " Hz is at or below the empty-guide cutoff "
            << co.omega0 / (2.0 * kPi) << " Hz; only evanescent modes exist there";
        throw EvanescentError(msg.str(), omega / (2.0 * kPi));
    }
    const double c = model.constants.c;
    const double n = model.medium.refractive_index_n;
    WavenumberPair out;
    out.k = std::sqrt(omega * omega - co.omega0 * co.omega0) / c;
    out.kprime = n * std::sqrt(omega * omega - co.omega_n * co.omega_n) / c;
    return out;
}

WavenumberPair qm_wavenumbers(const QmParticle& model, double energy) {
    model.validate();
    const QuantumWellSpec& w = model.well;
    if (!(energy > w.baseline_E0)) {
        std::ostringstream msg;
        msg << "energy " << energy << " J is at or below the baseline E0 " << w.baseline_E0
            << " J; the bound/evanescent regime is out of scope";
        throw EvanescentError(msg.str(), energy / (2.0 * kPi * model.constants.hbar));
    }
    const double hbar = model.constants.hbar;
    WavenumberPair out;
    out.k = std::sqrt(2.0 * w.mass_m * (energy - w.baseline_E0)) / hbar;
    out.kprime = std::sqrt(2.0 * w.mass_m * (energy - w.baseline_E0 + w.depth_V0)) / hbar;
    return out;
}

WavenumberPair wavenumbers_at_frequency(const DispersionModel& model, double f) {
    if (const auto* em = std::get_if<EmWaveguide>(&model)) {
        return em_wavenumbers(*em, 2.0 * kPi * f);
    }
    const auto& qm = std::get<QmParticle>(model);
    return qm_wavenumbers(qm, 2.0 * kPi * qm.constants.hbar * f);
}

double cutoff_frequency(const DispersionModel& model) {
    if (const auto* em = std::get_if<EmWaveguide>(&model)) {
        return cutoffs(em->geometry, em->medium, em->constants).omega0 / (2.0 * kPi);
    }
    const auto& qm = std::get<QmParticle>(model);
    qm.validate();
    return qm.well.baseline_E0 / (2.0 * kPi * qm.constants.hbar);
}

QuantumWellSpec energy_mapping(const GuideGeometry& geometry, const Medium& medium,
                               const PhysicalConstants& constants, double mass) {
    const CutoffPair co = cutoffs(geometry, medium, constants);
    QuantumWellSpec spec;
    spec.baseline_E0 = constants.hbar * co.omega0;
    spec.depth_V0 = constants.hbar * (co.omega0 - co.omega_n);
    spec.mass_m = mass;
    spec.validate();
    return spec;
}

VelocityPair velocities(const DispersionModel& model, double omega, Region region) {
    VelocityPair out;
    if (const auto* em = std::get_if<EmWaveguide>(&model)) {
        const WavenumberPair kk = em_wavenumbers(*em, omega);
        const double c = em->constants.c;
        const double n = em->medium.refractive_index_n;
        if (region == Region::outer) {
            out.v_phase = omega / kk.k;
            out.v_group = c * c * kk.k / omega;  // domega/dk of the empty guide
        } else {
            out.v_phase = omega / kk.kprime;
            out.v_group = (c / n) * (c / n) * kk.kprime / omega;
        }
        return out;
    }
    const auto& qm = std::get<QmParticle>(model);
    const double energy = qm.constants.hbar * omega;
    const WavenumberPair kk = qm_wavenumbers(qm, energy);
    const double kr = (region == Region::outer) ? kk.k : kk.kprime;
    out.v_phase = omega / kr;
    out.v_group = qm.constants.hbar * kr / qm.well.mass_m;  // dE/dk / hbar
    return out;
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = [] {
        std::vector<Preset> v;
        const GuideGeometry xband{0.02286, 0.250, 0.0};
        v.push_back({"teflon-xband", {xband, {std::sqrt(2.05), "teflon"}, {}}});
        v.push_back({"perspex-xband", {xband, {1.6, "perspex"}, {}}});
        v.push_back({"vacuum-xband", {xband, {1.0, "vacuum"}, {}}});
        return v;
    }();
    return table;
}

Preset find_preset(const std::string& name) {
    for (const Preset& p : presets()) {
        if (p.name == name) {
            return p;
        }
    }
    std::ostringstream msg;
    msg << "unknown preset '" << name << "'; available:";
    for (const Preset& p : presets()) {
        msg << " " << p.name;
    }
    throw DomainError(msg.str());
}

}  // namespace qwell

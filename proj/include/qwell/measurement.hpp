#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qwell/dispersion.hpp"
#include "qwell/parallel.hpp"
#include "qwell/phasetime.hpp"

namespace qwell {

// Two-port transmission samples plus the reference-plane metadata needed to
// strip the empty-guide line phase.
struct SParamTrace {
    std::vector<double> f;                    // Hz, strictly increasing
    std::vector<std::complex<double>> s21;
    double guide_length_l = 0.0;  // m
    double well_width_a = 0.0;    // m
    std::string label;
    void validate() const;  // >= 3 samples, monotone f, |s21| <= 1 + 1e-6
};

enum class CorrectionMode { analytic_k, reference_trace };

struct CorrectedTransmission {
    std::vector<double> f;  // Hz, same axis as the source trace
    std::vector<std::complex<double>> F;
    CorrectionMode mode = CorrectionMode::analytic_k;
};

enum class TraceFormat { csv, touchstone_ri };

// csv: header `freq_hz,s21_re,s21_im`. touchstone_ri: version-1 two-port,
// option line `# HZ S RI R 50` only (case-insensitive), S21 from columns 4-5.
SParamTrace load_trace(std::istream& in, TraceFormat format);
SParamTrace load_trace_file(const std::filesystem::path& path);  // by extension
void save_trace_csv(std::ostream& out, const SParamTrace& trace);

// Strips the empty-guide phase of the line outside the well, length l - a.
// analytic_k multiplies by e^{-i k(f)(l-a)} with the empty-guide dispersion;
// reference_trace scales the unwrapped phase of a measured empty-guide trace
// per unit length instead, anchored to the analytic k at the first point by
// an integer number of turns (the unwrap start branch is arbitrary).
CorrectedTransmission deembed(const SParamTrace& trace, const GuideGeometry& geometry,
                              CorrectionMode mode,
                              const SParamTrace* reference = nullptr,
                              const PhysicalConstants& constants = {});

// Unwraps arg F and differentiates, tau = (2 pi)^{-1} d phi / d f. Requires a
// uniform frequency axis (1e-6 relative spacing tolerance). smooth_window is
// an odd moving-average width applied to the unwrapped phase, 0 = off.
PhaseTimeProfile measured_phase_time(const CorrectedTransmission& ct,
                                     std::size_t smooth_window = 0);

// Synthetic measurement: S21(f) = F(f) e^{+i k(f)(l-a)}, the inverse of the
// analytic_k correction. Generates test fixtures.
SParamTrace forward_model(const GuideGeometry& geometry, const Medium& medium,
                          const FrequencyGrid& grid, Execution exec = Execution::serial,
                          const PhysicalConstants& constants = {});

}  // namespace qwell

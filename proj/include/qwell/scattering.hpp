#pragma once

#include <complex>

namespace qwell {

// Monochromatic three-region scattering setup: wave number k outside, k'
// inside a well of width a. All closed forms below assume real positive k, k'.
struct WellScatterer {
    double k = 0.0;       // 1/m
    double kprime = 0.0;  // 1/m
    double a = 0.0;       // m
    void validate() const;
};

// Amplitudes of the piecewise wave: A e^{ikx} + B e^{-ikx} on the left,
// C e^{ik'x} + D e^{-ik'x} in the well, F e^{ik(x-a)} + G e^{-ik(x-a)} on
// the right. Referencing the right side to x-a keeps the well's whole phase
// shift inside F and G.
struct CoefficientSet {
    std::complex<double> A, B, C, D, F, G;
};

struct TransmissionResult {
    std::complex<double> F;
    std::complex<double> B;
    double magnitude_sq = 0.0;
    double phase_principal = 0.0;  // rad, in (-pi, pi]
};

// Closed form: F = 1 / (cos k'a - (i/2)(k'/k + k/k') sin k'a).
std::complex<double> transmission_coefficient(const WellScatterer& s);

// Companion satisfying |B|^2 + |F|^2 = 1.
std::complex<double> reflection_coefficient(const WellScatterer& s);

TransmissionResult transmit(const WellScatterer& s);

// Independent path: partial-pivot solve of the 4x4 boundary-condition system
// (value and derivative continuity at x=0 and x=a) for arbitrary incident
// amplitudes A, G. Oracle for the closed forms above.
struct IncidentAmplitudes {
    std::complex<double> A{1.0, 0.0};
    std::complex<double> G{0.0, 0.0};
};

CoefficientSet solve_coefficients(const WellScatterer& s,
                                  const IncidentAmplitudes& incident = {});

double phase_principal(const WellScatterer& s);  // arg F via atan2, branch-safe

std::complex<double> field_evaluate(const CoefficientSet& cs, const WellScatterer& s,
                                    double x);

}  // namespace qwell

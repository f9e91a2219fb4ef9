#include "qwell/scattering.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "qwell/errors.hpp"

namespace qwell {

namespace {
using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};
}  // namespace

void WellScatterer::validate() const {
    if (!(k > 0.0) || !(kprime > 0.0)) {
        throw DomainError("wave numbers k and k' must be positive");
    }
    if (!(a >= 0.0)) {
        throw DomainError("well width a must be >= 0");
    }
}

std::complex<double> transmission_coefficient(const WellScatterer& s) {
    s.validate();
    const double x = s.kprime * s.a;
    const double u = 0.5 * (s.kprime / s.k + s.k / s.kprime);
    // denominator never vanishes: u >= 1 so cos and u*sin cannot both be 0
    return 1.0 / (std::cos(x) - kI * (u * std::sin(x)));
}

std::complex<double> reflection_coefficient(const WellScatterer& s) {
    const cplx F = transmission_coefficient(s);
    const double x = s.kprime * s.a;
    const double w = 0.5 * (s.kprime / s.k - s.k / s.kprime);
    return kI * (w * std::sin(x)) * F;
}

TransmissionResult transmit(const WellScatterer& s) {
    TransmissionResult out;
    out.F = transmission_coefficient(s);
    out.B = reflection_coefficient(s);
    out.magnitude_sq = std::norm(out.F);
    out.phase_principal = std::arg(out.F);
    return out;
}

double phase_principal(const WellScatterer& s) {
    return std::arg(transmission_coefficient(s));
}

namespace {

// Dense 4x4 complex solve, partial pivoting. Small fixed size, kept local so
// the oracle has no dependencies shared with the closed form.
std::array<cplx, 4> solve4(std::array<std::array<cplx, 4>, 4> m, std::array<cplx, 4> rhs) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        double best = std::abs(m[col][col]);
        for (int r = col + 1; r < 4; ++r) {
            const double mag = std::abs(m[r][col]);
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (!(best > 0.0)) {
            throw Error("singular boundary-condition system");
        }
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const cplx f = m[r][col] / m[col][col];
            m[r][col] = 0.0;
            for (int c = col + 1; c < 4; ++c) {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    std::array<cplx, 4> x;
    for (int r = 3; r >= 0; --r) {
        cplx acc = rhs[r];
        for (int c = r + 1; c < 4; ++c) {
            acc -= m[r][c] * x[c];
        }
        x[r] = acc / m[r][r];
    }
    return x;
}

}  // namespace

CoefficientSet solve_coefficients(const WellScatterer& s, const IncidentAmplitudes& incident) {
    s.validate();
    const cplx ik = kI * s.k;
    const cplx ikp = kI * s.kprime;
    const cplx ep = std::exp(ikp * s.a);
    const cplx em = 1.0 / ep;
    const cplx A = incident.A;
    const cplx G = incident.G;

    // unknowns x = (B, C, D, F); right side carries incident A and G
    std::array<std::array<cplx, 4>, 4> m{};
    std::array<cplx, 4> rhs{};
    // value at x=0: A + B = C + D
    m[0] = {cplx{-1.0}, cplx{1.0}, cplx{1.0}, cplx{0.0}};
    rhs[0] = A;
    // derivative at x=0: ik(A - B) = ik'(C - D)
    m[1] = {ik, ikp, -ikp, cplx{0.0}};
    rhs[1] = ik * A;
    // value at x=a: C e^{ik'a} + D e^{-ik'a} = F + G
    m[2] = {cplx{0.0}, ep, em, cplx{-1.0}};
    rhs[2] = G;
    // derivative at x=a: ik'(C e^{ik'a} - D e^{-ik'a}) = ik(F - G)
    m[3] = {cplx{0.0}, ikp * ep, -ikp * em, -ik};
    rhs[3] = -ik * G;

    const std::array<cplx, 4> x = solve4(m, rhs);
    CoefficientSet cs;
    cs.A = A;
    cs.B = x[0];
    cs.C = x[1];
    cs.D = x[2];
    cs.F = x[3];
    cs.G = G;
    return cs;
}

std::complex<double> field_evaluate(const CoefficientSet& cs, const WellScatterer& s, double x) {
    if (x < 0.0) {
        return cs.A * std::exp(kI * (s.k * x)) + cs.B * std::exp(-kI * (s.k * x));
    }
    if (x <= s.a) {
        return cs.C * std::exp(kI * (s.kprime * x)) + cs.D * std::exp(-kI * (s.kprime * x));
    }
    const double xr = x - s.a;
    return cs.F * std::exp(kI * (s.k * xr)) + cs.G * std::exp(-kI * (s.k * xr));
}

}  // namespace qwell

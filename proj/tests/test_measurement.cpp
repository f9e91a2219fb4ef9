#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "qwell/dispersion.hpp"
#include "qwell/errors.hpp"
#include "qwell/measurement.hpp"
#include "qwell/phasetime.hpp"
#include "qwell/scattering.hpp"

using namespace qwell;
using cplx = std::complex<double>;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

const GuideGeometry kTeflonGeom{0.02286, 0.250, 0.027};
const Medium kTeflon{std::sqrt(2.05), "teflon"};

SParamTrace teflon_fixture(const FrequencyGrid& grid, double a) {
    GuideGeometry g = kTeflonGeom;
    g.well_width_a = a;
    return forward_model(g, kTeflon, grid);
}

double max_noise_tau(double sigma_rad, double df) {
    // 8x the half-turn-safe read noise of the derivative stencils
    return 8.0 * sigma_rad * std::sqrt(1.5) / (kTwoPi * df);
}
}  // namespace

TEST_CASE("csv trace parsing") {
    SUBCASE("exact values round through") {
        std::istringstream in(
            "freq_hz,s21_re,s21_im\n"
            "6.6e9,0.25,-0.5\n"
            "6.7e9,0.5,0.125\n"
            "6.8e9,-0.75,0.0625\n");
        const SParamTrace tr = load_trace(in, TraceFormat::csv);
        REQUIRE(tr.f.size() == 3);
        CHECK(tr.f[0] == 6.6e9);
        CHECK(tr.f[2] == 6.8e9);
        CHECK(tr.s21[0] == cplx{0.25, -0.5});
        CHECK(tr.s21[2] == cplx{-0.75, 0.0625});
    }
    SUBCASE("crlf and blank lines tolerated") {
        std::istringstream in(
            "freq_hz,s21_re,s21_im\r\n"
            "6.6e9,0.25,-0.5\r\n"
            "\r\n"
            "6.7e9,0.5,0.125\r\n"
            "6.8e9,-0.75,0.0625\r\n");
        CHECK(load_trace(in, TraceFormat::csv).f.size() == 3);
    }
    SUBCASE("wrong header") {
        std::istringstream in("f,re,im\n1,2,3\n");
        CHECK_THROWS_AS(load_trace(in, TraceFormat::csv), ParseError);
    }
    SUBCASE("bad number reports the line") {
        std::istringstream in(
            "freq_hz,s21_re,s21_im\n"
            "6.6e9,0.25,-0.5\n"
            "6.7e9,zzz,0.125\n"
            "6.8e9,0.1,0.0\n");
        try {
            load_trace(in, TraceFormat::csv);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 3);
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("wrong column count reports the line") {
        std::istringstream in(
            "freq_hz,s21_re,s21_im\n"
            "6.6e9,0.25\n");
        try {
            load_trace(in, TraceFormat::csv);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
}

TEST_CASE("touchstone trace parsing") {
    SUBCASE("two-port RI rows with comments") {
        std::istringstream in(
            "! fixture sweep\n"
            "# hz S ri R 50\n"
            "6.6e9 0.1 0.2 0.25 -0.5 0.3 0.4 0.5 0.6 ! row comment\n"
            "6.7e9 0.1 0.2 0.5 0.125 0.3 0.4 0.5 0.6\n"
            "6.8e9 0.1 0.2 -0.75 0.0625 0.3 0.4 0.5 0.6\n");
        const SParamTrace tr = load_trace(in, TraceFormat::touchstone_ri);
        REQUIRE(tr.f.size() == 3);
        CHECK(tr.s21[0] == cplx{0.25, -0.5});   // columns 4 and 5
        CHECK(tr.s21[1] == cplx{0.5, 0.125});
        CHECK(tr.f[1] == 6.7e9);
    }
    SUBCASE("unsupported option line names the supported subset") {
        std::istringstream in("# GHZ S RI R 50\n1 0 0 0 0 0 0 0 0\n");
        CHECK_THROWS_WITH_AS(load_trace(in, TraceFormat::touchstone_ri),
                             doctest::Contains("# HZ S RI R 50"), ParseError);
    }
    SUBCASE("data before the option line") {
        std::istringstream in("6.6e9 0 0 0 0 0 0 0 0\n# HZ S RI R 50\n");
        CHECK_THROWS_AS(load_trace(in, TraceFormat::touchstone_ri), ParseError);
    }
    SUBCASE("missing option line") {
        std::istringstream in("! only comments\n");
        CHECK_THROWS_AS(load_trace(in, TraceFormat::touchstone_ri), ParseError);
    }
    SUBCASE("short data row") {
        std::istringstream in("# HZ S RI R 50\n6.6e9 0.1 0.2 0.25\n");
        try {
            load_trace(in, TraceFormat::touchstone_ri);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
}

TEST_CASE("trace validation") {
    SParamTrace tr;
    tr.f = {6.6e9, 6.7e9, 6.8e9};
    tr.s21 = {cplx{0.5, 0.0}, cplx{0.5, 0.0}, cplx{0.5, 0.0}};
    CHECK_NOTHROW(tr.validate());

    SUBCASE("non-monotone frequency") {
        tr.f[2] = 6.65e9;
        CHECK_THROWS_AS(tr.validate(), DomainError);
    }
    SUBCASE("active-device magnitude") {
        tr.s21[1] = cplx{1.1, 0.0};
        CHECK_THROWS_AS(tr.validate(), DomainError);
    }
    SUBCASE("too short") {
        tr.f.pop_back();
        tr.s21.pop_back();
        CHECK_THROWS_AS(tr.validate(), DomainError);
    }
    SUBCASE("length mismatch") {
        tr.s21.pop_back();
        CHECK_THROWS_AS(tr.validate(), DomainError);
    }
}

TEST_CASE("file round trip through save and load") {
    namespace fs = std::filesystem;
    const fs::path dir = "./meas_tmp_roundtrip";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const FrequencyGrid grid{6.62e9, 6.9e9, 801};
    const SParamTrace tr = teflon_fixture(grid, 0.027);
    const fs::path file = dir / "teflon_a27.csv";
    {
        std::ofstream out(file);
        save_trace_csv(out, tr);
    }
    const SParamTrace back = load_trace_file(file);
    REQUIRE(back.f.size() == tr.f.size());
    for (std::size_t i = 0; i < tr.f.size(); ++i) {
        CHECK(back.f[i] == tr.f[i]);
        CHECK(back.s21[i] == tr.s21[i]);   // %.17g round trip is bit-exact
    }
    CHECK(back.label == "teflon_a27");

    SUBCASE("unknown extension") {
        const fs::path bad = dir / "trace.txt";
        std::ofstream(bad) << "freq_hz,s21_re,s21_im\n";
        CHECK_THROWS_AS(load_trace_file(bad), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_trace_file(dir / "nope.csv"), ParseError);
    }
    fs::remove_all(dir);
}

TEST_CASE("forward model meta and passivity") {
    const FrequencyGrid grid{6.62e9, 6.9e9, 801};
    const SParamTrace tr = teflon_fixture(grid, 0.027);
    CHECK(tr.guide_length_l == 0.250);
    CHECK(tr.well_width_a == 0.027);
    CHECK(tr.label == "teflon");
    for (std::size_t i = 0; i < tr.f.size(); ++i) {
        CHECK(std::abs(tr.s21[i]) <= 1.0 + 1e-12);
    }
}

TEST_CASE("analytic de-embedding") {
    const FrequencyGrid grid{6.62e9, 6.9e9, 801};
    GuideGeometry geom = kTeflonGeom;
    const SParamTrace tr = teflon_fixture(grid, geom.well_width_a);
    const EmWaveguide guide{geom, kTeflon, {}};

    SUBCASE("recovers the true transmission") {
        const CorrectedTransmission ct = deembed(tr, geom, CorrectionMode::analytic_k);
        CHECK(ct.mode == CorrectionMode::analytic_k);
        for (std::size_t i = 0; i < grid.points; ++i) {
            const WavenumberPair kk = em_wavenumbers(guide, kTwoPi * grid.at(i));
            const cplx truth =
                transmission_coefficient(WellScatterer{kk.k, kk.kprime, geom.well_width_a});
            CHECK(std::abs(ct.F[i] - truth) < 1e-12 * std::abs(truth));
            // phase-only correction leaves the magnitude alone
            CHECK(std::abs(std::abs(ct.F[i]) - std::abs(tr.s21[i])) <
                  1e-15 * std::abs(tr.s21[i]));
        }
    }
    SUBCASE("fully filled guide needs no correction") {
        GuideGeometry full = geom;
        full.well_width_a = full.total_length_l;
        SParamTrace filled = tr;
        filled.well_width_a = full.total_length_l;
        const CorrectedTransmission ct = deembed(filled, full, CorrectionMode::analytic_k);
        for (std::size_t i = 0; i < grid.points; ++i) {
            CHECK(ct.F[i] == filled.s21[i]);
        }
    }
    SUBCASE("zero-length line is rejected") {
        GuideGeometry bad = geom;
        bad.total_length_l = 0.0;
        bad.well_width_a = 0.0;
        CHECK_THROWS_AS(deembed(tr, bad, CorrectionMode::analytic_k), DomainError);
    }
    SUBCASE("trace below cutoff is rejected") {
        SParamTrace low = tr;
        low.f[0] = 5.0e9;  // keep it sorted: shift the whole head down
        for (std::size_t i = 1; i < 3; ++i) {
            low.f[i] = 5.0e9 + static_cast<double>(i);
        }
        CHECK_THROWS_AS(deembed(low, geom, CorrectionMode::analytic_k), EvanescentError);
    }
}

TEST_CASE("reference-trace de-embedding agrees with the analytic path") {
    const FrequencyGrid grid{6.62e9, 6.9e9, 2001};
    GuideGeometry geom = kTeflonGeom;
    const SParamTrace tr = teflon_fixture(grid, geom.well_width_a);
    const SParamTrace ref = teflon_fixture(grid, 0.0);  // empty guide, F = 1

    const CorrectedTransmission ana = deembed(tr, geom, CorrectionMode::analytic_k);
    const CorrectedTransmission byref =
        deembed(tr, geom, CorrectionMode::reference_trace, &ref);
    CHECK(byref.mode == CorrectionMode::reference_trace);
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double dphi = std::arg(byref.F[i] * std::conj(ana.F[i]));
        CHECK(std::abs(dphi) < 1e-9);
    }

    SUBCASE("missing reference") {
        CHECK_THROWS_AS(deembed(tr, geom, CorrectionMode::reference_trace, nullptr),
                        DomainError);
    }
    SUBCASE("mismatched axis") {
        SParamTrace shifted = ref;
        shifted.f[5] += 1.0e3;
        CHECK_THROWS_AS(deembed(tr, geom, CorrectionMode::reference_trace, &shifted),
                        DomainError);
    }
    SUBCASE("vanishing reference magnitude") {
        SParamTrace dead = ref;
        dead.s21[7] = cplx{0.0, 0.0};
        CHECK_THROWS_AS(deembed(tr, geom, CorrectionMode::reference_trace, &dead),
                        DomainError);
    }
}

TEST_CASE("measured phase time closes on the closed form") {
    struct Fixture {
        GuideGeometry geom;
        Medium medium;
        FrequencyGrid grid;
    };
    const Fixture fixtures[] = {
        {{0.02286, 0.250, 0.027}, {std::sqrt(2.05), "teflon"}, {6.62e9, 6.9e9, 2001}},
        {{0.02286, 0.250, 0.006}, {1.6, "perspex"}, {6.8e9, 8.0e9, 4001}},
        {{0.02286, 0.250, 0.050}, {1.0, "vacuum"}, {6.7e9, 6.9e9, 2001}},
    };
    for (const Fixture& fx : fixtures) {
        CAPTURE(fx.medium.name);
        const SParamTrace tr = forward_model(fx.geom, fx.medium, fx.grid);
        const CorrectedTransmission ct = deembed(tr, fx.geom, CorrectionMode::analytic_k);
        const PhaseTimeProfile prof = measured_phase_time(ct);
        CHECK(prof.method == Method::measured);
        const EmWaveguide guide{fx.geom, fx.medium, {}};
        for (std::size_t i = 1; i + 1 < fx.grid.points; ++i) {
            const double ta = phase_time_analytic(guide, fx.grid.at(i), fx.geom.well_width_a);
            const double tol = std::max(1e-6 * std::abs(ta), 1e-14);
            CHECK(std::abs(prof.tau[i] - ta) <= tol);
        }
    }
}

TEST_CASE("phase-time extraction properties") {
    SUBCASE("constant-phase input has zero delay everywhere") {
        CorrectedTransmission ct;
        ct.F.assign(64, cplx{0.5, 0.25});
        ct.f.resize(64);
        for (std::size_t i = 0; i < 64; ++i) {
            ct.f[i] = 6.6e9 + 1e6 * static_cast<double>(i);
        }
        const PhaseTimeProfile prof = measured_phase_time(ct);
        for (double t : prof.tau) {
            CHECK(t == 0.0);
        }
    }
    SUBCASE("constant phase offset shifts nothing") {
        const FrequencyGrid grid{6.62e9, 6.9e9, 1001};
        GuideGeometry geom = kTeflonGeom;
        const SParamTrace tr = teflon_fixture(grid, geom.well_width_a);
        SParamTrace rotated = tr;
        const cplx rot = std::exp(cplx{0.0, 0.7});
        for (cplx& s : rotated.s21) {
            s *= rot;
        }
        const PhaseTimeProfile a =
            measured_phase_time(deembed(tr, geom, CorrectionMode::analytic_k));
        const PhaseTimeProfile b =
            measured_phase_time(deembed(rotated, geom, CorrectionMode::analytic_k));
        for (std::size_t i = 0; i < grid.points; ++i) {
            CHECK(std::abs(a.tau[i] - b.tau[i]) < 1e-12);
        }
    }
    SUBCASE("non-uniform axis is rejected") {
        CorrectedTransmission ct;
        ct.F.assign(8, cplx{0.5, 0.0});
        ct.f = {1e9, 2e9, 3e9, 4e9, 5e9, 6e9, 7e9, 8.5e9};
        CHECK_THROWS_AS(measured_phase_time(ct), DomainError);
    }
    SUBCASE("smoothing window must be odd") {
        CorrectedTransmission ct;
        ct.F.assign(16, cplx{0.5, 0.0});
        ct.f.resize(16);
        for (std::size_t i = 0; i < 16; ++i) {
            ct.f[i] = 6.6e9 + 1e6 * static_cast<double>(i);
        }
        CHECK_THROWS_AS(measured_phase_time(ct, 4), DomainError);
        CHECK_NOTHROW(measured_phase_time(ct, 5));
    }
}

TEST_CASE("phase noise propagates boundedly and smoothing helps") {
    const FrequencyGrid grid{6.6e9, 6.9e9, 1601};
    GuideGeometry geom = kTeflonGeom;
    geom.well_width_a = 0.004;
    const SParamTrace clean = teflon_fixture(grid, geom.well_width_a);

    const double sigma_rad = 0.5 * std::numbers::pi / 180.0;  // half a degree
    std::mt19937_64 rng(424242);
    std::normal_distribution<double> noise(0.0, sigma_rad);
    SParamTrace noisy = clean;
    for (cplx& s : noisy.s21) {
        s *= std::exp(cplx{0.0, noise(rng)});
    }

    const PhaseTimeProfile base =
        measured_phase_time(deembed(clean, geom, CorrectionMode::analytic_k));
    const PhaseTimeProfile raw =
        measured_phase_time(deembed(noisy, geom, CorrectionMode::analytic_k));
    const PhaseTimeProfile smooth =
        measured_phase_time(deembed(noisy, geom, CorrectionMode::analytic_k), 5);

    const double bound = max_noise_tau(sigma_rad, grid.step());
    double raw_rms = 0.0;
    double smooth_rms = 0.0;
    for (std::size_t i = 0; i < grid.points; ++i) {
        CHECK(std::abs(raw.tau[i] - base.tau[i]) < bound);
        raw_rms += (raw.tau[i] - base.tau[i]) * (raw.tau[i] - base.tau[i]);
        smooth_rms += (smooth.tau[i] - base.tau[i]) * (smooth.tau[i] - base.tau[i]);
    }
    CHECK(smooth_rms < 0.5 * raw_rms);
}

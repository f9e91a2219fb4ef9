#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwell/csv.hpp"
#include "qwell/dispersion.hpp"
#include "qwell/errors.hpp"
#include "qwell/measurement.hpp"
#include "qwell/packet.hpp"
#include "qwell/phasetime.hpp"
#include "qwell/units.hpp"

namespace {

using namespace qwell;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Options {
    std::string preset;
    double n = 1.0;
    double b_mm = 22.86;
    double l_mm = 250.0;
    std::vector<double> well_mm;
    double fmin_ghz = 6.56;
    double fmax_ghz = 6.9;
    std::size_t points = 2001;
    std::string mode = "em";
    std::string out_dir = ".";
    // regions
    double amin_mm = 0.0;
    double amax_mm = 90.0;
    std::size_t apoints = 361;
    // packet
    double fcenter_ghz = 0.0;
    double sigma_mhz = 0.0;
    double span_sigmas = 5.0;
    std::size_t spectral_points = 513;
    double window_sigmas = 13.0;
    std::size_t time_points = 8192;
    // deembed
    std::string input;
    std::string format = "auto";
    std::string correction = "analytic-k";
    std::string ref_path;
    std::size_t smooth = 0;
};

EmWaveguide resolve_guide(const Options& opt, bool n_given, bool b_given, bool l_given) {
    EmWaveguide guide;
    if (!opt.preset.empty()) {
        guide = find_preset(opt.preset).system;
    } else {
        guide.geometry = {opt.b_mm * 1e-3, opt.l_mm * 1e-3, 0.0};
        guide.medium = {opt.n, "custom"};
    }
    // explicit flags override the preset
    if (n_given) {
        guide.medium.refractive_index_n = opt.n;
    }
    if (b_given) {
        guide.geometry.width_b = opt.b_mm * 1e-3;
    }
    if (l_given) {
        guide.geometry.total_length_l = opt.l_mm * 1e-3;
    }
    guide.validate();
    return guide;
}

DispersionModel resolve_model(const Options& opt, const EmWaveguide& guide) {
    if (opt.mode == "qm") {
        const QuantumWellSpec spec =
            energy_mapping(guide.geometry, guide.medium, guide.constants);
        return QmParticle{spec, guide.constants};
    }
    return guide;
}

FrequencyGrid resolve_grid(const Options& opt) {
    return FrequencyGrid{opt.fmin_ghz * 1e9, opt.fmax_ghz * 1e9, opt.points};
}

std::string mm_label(double mm) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", mm);
    return buf;
}

SweepResult sweep_with_retry(const DispersionModel& model, FrequencyGrid grid, double a) {
    try {
        return sweep(model, grid, a, Execution::parallel);
    } catch (const UnwrapError&) {
        grid.points = grid.points * 2 - 1;
        std::cerr << "note: phase unwrap was ambiguous, retrying once with " << grid.points
                  << " points\n";
        return sweep(model, grid, a, Execution::parallel);
    }
}

// reference phase time for the packet report: closed form when available,
// local numeric derivative otherwise
double tau_reference(const DispersionModel& model, double f, double a) {
    if (const auto* em = std::get_if<EmWaveguide>(&model)) {
        return phase_time_analytic(*em, f, a);
    }
    const double hf = (f - cutoff_frequency(model)) * 1e-6;
    const FrequencyGrid local{f - hf, f + hf, 3};
    return phase_time_numeric(model, local, a).tau[1];
}

int cmd_constants(const Options& opt, bool n_given, bool b_given, bool l_given) {
    const EmWaveguide guide = resolve_guide(opt, n_given, b_given, l_given);
    const CutoffPair co = cutoffs(guide.geometry, guide.medium, guide.constants);
    const QuantumWellSpec spec = energy_mapping(guide.geometry, guide.medium, guide.constants);
    const auto line = [](const std::string& key, double value) {
        std::cout << key << " = " << format_g17(value) << "\n";
    };
    std::cout << "preset = " << (opt.preset.empty() ? "custom" : opt.preset) << "\n";
    line("n", guide.medium.refractive_index_n);
    line("b_m", guide.geometry.width_b);
    line("b_mm", guide.geometry.width_b * 1e3);
    line("l_m", guide.geometry.total_length_l);
    line("l_mm", guide.geometry.total_length_l * 1e3);
    line("f0_hz", co.omega0 / kTwoPi);
    line("f0_ghz", co.omega0 / kTwoPi / 1e9);
    line("fn_hz", co.omega_n / kTwoPi);
    line("fn_ghz", co.omega_n / kTwoPi / 1e9);
    line("E0_j", spec.baseline_E0);
    line("E0_uev", spec.baseline_E0 / kElectronVolt * 1e6);
    line("V0_j", spec.depth_V0);
    line("V0_uev", spec.depth_V0 / kElectronVolt * 1e6);
    line("mass_kg", spec.mass_m);
    return 0;
}

int cmd_sweep(const Options& opt, bool n_given, bool b_given, bool l_given) {
    if (opt.well_mm.empty()) {
        throw DomainError("sweep needs at least one --well-mm");
    }
    const EmWaveguide guide = resolve_guide(opt, n_given, b_given, l_given);
    const DispersionModel model = resolve_model(opt, guide);
    const FrequencyGrid grid = resolve_grid(opt);
    const std::filesystem::path out_dir(opt.out_dir);
    std::vector<std::string> files;
    for (const double mm : opt.well_mm) {
        const SweepResult result = sweep_with_retry(model, grid, mm * 1e-3);
        const std::string name = "sweep_a" + mm_label(mm) + "mm.csv";
        write_sweep_csv(out_dir / name, result);
        std::cout << "wrote " << (out_dir / name).string() << "\n";
        files.push_back(name);
    }
    std::ostringstream plot;
    plot << "# gnuplot script, data generated by the sweep command\n"
         << "set datafile separator ','\n"
         << "set terminal pngcairo size 1100,900\n"
         << "set output 'sweep.png'\n"
         << "set multiplot layout 3,1\n"
         << "set xlabel 'f (Hz)'\n";
    const char* panels[3][2] = {{"|F|^2", "4"}, {"phase (rad)", "5"}, {"tau (s)", "7"}};
    for (const auto& panel : panels) {
        plot << "set ylabel '" << panel[0] << "'\n" << "plot ";
        for (std::size_t i = 0; i < files.size(); ++i) {
            plot << (i ? ", " : "") << "'" << files[i] << "' every ::1 using 1:" << panel[1]
                 << " with lines title 'a=" << mm_label(opt.well_mm[i]) << " mm'";
        }
        plot << "\n";
    }
    plot << "unset multiplot\n";
    write_text_file(out_dir / "sweep.gnuplot", plot.str());
    std::cout << "wrote " << (out_dir / "sweep.gnuplot").string() << "\n";
    return 0;
}

int cmd_regions(const Options& opt, bool n_given, bool b_given, bool l_given) {
    if (opt.mode != "em") {
        throw DomainError("regions uses the closed-form waveguide phase time; run with --mode em");
    }
    const EmWaveguide guide = resolve_guide(opt, n_given, b_given, l_given);
    const FrequencyGrid grid = resolve_grid(opt);
    const RegionMap map = region_map(guide, opt.amin_mm * 1e-3, opt.amax_mm * 1e-3,
                                     opt.apoints, grid, Execution::parallel);
    const std::filesystem::path out_dir(opt.out_dir);
    write_regions_csv(out_dir / "regions.csv", map);
    std::cout << "wrote " << (out_dir / "regions.csv").string() << "\n";
    std::ostringstream plot;
    plot << "# gnuplot script, data generated by the regions command\n"
         << "set datafile separator ','\n"
         << "set terminal pngcairo size 900,700\n"
         << "set output 'regions.png'\n"
         << "set xlabel 'a (m)'\n"
         << "set ylabel 'f (Hz)'\n"
         << "set cblabel 'tau (s)'\n"
         << "# negative cells only; nonnegative cells are suppressed\n"
         << "plot 'regions.csv' every ::1 using 1:($4 > 0 ? $2 : 1/0):3 with points pointtype 5 "
            "pointsize 0.4 palette notitle\n";
    write_text_file(out_dir / "regions.gnuplot", plot.str());
    std::cout << "wrote " << (out_dir / "regions.gnuplot").string() << "\n";
    std::cout << "min_tau_s = " << format_g17(map.min_tau) << "\n"
              << "negative_cells = " << map.negative_cells << "\n";
    return 0;
}

int cmd_packet(const Options& opt, bool n_given, bool b_given, bool l_given) {
    if (opt.well_mm.size() != 1) {
        throw DomainError("packet needs exactly one --well-mm");
    }
    if (!(opt.fcenter_ghz > 0.0) || !(opt.sigma_mhz > 0.0)) {
        throw DomainError("packet needs --fcenter-ghz and --sigma-mhz");
    }
    const EmWaveguide guide = resolve_guide(opt, n_given, b_given, l_given);
    const DispersionModel model = resolve_model(opt, guide);
    const double a = opt.well_mm[0] * 1e-3;
    PacketSpec spec;
    spec.f_center = opt.fcenter_ghz * 1e9;
    spec.sigma_f = opt.sigma_mhz * 1e6;
    spec.grid = FrequencyGrid{spec.f_center - opt.span_sigmas * spec.sigma_f,
                              spec.f_center + opt.span_sigmas * spec.sigma_f,
                              opt.spectral_points};
    spec.time_window = opt.window_sigmas / (kTwoPi * spec.sigma_f);
    spec.time_points = opt.time_points;
    const TransmittedPacket packet = synthesize_and_transmit(spec, model, a, Execution::parallel);
    const std::filesystem::path out_dir(opt.out_dir);
    write_timetrace_csv(out_dir / "packet_incident.csv", packet.incident);
    write_timetrace_csv(out_dir / "packet_transmitted.csv", packet.transmitted);
    std::ostringstream plot;
    plot << "# gnuplot script, data generated by the packet command\n"
         << "set datafile separator ','\n"
         << "set terminal pngcairo size 1000,600\n"
         << "set output 'packet.png'\n"
         << "set xlabel 't (s)'\n"
         << "set ylabel 'envelope'\n"
         << "plot 'packet_incident.csv' every ::1 using 1:2 with lines title 'incident', "
            "'packet_transmitted.csv' every ::1 using 1:2 with lines title 'transmitted'\n";
    write_text_file(out_dir / "packet.gnuplot", plot.str());
    std::cout << "wrote " << (out_dir / "packet_incident.csv").string() << "\n"
              << "wrote " << (out_dir / "packet_transmitted.csv").string() << "\n"
              << "wrote " << (out_dir / "packet.gnuplot").string() << "\n";
    const double delay = peak_delay(packet.incident, packet.transmitted);
    const double tau = tau_reference(model, spec.f_center, a);
    std::cout << "peak_delay_s = " << format_g17(delay) << "\n"
              << "tau_phi_s = " << format_g17(tau) << "\n"
              << "rel_error = " << format_g17(std::abs(delay - tau) / std::abs(tau)) << "\n";
    return 0;
}

int cmd_deembed(const Options& opt, bool n_given, bool b_given, bool l_given) {
    if (opt.well_mm.size() != 1) {
        throw DomainError("deembed needs exactly one --well-mm (the well width of the trace)");
    }
    const EmWaveguide base = resolve_guide(opt, n_given, b_given, l_given);
    GuideGeometry geometry = base.geometry;
    geometry.well_width_a = opt.well_mm[0] * 1e-3;
    geometry.validate();

    const std::filesystem::path input(opt.input);
    SParamTrace trace;
    if (opt.format == "auto") {
        trace = load_trace_file(input);
    } else {
        std::ifstream in(input);
        if (!in) {
            throw ParseError("cannot open '" + input.string() + "'", 0);
        }
        trace = load_trace(in, opt.format == "touchstone" ? TraceFormat::touchstone_ri
                                                          : TraceFormat::csv);
    }
    trace.guide_length_l = geometry.total_length_l;
    trace.well_width_a = geometry.well_width_a;

    CorrectedTransmission corrected;
    if (opt.correction == "reference") {
        if (opt.ref_path.empty()) {
            throw DomainError("reference mode needs --ref <trace>");
        }
        const SParamTrace reference = load_trace_file(opt.ref_path);
        corrected = deembed(trace, geometry, CorrectionMode::reference_trace, &reference,
                            base.constants);
    } else {
        corrected = deembed(trace, geometry, CorrectionMode::analytic_k, nullptr,
                            base.constants);
    }
    const PhaseTimeProfile profile = measured_phase_time(corrected, opt.smooth);
    const std::filesystem::path out_path =
        std::filesystem::path(opt.out_dir) / (input.stem().string() + "_phasetime.csv");
    write_profile_csv(out_path, profile);
    std::cout << "wrote " << out_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"waveguide quantum-well phase time toolkit"};
    app.fallthrough();
    app.set_config("--config", "", "read options from a TOML-style key=value file");
    app.require_subcommand(1);

    auto* opt_n = app.add_option("--n", opt.n, "refractive index of the well medium");
    auto* opt_b = app.add_option("--guide-width-mm", opt.b_mm, "broad wall width b in mm");
    auto* opt_l = app.add_option("--length-mm", opt.l_mm, "port-to-port guide length l in mm");
    app.add_option("--preset", opt.preset,
                   "system preset: teflon-xband, perspex-xband, vacuum-xband");
    app.add_option("--well-mm", opt.well_mm, "well width(s) a in mm, repeatable")
        ->take_all();
    app.add_option("--fmin-ghz", opt.fmin_ghz, "sweep band lower edge, GHz");
    app.add_option("--fmax-ghz", opt.fmax_ghz, "sweep band upper edge, GHz");
    app.add_option("--points", opt.points, "frequency grid points");
    app.add_option("--mode", opt.mode, "dispersion variant")
        ->check(CLI::IsMember({"em", "qm"}));
    app.add_option("--out", opt.out_dir, "output directory for data files");

    CLI::App* sc_constants =
        app.add_subcommand("constants", "print cutoffs and the analogous well parameters");
    CLI::App* sc_sweep =
        app.add_subcommand("sweep", "transmission, phase, and phase time over a band");
    CLI::App* sc_regions =
        app.add_subcommand("regions", "negative phase time map over (width, frequency)");
    sc_regions->add_option("--amin-mm", opt.amin_mm, "width axis start, mm");
    sc_regions->add_option("--amax-mm", opt.amax_mm, "width axis end, mm");
    sc_regions->add_option("--apoints", opt.apoints, "width axis points");
    CLI::App* sc_packet =
        app.add_subcommand("packet", "wave packet transit oracle for the phase time");
    sc_packet->add_option("--fcenter-ghz", opt.fcenter_ghz, "packet carrier frequency, GHz");
    sc_packet->add_option("--sigma-mhz", opt.sigma_mhz, "spectral amplitude std, MHz");
    sc_packet->add_option("--span-sigmas", opt.span_sigmas, "spectral grid half width, sigmas");
    sc_packet->add_option("--spectral-points", opt.spectral_points, "spectral grid points");
    sc_packet->add_option("--window-sigmas", opt.window_sigmas, "time window width, sigma_t");
    sc_packet->add_option("--time-points", opt.time_points, "time samples");
    CLI::App* sc_deembed =
        app.add_subcommand("deembed", "process a measured S21 trace into a phase time profile");
    sc_deembed->add_option("input", opt.input, "trace file (.csv or .s2p)")->required();
    sc_deembed->add_option("--format", opt.format, "input format")
        ->check(CLI::IsMember({"auto", "csv", "touchstone"}));
    sc_deembed->add_option("--mode", opt.correction, "phase correction source")
        ->check(CLI::IsMember({"analytic-k", "reference"}));
    sc_deembed->add_option("--ref", opt.ref_path, "empty-guide reference trace");
    sc_deembed->add_option("--smooth", opt.smooth, "odd moving-average window, 0 = off");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const bool n_given = opt_n->count() > 0;
        const bool b_given = opt_b->count() > 0;
        const bool l_given = opt_l->count() > 0;
        if (sc_constants->parsed()) {
            return cmd_constants(opt, n_given, b_given, l_given);
        }
        if (sc_sweep->parsed()) {
            return cmd_sweep(opt, n_given, b_given, l_given);
        }
        if (sc_regions->parsed()) {
            return cmd_regions(opt, n_given, b_given, l_given);
        }
        if (sc_packet->parsed()) {
            return cmd_packet(opt, n_given, b_given, l_given);
        }
        if (sc_deembed->parsed()) {
            return cmd_deembed(opt, n_given, b_given, l_given);
        }
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

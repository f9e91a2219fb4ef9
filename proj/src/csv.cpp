#include "qwell/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qwell/errors.hpp"

namespace qwell {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        out << body;
        if (!out.flush()) {
            throw Error("write failed for '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void write_text_file(const std::filesystem::path& path, const std::string& body) {
    atomic_write(path, body);
}

void write_profile_csv(const std::filesystem::path& path, const PhaseTimeProfile& profile) {
    std::ostringstream body;
    body << "freq_hz,phase_rad_unwrapped,tau_seconds\n";
    for (std::size_t i = 0; i < profile.grid.points; ++i) {
        body << format_g17(profile.grid.at(i)) << ',' << format_g17(profile.phase_unwrapped[i])
             << ',' << format_g17(profile.tau[i]) << '\n';
    }
    atomic_write(path, body.str());
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    std::ostringstream body;
    body << "freq_hz,F_re,F_im,mag_sq,phase_rad_unwrapped,tau_analytic_s,tau_numeric_s\n";
    for (std::size_t i = 0; i < result.grid.points; ++i) {
        body << format_g17(result.grid.at(i)) << ',' << format_g17(result.F[i].real()) << ','
             << format_g17(result.F[i].imag()) << ',' << format_g17(result.magnitude_sq[i])
             << ',' << format_g17(result.phase_unwrapped[i]) << ','
             << format_g17(result.tau_analytic[i]) << ',' << format_g17(result.tau_numeric[i])
             << '\n';
    }
    atomic_write(path, body.str());
}

void write_regions_csv(const std::filesystem::path& path, const RegionMap& map) {
    std::ostringstream body;
    body << "a_m,f_hz,tau_s,negative_flag\n";
    for (std::size_t ia = 0; ia < map.a_axis.size(); ++ia) {
        for (std::size_t jf = 0; jf < map.f_axis.points; ++jf) {
            body << format_g17(map.a_axis[ia]) << ',' << format_g17(map.f_axis.at(jf)) << ','
                 << format_g17(map.tau_at(ia, jf)) << ',' << (map.negative_at(ia, jf) ? 1 : 0)
                 << '\n';
        }
    }
    atomic_write(path, body.str());
}

void write_trace_csv(const std::filesystem::path& path, const SParamTrace& trace) {
    std::ostringstream body;
    save_trace_csv(body, trace);
    atomic_write(path, body.str());
}

void write_timetrace_csv(const std::filesystem::path& path, const TimeTrace& trace) {
    std::ostringstream body;
    body << "t_seconds,envelope\n";
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        body << format_g17(trace.t[i]) << ',' << format_g17(trace.envelope[i]) << '\n';
    }
    atomic_write(path, body.str());
}

}  // namespace qwell

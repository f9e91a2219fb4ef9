#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qwell/csv.hpp"
#include "qwell/dispersion.hpp"
#include "qwell/measurement.hpp"
#include "qwell/packet.hpp"
#include "qwell/phasetime.hpp"

using namespace qwell;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

std::string first_line(const std::string& body) {
    return body.substr(0, body.find('\n'));
}

struct TmpDir {
    fs::path path;
    explicit TmpDir(const char* name) : path(fs::path(".") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TmpDir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("g17 formatting round-trips doubles") {
    for (double v : {1.0 / 3.0, -5.2226212388306825e-10, 6.5571403762029746e9, 0.0}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
    CHECK(format_g17(std::nan("")) == "nan");
}

TEST_CASE("writers are deterministic and leave no temp files") {
    TmpDir dir("io_tmp_writers");
    const EmWaveguide teflon = find_preset("teflon-xband").system;
    const FrequencyGrid grid{6.6e9, 6.7e9, 51};
    const SweepResult sw = sweep(DispersionModel{teflon}, grid, 0.027);
    const PhaseTimeProfile prof = phase_time_numeric(DispersionModel{teflon}, grid, 0.027);
    const RegionMap map = region_map(teflon, 0.0, 0.01, 5, grid);

    const fs::path a = dir.path / "sweep_a.csv";
    const fs::path b = dir.path / "sweep_b.csv";
    write_sweep_csv(a, sw);
    write_sweep_csv(b, sw);
    CHECK(slurp(a) == slurp(b));
    CHECK(first_line(slurp(a)) ==
          "freq_hz,F_re,F_im,mag_sq,phase_rad_unwrapped,tau_analytic_s,tau_numeric_s");

    const fs::path p = dir.path / "profile.csv";
    write_profile_csv(p, prof);
    CHECK(first_line(slurp(p)) == "freq_hz,phase_rad_unwrapped,tau_seconds");

    const fs::path r = dir.path / "regions.csv";
    write_regions_csv(r, map);
    const std::string rbody = slurp(r);
    CHECK(first_line(rbody) == "a_m,f_hz,tau_s,negative_flag");
    // flag column is strictly 0/1
    std::istringstream rows(rbody);
    std::string line;
    std::getline(rows, line);
    std::size_t nrows = 0;
    while (std::getline(rows, line)) {
        const std::string flag = line.substr(line.rfind(',') + 1);
        CHECK((flag == "0" || flag == "1"));
        ++nrows;
    }
    CHECK(nrows == map.a_axis.size() * map.f_axis.points);

    for (const auto& entry : fs::directory_iterator(dir.path)) {
        CHECK(entry.path().extension() != ".tmp");
    }
}

TEST_CASE("csv values round-trip bit-exact") {
    TmpDir dir("io_tmp_roundtrip");
    const EmWaveguide teflon = find_preset("teflon-xband").system;
    const FrequencyGrid grid{6.6e9, 6.7e9, 51};
    const PhaseTimeProfile prof = phase_time_numeric(DispersionModel{teflon}, grid, 0.004);
    const fs::path p = dir.path / "profile.csv";
    write_profile_csv(p, prof);

    std::ifstream in(p);
    std::string line;
    std::getline(in, line);  // header
    std::size_t i = 0;
    while (std::getline(in, line)) {
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = line.find(',', c1 + 1);
        CHECK(std::stod(line.substr(0, c1)) == grid.at(i));
        CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == prof.phase_unwrapped[i]);
        CHECK(std::stod(line.substr(c2 + 1)) == prof.tau[i]);
        ++i;
    }
    CHECK(i == grid.points);
}

TEST_CASE("particle sweep serializes the missing closed form as nan") {
    TmpDir dir("io_tmp_qm");
    const EmWaveguide teflon = find_preset("teflon-xband").system;
    const QuantumWellSpec spec = energy_mapping(teflon.geometry, teflon.medium);
    const QmParticle particle{spec, teflon.constants};
    const FrequencyGrid grid{6.6e9, 6.7e9, 11};
    const SweepResult sw = sweep(DispersionModel{particle}, grid, 0.004);
    const fs::path p = dir.path / "sweep_qm.csv";
    write_sweep_csv(p, sw);
    const std::string body = slurp(p);
    CHECK(body.find(",nan,") != std::string::npos);
}

TEST_CASE("time trace writer") {
    TmpDir dir("io_tmp_packet");
    TimeTrace tr;
    tr.t = {0.0, 1e-9, 2e-9};
    tr.envelope = {0.5, 1.0, 0.25};
    const fs::path p = dir.path / "trace.csv";
    write_timetrace_csv(p, tr);
    const std::string body = slurp(p);
    CHECK(first_line(body) == "t_seconds,envelope");
    CHECK(body.find("1.0000000000000001e-09,1\n") != std::string::npos);
}

TEST_CASE("text writer is atomic into nested directories") {
    TmpDir dir("io_tmp_text");
    const fs::path p = dir.path / "nested" / "deep" / "note.txt";
    write_text_file(p, "hello\n");
    CHECK(slurp(p) == "hello\n");
    CHECK(!fs::exists(p.string() + ".tmp"));
}

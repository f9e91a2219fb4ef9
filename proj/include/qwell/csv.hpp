#pragma once

#include <filesystem>
#include <string>

#include "qwell/measurement.hpp"
#include "qwell/packet.hpp"
#include "qwell/phasetime.hpp"

namespace qwell {

// %.17g: shortest text that round-trips a double exactly.
std::string format_g17(double v);

// All writers emit LF endings and fixed headers, write to a temp file in the
// same directory and rename into place, so outputs are atomic and
// byte-identical across runs.
void write_profile_csv(const std::filesystem::path& path, const PhaseTimeProfile& profile);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);
void write_regions_csv(const std::filesystem::path& path, const RegionMap& map);
void write_trace_csv(const std::filesystem::path& path, const SParamTrace& trace);
void write_timetrace_csv(const std::filesystem::path& path, const TimeTrace& trace);
void write_text_file(const std::filesystem::path& path, const std::string& body);

}  // namespace qwell

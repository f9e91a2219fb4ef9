// Times the serial reference implementation against the OpenMP path for the
// three heavy kernels. Results must be bitwise identical; the timing table is
// informational.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "qwell/dispersion.hpp"
#include "qwell/packet.hpp"
#include "qwell/phasetime.hpp"

using namespace qwell;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

template <typename Fn>
double time_best_of(int reps, const Fn& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = clock_type::now();
        fn();
        const double took = seconds_since(start);
        if (took < best) {
            best = took;
        }
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   %s\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                identical ? "bitwise-identical" : "MISMATCH");
}

}  // namespace

int main() {
    const EmWaveguide teflon = find_preset("teflon-xband").system;
    std::printf("openmp available: %s\n", parallel_available() ? "yes" : "no");

    {
        const FrequencyGrid grid{6.56e9, 6.9e9, 2001};
        RegionMap serial, parallel;
        const double ts = time_best_of(3, [&] {
            serial = region_map(teflon, 0.0, 0.090, 361, grid, Execution::serial);
        });
        const double tp = time_best_of(3, [&] {
            parallel = region_map(teflon, 0.0, 0.090, 361, grid, Execution::parallel);
        });
        const bool same =
            std::memcmp(serial.tau_value.data(), parallel.tau_value.data(),
                        serial.tau_value.size() * sizeof(double)) == 0 &&
            serial.negative == parallel.negative;
        report("region_map 361x2001", ts, tp, same);
    }

    {
        const PacketSpec spec = default_packet_spec(6.62e9, 5e6);
        TransmittedPacket serial, parallel;
        const double ts = time_best_of(3, [&] {
            serial = synthesize_and_transmit(spec, teflon, 0.027, Execution::serial);
        });
        const double tp = time_best_of(3, [&] {
            parallel = synthesize_and_transmit(spec, teflon, 0.027, Execution::parallel);
        });
        const bool same =
            std::memcmp(serial.incident.envelope.data(), parallel.incident.envelope.data(),
                        serial.incident.envelope.size() * sizeof(double)) == 0 &&
            std::memcmp(serial.transmitted.envelope.data(),
                        parallel.transmitted.envelope.data(),
                        serial.transmitted.envelope.size() * sizeof(double)) == 0;
        report("packet synth 513x8192", ts, tp, same);
    }

    {
        const FrequencyGrid grid{6.58e9, 6.9e9, 200001};
        SweepResult serial, parallel;
        const double ts =
            time_best_of(3, [&] { serial = sweep(teflon, grid, 0.027, Execution::serial); });
        const double tp =
            time_best_of(3, [&] { parallel = sweep(teflon, grid, 0.027, Execution::parallel); });
        const bool same =
            std::memcmp(serial.tau_numeric.data(), parallel.tau_numeric.data(),
                        serial.tau_numeric.size() * sizeof(double)) == 0 &&
            std::memcmp(serial.tau_analytic.data(), parallel.tau_analytic.data(),
                        serial.tau_analytic.size() * sizeof(double)) == 0;
        report("sweep 200001 pts", ts, tp, same);
    }

    return 0;
}

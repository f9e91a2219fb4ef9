#include "qwell/measurement.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qwell/errors.hpp"
#include "qwell/scattering.hpp"

namespace qwell {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

double parse_double(const std::string& token, std::size_t line_no) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + token + "'",
                         line_no);
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

SParamTrace parse_csv_trace(std::istream& in) {
    SParamTrace trace;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            if (line != "freq_hz,s21_re,s21_im") {
                throw ParseError("line 1: expected header 'freq_hz,s21_re,s21_im'", line_no);
            }
            header_seen = true;
            continue;
        }
        const std::vector<std::string> cols = split(line, ',');
        if (cols.size() != 3) {
            throw ParseError(
                "line " + std::to_string(line_no) + ": expected 3 columns, got " +
                    std::to_string(cols.size()),
                line_no);
        }
        trace.f.push_back(parse_double(cols[0], line_no));
        trace.s21.emplace_back(parse_double(cols[1], line_no), parse_double(cols[2], line_no));
    }
    if (!header_seen) {
        throw ParseError("empty trace file", 0);
    }
    return trace;
}

SParamTrace parse_touchstone_trace(std::istream& in) {
    SParamTrace trace;
    std::string line;
    std::size_t line_no = 0;
    bool options_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        const std::size_t bang = line.find('!');
        if (bang != std::string::npos) {
            line = line.substr(0, bang);
        }
        std::istringstream row(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (row >> tok) {
            tokens.push_back(tok);
        }
        if (tokens.empty()) {
            continue;
        }
        if (tokens[0] == "#") {
            // only the exact subset `# HZ S RI R 50` is supported
            std::string opt;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                opt += (i > 1 ? " " : "") + lower(tokens[i]);
            }
            if (opt != "hz s ri r 50") {
                throw ParseError("line " + std::to_string(line_no) +
                                     ": unsupported option line '#" + (opt.empty() ? "" : " ") +
                                     opt + "'; only '# HZ S RI R 50' is supported",
                                 line_no);
            }
            options_seen = true;
            continue;
        }
        if (!options_seen) {
            throw ParseError("line " + std::to_string(line_no) +
                                 ": data before the option line; expected '# HZ S RI R 50'",
                             line_no);
        }
        if (tokens.size() < 9) {
            throw ParseError("line " + std::to_string(line_no) +
                                 ": two-port data row needs 9 columns, got " +
                                 std::to_string(tokens.size()),
                             line_no);
        }
        trace.f.push_back(parse_double(tokens[0], line_no));
        trace.s21.emplace_back(parse_double(tokens[3], line_no),
                               parse_double(tokens[4], line_no));
    }
    if (!options_seen) {
        throw ParseError("missing option line '# HZ S RI R 50'", 0);
    }
    return trace;
}

}  // namespace

void SParamTrace::validate() const {
    if (f.size() != s21.size()) {
        throw DomainError("trace frequency and S21 arrays differ in length");
    }
    if (f.size() < 3) {
        throw DomainError("trace needs at least 3 samples");
    }
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (!(f[i] > f[i - 1])) {
            throw DomainError("trace frequencies must be strictly increasing (sample " +
                              std::to_string(i) + ")");
        }
    }
    for (std::size_t i = 0; i < s21.size(); ++i) {
        if (std::abs(s21[i]) > 1.0 + 1e-6) {
            throw DomainError("sample " + std::to_string(i) +
                              " has |S21| > 1 + 1e-6; not a passive transmission trace");
        }
    }
}

SParamTrace load_trace(std::istream& in, TraceFormat format) {
    SParamTrace trace =
        format == TraceFormat::csv ? parse_csv_trace(in) : parse_touchstone_trace(in);
    trace.validate();
    return trace;
}

SParamTrace load_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'", 0);
    }
    const std::string ext = lower(path.extension().string());
    TraceFormat format = TraceFormat::csv;
    if (ext == ".s2p" || ext == ".snp" || ext == ".ts") {
        format = TraceFormat::touchstone_ri;
    } else if (ext != ".csv") {
        throw ParseError("unsupported trace extension '" + ext + "'; use .csv or .s2p", 0);
    }
    SParamTrace trace = load_trace(in, format);
    trace.label = path.stem().string();
    return trace;
}

void save_trace_csv(std::ostream& out, const SParamTrace& trace) {
    out << "freq_hz,s21_re,s21_im\n";
    char buf[96];
    for (std::size_t i = 0; i < trace.f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", trace.f[i], trace.s21[i].real(),
                      trace.s21[i].imag());
        out << buf;
    }
}

namespace {

double empty_guide_k(const GuideGeometry& geometry, const PhysicalConstants& constants,
                     double f) {
    const double omega0 = std::numbers::pi * constants.c / geometry.width_b;
    const double omega = kTwoPi * f;
    if (!(omega > omega0)) {
        throw EvanescentError("trace frequency " + std::to_string(f) +
                                  " Hz is at or below the empty-guide cutoff",
                              f);
    }
    return std::sqrt(omega * omega - omega0 * omega0) / constants.c;
}

}  // namespace

CorrectedTransmission deembed(const SParamTrace& trace, const GuideGeometry& geometry,
                              CorrectionMode mode, const SParamTrace* reference,
                              const PhysicalConstants& constants) {
    trace.validate();
    geometry.validate();
    if (!(geometry.total_length_l > 0.0)) {
        throw DomainError("de-embedding needs a positive guide length l");
    }
    const double line = geometry.total_length_l - geometry.well_width_a;
    CorrectedTransmission out;
    out.f = trace.f;
    out.F.resize(trace.f.size());
    out.mode = mode;

    if (mode == CorrectionMode::analytic_k) {
        for (std::size_t i = 0; i < trace.f.size(); ++i) {
            const double k = empty_guide_k(geometry, constants, trace.f[i]);
            out.F[i] = trace.s21[i] * std::exp(std::complex<double>{0.0, -k * line});
        }
        return out;
    }

    if (reference == nullptr) {
        throw DomainError("reference_trace mode needs a reference trace");
    }
    reference->validate();
    if (reference->f.size() != trace.f.size()) {
        throw DomainError("reference and trace frequency axes differ in length");
    }
    std::vector<double> ref_phase(trace.f.size());
    for (std::size_t i = 0; i < trace.f.size(); ++i) {
        if (std::abs(reference->f[i] - trace.f[i]) > 1e-9 * trace.f[i]) {
            throw DomainError("reference and trace frequency axes differ at sample " +
                              std::to_string(i));
        }
        if (std::abs(reference->s21[i]) < 1e-12) {
            throw DomainError("reference magnitude vanishes at sample " + std::to_string(i));
        }
        ref_phase[i] = std::arg(reference->s21[i]);
    }
    std::vector<double> ref_unwrapped = unwrap_phase(ref_phase);
    // The unwrap starting branch is arbitrary: anchor it to the analytic k l
    // at the first sample by a whole number of turns, then never use the
    // analytic k again. The frequency dependence stays measured.
    const double k0l = empty_guide_k(geometry, constants, trace.f[0]) * geometry.total_length_l;
    const double turns = std::round((k0l - ref_unwrapped[0]) / kTwoPi);
    const double scale = line / geometry.total_length_l;
    for (std::size_t i = 0; i < trace.f.size(); ++i) {
        const double corrected_phase = scale * (ref_unwrapped[i] + kTwoPi * turns);
        out.F[i] = trace.s21[i] * std::exp(std::complex<double>{0.0, -corrected_phase});
    }
    return out;
}

PhaseTimeProfile measured_phase_time(const CorrectedTransmission& ct,
                                     std::size_t smooth_window) {
    const std::size_t n = ct.f.size();
    if (n < 3) {
        throw DomainError("phase time extraction needs at least 3 samples");
    }
    FrequencyGrid grid{ct.f.front(), ct.f.back(), n};
    grid.validate();
    const double step = grid.step();
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((ct.f[i] - ct.f[i - 1]) - step) > 1e-6 * step) {
            throw DomainError("frequency axis must be uniform for differentiation (sample " +
                              std::to_string(i) + ")");
        }
    }
    std::vector<double> principal(n);
    for (std::size_t i = 0; i < n; ++i) {
        principal[i] = std::arg(ct.F[i]);
    }
    PhaseTimeProfile out;
    out.grid = grid;
    out.method = Method::measured;
    out.phase_unwrapped = unwrap_phase(principal);
    if (smooth_window > 0) {
        if (smooth_window % 2 == 0 || smooth_window < 3) {
            throw DomainError("smoothing window must be odd and >= 3");
        }
        const std::size_t half = smooth_window / 2;
        std::vector<double> smooth(n);
        for (std::size_t i = 0; i < n; ++i) {
            // symmetric shrink keeps the window centered near the edges
            const std::size_t r = std::min({half, i, n - 1 - i});
            double acc = 0.0;
            for (std::size_t j = i - r; j <= i + r; ++j) {
                acc += out.phase_unwrapped[j];
            }
            smooth[i] = acc / static_cast<double>(2 * r + 1);
        }
        out.phase_unwrapped = std::move(smooth);
    }
    out.tau = differentiate(out.phase_unwrapped, step);
    for (double& t : out.tau) {
        t /= kTwoPi;
    }
    return out;
}

SParamTrace forward_model(const GuideGeometry& geometry, const Medium& medium,
                          const FrequencyGrid& grid, Execution exec,
                          const PhysicalConstants& constants) {
    grid.validate();
    const EmWaveguide guide{geometry, medium, constants};
    guide.validate();
    (void)em_wavenumbers(guide, kTwoPi * grid.f_min);  // rejects evanescent bands up front
    const double line = geometry.total_length_l - geometry.well_width_a;
    SParamTrace trace;
    trace.f.resize(grid.points);
    trace.s21.resize(grid.points);
    trace.guide_length_l = geometry.total_length_l;
    trace.well_width_a = geometry.well_width_a;
    trace.label = medium.name;
    parallel_for(exec, grid.points, [&](std::size_t i) {
        const double f = grid.at(i);
        const WavenumberPair kk = em_wavenumbers(guide, kTwoPi * f);
        const std::complex<double> F =
            transmission_coefficient(WellScatterer{kk.k, kk.kprime, geometry.well_width_a});
        trace.f[i] = f;
        trace.s21[i] = F * std::exp(std::complex<double>{0.0, kk.k * line});
    });
    return trace;
}

}  // namespace qwell

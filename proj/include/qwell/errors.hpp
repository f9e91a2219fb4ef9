#pragma once

#include <stdexcept>
#include <string>

namespace qwell {

// Base for all library errors so callers can catch one type at the boundary.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Physically invalid input: negative widths, frequencies at/below cutoff, etc.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Propagation requested below the cutoff frequency (wavenumber would be
// imaginary). Kept distinct so sweeps can report the offending frequency.
class EvanescentError : public DomainError {
public:
    EvanescentError(const std::string& what, double frequency_hz)
        : DomainError(what), frequency_hz(frequency_hz) {}
    double frequency_hz;
};

// Phase unwrapping hit a step too close to half a turn to resolve reliably.
class UnwrapError : public Error {
public:
    UnwrapError(const std::string& what, std::size_t index)
        : Error(what), index(index) {}
    std::size_t index;
};

// Malformed input file (CSV or Touchstone).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what), line(line) {}
    std::size_t line;
};

// Envelope peak detection failed (peak at window edge or flat envelope).
class PeakError : public Error {
public:
    explicit PeakError(const std::string& what) : Error(what) {}
};

}  // namespace qwell

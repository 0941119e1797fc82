#pragma once

#include <stdexcept>
#include <string>

namespace wwr {

/// Bad market data, malformed files, inconsistent inputs. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A calibration that cannot be satisfied (e.g. a CDS pillar requiring a
/// negative hazard).
class CalibrationError : public DataError {
public:
    explicit CalibrationError(const std::string& msg) : DataError(msg) {}
};

/// Argument outside an operation's domain (negative time, bad moment order).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A verification threshold breach (oracle residuals). CLI exit code 3.
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wwr

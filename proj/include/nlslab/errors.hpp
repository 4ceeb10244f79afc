#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// numerical errors (CLI exit code 3)
struct NonConvergence : Error { using Error::Error; };
struct Overflow : Error { using Error::Error; };
struct SingularInput : Error { using Error::Error; };
struct NotSymmetric : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct DegenerateSpectrum : Error { using Error::Error; };
struct ZeroDenominator : Error { using Error::Error; };
struct ResampleExhausted : Error { using Error::Error; };

// usage errors (CLI exit code 2)
struct ConfigError : Error { using Error::Error; };
struct BadSpecString : ConfigError { using ConfigError::ConfigError; };
struct IndexOutOfRange : ConfigError { using ConfigError::ConfigError; };
struct IndexNotInNls : ConfigError { using ConfigError::ConfigError; };
struct EmptyIntersection : ConfigError { using ConfigError::ConfigError; };
struct IoError : Error { using Error::Error; };

}  // namespace nlslab

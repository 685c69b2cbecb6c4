#pragma once

#include <stdexcept>
#include <string>

namespace snls {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidField : Error {
  using Error::Error;
};
struct InvalidMultiplier : Error {
  using Error::Error;
};
struct InvalidRegularity : Error {
  using Error::Error;
};
struct GridMismatch : Error {
  using Error::Error;
};
struct NormDiverges : Error {
  using Error::Error;
};
struct ScalingGridError : Error {
  using Error::Error;
};
struct RegularityOutOfRange : Error {
  using Error::Error;
};
struct LedgerNeedsPath : Error {
  using Error::Error;
};
struct BlowUpDetected : Error {
  explicit BlowUpDetected(double t)
      : Error("blow-up detected at t = " + std::to_string(t)), time(t) {}
  double time;
};
struct FormatError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace snls

#pragma once

#include <stdexcept>
#include <string>

namespace nvcoil {

/// Evaluation point coincides with (or is closer than the guard distance to)
/// a current filament, where the field diverges.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Config or parameter validation failure; carries the offending field path
/// (e.g. "turns[0].radius_mm") when one is known.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string path, const std::string& what)
      : std::invalid_argument(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Signal has no spectral peak above the noise floor.
class NoOscillationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spectrum has no dip deep enough to fit.
class NoDipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nvcoil

#pragma once

#include <stdexcept>
#include <string>

namespace radarloc {

/// Coarse classification used by front ends to map failures onto exit codes.
enum class ErrorCategory {
  configuration,  // malformed or invalid inputs
  infeasible,     // geometry or detection cannot produce a result
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string kind, const std::string& what)
      : std::runtime_error(what), category_(category), kind_(std::move(kind)) {}

  ErrorCategory category() const noexcept { return category_; }
  /// Stable machine-readable name, e.g. "InfeasibleGeometry".
  const std::string& kind() const noexcept { return kind_; }

 private:
  ErrorCategory category_;
  std::string kind_;
};

#define RADARLOC_DEFINE_ERROR(Name, Category)                     \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what)                        \
        : Error(ErrorCategory::Category, #Name, what) {}          \
  }

// configuration
RADARLOC_DEFINE_ERROR(ValidationError, configuration);
RADARLOC_DEFINE_ERROR(UnknownKey, configuration);
RADARLOC_DEFINE_ERROR(WindowTooLarge, configuration);

// infeasible geometry / detection
RADARLOC_DEFINE_ERROR(InfeasibleGeometry, infeasible);
RADARLOC_DEFINE_ERROR(DegenerateBaseline, infeasible);
RADARLOC_DEFINE_ERROR(InvalidSteering, infeasible);
RADARLOC_DEFINE_ERROR(OutsideFov, infeasible);
RADARLOC_DEFINE_ERROR(RangeAliased, infeasible);
RADARLOC_DEFINE_ERROR(NoDetection, infeasible);
RADARLOC_DEFINE_ERROR(EmptyMask, infeasible);
RADARLOC_DEFINE_ERROR(GridMismatch, infeasible);
RADARLOC_DEFINE_ERROR(NoCandidates, infeasible);

RADARLOC_DEFINE_ERROR(IoError, io);

#undef RADARLOC_DEFINE_ERROR

/// Config text that failed to parse; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCategory::configuration, "ParseError",
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace radarloc

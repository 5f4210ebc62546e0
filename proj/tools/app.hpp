#pragma once

// Run specifications and the nevlab command line.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nevlab/diffpoly.hpp"
#include "nevlab/error.hpp"
#include "nevlab/theorems.hpp"

namespace nevlab::cli {

/// Malformed or inconsistent run specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

struct CheckRequest {
  std::string id;
  CheckParams params;
  std::string label;  // id plus parameters, unique within a spec
};

struct RadiusSpec {
  double start = 2.0;
  double stop = 40.0;
  int count = 32;
  std::string spacing = "log";
};

struct RunSpec {
  std::optional<std::string> function;
  std::optional<DiffPolynomial> polynomial;
  RadiusSpec radii;
  std::vector<CheckRequest> checks;
  CheckTolerances tolerances;
  std::uint64_t seed = 0x5EED;
};

/// Parses a JSON run specification. Unknown fields are errors.
/// Throws SpecError, or ParseError for a bad expression.
RunSpec parse_run_spec(const std::string& json_text);

std::vector<double> grid(const RadiusSpec& radii);

/// Exit codes of run_cli.
enum Exit : int {
  kPass = 0,
  kCheckFailed = 1,
  kNotApplicable = 2,  // hypothesis violation, or every check vacuous
  kSpecError = 3,
  kNumericalFailure = 4,
};

/// nevlab <stats|zeros|nev|check> --spec FILE --out FILE [--format csv|json]
/// [--threads N] [--reproducible]. NEVLAB_SEED overrides the spec seed.
int run_cli(int argc, const char* const* argv);

}  // namespace nevlab::cli

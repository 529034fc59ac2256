#pragma once

#include "epsconvex/bodies.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace epsconvex {

enum class Command { riccati, check, profile, focal, roundtrip, smooth };
enum class OutputFormat { json, csv };

struct RunConfig {
  Command command = Command::check;
  std::optional<std::string> body_spec_path;
  std::optional<double> eps;
  double a = 1.0;
  double b = 1.0;
  std::uint64_t seed = 0;
  std::optional<OutputFormat> output_format;  // unset: csv for profile, json otherwise
  double tolerance = 1e-4;
  int steps = 64;
  int rank = 2;        // riccati
  int probes = 512;    // roundtrip
  // smooth; unset alpha/beta come from the body's closed form
  std::optional<double> alpha, beta, alpha_p, beta_p;
  double eta = 0.3;
  double kappa = 0.0;
};

/// Malformed body document. `where` is "line:col" for syntax errors, a JSON pointer otherwise.
class SpecError : public Error {
 public:
  SpecError(const std::string& source, const std::string& where, const std::string& what);
  std::string where;
};

ConvexBody parse_body_spec(const std::string& text, const std::string& source = "<body>");
ConvexBody load_body_spec(const std::string& path);

Command parse_command(const std::string& name);
const char* command_name(Command c);

/// Runs one command, writing the report to `out` and diagnostics to `err`.
/// Returns 0 on pass or completion, 2 on a failed verdict, 1 on error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace epsconvex

#pragma once

// Command-line front end. Kept as a library so tests can drive it with
// captured streams.

#include <iosfwd>
#include <string>
#include <vector>

#include "dynamo/radial_operator.hpp"

namespace dynamo::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kSolver = 3,
  kBracketing = 4,
};

/// `poly:a0,a1,...` or `const:v`.
radial::AlphaProfile parse_alpha(const std::string& spec);

/// Lines `coeffs=a0,a1,...` and `C=value`; `#` starts a comment.
radial::AlphaProfile parse_profile_file(const std::string& path);

/// %.17g; shortest form that round-trips a double.
std::string format_number(double x);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dynamo::cli

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mubex/error.hpp"
#include "mubex/field.hpp"

namespace mubtool {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kDimension = 2,
  kShape = 3,
  kHermiticity = 4,
  kStateValidity = 5,
};

int exit_code_for(mubex::Errc code);

/// Tab-separated digit product table: one row per k in [1, N], three
/// columns (r^T, k^T r, Sum) per requested r.
std::string render_digit_sum_table(const mubex::PrimePower& pp, const std::vector<std::int64_t>& rs);

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mubtool

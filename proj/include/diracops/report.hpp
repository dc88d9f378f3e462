#pragma once

#include <string>
#include <vector>

#include "diracops/core.hpp"
#include "diracops/operators.hpp"

namespace diracops {

/// Formats a double with 17 significant digits, enough for a lossless
/// round-trip of IEEE doubles.
std::string format_double(double v);

/// {"re": [[...]], "im": [[...]]} layout used for debugging dumps.
std::string matrix_to_json(const Mat4& m);
Mat4 matrix_from_json(const std::string& text);

std::string report_to_json(const IdentityReport& r);
std::string reports_to_json(const std::vector<IdentityReport>& rs);

/// Fixed-width human-readable table of identity reports.
std::string reports_to_text(const std::vector<IdentityReport>& rs);

struct ExpansionReport {
  std::string identity;
  double ratio = 0.0;          // characteristic p/m of the study
  double residual = 0.0;       // residual norm at that ratio
  double observed_order = 0.0; // from consecutive halvings
  double min_order = 0.0;      // threshold the study must reach
  bool pass = false;
};

/// Same JSON schema as the operator reports, with the expansion fields added.
std::string report_to_json(const ExpansionReport& r);

}  // namespace diracops

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace liegeo {

struct ReproLine {
  std::string label;
  double value;
  double expected;
  double tolerance;  // absolute
  bool pass;
};

/// Recomputes the closed-form numbers of the affine group example (incomplete geodesics,
/// Clairaut matrices and spectra, curve lengths, adjoint growth, idempotents, orbit types,
/// verdicts) and compares each with its reference value.
std::vector<ReproLine> aff_reproduction();

/// One "PASS"/"FAIL" line per entry; returns true when all pass.
bool print_reproduction(std::ostream& os, const std::vector<ReproLine>& lines);

}  // namespace liegeo

#pragma once

// Smallest field of a given characteristic that admits a linear network
// code, and construction of a concrete code over a given field.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lnc/network.hpp"
#include "lnc/poly.hpp"

namespace lnc {

struct FieldTrial {
  std::uint64_t q = 0;
  bool feasible = false;
};

struct FieldSizeResult {
  std::uint64_t p = 0;
  unsigned k = 0;
  std::uint64_t q = 0;
  std::vector<FieldTrial> trials;
  /// A term of the field-equation remainder of P over GF(q).
  FieldPtr field;
  MultiPoly::Term certificate;
  /// max(1, floor(log_p |T|)): the number of fields that should suffice.
  unsigned expected_trials = 0;
  /// More fields than expected_trials were needed.
  bool exceeded_expected = false;
};

struct FieldSizeOptions {
  /// Abort when an intermediate product grows beyond this many terms.
  std::size_t max_terms = 2'000'000;
};

/// Throws InfeasibleError when some sink has min-cut below h.
FieldSizeResult min_field_size(const Network& net, std::uint64_t p, const FieldSizeOptions& options = {});

struct CodingScheme {
  FieldPtr field;
  /// Every a-, f- and b-variable.
  Assignment values;
};

/// Throws InfeasibleError when no code exists over this field.
CodingScheme find_coding_scheme(const Network& net, const VariableRegistry& reg, const FieldPtr& field,
                                const FieldSizeOptions& options = {});

}  // namespace lnc

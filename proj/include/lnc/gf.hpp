#pragma once

// Exact arithmetic in GF(p^k).
//
// Elements are residue polynomials c_0 + c_1 x + ... + c_{k-1} x^{k-1} modulo
// a monic irreducible modulus. Internally an element is packed into a single
// integer code sum(c_i * p^i), so the codes of GF(q) are exactly 0..q-1, the
// prime subfield occupies codes 0..p-1, 0 is zero and 1 is one.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lnc {

using ElemCode = std::uint64_t;

bool is_prime(std::uint64_t n);

/// p^k, or nullopt-like 0 when it does not fit in 64 bits.
std::uint64_t checked_power(std::uint64_t p, unsigned k);

class FieldSpec {
 public:
  /// `modulus` holds k+1 coefficients, constant term first, and must be
  /// monic and irreducible over GF(p).
  FieldSpec(std::uint64_t p, std::vector<std::uint64_t> modulus);

  std::uint64_t characteristic() const { return p_; }
  unsigned degree() const { return static_cast<unsigned>(modulus_.size() - 1); }
  std::uint64_t order() const { return q_; }
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }

  /// "p^k", the notation used by the CLI.
  std::string label() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  std::uint64_t p_;
  std::uint64_t q_;
  std::vector<std::uint64_t> modulus_;
};

/// Smallest monic irreducible polynomial of degree k over GF(p), where
/// candidates are ranked by the integer sum(c_i p^i) of their lower
/// coefficients. For k = 1 this is always x, i.e. the prime field itself.
FieldSpec find_irreducible(std::uint64_t p, unsigned k);

/// Trial division by every monic polynomial of degree <= k/2.
bool is_irreducible(std::uint64_t p, std::span<const std::uint64_t> poly);

/// Parses "p^k" (or a bare prime power such as "8") into (p, k).
std::pair<std::uint64_t, unsigned> parse_field_order(std::string_view text);

/// Arithmetic context for one field. Immutable; share through FieldPtr.
class Field {
 public:
  /// Orders up to this size get log/antilog tables and may be enumerated.
  static constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 16;

  explicit Field(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  std::uint64_t order() const { return spec_.order(); }
  std::uint64_t characteristic() const { return spec_.characteristic(); }
  unsigned degree() const { return spec_.degree(); }
  bool enumerable() const { return order() <= kEnumerationLimit; }

  ElemCode add(ElemCode a, ElemCode b) const;
  ElemCode sub(ElemCode a, ElemCode b) const;
  ElemCode neg(ElemCode a) const;
  ElemCode mul(ElemCode a, ElemCode b) const;
  ElemCode inv(ElemCode a) const;
  ElemCode pow(ElemCode a, std::uint64_t e) const;

  /// The unique c with c^p = a (inverse Frobenius).
  ElemCode pth_root(ElemCode a) const;

  /// Image of an integer under Z -> GF(p) -> GF(q).
  ElemCode from_int(std::int64_t v) const;

  std::vector<std::uint64_t> digits(ElemCode a) const;
  ElemCode from_digits(std::span<const std::uint64_t> digits) const;

  bool contains(ElemCode a) const { return a < order(); }

 private:
  ElemCode mul_slow(ElemCode a, ElemCode b) const;
  void build_tables();

  FieldSpec spec_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
};

using FieldPtr = std::shared_ptr<const Field>;

FieldPtr make_field(FieldSpec spec);
/// GF(p^k) with the modulus chosen by find_irreducible.
FieldPtr make_field(std::uint64_t p, unsigned k);

bool same_field(const Field& a, const Field& b);

/// A value in a specific field.
class FieldElement {
 public:
  FieldElement(FieldPtr field, ElemCode code);

  static FieldElement zero(FieldPtr field) { return {std::move(field), 0}; }
  static FieldElement one(FieldPtr field) { return {std::move(field), 1}; }

  const FieldPtr& field() const { return field_; }
  ElemCode code() const { return code_; }
  bool is_zero() const { return code_ == 0; }

  /// Residue-polynomial coefficients, constant term first; length k.
  std::vector<std::uint64_t> coeffs() const { return field_->digits(code_); }

  std::string to_string() const;

  friend bool operator==(const FieldElement& x, const FieldElement& y);

 private:
  FieldPtr field_;
  ElemCode code_;
};

FieldElement ff_add(const FieldElement& x, const FieldElement& y);
FieldElement ff_sub(const FieldElement& x, const FieldElement& y);
FieldElement ff_mul(const FieldElement& x, const FieldElement& y);
FieldElement ff_inv(const FieldElement& x);
FieldElement ff_pow(const FieldElement& x, std::uint64_t e);

/// All q elements in increasing code order. Refused above kEnumerationLimit.
std::vector<FieldElement> ff_enumerate(const FieldPtr& field);

inline FieldElement operator+(const FieldElement& x, const FieldElement& y) { return ff_add(x, y); }
inline FieldElement operator-(const FieldElement& x, const FieldElement& y) { return ff_sub(x, y); }
inline FieldElement operator*(const FieldElement& x, const FieldElement& y) { return ff_mul(x, y); }

}  // namespace lnc

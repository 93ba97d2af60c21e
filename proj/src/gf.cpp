#include "lnc/gf.hpp"

#include <charconv>
#include <limits>
#include <sstream>

#include "lnc/error.hpp"

namespace lnc {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

// Dense polynomials over GF(p), constant term first, no trailing zeros.
using Coeffs = std::vector<std::uint64_t>;

void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  // Fermat; p is prime.
  std::uint64_t result = 1;
  std::uint64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = mulmod(result, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return result;
}

// Remainder of a modulo b (b nonzero).
Coeffs poly_rem(Coeffs a, const Coeffs& b, std::uint64_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint64_t lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = mulmod(factor, b[i], p);
      a[shift + i] = static_cast<std::uint64_t>((static_cast<u128>(a[shift + i]) + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Coeffs poly_mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = static_cast<std::uint64_t>((static_cast<u128>(prod[i + j]) + mulmod(a[i], b[j], p)) % p);
    }
  }
  return poly_rem(std::move(prod), f, p);
}

Coeffs poly_powmod(Coeffs base, std::uint64_t e, const Coeffs& f, std::uint64_t p) {
  Coeffs result{1};
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

Coeffs poly_gcd(Coeffs a, Coeffs b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    if (n % d == 0) return n == d;
  }
  for (std::uint64_t d = 17; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t checked_power(std::uint64_t p, unsigned k) {
  u128 acc = 1;
  for (unsigned i = 0; i < k; ++i) {
    acc *= p;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return 0;
  }
  return static_cast<std::uint64_t>(acc);
}

bool is_irreducible(std::uint64_t p, std::span<const std::uint64_t> poly) {
  Coeffs f(poly.begin(), poly.end());
  trim(f);
  if (f.size() < 2) return false;
  const unsigned k = static_cast<unsigned>(f.size() - 1);
  if (k == 1) return true;
  // Ben-Or: f is reducible iff gcd(x^(p^d) - x, f) != 1 for some d <= k/2.
  Coeffs x_power = poly_rem({0, 1}, f, p);
  for (unsigned d = 1; d <= k / 2; ++d) {
    x_power = poly_powmod(x_power, p, f, p);
    Coeffs diff = x_power;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (poly_gcd(f, diff, p).size() > 1) return false;
  }
  return true;
}

FieldSpec::FieldSpec(std::uint64_t p, std::vector<std::uint64_t> modulus)
    : p_(p), q_(0), modulus_(std::move(modulus)) {
  if (!is_prime(p_)) throw DomainError("field characteristic " + std::to_string(p_) + " is not prime");
  if (modulus_.size() < 2) throw DomainError("field modulus must have degree >= 1");
  if (modulus_.back() != 1) throw DomainError("field modulus must be monic");
  for (auto c : modulus_) {
    if (c >= p_) throw DomainError("field modulus coefficient out of range");
  }
  q_ = checked_power(p_, degree());
  if (q_ == 0) throw DomainError("field order does not fit in 64 bits");
  if (!is_irreducible(p_, modulus_)) throw DomainError("field modulus is reducible");
}

std::string FieldSpec::label() const {
  return std::to_string(p_) + "^" + std::to_string(degree());
}

FieldSpec find_irreducible(std::uint64_t p, unsigned k) {
  if (k < 1) throw DomainError("field degree must be >= 1");
  if (!is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
  const std::uint64_t candidates = checked_power(p, k);
  if (candidates == 0) throw DomainError("field order does not fit in 64 bits");
  for (std::uint64_t code = 0; code < candidates; ++code) {
    Coeffs m(k + 1);
    std::uint64_t c = code;
    for (unsigned i = 0; i < k; ++i) {
      m[i] = c % p;
      c /= p;
    }
    m[k] = 1;
    if (k > 1 && m[0] == 0) continue;  // divisible by x
    if (is_irreducible(p, m)) return FieldSpec(p, std::move(m));
  }
  throw InternalError("no irreducible polynomial found");
}

std::pair<std::uint64_t, unsigned> parse_field_order(std::string_view text) {
  auto parse_uint = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw DomainError("invalid field order '" + std::string(text) + "'");
    }
    return v;
  };
  const auto caret = text.find('^');
  if (caret != std::string_view::npos) {
    const std::uint64_t p = parse_uint(text.substr(0, caret));
    const std::uint64_t k = parse_uint(text.substr(caret + 1));
    if (!is_prime(p) || k < 1 || k > 64 || checked_power(p, static_cast<unsigned>(k)) == 0) {
      throw DomainError("invalid field order '" + std::string(text) + "'");
    }
    return {p, static_cast<unsigned>(k)};
  }
  const std::uint64_t q = parse_uint(text);
  if (q < 2) throw DomainError("invalid field order '" + std::string(text) + "'");
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  unsigned k = 0;
  std::uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  if (rest != 1) throw DomainError("field order " + std::to_string(q) + " is not a prime power");
  return {p, k};
}

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  if (enumerable() && order() > 2) build_tables();
}

void Field::build_tables() {
  const std::uint64_t q = order();
  exp_.assign(2 * (q - 1), 0);
  log_.assign(q, 0);
  for (ElemCode g = 2; g < q + 1; ++g) {
    const ElemCode gen = g % q;
    if (gen == 0) continue;
    ElemCode x = 1;
    std::uint64_t period = 0;
    do {
      x = mul_slow(x, gen);
      ++period;
    } while (x != 1 && period < q);
    if (period != q - 1) continue;
    x = 1;
    for (std::uint64_t i = 0; i < q - 1; ++i) {
      exp_[i] = static_cast<std::uint32_t>(x);
      exp_[i + q - 1] = static_cast<std::uint32_t>(x);
      log_[x] = static_cast<std::uint32_t>(i);
      x = mul_slow(x, gen);
    }
    return;
  }
  throw InternalError("no primitive element found");
}

ElemCode Field::add(ElemCode a, ElemCode b) const {
  const std::uint64_t p = characteristic();
  if (p == 2) return a ^ b;
  if (degree() == 1) {
    const std::uint64_t s = a + b;
    return (s >= p || s < a) ? s - p : s;
  }
  ElemCode out = 0;
  ElemCode scale = 1;
  for (unsigned i = 0; i < degree(); ++i) {
    const std::uint64_t da = a % p;
    const std::uint64_t db = b % p;
    a /= p;
    b /= p;
    std::uint64_t s = da + db;
    if (s >= p) s -= p;
    out += s * scale;
    scale *= p;
  }
  return out;
}

ElemCode Field::neg(ElemCode a) const {
  const std::uint64_t p = characteristic();
  if (p == 2) return a;
  if (degree() == 1) return a == 0 ? 0 : p - a;
  ElemCode out = 0;
  ElemCode scale = 1;
  for (unsigned i = 0; i < degree(); ++i) {
    const std::uint64_t d = a % p;
    a /= p;
    out += (d == 0 ? 0 : p - d) * scale;
    scale *= p;
  }
  return out;
}

ElemCode Field::sub(ElemCode a, ElemCode b) const { return add(a, neg(b)); }

ElemCode Field::mul(ElemCode a, ElemCode b) const {
  if (a == 0 || b == 0) return 0;
  if (!exp_.empty()) return exp_[log_[a] + log_[b]];
  return mul_slow(a, b);
}

ElemCode Field::mul_slow(ElemCode a, ElemCode b) const {
  const std::uint64_t p = characteristic();
  if (degree() == 1) return mulmod(a, b, p);
  const auto da = digits(a);
  const auto db = digits(b);
  Coeffs prod(da.size() + db.size() - 1, 0);
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (da[i] == 0) continue;
    for (std::size_t j = 0; j < db.size(); ++j) {
      prod[i + j] = (prod[i + j] + mulmod(da[i], db[j], p)) % p;
    }
  }
  const Coeffs r = poly_rem(std::move(prod), spec_.modulus(), p);
  return from_digits(r);
}

ElemCode Field::pow(ElemCode a, std::uint64_t e) const {
  ElemCode result = 1;
  while (e > 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

ElemCode Field::inv(ElemCode a) const {
  if (a == 0) throw DivisionByZero("inverse of zero in GF(" + spec_.label() + ")");
  if (!exp_.empty()) {
    const std::uint64_t n = order() - 1;
    return exp_[(n - log_[a]) % n];
  }
  return pow(a, order() - 2);
}

ElemCode Field::pth_root(ElemCode a) const {
  // Frobenius has order k on GF(p^k), so its inverse is x -> x^(p^(k-1)).
  return pow(a, order() / characteristic());
}

ElemCode Field::from_int(std::int64_t v) const {
  const auto p = static_cast<std::int64_t>(std::min<std::uint64_t>(characteristic(), INT64_MAX));
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return static_cast<ElemCode>(r);
}

std::vector<std::uint64_t> Field::digits(ElemCode a) const {
  std::vector<std::uint64_t> out(degree());
  const std::uint64_t p = characteristic();
  for (unsigned i = 0; i < degree(); ++i) {
    out[i] = degree() == 1 ? a : a % p;
    if (degree() > 1) a /= p;
  }
  return out;
}

ElemCode Field::from_digits(std::span<const std::uint64_t> d) const {
  ElemCode out = 0;
  ElemCode scale = 1;
  for (std::size_t i = 0; i < d.size() && i < degree(); ++i) {
    out += d[i] * scale;
    scale *= characteristic();
  }
  return out;
}

FieldPtr make_field(FieldSpec spec) { return std::make_shared<const Field>(std::move(spec)); }

FieldPtr make_field(std::uint64_t p, unsigned k) { return make_field(find_irreducible(p, k)); }

bool same_field(const Field& a, const Field& b) { return &a == &b || a.spec() == b.spec(); }

FieldElement::FieldElement(FieldPtr field, ElemCode code) : field_(std::move(field)), code_(code) {
  if (!field_) throw DomainError("field element without a field");
  if (!field_->contains(code_)) {
    throw DomainError("value " + std::to_string(code_) + " is not an element of GF(" +
                      field_->spec().label() + ")");
  }
}

std::string FieldElement::to_string() const { return std::to_string(code_); }

bool operator==(const FieldElement& x, const FieldElement& y) {
  return x.code_ == y.code_ && same_field(*x.field_, *y.field_);
}

namespace {
const FieldPtr& common_field(const FieldElement& x, const FieldElement& y) {
  if (!same_field(*x.field(), *y.field())) {
    throw DomainError("operands belong to different fields (GF(" + x.field()->spec().label() +
                      ") vs GF(" + y.field()->spec().label() + "))");
  }
  return x.field();
}
}  // namespace

FieldElement ff_add(const FieldElement& x, const FieldElement& y) {
  const auto& f = common_field(x, y);
  return {f, f->add(x.code(), y.code())};
}

FieldElement ff_sub(const FieldElement& x, const FieldElement& y) {
  const auto& f = common_field(x, y);
  return {f, f->sub(x.code(), y.code())};
}

FieldElement ff_mul(const FieldElement& x, const FieldElement& y) {
  const auto& f = common_field(x, y);
  return {f, f->mul(x.code(), y.code())};
}

FieldElement ff_inv(const FieldElement& x) { return {x.field(), x.field()->inv(x.code())}; }

FieldElement ff_pow(const FieldElement& x, std::uint64_t e) {
  return {x.field(), x.field()->pow(x.code(), e)};
}

std::vector<FieldElement> ff_enumerate(const FieldPtr& field) {
  if (!field->enumerable()) {
    throw TooLargeError("GF(" + field->spec().label() + ") is too large to enumerate");
  }
  std::vector<FieldElement> out;
  out.reserve(field->order());
  for (ElemCode c = 0; c < field->order(); ++c) out.emplace_back(field, c);
  return out;
}

}  // namespace lnc

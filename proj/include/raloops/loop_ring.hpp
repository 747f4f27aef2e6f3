#pragma once

#include "raloops/cayley_oracle.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace raloops {

// Element of the loop ring (Z/n)L for a finite loop L given by its Cayley
// table: a sparse coefficient map over basis indices.  The modulus must be
// odd and >= 3 (2 must be invertible for the linearized alternativity
// criterion; characteristic 2 is outside scope).  Zero coefficients are
// never stored.
class RingElement {
public:
  explicit RingElement(std::int64_t modulus);
  static RingElement basis(std::int64_t modulus, int index);
  static RingElement zero(std::int64_t modulus);

  std::int64_t modulus() const { return modulus_; }
  const std::map<int, std::int64_t>& coefficients() const { return coeff_; }
  bool is_zero() const { return coeff_.empty(); }

  void add_term(int index, std::int64_t c);  // accumulate, reduce, prune

  RingElement add(const RingElement& other) const;
  RingElement sub(const RingElement& other) const;
  RingElement scale(std::int64_t c) const;

  bool operator==(const RingElement& other) const = default;
  std::string str(const CayleyTable& t) const;

private:
  std::int64_t modulus_;
  std::map<int, std::int64_t> coeff_;
};

// Throws std::invalid_argument unless n is odd and >= 3.
void check_modulus(std::int64_t n);

// Convolution product in (Z/n)L.
RingElement r_mul(const CayleyTable& t, const RingElement& a,
                  const RingElement& b);
// (ab)c - a(bc).
RingElement r_associator(const CayleyTable& t, const RingElement& a,
                         const RingElement& b, const RingElement& c);

struct AlternativeReport {
  bool alternative = true;
  std::string law;                       // failing law when not alternative
  std::optional<std::array<int, 3>> witness;
};

// Decides whether (Z/n)L is alternative via the linearized criterion on
// basis triples: [g,h,k] + [h,g,k] = 0 and [k,g,h] + [k,h,g] = 0 for all
// basis elements.  With n odd this is equivalent to both alternative laws
// for all ring elements.
AlternativeReport check_alternative(const CayleyTable& t, std::int64_t n);

struct AssociativeReport {
  bool associative = true;
  std::optional<std::array<int, 3>> witness;
};

// Exhaustive associativity check on basis triples (equivalently, of L).
AssociativeReport check_associative(const CayleyTable& t);

struct RingCheckReport {
  bool alternative = false;
  std::string alternative_law;
  std::optional<std::array<int, 3>> alternative_witness;
  bool associative = false;
  std::optional<std::array<int, 3>> associative_witness;
  bool ra = false;  // alternative but not associative
};

// Combined verdict: (Z/n)L alternative, associative, and RA (alternative
// but not associative).
RingCheckReport is_ra_finite(const CayleyTable& t, std::int64_t n);

}  // namespace raloops

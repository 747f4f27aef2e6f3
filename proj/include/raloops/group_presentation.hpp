#pragma once

#include "raloops/abelian.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace raloops {

// Element of a group G = <x, y, Z> in normal form x^a y^b z with a, b in
// {0, 1} and z an exponent vector over the center Z.
struct GroupElement {
  bool x_bit = false;
  bool y_bit = false;
  ExponentVector z;

  bool operator==(const GroupElement& other) const = default;
};

// Finitely generated group of class <= 2 with G/Z(G) = C2 x C2, presented by
//   - its center Z (a direct product of cyclic factors),
//   - a distinguished finite factor <t1> of order 2^m1 whose unique
//     involution s = t1^(2^(m1-1)) is the commutator [x, y],
//   - the central values of x^2 and y^2.
// Multiplication follows collection on the normal form x^a y^b z with
// y x = x y s.  Consistency needs s of order exactly 2, which the factory
// enforces (order(t1) == 2^m1, m1 >= 1).
class GroupPresentation {
public:
  static GroupPresentation make(AbelianGroup center, std::size_t t1_index,
                                std::int64_t m1, ExponentVector x_sq,
                                ExponentVector y_sq,
                                std::vector<std::string> factor_names = {});

  const AbelianGroup& center() const { return center_; }
  std::size_t t1_index() const { return t1_index_; }
  std::int64_t m1() const { return m1_; }
  const ExponentVector& x_sq() const { return x_sq_; }
  const ExponentVector& y_sq() const { return y_sq_; }
  // Exponent vector of s = [x, y] = t1^(2^(m1-1)).
  const ExponentVector& s_vector() const { return s_; }
  // Display names for the center factors ("t1", "u1", ...).  Cosmetic only;
  // ignored by equality.
  const std::vector<std::string>& factor_names() const { return names_; }

  GroupElement identity() const;
  GroupElement x() const;
  GroupElement y() const;
  GroupElement central(ExponentVector z) const;  // embeds Z into G

  GroupElement mul(const GroupElement& p, const GroupElement& q) const;
  GroupElement inv(const GroupElement& p) const;
  // [p, q] as a central vector; always the identity or s.
  ExponentVector commutator(const GroupElement& p, const GroupElement& q) const;
  bool is_central(const GroupElement& p) const;
  // p^2 as a central vector (squares always land in Z here).
  ExponentVector square(const GroupElement& p) const;
  Order element_order(const GroupElement& p) const;

  Order group_order() const;  // 4 * |Z|
  // All elements, identity first: coset-major over (1, x, y, xy), center in
  // odometer order inside each coset.  Finite groups only.
  std::vector<GroupElement> enumerate() const;

  std::string element_str(const GroupElement& p) const;

  bool operator==(const GroupPresentation& other) const;

private:
  GroupPresentation(AbelianGroup center, std::size_t t1_index, std::int64_t m1,
                    ExponentVector x_sq, ExponentVector y_sq,
                    std::vector<std::string> names);

  AbelianGroup center_;
  std::size_t t1_index_;
  std::int64_t m1_;
  ExponentVector x_sq_;
  ExponentVector y_sq_;
  ExponentVector s_;
  std::vector<std::string> names_;
};

// Parameters for the nine group types: orders 2^m1, 2^m2, 2^m3 of the
// torsion center factors a type uses (unused entries ignored).
struct DTypeParams {
  std::int64_t m1 = 1;
  std::int64_t m2 = 1;
  std::int64_t m3 = 1;
};

// The nine indecomposable group shapes underlying the classification:
//   1: Z=<t1>,            x^2=1,  y^2=1
//   2: Z=<t1>,            x^2=t1, y^2=t1
//   3: Z=<t1>x<t2>,       x^2=1,  y^2=t2
//   4: Z=<t1>x<t2>,       x^2=t1, y^2=t2
//   5: Z=<t1>x<u1>,       x^2=1,  y^2=u1
//   6: Z=<t1>x<u1>,       x^2=t1, y^2=u1
//   7: Z=<t1>x<t2>x<t3>,  x^2=t2, y^2=t3
//   8: Z=<t1>x<t2>x<u1>,  x^2=t2, y^2=u1
//   9: Z=<t1>x<u1>x<u2>,  x^2=u1, y^2=u2
// with o(ti) = 2^mi finite and o(uj) infinite.
GroupPresentation build_group_type(int type_id, const DTypeParams& params = {});

// Shared knobs for the sampled/exhaustive verification routines.
struct VerifyOptions {
  std::int64_t sample_bound = 3;   // exponent window for infinite factors
  int samples = 10000;             // random samples when not exhaustive
  std::uint64_t seed = 12345;
};

struct PresentationReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  std::int64_t checked_triples = 0;
};

// Checks associativity of the normal-form product, correctness of the center
// (exactly the a=b=0 elements commute with everything), and that G/Z(G) has
// order 4.  Exhaustive for finite groups; windowed sampling otherwise.
PresentationReport verify_presentation(const GroupPresentation& g,
                                       const VerifyOptions& opts = {});

}  // namespace raloops

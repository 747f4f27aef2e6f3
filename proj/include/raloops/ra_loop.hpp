#pragma once

#include "raloops/group_presentation.hpp"

#include <string>
#include <vector>

namespace raloops {

// Element of L = G u Gu in normal form x^a y^b z u^e: a group part plus the
// coset bit e.
struct LoopElement {
  GroupElement g;
  bool u_bit = false;

  bool operator==(const LoopElement& other) const = default;
};

// The Moufang loop L = M(G, *, g0) obtained by doubling a suitable group G:
//   g * (h u) = (h g) u
//   (g u) * h = (g h~) u
//   (g u) * (h u) = g0 h~ g
// where h~ is the involution fixing the center and negating (times s) the
// rest, and g0 is a central square for the new generator u.
class RaLoop {
public:
  static RaLoop make(GroupPresentation group, ExponentVector g0);

  const GroupPresentation& group() const { return group_; }
  const AbelianGroup& center() const { return group_.center(); }
  const ExponentVector& g0() const { return g0_; }

  // The involution g -> g~ on G: identity on central elements, s*g elsewhere.
  GroupElement star(const GroupElement& p) const;

  LoopElement identity() const;
  LoopElement x() const;
  LoopElement y() const;
  LoopElement u() const;
  LoopElement from_group(GroupElement g) const;
  LoopElement central(ExponentVector z) const;

  LoopElement mul(const LoopElement& p, const LoopElement& q) const;
  LoopElement inv(const LoopElement& p) const;
  // a with (pq)r = (p(qr)) * a; central, always 1 or s.
  ExponentVector associator(const LoopElement& p, const LoopElement& q,
                            const LoopElement& r) const;
  // c with qp = (pq) * c; central, always 1 or s.
  ExponentVector commutator(const LoopElement& p, const LoopElement& q) const;
  bool is_central(const LoopElement& p) const;
  // p^2 as a central vector (all loop squares are central here).
  ExponentVector square(const LoopElement& p) const;
  Order element_order(const LoopElement& p) const;

  Order loop_order() const;  // 8 * |Z|
  // All elements, identity first: u-coset major, then (1, x, y, xy) cosets,
  // center odometer-fastest.  Finite loops only.
  std::vector<LoopElement> enumerate() const;
  // Position of an element in enumerate() order (finite loops only).
  std::size_t index_of(const LoopElement& p) const;

  std::string element_str(const LoopElement& p) const;

  bool operator==(const RaLoop& other) const;

private:
  RaLoop(GroupPresentation group, ExponentVector g0);
  GroupPresentation group_;
  ExponentVector g0_;
};

struct MoufangReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::int64_t checked_triples = 0;
};

// Verifies the Moufang identity (pq)(rp) = (p(qr))p together with both
// alternative laws p(pq) = (pp)q and (qp)p = q(pp).  Exhaustive for finite
// loops, windowed sampling otherwise.
MoufangReport moufang_check(const RaLoop& loop, const VerifyOptions& opts = {});

// Exact count of non-central involutions (w != 1, w^2 = 1, w not central),
// computed per coset of L over its center by solving the congruences
// 2c = -beta factor by factor.  Exact for infinite centers as well; the
// count is always finite because infinite factors pin their exponent.
struct InvolutionCount {
  Int count = 0;
  std::vector<LoopElement> witnesses;  // one per coset that contributes
};

InvolutionCount solve_involutions(const RaLoop& loop);

}  // namespace raloops

#include "raloops/ra_loop.hpp"

#include <random>
#include <stdexcept>

namespace raloops {

RaLoop::RaLoop(GroupPresentation group, ExponentVector g0)
    : group_(std::move(group)), g0_(std::move(g0)) {}

RaLoop RaLoop::make(GroupPresentation group, ExponentVector g0) {
  if (g0.size() != group.center().rank())
    throw std::invalid_argument("RaLoop: g0 must match the center rank");
  if (g0 != group.center().reduce(g0))
    throw std::invalid_argument("RaLoop: g0 must be canonical");
  return RaLoop(std::move(group), std::move(g0));
}

GroupElement RaLoop::star(const GroupElement& p) const {
  if (group_.is_central(p)) return p;
  GroupElement out = p;
  out.z = center().mul(out.z, group_.s_vector());
  return out;
}

LoopElement RaLoop::identity() const {
  return LoopElement{group_.identity(), false};
}
LoopElement RaLoop::x() const { return LoopElement{group_.x(), false}; }
LoopElement RaLoop::y() const { return LoopElement{group_.y(), false}; }
LoopElement RaLoop::u() const { return LoopElement{group_.identity(), true}; }

LoopElement RaLoop::from_group(GroupElement g) const {
  return LoopElement{std::move(g), false};
}

LoopElement RaLoop::central(ExponentVector z) const {
  return LoopElement{group_.central(std::move(z)), false};
}

LoopElement RaLoop::mul(const LoopElement& p, const LoopElement& q) const {
  if (!p.u_bit && !q.u_bit)
    return LoopElement{group_.mul(p.g, q.g), false};
  if (!p.u_bit && q.u_bit)  // g * (hu) = (hg)u
    return LoopElement{group_.mul(q.g, p.g), true};
  if (p.u_bit && !q.u_bit)  // (gu) * h = (g h~)u
    return LoopElement{group_.mul(p.g, star(q.g)), true};
  // (gu) * (hu) = g0 h~ g
  GroupElement prod = group_.mul(star(q.g), p.g);
  prod.z = center().mul(prod.z, g0_);
  return LoopElement{std::move(prod), false};
}

LoopElement RaLoop::inv(const LoopElement& p) const {
  if (!p.u_bit) return LoopElement{group_.inv(p.g), false};
  // (gu)^-1 = (g0^-1 (g~)^-1) u; two-sided by the central symmetry of g0.
  GroupElement ginv = group_.inv(star(p.g));
  ginv.z = center().mul(ginv.z, center().inverse(g0_));
  return LoopElement{std::move(ginv), true};
}

ExponentVector RaLoop::associator(const LoopElement& p, const LoopElement& q,
                                  const LoopElement& r) const {
  LoopElement left = mul(mul(p, q), r);
  LoopElement right = mul(p, mul(q, r));
  // Both products share the same coset bits; the defect is central.
  ExponentVector diff =
      center().mul(left.g.z, center().inverse(right.g.z));
  return diff;
}

ExponentVector RaLoop::commutator(const LoopElement& p,
                                  const LoopElement& q) const {
  LoopElement pq = mul(p, q);
  LoopElement qp = mul(q, p);
  return center().mul(qp.g.z, center().inverse(pq.g.z));
}

bool RaLoop::is_central(const LoopElement& p) const {
  return !p.u_bit && group_.is_central(p.g);
}

ExponentVector RaLoop::square(const LoopElement& p) const {
  return mul(p, p).g.z;  // coset bits always cancel in squares
}

Order RaLoop::element_order(const LoopElement& p) const {
  if (is_central(p)) return center().element_order(p.g.z);
  Order o = center().element_order(square(p));
  if (!o.is_finite()) return o;
  return Order::finite(2 * o.value());
}

Order RaLoop::loop_order() const {
  Order z = center().order();
  if (!z.is_finite()) return z;
  return Order::finite(8 * z.value());
}

std::vector<LoopElement> RaLoop::enumerate() const {
  std::vector<ExponentVector> zs = center().enumerate();
  std::vector<LoopElement> out;
  out.reserve(zs.size() * 8);
  const bool bits[4][2] = {{false, false}, {true, false}, {false, true},
                           {true, true}};
  for (int e = 0; e < 2; ++e)
    for (const auto& bit : bits)
      for (const auto& z : zs)
        out.push_back(LoopElement{GroupElement{bit[0], bit[1], z}, e == 1});
  return out;
}

std::size_t RaLoop::index_of(const LoopElement& p) const {
  // Mirrors enumerate(): e-major, then (1, x, y, xy), then the center
  // odometer with the last factor fastest.
  std::size_t zrank = center().rank();
  Int zindex = 0;
  for (std::size_t i = 0; i < zrank; ++i) {
    zindex *= center().factor(i).value();
    zindex += p.g.z[i];
  }
  Int zcount = center().order().value();
  int coset = (p.g.x_bit ? 1 : 0) + (p.g.y_bit ? 2 : 0);
  Int idx = ((p.u_bit ? 4 : 0) + coset) * zcount + zindex;
  return static_cast<std::size_t>(idx);
}

std::string RaLoop::element_str(const LoopElement& p) const {
  std::string s = group_.element_str(p.g);
  if (p.u_bit) {
    if (s == "1") return "u";
    return s + "*u";
  }
  return s;
}

bool RaLoop::operator==(const RaLoop& other) const {
  return group_ == other.group_ && g0_ == other.g0_;
}

namespace {

ExponentVector random_vector(const AbelianGroup& z, std::int64_t bound,
                             std::mt19937_64& rng) {
  ExponentVector v = z.identity();
  for (std::size_t i = 0; i < z.rank(); ++i) {
    if (z.factor(i).is_finite()) {
      Int n = z.factor(i).value();
      std::uint64_t cap =
          n > 1000000 ? 1000000u : static_cast<std::uint64_t>(n);
      v[i] = Int(rng() % cap);
    } else {
      std::int64_t span = 2 * bound + 1;
      v[i] = Int(static_cast<std::int64_t>(rng() % span) - bound);
    }
  }
  return z.reduce(v);
}

LoopElement random_loop_element(const RaLoop& loop, std::int64_t bound,
                                std::mt19937_64& rng) {
  GroupElement g{(rng() & 1) != 0, (rng() & 1) != 0,
                 random_vector(loop.center(), bound, rng)};
  return LoopElement{std::move(g), (rng() & 1) != 0};
}

}  // namespace

MoufangReport moufang_check(const RaLoop& loop, const VerifyOptions& opts) {
  MoufangReport report;
  auto fail = [&](const std::string& law, const LoopElement& p,
                  const LoopElement& q, const LoopElement& r) {
    report.ok = false;
    if (report.violations.size() < 16)
      report.violations.push_back(law + " fails at (" + loop.element_str(p) +
                                  ", " + loop.element_str(q) + ", " +
                                  loop.element_str(r) + ")");
  };
  auto check = [&](const LoopElement& p, const LoopElement& q,
                   const LoopElement& r) {
    ++report.checked_triples;
    // Middle Moufang identity.
    LoopElement lhs = loop.mul(loop.mul(p, q), loop.mul(r, p));
    LoopElement rhs = loop.mul(loop.mul(p, loop.mul(q, r)), p);
    if (!(lhs == rhs)) fail("moufang", p, q, r);
    // Left and right alternative laws.
    LoopElement la = loop.mul(p, loop.mul(p, q));
    LoopElement lb = loop.mul(loop.mul(p, p), q);
    if (!(la == lb)) fail("left-alternative", p, q, p);
    LoopElement ra = loop.mul(loop.mul(q, p), p);
    LoopElement rb = loop.mul(q, loop.mul(p, p));
    if (!(ra == rb)) fail("right-alternative", q, p, p);
  };

  Order total = loop.loop_order();
  bool small = total.is_finite() && total.value() <= 256;
  if (small) {
    std::vector<LoopElement> all = loop.enumerate();
    for (const auto& p : all)
      for (const auto& q : all)
        for (const auto& r : all) check(p, q, r);
  } else {
    std::mt19937_64 rng(opts.seed);
    for (int i = 0; i < opts.samples; ++i) {
      LoopElement p = random_loop_element(loop, opts.sample_bound, rng);
      LoopElement q = random_loop_element(loop, opts.sample_bound, rng);
      LoopElement r = random_loop_element(loop, opts.sample_bound, rng);
      check(p, q, r);
    }
  }
  return report;
}

InvolutionCount solve_involutions(const RaLoop& loop) {
  const AbelianGroup& z = loop.center();
  InvolutionCount result;

  // Non-central elements fall into seven cosets modulo the center,
  // represented by x^a y^b u^e with (a, b, e) != 0.  For w = rep * c with c
  // central, w^2 = rep^2 * c^2, so involutions in the coset solve
  // 2 c_i = -beta_i per factor, with beta = rep^2.
  const int reps[7][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0},
                          {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  for (const auto& r : reps) {
    LoopElement rep{GroupElement{r[0] == 1, r[1] == 1, z.identity()},
                    r[2] == 1};
    ExponentVector beta = loop.square(rep);
    Int coset_count = 1;
    ExponentVector witness_c = z.identity();
    for (std::size_t i = 0; i < z.rank() && coset_count != 0; ++i) {
      if (z.factor(i).is_finite()) {
        const Int& n = z.factor(i).value();
        // Solutions of 2c + beta = 0 mod n: gcd(2, n) many iff it divides
        // beta, else none.
        Int g = n % 2 == 0 ? 2 : 1;
        if (beta[i] % g != 0) {
          coset_count = 0;
        } else {
          coset_count *= g;
          // One explicit solution for the witness.
          Int b = beta[i] % n;
          if (b < 0) b += n;
          Int target = (n - b) % n;  // want 2c = target mod n
          if (n % 2 == 0) {
            witness_c[i] = target / 2;  // target is even here
          } else {
            // 2 is invertible mod odd n.
            Int inv2 = (n + 1) / 2;
            witness_c[i] = (target * inv2) % n;
          }
        }
      } else {
        // Over the integers 2c = -beta has one solution iff beta is even.
        if (beta[i] % 2 != 0) {
          coset_count = 0;
        } else {
          witness_c[i] = -beta[i] / 2;
        }
      }
    }
    if (coset_count != 0) {
      result.count += coset_count;
      LoopElement w{GroupElement{r[0] == 1, r[1] == 1, z.reduce(witness_c)},
                    r[2] == 1};
      result.witnesses.push_back(w);
    }
  }
  return result;
}

}  // namespace raloops

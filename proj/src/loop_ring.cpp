#include "raloops/loop_ring.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace raloops {

void check_modulus(std::int64_t n) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("loop ring modulus must be odd and >= 3");
}

RingElement::RingElement(std::int64_t modulus) : modulus_(modulus) {
  check_modulus(modulus);
}

RingElement RingElement::basis(std::int64_t modulus, int index) {
  RingElement e(modulus);
  e.add_term(index, 1);
  return e;
}

RingElement RingElement::zero(std::int64_t modulus) {
  return RingElement(modulus);
}

void RingElement::add_term(int index, std::int64_t c) {
  c %= modulus_;
  if (c < 0) c += modulus_;
  if (c == 0 && coeff_.find(index) == coeff_.end()) return;
  std::int64_t v = (coeff_[index] + c) % modulus_;
  if (v == 0)
    coeff_.erase(index);
  else
    coeff_[index] = v;
}

RingElement RingElement::add(const RingElement& other) const {
  if (modulus_ != other.modulus_)
    throw std::invalid_argument("RingElement: modulus mismatch");
  RingElement out = *this;
  for (const auto& [i, c] : other.coeff_) out.add_term(i, c);
  return out;
}

RingElement RingElement::sub(const RingElement& other) const {
  if (modulus_ != other.modulus_)
    throw std::invalid_argument("RingElement: modulus mismatch");
  RingElement out = *this;
  for (const auto& [i, c] : other.coeff_) out.add_term(i, modulus_ - c);
  return out;
}

RingElement RingElement::scale(std::int64_t c) const {
  RingElement out(modulus_);
  for (const auto& [i, v] : coeff_) out.add_term(i, v * (c % modulus_));
  return out;
}

std::string RingElement::str(const CayleyTable& t) const {
  if (coeff_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : coeff_) {
    if (!first) os << " + ";
    first = false;
    std::string name = (static_cast<std::size_t>(i) < t.labels.size())
                           ? t.labels[static_cast<std::size_t>(i)]
                           : "e" + std::to_string(i);
    if (c != 1) os << c << "*";
    os << name;
  }
  return os.str();
}

RingElement r_mul(const CayleyTable& t, const RingElement& a,
                  const RingElement& b) {
  if (a.modulus() != b.modulus())
    throw std::invalid_argument("r_mul: modulus mismatch");
  RingElement out(a.modulus());
  for (const auto& [i, ci] : a.coefficients())
    for (const auto& [j, cj] : b.coefficients())
      out.add_term(t.at(i, j), ci * cj);
  return out;
}

RingElement r_associator(const CayleyTable& t, const RingElement& a,
                         const RingElement& b, const RingElement& c) {
  return r_mul(t, r_mul(t, a, b), c).sub(r_mul(t, a, r_mul(t, b, c)));
}

AlternativeReport check_alternative(const CayleyTable& t, std::int64_t n) {
  check_modulus(n);
  AlternativeReport r;
  const int sz = t.size();
  // For basis elements the ring associator [g,h,k] is a difference of two
  // basis elements, so [g,h,k] + [h,g,k] vanishes iff the multiset
  // {(gh)k, (hg)k} equals {g(hk), h(gk)} (coefficients are +-1 and n >= 3).
  for (int g = 0; g < sz; ++g) {
    for (int h = 0; h < sz; ++h) {
      for (int k = 0; k < sz; ++k) {
        {
          int p1 = t.at(t.at(g, h), k), m1 = t.at(g, t.at(h, k));
          int p2 = t.at(t.at(h, g), k), m2 = t.at(h, t.at(g, k));
          bool zero = (p1 == m1 && p2 == m2) || (p1 == m2 && p2 == m1);
          if (!zero) {
            r.alternative = false;
            r.law = "left";
            r.witness = {{g, h, k}};
            return r;
          }
        }
        {
          int p1 = t.at(t.at(k, g), h), m1 = t.at(k, t.at(g, h));
          int p2 = t.at(t.at(k, h), g), m2 = t.at(k, t.at(h, g));
          bool zero = (p1 == m1 && p2 == m2) || (p1 == m2 && p2 == m1);
          if (!zero) {
            r.alternative = false;
            r.law = "right";
            r.witness = {{g, h, k}};
            return r;
          }
        }
      }
    }
  }
  return r;
}

AssociativeReport check_associative(const CayleyTable& t) {
  AssociativeReport r;
  const int sz = t.size();
  for (int g = 0; g < sz; ++g)
    for (int h = 0; h < sz; ++h)
      for (int k = 0; k < sz; ++k)
        if (t.at(t.at(g, h), k) != t.at(g, t.at(h, k))) {
          r.associative = false;
          r.witness = {{g, h, k}};
          return r;
        }
  return r;
}

RingCheckReport is_ra_finite(const CayleyTable& t, std::int64_t n) {
  RingCheckReport out;
  AlternativeReport alt = check_alternative(t, n);
  out.alternative = alt.alternative;
  out.alternative_law = alt.law;
  out.alternative_witness = alt.witness;
  AssociativeReport assoc = check_associative(t);
  out.associative = assoc.associative;
  out.associative_witness = assoc.witness;
  out.ra = out.alternative && !out.associative;
  return out;
}

}  // namespace raloops

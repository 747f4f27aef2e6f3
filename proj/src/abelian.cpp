#include "raloops/abelian.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace raloops {

namespace {

Int gcd_int(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Int lcm_int(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return (a / gcd_int(a, b)) * b;
}

}  // namespace

Order Order::finite(Int n) {
  if (n < 1) throw std::invalid_argument("Order::finite: order must be >= 1");
  Order o;
  o.finite_ = true;
  o.n_ = std::move(n);
  return o;
}

Order Order::infinity() {
  Order o;
  o.finite_ = false;
  o.n_ = 0;
  return o;
}

const Int& Order::value() const {
  if (!finite_) throw std::logic_error("Order::value: order is infinite");
  return n_;
}

bool Order::operator<(const Order& other) const {
  if (finite_ && other.finite_) return n_ < other.n_;
  return finite_ && !other.finite_;
}

std::string Order::str() const {
  if (!finite_) return "inf";
  return n_.str();
}

std::ostream& operator<<(std::ostream& os, const Order& o) {
  return os << o.str();
}

AbelianGroup::AbelianGroup(std::vector<Order> factors)
    : factors_(std::move(factors)) {}

std::size_t AbelianGroup::free_rank() const {
  std::size_t r = 0;
  for (const Order& f : factors_)
    if (!f.is_finite()) ++r;
  return r;
}

bool AbelianGroup::is_finite() const { return free_rank() == 0; }

Order AbelianGroup::order() const {
  Int n = 1;
  for (const Order& f : factors_) {
    if (!f.is_finite()) return Order::infinity();
    n *= f.value();
  }
  return Order::finite(n);
}

std::vector<Int> AbelianGroup::torsion_orders() const {
  std::vector<Int> out;
  for (const Order& f : factors_)
    if (f.is_finite() && f.value() > 1) out.push_back(f.value());
  std::sort(out.begin(), out.end());
  return out;
}

ExponentVector AbelianGroup::identity() const {
  return ExponentVector(std::vector<Int>(rank(), Int(0)));
}

bool AbelianGroup::is_identity(const ExponentVector& v) const {
  check_size(v);
  for (std::size_t i = 0; i < rank(); ++i) {
    if (factors_[i].is_finite()) {
      if (v[i] % factors_[i].value() != 0) return false;
    } else {
      if (v[i] != 0) return false;
    }
  }
  return true;
}

ExponentVector AbelianGroup::basis_vector(std::size_t i) const {
  if (i >= rank())
    throw std::out_of_range("AbelianGroup::basis_vector: index out of range");
  ExponentVector v = identity();
  v[i] = 1;
  return v;
}

ExponentVector AbelianGroup::reduce(const ExponentVector& v) const {
  check_size(v);
  ExponentVector out = v;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (!factors_[i].is_finite()) continue;
    const Int& n = factors_[i].value();
    Int r = out[i] % n;
    if (r < 0) r += n;
    out[i] = r;
  }
  return out;
}

ExponentVector AbelianGroup::mul(const ExponentVector& a,
                                 const ExponentVector& b) const {
  check_size(a);
  check_size(b);
  ExponentVector out;
  out.e.reserve(rank());
  for (std::size_t i = 0; i < rank(); ++i) out.e.push_back(a[i] + b[i]);
  return reduce(out);
}

ExponentVector AbelianGroup::pow(const ExponentVector& a, const Int& k) const {
  check_size(a);
  ExponentVector out;
  out.e.reserve(rank());
  for (std::size_t i = 0; i < rank(); ++i) out.e.push_back(a[i] * k);
  return reduce(out);
}

ExponentVector AbelianGroup::inverse(const ExponentVector& a) const {
  return pow(a, Int(-1));
}

Order AbelianGroup::element_order(const ExponentVector& a) const {
  check_size(a);
  Int n = 1;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (factors_[i].is_finite()) {
      const Int& m = factors_[i].value();
      Int r = a[i] % m;
      // order of a[i] in Z/m is m / gcd(a[i], m)
      n = lcm_int(n, m / gcd_int(r, m));
    } else {
      if (a[i] != 0) return Order::infinity();
    }
  }
  return Order::finite(n);
}

std::vector<ExponentVector> AbelianGroup::enumerate() const {
  if (!is_finite())
    throw std::domain_error("AbelianGroup::enumerate: group is infinite");
  std::vector<ExponentVector> out;
  Int total = order().value();
  // Desk-scale guard; enumeration is only meant for small instances.
  if (total > 1000000)
    throw std::domain_error("AbelianGroup::enumerate: group too large");
  out.reserve(static_cast<std::size_t>(total));
  ExponentVector cur = identity();
  while (true) {
    out.push_back(cur);
    // Odometer increment, last factor fastest.
    std::size_t i = rank();
    while (i > 0) {
      --i;
      cur[i] += 1;
      if (cur[i] < factors_[i].value()) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (rank() == 0) return out;
  }
}

void AbelianGroup::check_size(const ExponentVector& v) const {
  if (v.size() != rank())
    throw std::invalid_argument(
        "AbelianGroup: exponent vector length does not match factor count");
}

}  // namespace raloops

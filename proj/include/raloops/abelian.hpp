#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace raloops {

// Exact integer type used for all exponent arithmetic.  Center factors of
// infinite order make element exponents unbounded, so fixed-width integers
// are not an option anywhere exponents flow.
using Int = boost::multiprecision::cpp_int;

// A positive integer or infinity.  Used both for the order of a cyclic
// factor and for the order of an element.
class Order {
public:
  static Order finite(Int n);
  static Order infinity();

  bool is_finite() const { return finite_; }
  // Value of a finite order; throws std::logic_error on infinity.
  const Int& value() const;

  bool operator==(const Order& other) const = default;
  // Total order: finite values by magnitude, infinity last.  Gives sorted
  // multisets a canonical layout.
  bool operator<(const Order& other) const;

  std::string str() const;  // "8" or "inf"

private:
  Order() = default;
  bool finite_ = true;
  Int n_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Order& o);

// Exponent vector of an element of a direct product of cyclic groups, one
// entry per factor.  Canonical iff every finite-factor entry lies in
// [0, order).  Plain data; the owning AbelianGroup supplies the arithmetic.
struct ExponentVector {
  std::vector<Int> e;

  ExponentVector() = default;
  explicit ExponentVector(std::vector<Int> entries) : e(std::move(entries)) {}

  std::size_t size() const { return e.size(); }
  Int& operator[](std::size_t i) { return e[i]; }
  const Int& operator[](std::size_t i) const { return e[i]; }

  bool operator==(const ExponentVector& other) const = default;
};

// Finitely generated abelian group presented as a direct product of cyclic
// factors (finite orders and infinite factors in any mix).
class AbelianGroup {
public:
  explicit AbelianGroup(std::vector<Order> factors);

  std::size_t rank() const { return factors_.size(); }
  const Order& factor(std::size_t i) const { return factors_[i]; }
  const std::vector<Order>& factors() const { return factors_; }

  std::size_t free_rank() const;             // number of infinite factors
  bool is_finite() const;
  Order order() const;                       // product of factor orders
  // Finite factor orders > 1, sorted ascending.  Order-1 factors are legal
  // but structurally invisible, so they are dropped here.
  std::vector<Int> torsion_orders() const;

  ExponentVector identity() const;
  bool is_identity(const ExponentVector& v) const;
  // Unit vector for factor i (the i-th generator).
  ExponentVector basis_vector(std::size_t i) const;

  // Canonical form: finite-factor entries reduced into [0, order).
  ExponentVector reduce(const ExponentVector& v) const;
  ExponentVector mul(const ExponentVector& a, const ExponentVector& b) const;
  ExponentVector pow(const ExponentVector& a, const Int& k) const;
  ExponentVector inverse(const ExponentVector& a) const;
  Order element_order(const ExponentVector& a) const;

  // All elements in odometer order (last factor fastest); identity first.
  // Throws std::domain_error when the group is infinite.
  std::vector<ExponentVector> enumerate() const;

  bool operator==(const AbelianGroup& other) const = default;

private:
  void check_size(const ExponentVector& v) const;
  std::vector<Order> factors_;
};

}  // namespace raloops

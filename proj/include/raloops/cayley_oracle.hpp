#pragma once

#include "raloops/ra_loop.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace raloops {

// Dense multiplication table of a finite loop.  Element 0 is the identity.
// Everything in this module works from the raw table only, independently of
// any presentation, so it can serve as an oracle for the symbolic layer.
class CayleyTable {
public:
  CayleyTable() = default;
  CayleyTable(int n, std::vector<std::int32_t> entries);

  int size() const { return n_; }
  std::int32_t at(int i, int j) const { return t_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, std::int32_t v) { t_[static_cast<std::size_t>(i) * n_ + j] = v; }

  // Unique solution x of a * x = b (left division); requires a valid table.
  int left_div(int a, int b) const;
  // Unique solution x of x * b = a (right division).
  int right_div(int a, int b) const;

  // Optional element names carried through file round trips (cosmetic).
  std::vector<std::string> labels;

  bool operator==(const CayleyTable& other) const {
    return n_ == other.n_ && t_ == other.t_;
  }

private:
  int n_ = 0;
  std::vector<std::int32_t> t_;
};

struct ValidationReport {
  bool ok = true;
  std::string defect;                       // human-readable diagnosis
  std::optional<std::pair<int, int>> cell;  // first offending cell
};

// Checks that 0 is a two-sided identity and that the table is a Latin
// square.  Reports the first defect with its cell.
ValidationReport validate_loop(const CayleyTable& t);

// Expands a finite symbolic loop into its table (enumerate() order, so the
// identity is row/column 0).  Throws std::domain_error on infinite centers.
CayleyTable materialize(const RaLoop& loop);
// Same for the group part alone (4 |Z| elements).
CayleyTable materialize_group(const GroupPresentation& g);
// Element names in materialize() order.
std::vector<std::string> element_labels(const RaLoop& loop);

// Table-level check of the Moufang identity (pq)(rp) = (p(qr))p and both
// alternative laws.  Works on any table with an identity (Latin or not),
// which makes it usable on deliberately corrupted tables.
struct MoufangTableReport {
  bool ok = true;
  std::string law;                      // which law failed first
  std::optional<std::array<int, 3>> witness;
};
MoufangTableReport check_moufang_table(const CayleyTable& t);

// Elements commuting and associating with everything (Moufang centre).
std::vector<int> center_of_table(const CayleyTable& t);
// Subloop generated by all commutators and associators.
std::vector<int> derived_subloop(const CayleyTable& t);
// Closure of {0} u gens under multiplication (a subloop for finite loops).
std::vector<int> subloop_generated(const CayleyTable& t,
                                   const std::vector<int>& gens);
// Order of an element as the first return of left translation to the
// identity; equals the usual order on power-associative tables.
Int element_order_in_table(const CayleyTable& t, int p);

// Isomorphism invariants computable from a table, also computable
// symbolically from a presentation (classification::fingerprint).  Every
// field is invariant under loop isomorphism.
struct Fingerprint {
  Order loop_order = Order::finite(1);
  std::vector<Int> center_torsion;      // sorted finite factor orders > 1
  int center_free_rank = 0;
  Int derived_size = 1;                 // |L'|
  Int noncentral_involutions = 0;
  std::map<Order, Int> order_histogram; // finite loops only
  // For each non-central coset of the center: the minimal order of w^2 over
  // the coset, as a sorted multiset.  (Squares are central, and coset
  // members' squares differ by a central square.)
  std::vector<Order> coset_square_orders;

  bool operator==(const Fingerprint& other) const = default;
  std::string str() const;
};

Fingerprint table_invariants(const CayleyTable& t);

// Exhaustive generator-image backtracking search.  Returns the image array
// (a[i] = image of i) of some isomorphism, or nullopt after exhausting the
// pruned search space.  Deterministic.
std::optional<std::vector<int>> iso_search(const CayleyTable& a,
                                          const CayleyTable& b);

// Direct-product decomposition search over the subloop lattice.
enum class DecompStatus { Decomposition, Indecomposable, Undecided };
struct DecompResult {
  DecompStatus status = DecompStatus::Undecided;
  std::vector<int> factor_a;  // witnesses when status == Decomposition
  std::vector<int> factor_b;
};
// budget: largest table size searched exhaustively; larger inputs return
// Undecided without work.
DecompResult decomposability_check(const CayleyTable& t, int budget = 64);

}  // namespace raloops

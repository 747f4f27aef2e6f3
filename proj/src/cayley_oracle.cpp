#include "raloops/cayley_oracle.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace raloops {

CayleyTable::CayleyTable(int n, std::vector<std::int32_t> entries)
    : n_(n), t_(std::move(entries)) {
  if (n < 1) throw std::invalid_argument("CayleyTable: size must be >= 1");
  if (t_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw std::invalid_argument("CayleyTable: entry count must be n*n");
  for (std::int32_t v : t_)
    if (v < 0 || v >= n)
      throw std::invalid_argument("CayleyTable: entry out of range");
}

int CayleyTable::left_div(int a, int b) const {
  for (int x = 0; x < n_; ++x)
    if (at(a, x) == b) return x;
  throw std::logic_error("CayleyTable::left_div: no solution (not Latin)");
}

int CayleyTable::right_div(int a, int b) const {
  for (int x = 0; x < n_; ++x)
    if (at(x, b) == a) return x;
  throw std::logic_error("CayleyTable::right_div: no solution (not Latin)");
}

ValidationReport validate_loop(const CayleyTable& t) {
  ValidationReport r;
  const int n = t.size();
  for (int j = 0; j < n; ++j) {
    if (t.at(0, j) != j) {
      r.ok = false;
      r.defect = "row 0 is not the identity";
      r.cell = {0, j};
      return r;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (t.at(i, 0) != i) {
      r.ok = false;
      r.defect = "column 0 is not the identity";
      r.cell = {i, 0};
      return r;
    }
  }
  std::vector<int> seen(n);
  for (int i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), -1);
    for (int j = 0; j < n; ++j) {
      int v = t.at(i, j);
      if (seen[v] >= 0) {
        r.ok = false;
        r.defect = "row " + std::to_string(i) + " repeats entry " +
                   std::to_string(v);
        r.cell = {i, j};
        return r;
      }
      seen[v] = j;
    }
  }
  for (int j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), -1);
    for (int i = 0; i < n; ++i) {
      int v = t.at(i, j);
      if (seen[v] >= 0) {
        r.ok = false;
        r.defect = "column " + std::to_string(j) + " repeats entry " +
                   std::to_string(v);
        r.cell = {i, j};
        return r;
      }
      seen[v] = i;
    }
  }
  return r;
}

CayleyTable materialize(const RaLoop& loop) {
  Order total = loop.loop_order();
  if (!total.is_finite())
    throw std::domain_error("materialize: loop has an infinite center");
  if (total.value() > 4096)
    throw std::domain_error("materialize: loop too large to materialize");
  std::vector<LoopElement> els = loop.enumerate();
  const int n = static_cast<int>(els.size());
  std::vector<std::int32_t> entries(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      entries[static_cast<std::size_t>(i) * n + j] =
          static_cast<std::int32_t>(loop.index_of(loop.mul(els[i], els[j])));
  CayleyTable t(n, std::move(entries));
  t.labels = element_labels(loop);
  return t;
}

CayleyTable materialize_group(const GroupPresentation& g) {
  Order total = g.group_order();
  if (!total.is_finite())
    throw std::domain_error("materialize_group: group is infinite");
  if (total.value() > 4096)
    throw std::domain_error("materialize_group: group too large");
  std::vector<GroupElement> els = g.enumerate();
  const int n = static_cast<int>(els.size());
  // Index by position: coset-major then center odometer, mirroring
  // GroupPresentation::enumerate().
  auto index_of = [&](const GroupElement& p) {
    Int zindex = 0;
    for (std::size_t i = 0; i < g.center().rank(); ++i) {
      zindex *= g.center().factor(i).value();
      zindex += p.z[i];
    }
    Int zcount = g.center().order().value();
    int coset = (p.x_bit ? 1 : 0) + (p.y_bit ? 2 : 0);
    return static_cast<int>(coset * zcount + zindex);
  };
  std::vector<std::int32_t> entries(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      entries[static_cast<std::size_t>(i) * n + j] =
          static_cast<std::int32_t>(index_of(g.mul(els[i], els[j])));
  CayleyTable t(n, std::move(entries));
  t.labels.reserve(els.size());
  for (const auto& e : els) t.labels.push_back(g.element_str(e));
  return t;
}

std::vector<std::string> element_labels(const RaLoop& loop) {
  std::vector<LoopElement> els = loop.enumerate();
  std::vector<std::string> out;
  out.reserve(els.size());
  for (const auto& e : els) out.push_back(loop.element_str(e));
  return out;
}

MoufangTableReport check_moufang_table(const CayleyTable& t) {
  MoufangTableReport r;
  const int n = t.size();
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      // Alternative laws as the two-variable slice.
      int pp = t.at(p, p);
      if (t.at(p, t.at(p, q)) != t.at(pp, q)) {
        r.ok = false;
        r.law = "left-alternative";
        r.witness = {{p, p, q}};
        return r;
      }
      if (t.at(t.at(q, p), p) != t.at(q, pp)) {
        r.ok = false;
        r.law = "right-alternative";
        r.witness = {{q, p, p}};
        return r;
      }
      for (int s = 0; s < n; ++s) {
        // (pq)(sp) = (p(qs))p
        int lhs = t.at(t.at(p, q), t.at(s, p));
        int rhs = t.at(t.at(p, t.at(q, s)), p);
        if (lhs != rhs) {
          r.ok = false;
          r.law = "moufang";
          r.witness = {{p, q, s}};
          return r;
        }
      }
    }
  }
  return r;
}

std::vector<int> center_of_table(const CayleyTable& t) {
  const int n = t.size();
  std::vector<int> candidates;
  for (int z = 0; z < n; ++z) {
    bool commutes = true;
    for (int g = 0; g < n && commutes; ++g)
      if (t.at(z, g) != t.at(g, z)) commutes = false;
    if (commutes) candidates.push_back(z);
  }
  std::vector<int> center;
  for (int z : candidates) {
    bool assoc = true;
    for (int g = 0; g < n && assoc; ++g) {
      for (int h = 0; h < n && assoc; ++h) {
        if (t.at(t.at(z, g), h) != t.at(z, t.at(g, h))) assoc = false;
        else if (t.at(t.at(g, z), h) != t.at(g, t.at(z, h))) assoc = false;
        else if (t.at(t.at(g, h), z) != t.at(g, t.at(h, z))) assoc = false;
      }
    }
    if (assoc) center.push_back(z);
  }
  return center;
}

std::vector<int> subloop_generated(const CayleyTable& t,
                                   const std::vector<int>& gens) {
  const int n = t.size();
  std::vector<char> in_set(n, 0);
  std::vector<int> members;
  auto add = [&](int v) {
    if (!in_set[v]) {
      in_set[v] = 1;
      members.push_back(v);
    }
  };
  add(0);
  for (int g : gens) add(g);
  // Multiplicative closure; for finite loops this is already a subloop
  // (left/right translations restrict to bijections of the closed set).
  std::size_t processed = 0;
  while (processed < members.size()) {
    int a = members[processed++];
    for (std::size_t i = 0; i < members.size(); ++i) {
      int b = members[i];
      add(t.at(a, b));
      add(t.at(b, a));
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

std::vector<int> derived_subloop(const CayleyTable& t) {
  const int n = t.size();
  // Left-division lookup: ldiv[a][v] = x with t[a][x] = v.
  std::vector<int> ldiv(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < n; ++x)
      ldiv[static_cast<std::size_t>(a) * n + t.at(a, x)] = x;
  auto solve = [&](int a, int v) {
    return ldiv[static_cast<std::size_t>(a) * n + v];
  };
  std::vector<char> gen_mark(n, 0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      gen_mark[solve(t.at(p, q), t.at(q, p))] = 1;  // commutator
      for (int r = 0; r < n; ++r)
        gen_mark[solve(t.at(p, t.at(q, r)), t.at(t.at(p, q), r))] = 1;
    }
  std::vector<int> gens;
  for (int v = 0; v < n; ++v)
    if (gen_mark[v]) gens.push_back(v);
  return subloop_generated(t, gens);
}

Int element_order_in_table(const CayleyTable& t, int p) {
  Int k = 1;
  int cur = p;
  while (cur != 0) {
    cur = t.at(p, cur);
    ++k;
  }
  return k;
}

namespace {

// Prime factorization of a small positive integer.
std::vector<std::pair<Int, int>> factor_small(Int n) {
  std::vector<std::pair<Int, int>> out;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

// Primary decomposition (multiset of prime-power cyclic orders) of a finite
// abelian group given by a sublist of table indices.  Determined by counting
// elements of order dividing p^k for each prime p.
std::vector<Int> abelian_decomposition(const CayleyTable& t,
                                       const std::vector<int>& members) {
  std::vector<Int> orders;
  orders.reserve(members.size());
  for (int m : members) orders.push_back(element_order_in_table(t, m));
  Int size = Int(static_cast<std::int64_t>(members.size()));
  std::vector<Int> result;
  for (const auto& [p, e] : factor_small(size)) {
    (void)e;
    // c[k] = #elements with order dividing p^k; the number of cyclic
    // p-factors of order >= p^k is log_p(c[k] / c[k-1]).
    Int prev = 1;  // c[0]
    Int pk = 1;
    std::vector<Int> ge;  // ge[k-1] = #factors with exponent >= k
    while (true) {
      pk *= p;
      Int c = 0;
      for (const Int& o : orders)
        if (pk % o == 0) ++c;
      if (c == prev && pk > size) break;
      Int ratio = c / prev;
      Int count = 0;
      while (ratio > 1) {
        ratio /= p;
        ++count;
      }
      if (count == 0) break;
      ge.push_back(count);
      prev = c;
    }
    for (std::size_t k = 0; k < ge.size(); ++k) {
      Int exactly = ge[k] - (k + 1 < ge.size() ? ge[k + 1] : Int(0));
      Int power = 1;
      for (std::size_t i = 0; i <= k; ++i) power *= p;
      for (Int i = 0; i < exactly; ++i) result.push_back(power);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace

std::string Fingerprint::str() const {
  std::ostringstream os;
  os << "order=" << loop_order.str() << " torsion=[";
  for (std::size_t i = 0; i < center_torsion.size(); ++i)
    os << (i ? "," : "") << center_torsion[i];
  os << "] free_rank=" << center_free_rank << " derived=" << derived_size
     << " involutions=" << noncentral_involutions;
  if (!order_histogram.empty()) {
    os << " orders={";
    bool first = true;
    for (const auto& [o, c] : order_histogram) {
      os << (first ? "" : ",") << o.str() << ":" << c;
      first = false;
    }
    os << "}";
  }
  os << " coset_sq=[";
  for (std::size_t i = 0; i < coset_square_orders.size(); ++i)
    os << (i ? "," : "") << coset_square_orders[i].str();
  os << "]";
  return os.str();
}

Fingerprint table_invariants(const CayleyTable& t) {
  Fingerprint fp;
  const int n = t.size();
  fp.loop_order = Order::finite(n);
  std::vector<int> center = center_of_table(t);
  std::vector<char> central(n, 0);
  for (int z : center) central[z] = 1;

  fp.center_torsion = abelian_decomposition(t, center);
  fp.center_free_rank = 0;
  fp.derived_size = Int(static_cast<std::int64_t>(derived_subloop(t).size()));

  for (int i = 0; i < n; ++i)
    if (!central[i] && t.at(i, i) == 0) ++fp.noncentral_involutions;

  for (int i = 0; i < n; ++i) {
    Order o = Order::finite(element_order_in_table(t, i));
    ++fp.order_histogram[o];
  }

  // Cosets of the center among non-central elements; minimal square order
  // per coset.
  std::vector<char> seen(n, 0);
  for (int a = 0; a < n; ++a) {
    if (central[a] || seen[a]) continue;
    Int best_set = 0;
    Order best = Order::infinity();
    for (int z : center) {
      int w = t.at(a, z);
      seen[w] = 1;
      Order o = Order::finite(element_order_in_table(t, t.at(w, w)));
      if (best_set == 0 || o < best) best = o;
      best_set = 1;
    }
    fp.coset_square_orders.push_back(best);
  }
  std::sort(fp.coset_square_orders.begin(), fp.coset_square_orders.end());
  return fp;
}

namespace {

struct ElementInvariant {
  Int order;
  bool central;
  Int square_order;
  int commutant;
  // cpp_int has no operator<=>, so spell the comparisons out.
  bool operator==(const ElementInvariant& o) const {
    return order == o.order && central == o.central &&
           square_order == o.square_order && commutant == o.commutant;
  }
  bool operator<(const ElementInvariant& o) const {
    return std::tie(order, central, square_order, commutant) <
           std::tie(o.order, o.central, o.square_order, o.commutant);
  }
};

std::vector<ElementInvariant> element_invariants(const CayleyTable& t) {
  const int n = t.size();
  std::vector<int> center = center_of_table(t);
  std::vector<char> central(n, 0);
  for (int z : center) central[z] = 1;
  std::vector<ElementInvariant> inv(n);
  for (int i = 0; i < n; ++i) {
    int comm = 0;
    for (int j = 0; j < n; ++j)
      if (t.at(i, j) == t.at(j, i)) ++comm;
    inv[i] = ElementInvariant{element_order_in_table(t, i), central[i] == 1,
                              element_order_in_table(t, t.at(i, i)), comm};
  }
  return inv;
}

// Greedy generating set: repeatedly add the element whose closure growth is
// largest.  Small for every loop this project builds (<= 4 generators).
std::vector<int> greedy_generators(const CayleyTable& t) {
  const int n = t.size();
  std::vector<int> gens;
  std::vector<int> closure = subloop_generated(t, {});
  while (static_cast<int>(closure.size()) < n) {
    std::vector<char> in_closure(n, 0);
    for (int v : closure) in_closure[v] = 1;
    int best = -1;
    std::size_t best_size = 0;
    for (int g = 0; g < n; ++g) {
      if (in_closure[g]) continue;
      std::vector<int> cand = gens;
      cand.push_back(g);
      std::size_t sz = subloop_generated(t, cand).size();
      if (sz > best_size) {
        best_size = sz;
        best = g;
      }
      if (sz == static_cast<std::size_t>(n)) break;  // cannot do better
    }
    gens.push_back(best);
    closure = subloop_generated(t, gens);
  }
  return gens;
}

// Backtracking state for iso_search.
struct IsoState {
  const CayleyTable& a;
  const CayleyTable& b;
  std::vector<int> img;   // a-index -> b-index or -1
  std::vector<int> rev;   // b-index -> a-index or -1
  std::vector<int> dom;   // mapped a-indices in assignment order
  std::vector<std::pair<int, int>> undo;  // (a-index, b-index) log

  bool assign(int ai, int bi) {
    if (img[ai] != -1) return img[ai] == bi;
    if (rev[bi] != -1) return false;
    img[ai] = bi;
    rev[bi] = ai;
    dom.push_back(ai);
    undo.emplace_back(ai, bi);
    return true;
  }

  // Extend the partial map by multiplicative closure, checking the
  // homomorphism condition on every product among mapped elements.
  bool propagate(std::size_t from) {
    std::size_t next = from;
    while (next < dom.size()) {
      int p = dom[next++];
      for (std::size_t i = 0; i < dom.size(); ++i) {
        int q = dom[i];
        int r1 = a.at(p, q);
        int s1 = b.at(img[p], img[q]);
        if (!assign(r1, s1)) return false;
        int r2 = a.at(q, p);
        int s2 = b.at(img[q], img[p]);
        if (!assign(r2, s2)) return false;
      }
    }
    return true;
  }

  void rollback(std::size_t undo_mark, std::size_t dom_mark) {
    while (undo.size() > undo_mark) {
      auto [ai, bi] = undo.back();
      undo.pop_back();
      img[ai] = -1;
      rev[bi] = -1;
    }
    dom.resize(dom_mark);
  }
};

bool iso_backtrack(IsoState& st, const std::vector<int>& gens,
                   const std::vector<ElementInvariant>& inv_a,
                   const std::vector<ElementInvariant>& inv_b,
                   std::size_t depth) {
  if (depth == gens.size())
    return st.dom.size() == static_cast<std::size_t>(st.a.size());
  int g = gens[depth];
  for (int c = 0; c < st.b.size(); ++c) {
    if (st.rev[c] != -1) continue;
    if (!(inv_a[static_cast<std::size_t>(g)] ==
          inv_b[static_cast<std::size_t>(c)]))
      continue;
    std::size_t undo_mark = st.undo.size();
    std::size_t dom_mark = st.dom.size();
    if (st.assign(g, c) && st.propagate(dom_mark) &&
        iso_backtrack(st, gens, inv_a, inv_b, depth + 1))
      return true;
    st.rollback(undo_mark, dom_mark);
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> iso_search(const CayleyTable& a,
                                           const CayleyTable& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::vector<ElementInvariant> inv_a = element_invariants(a);
  std::vector<ElementInvariant> inv_b = element_invariants(b);
  // Invariant multisets must agree; this only prunes, never fabricates.
  {
    auto sa = inv_a, sb = inv_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  std::vector<int> gens = greedy_generators(a);
  IsoState st{a, b,
              std::vector<int>(static_cast<std::size_t>(a.size()), -1),
              std::vector<int>(static_cast<std::size_t>(b.size()), -1),
              {},
              {}};
  st.assign(0, 0);
  if (!st.propagate(0)) return std::nullopt;
  if (iso_backtrack(st, gens, inv_a, inv_b, 0)) return st.img;
  return std::nullopt;
}

DecompResult decomposability_check(const CayleyTable& t, int budget) {
  DecompResult result;
  const int n = t.size();
  if (n > budget) {
    result.status = DecompStatus::Undecided;
    return result;
  }

  // Enumerate the full subloop lattice: closures of singletons, then extend
  // every known subloop by every outside element until stable.
  std::set<std::vector<int>> subloops;
  std::queue<std::vector<int>> work;
  auto push = [&](std::vector<int> s) {
    if (subloops.insert(s).second) work.push(std::move(s));
  };
  push(subloop_generated(t, {}));
  for (int g = 0; g < n; ++g) push(subloop_generated(t, {g}));
  long ops = 0;
  const long cap = 200000;
  while (!work.empty()) {
    std::vector<int> s = work.front();
    work.pop();
    if (static_cast<int>(s.size()) == n) continue;
    std::vector<char> in_s(n, 0);
    for (int v : s) in_s[v] = 1;
    for (int g = 0; g < n; ++g) {
      if (in_s[g]) continue;
      std::vector<int> gens = s;
      gens.push_back(g);
      push(subloop_generated(t, gens));
      if (++ops > cap) {
        result.status = DecompStatus::Undecided;
        return result;
      }
    }
  }

  std::vector<std::vector<int>> all(subloops.begin(), subloops.end());
  std::vector<char> seen(n, 0);
  for (const auto& fa : all) {
    int na = static_cast<int>(fa.size());
    if (na <= 1 || na >= n || n % na != 0) continue;
    for (const auto& fb : all) {
      int nb = static_cast<int>(fb.size());
      if (nb <= 1 || na * nb != n) continue;
      // Products must tile the loop and satisfy the interchange law
      // (a1 b1)(a2 b2) = (a1 a2)(b1 b2); together these make
      // (a, b) -> ab an isomorphism from the direct product.
      std::fill(seen.begin(), seen.end(), 0);
      bool tiles = true;
      for (int a : fa) {
        for (int b : fb) {
          int v = t.at(a, b);
          if (seen[v]) {
            tiles = false;
            break;
          }
          seen[v] = 1;
        }
        if (!tiles) break;
      }
      if (!tiles) continue;
      bool inter = true;
      for (int a1 : fa) {
        for (int a2 : fa) {
          for (int b1 : fb) {
            for (int b2 : fb) {
              if (t.at(t.at(a1, b1), t.at(a2, b2)) !=
                  t.at(t.at(a1, a2), t.at(b1, b2))) {
                inter = false;
                break;
              }
            }
            if (!inter) break;
          }
          if (!inter) break;
        }
        if (!inter) break;
      }
      if (inter) {
        result.status = DecompStatus::Decomposition;
        result.factor_a = fa;
        result.factor_b = fb;
        return result;
      }
    }
  }
  result.status = DecompStatus::Indecomposable;
  return result;
}

}  // namespace raloops

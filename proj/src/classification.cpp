#include "raloops/classification.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace raloops {

namespace {

Int pow2(std::int64_t m) { return Int(1) << static_cast<unsigned>(m); }

bool is_pow2(const Int& n) { return n > 0 && (n & (n - 1)) == 0; }

std::int64_t log2_exact(Int n) {
  std::int64_t e = 0;
  while (n > 1) {
    n >>= 1;
    ++e;
  }
  return e;
}

RaLoop assemble(const AbelianGroup& center, std::size_t t1, std::int64_t m1,
                const ExponentVector& xs, const ExponentVector& ys,
                const ExponentVector& g0, std::vector<std::string> names) {
  GroupPresentation g =
      GroupPresentation::make(center, t1, m1, center.reduce(xs),
                              center.reduce(ys), std::move(names));
  return RaLoop::make(g, center.reduce(g0));
}

NormalizationStep step_simple(StepKind kind) {
  NormalizationStep st;
  st.kind = kind;
  switch (kind) {
    case StepKind::UTimesX: st.text = "u' = x*u"; break;
    case StepKind::UTimesY: st.text = "u' = y*u"; break;
    case StepKind::XTimesU: st.text = "x' = x*u"; break;
    case StepKind::YTimesU: st.text = "y' = y*u"; break;
    case StepKind::XTimesY: st.text = "x' = x*y"; break;
    case StepKind::YTimesXLeft: st.text = "y' = x*y"; break;
    case StepKind::SwapXY: st.text = "swap x and y"; break;
    case StepKind::SwapXU: st.text = "swap x and u"; break;
    case StepKind::SwapYU: st.text = "swap y and u"; break;
    default: throw std::logic_error("step_simple: kind carries data");
  }
  return st;
}

NormalizationStep step_central(StepKind kind, const RaLoop& cur,
                               const ExponentVector& alpha) {
  NormalizationStep st;
  st.kind = kind;
  st.alpha = cur.center().reduce(alpha);
  const char* gen = kind == StepKind::UTimesCentral ? "u"
                    : kind == StepKind::XTimesCentral ? "x"
                                                      : "y";
  st.text = std::string(gen) + "' = a*" + gen + " with a = " +
            cur.group().element_str(cur.group().central(st.alpha));
  return st;
}

NormalizationStep step_merge(StepKind kind, const RaLoop& cur, int j) {
  NormalizationStep st;
  st.kind = kind;
  st.factor = j;
  const std::string& nm = cur.group().factor_names()[static_cast<std::size_t>(j)];
  const std::string& t1 =
      cur.group().factor_names()[cur.group().t1_index()];
  if (kind == StepKind::MergeT1IntoFactor)
    st.text = nm + "' = " + t1 + "*" + nm;
  else
    st.text = t1 + "' = " + t1 + "*" + nm;
  return st;
}

NormalizationStep step_permute(const RaLoop& cur, std::vector<int> perm) {
  NormalizationStep st;
  st.kind = StepKind::PermuteFactors;
  st.perm = std::move(perm);
  std::string t = "reorder center factors to (";
  const auto& names = cur.group().factor_names();
  for (std::size_t i = 0; i < st.perm.size(); ++i) {
    if (i) t += ", ";
    t += names[static_cast<std::size_t>(st.perm[i])];
  }
  st.text = t + ")";
  return st;
}

std::vector<std::string> canonical_names(int type_id) {
  switch (type_id) {
    case 1: case 2: return {"t1"};
    case 3: case 4: return {"t1", "t2"};
    case 5: case 6: return {"t1", "u1"};
    case 7: case 8: return {"t1", "t2", "t3"};
    case 9: return {"t1", "t2", "t3", "t"};
    case 10: case 11: return {"t1", "t2", "u1"};
    case 12: return {"t1", "t2", "u1", "t"};
    case 13: return {"t1", "t2", "u1", "w"};
    case 14: case 15: return {"t1", "u1", "u2"};
    case 16: return {"t1", "u1", "u2", "w"};
    default: throw std::logic_error("canonical_names: bad type id");
  }
}

// Pattern match against the 16 canonical layouts.  Returns the type, the
// recovered parameters, and the canonical ordering of the center factors
// (old indices, t1 first).
struct MatchResult {
  int type_id = 0;
  RowParams params;
  std::vector<int> order;
};

std::optional<MatchResult> match_canonical(const RaLoop& cur) {
  const GroupPresentation& g = cur.group();
  const AbelianGroup& z = g.center();
  const int t1 = static_cast<int>(g.t1_index());

  // Each square must be trivial or a single first-power factor.
  auto single = [&](const ExponentVector& v) -> std::optional<int> {
    int found = -1;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0) continue;
      if (found >= 0 || v[i] != 1) return std::nullopt;
      found = static_cast<int>(i);
    }
    return found;
  };
  auto xs = single(g.x_sq());
  auto ys = single(g.y_sq());
  auto gs = single(cur.g0());
  if (!xs || !ys || !gs) return std::nullopt;

  enum Kind { Nil, T1s, Fin, Inf };
  auto kind = [&](int slot) {
    if (slot < 0) return Nil;
    if (slot == t1) return T1s;
    return z.factor(static_cast<std::size_t>(slot)).is_finite() ? Fin : Inf;
  };
  const Kind kx = kind(*xs), ky = kind(*ys), kg = kind(*gs);

  struct Layout {
    int id;
    Kind x, y, g;
    int rank;
  };
  static const Layout layouts[] = {
      {1, Nil, Nil, Nil, 1},  {2, T1s, T1s, T1s, 1},
      {3, Nil, Fin, Nil, 2},  {4, T1s, Fin, T1s, 2},
      {5, Nil, Inf, Nil, 2},  {6, T1s, Inf, T1s, 2},
      {7, Fin, Fin, Nil, 3},  {8, Fin, Fin, T1s, 3},
      {9, Fin, Fin, Fin, 4},
      {10, Fin, Inf, Nil, 3}, {11, Fin, Inf, T1s, 3},
      {12, Fin, Inf, Fin, 4}, {13, Fin, Inf, Inf, 4},
      {14, Inf, Inf, Nil, 3}, {15, Inf, Inf, T1s, 3},
      {16, Inf, Inf, Inf, 4},
  };

  auto exp_of = [&](int slot) -> std::optional<std::int64_t> {
    const Order& o = z.factor(static_cast<std::size_t>(slot));
    if (!o.is_finite() || !is_pow2(o.value())) return std::nullopt;
    return log2_exact(o.value());
  };

  for (const Layout& lay : layouts) {
    if (lay.x != kx || lay.y != ky || lay.g != kg) continue;
    if (static_cast<int>(z.rank()) != lay.rank) continue;
    std::vector<int> used{t1};
    auto use = [&](int slot) {
      if (slot >= 0 && std::find(used.begin(), used.end(), slot) == used.end())
        used.push_back(slot);
    };
    use(*xs);
    use(*ys);
    use(*gs);
    if (static_cast<int>(used.size()) != lay.rank) continue;

    MatchResult m;
    m.type_id = lay.id;
    m.params.m1 = g.m1();
    bool ok = true;
    auto grab = [&](std::int64_t& dst, int slot) {
      if (auto e = exp_of(slot)) dst = *e;
      else ok = false;
    };
    switch (lay.id) {
      case 1: case 2: m.order = {t1}; break;
      case 3: case 4: grab(m.params.m2, *ys); m.order = {t1, *ys}; break;
      case 5: case 6: m.order = {t1, *ys}; break;
      case 7: case 8:
        grab(m.params.m2, *xs);
        grab(m.params.m3, *ys);
        m.order = {t1, *xs, *ys};
        break;
      case 9:
        grab(m.params.m2, *xs);
        grab(m.params.m3, *ys);
        grab(m.params.k, *gs);
        m.order = {t1, *xs, *ys, *gs};
        break;
      case 10: case 11:
        grab(m.params.m2, *xs);
        m.order = {t1, *xs, *ys};
        break;
      case 12:
        grab(m.params.m2, *xs);
        grab(m.params.k, *gs);
        m.order = {t1, *xs, *ys, *gs};
        break;
      case 13:
        grab(m.params.m2, *xs);
        m.order = {t1, *xs, *ys, *gs};
        break;
      case 14: case 15: m.order = {t1, *xs, *ys}; break;
      case 16: m.order = {t1, *xs, *ys, *gs}; break;
      default: ok = false;
    }
    if (!ok) continue;
    return m;
  }
  return std::nullopt;
}

}  // namespace

RowSpec::RowSpec(int row_id, RowParams params)
    : row_id_(row_id), params_(params) {
  if (row_id_ < 1 || row_id_ > 54)
    throw std::invalid_argument("RowSpec: row id must be in 1..54");
  if (params_.m1 < 1 || params_.m2 < 1 || params_.m3 < 1 || params_.k < 1)
    throw std::invalid_argument("RowSpec: parameters must be >= 1");
  if (params_.m1 > 62 || params_.m2 > 62 || params_.m3 > 62 || params_.k > 62)
    throw std::invalid_argument("RowSpec: parameters must be <= 62");
  // Starred rows are separate cases only when m1 = 1.  Row 34 is the one
  // starred row whose o(t1) > o(t) branch still occurs in the
  // classification, so it alone admits m1 > 1.
  if (starred() && row_id_ != 34 && params_.m1 != 1)
    throw std::invalid_argument("RowSpec: row " + std::to_string(row_id_) +
                                " requires m1 = 1");
}

Extension RowSpec::extension() const {
  switch ((row_id_ - 1) % 6) {
    case 0: case 1: return Extension::None;
    case 2: case 3: return Extension::Torsion;
    default: return Extension::Free;
  }
}

G0Pattern RowSpec::g0_pattern() const {
  switch ((row_id_ - 1) % 6) {
    case 0: return G0Pattern::One;
    case 1: return G0Pattern::T1;
    case 2: return G0Pattern::T;
    case 3: return G0Pattern::T1T;
    case 4: return G0Pattern::W;
    default: return G0Pattern::T1W;
  }
}

bool RowSpec::starred() const {
  switch (row_id_) {
    case 8: case 10: case 12:
    case 20: case 22: case 24:
    case 32: case 34: case 36:
      return true;
    default:
      return false;
  }
}

RaLoop build_row(const RowSpec& row) {
  const RowParams& rp = row.params();
  GroupPresentation base =
      build_group_type(row.group_type(), {rp.m1, rp.m2, rp.m3});

  std::vector<Order> factors = base.center().factors();
  std::vector<std::string> names = base.factor_names();
  ExponentVector xs = base.x_sq();
  ExponentVector ys = base.y_sq();

  int ext_index = -1;
  switch (row.extension()) {
    case Extension::None:
      break;
    case Extension::Torsion:
      ext_index = static_cast<int>(factors.size());
      factors.push_back(Order::finite(pow2(rp.k)));
      names.push_back("t");
      break;
    case Extension::Free:
      ext_index = static_cast<int>(factors.size());
      factors.push_back(Order::infinity());
      names.push_back("w");
      break;
  }
  if (ext_index >= 0) {
    xs.e.push_back(0);
    ys.e.push_back(0);
  }

  AbelianGroup center(factors);
  ExponentVector g0 = center.identity();
  const std::size_t t1 = base.t1_index();
  switch (row.g0_pattern()) {
    case G0Pattern::One: break;
    case G0Pattern::T1: g0[t1] = 1; break;
    case G0Pattern::T:
    case G0Pattern::W: g0[static_cast<std::size_t>(ext_index)] = 1; break;
    case G0Pattern::T1T:
    case G0Pattern::T1W:
      g0[t1] = 1;
      g0[static_cast<std::size_t>(ext_index)] = 1;
      break;
  }
  return assemble(center, t1, rp.m1, xs, ys, g0, names);
}

RaLoop build_canonical(int type_id, const RowParams& params) {
  if (type_id < 1 || type_id > 16)
    throw std::invalid_argument("build_canonical: type id must be in 1..16");
  if ((type_id == 2 || type_id == 4 || type_id == 6) && params.m1 != 1)
    throw std::invalid_argument("build_canonical: type " +
                                std::to_string(type_id) + " fixes m1 = 1");
  // Each canonical type coincides with one construction row.
  static const int kRowOfType[17] = {0,  1,  8,  13, 20, 25, 32, 37, 38,
                                     39, 43, 44, 45, 47, 49, 50, 53};
  RaLoop loop = build_row(RowSpec(kRowOfType[type_id], params));
  // Reinstall type-numbered display names (row builders use group-shape
  // names, identical except that type 13/16 call the free extension "w").
  const GroupPresentation& g = loop.group();
  return assemble(g.center(), g.t1_index(), g.m1(), g.x_sq(), g.y_sq(),
                  loop.g0(), canonical_names(type_id));
}

RaLoop apply_step(const RaLoop& loop, const NormalizationStep& step) {
  const GroupPresentation& g = loop.group();
  const AbelianGroup& z = g.center();
  const std::size_t t1 = g.t1_index();
  const std::int64_t m1 = g.m1();
  ExponentVector xs = g.x_sq();
  ExponentVector ys = g.y_sq();
  ExponentVector g0 = loop.g0();
  const ExponentVector& s = g.s_vector();
  std::vector<std::string> names = g.factor_names();

  auto check_alpha = [&] {
    if (step.alpha.size() != z.rank())
      throw std::invalid_argument("apply_step: central multiplier rank");
  };
  auto check_factor = [&] {
    if (step.factor < 0 || step.factor >= static_cast<int>(z.rank()) ||
        step.factor == static_cast<int>(t1))
      throw std::invalid_argument("apply_step: bad merge factor");
  };

  switch (step.kind) {
    case StepKind::UTimesCentral:
      check_alpha();
      g0 = z.mul(g0, z.pow(step.alpha, 2));
      break;
    case StepKind::UTimesX: g0 = z.mul(g0, z.mul(xs, s)); break;
    case StepKind::UTimesY: g0 = z.mul(g0, z.mul(ys, s)); break;
    case StepKind::XTimesU: xs = z.mul(xs, z.mul(g0, s)); break;
    case StepKind::YTimesU: ys = z.mul(ys, z.mul(g0, s)); break;
    case StepKind::XTimesY: xs = z.mul(xs, z.mul(ys, s)); break;
    case StepKind::YTimesXLeft: ys = z.mul(ys, z.mul(xs, s)); break;
    case StepKind::XTimesCentral:
      check_alpha();
      xs = z.mul(xs, z.pow(step.alpha, 2));
      break;
    case StepKind::YTimesCentral:
      check_alpha();
      ys = z.mul(ys, z.pow(step.alpha, 2));
      break;
    case StepKind::SwapXY: std::swap(xs, ys); break;
    case StepKind::SwapXU: std::swap(xs, g0); break;
    case StepKind::SwapYU: std::swap(ys, g0); break;
    case StepKind::MergeT1IntoFactor: {
      check_factor();
      const std::size_t j = static_cast<std::size_t>(step.factor);
      // The new basis element t1*z_j must keep the order of z_j.
      if (z.factor(j).is_finite() && z.factor(j).value() % pow2(m1) != 0)
        throw std::invalid_argument(
            "apply_step: order(z_j) must be a multiple of order(t1)");
      xs[t1] -= xs[j];
      ys[t1] -= ys[j];
      g0[t1] -= g0[j];
      break;
    }
    case StepKind::MergeFactorIntoT1: {
      check_factor();
      const std::size_t j = static_cast<std::size_t>(step.factor);
      // t1*z_j must keep order 2^m1 and the same involution s, which needs
      // order(z_j) dividing 2^(m1-1).
      if (!z.factor(j).is_finite() || pow2(m1 - 1) % z.factor(j).value() != 0)
        throw std::invalid_argument(
            "apply_step: order(z_j) must divide order(t1)/2");
      xs[j] -= xs[t1];
      ys[j] -= ys[t1];
      g0[j] -= g0[t1];
      break;
    }
    case StepKind::PermuteFactors: {
      if (step.perm.size() != z.rank())
        throw std::invalid_argument("apply_step: permutation rank");
      std::vector<char> hit(z.rank(), 0);
      for (int p : step.perm) {
        if (p < 0 || p >= static_cast<int>(z.rank()) || hit[p])
          throw std::invalid_argument("apply_step: not a permutation");
        hit[p] = 1;
      }
      std::vector<Order> nf;
      ExponentVector nxs, nys, ng0;
      std::vector<std::string> nn;
      std::size_t nt1 = 0;
      for (std::size_t i = 0; i < step.perm.size(); ++i) {
        const std::size_t p = static_cast<std::size_t>(step.perm[i]);
        nf.push_back(z.factor(p));
        nxs.e.push_back(xs[p]);
        nys.e.push_back(ys[p]);
        ng0.e.push_back(g0[p]);
        nn.push_back(names[p]);
        if (p == t1) nt1 = i;
      }
      return assemble(AbelianGroup(nf), nt1, m1, nxs, nys, ng0, nn);
    }
  }
  return assemble(z, t1, m1, xs, ys, g0, names);
}

ReduceG0Result reduce_g0(const RaLoop& loop) {
  ReduceG0Result res;
  RaLoop cur = loop;
  auto push = [&](NormalizationStep st) {
    RaLoop next = apply_step(cur, st);
    res.steps.push_back(std::move(st));
    cur = next;
  };

  const AbelianGroup& z = cur.center();
  const std::size_t t1 = cur.group().t1_index();
  const bool except_t1 = cur.group().m1() == 1;

  // Score a candidate g0 after parity reduction: factors shared with x^2 or
  // y^2, not counting t1 when m1 = 1 (the unremovable exceptional factor).
  auto parity = [](const Int& v) { return ((v % 2) + 2) % 2; };
  auto score = [&](const ExponentVector& cand) {
    int sc = 0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (parity(cand[i]) == 0) continue;
      if (except_t1 && i == t1) continue;
      if (cur.group().x_sq()[i] != 0 || cur.group().y_sq()[i] != 0) ++sc;
    }
    return sc;
  };

  const ExponentVector& s = cur.group().s_vector();
  ExponentVector base = cur.g0();
  ExponentVector with_x = z.mul(base, z.mul(cur.group().x_sq(), s));
  ExponentVector with_y = z.mul(base, z.mul(cur.group().y_sq(), s));
  ExponentVector with_xy = z.mul(with_x, z.mul(cur.group().y_sq(), s));

  struct Cand {
    const ExponentVector* v;
    bool use_x, use_y;
  };
  const Cand cands[] = {{&base, false, false},
                        {&with_x, true, false},
                        {&with_y, false, true},
                        {&with_xy, true, true}};
  const Cand* best = &cands[0];
  int best_score = score(base);
  int best_steps = 0;
  for (const Cand& c : cands) {
    const int sc = score(*c.v);
    const int ns = (c.use_x ? 1 : 0) + (c.use_y ? 1 : 0);
    if (sc < best_score || (sc == best_score && ns < best_steps)) {
      best = &c;
      best_score = sc;
      best_steps = ns;
    }
  }

  if (best->use_x) push(step_simple(StepKind::UTimesX));
  if (best->use_y) push(step_simple(StepKind::UTimesY));

  // Parity reduction: replace u by a*u so every exponent lands in {0,1}.
  ExponentVector alpha = z.identity();
  bool need = false;
  const ExponentVector g0 = cur.g0();
  for (std::size_t i = 0; i < g0.size(); ++i) {
    const Int want = parity(g0[i]);
    Int diff = want - g0[i];  // always even
    if (z.factor(i).is_finite()) {
      const Int n = z.factor(i).value();
      diff = ((diff % n) + n) % n;
    }
    if (diff != 0) {
      alpha[i] = diff / 2;
      need = true;
    }
  }
  if (need) push(step_central(StepKind::UTimesCentral, cur, alpha));

  res.loop = cur;
  return res;
}

NormalizationTrace normalize(const RowSpec& row) {
  NormalizationTrace tr;
  RaLoop cur = build_row(row);
  auto push = [&](NormalizationStep st) {
    RaLoop next = apply_step(cur, st);
    tr.steps.push_back(std::move(st));
    cur = next;
  };
  // Clear the t1 exponent of a square/g0 down to `want` by a central rescale.
  auto fix_t1_exp = [&](StepKind kind, const Int& have, const Int& want) {
    const std::size_t t1 = cur.group().t1_index();
    const Int n = pow2(cur.group().m1());
    const Int d = (((want - have) % n) + n) % n;
    if (d == 0) return;
    if (d % 2 != 0)
      throw std::logic_error("normalize: parity obstruction in central fix");
    ExponentVector a = cur.center().identity();
    a[t1] = d / 2;
    push(step_central(kind, cur, a));
  };
  auto recognize = [&] {
    auto m = match_canonical(cur);
    if (!m) {
      push(step_simple(StepKind::SwapXY));
      m = match_canonical(cur);
    }
    if (!m) throw std::logic_error("normalize: no canonical pattern matched");
    bool ident = true;
    for (std::size_t i = 0; i < m->order.size(); ++i)
      if (m->order[i] != static_cast<int>(i)) ident = false;
    if (!ident) push(step_permute(cur, m->order));
    const GroupPresentation& g = cur.group();
    cur = assemble(g.center(), g.t1_index(), g.m1(), g.x_sq(), g.y_sq(),
                   cur.g0(), canonical_names(m->type_id));
    tr.outcome.type_id = m->type_id;
    tr.outcome.params = m->params;
    tr.final_loop = cur;
  };

  const int d = row.group_type();
  const RowParams& rp = row.params();
  G0Pattern pat = row.g0_pattern();
  const std::size_t t1 = cur.group().t1_index();

  // Stage A: g0 = t1*t or t1*w — fold t1 into the extension factor, or the
  // extension into t1 when o(t) < o(t1).
  if (pat == G0Pattern::T1W) {
    push(step_merge(StepKind::MergeT1IntoFactor, cur,
                    static_cast<int>(cur.center().rank()) - 1));
    pat = G0Pattern::W;
  } else if (pat == G0Pattern::T1T) {
    const int j = static_cast<int>(cur.center().rank()) - 1;
    if (rp.m1 <= rp.k) {
      push(step_merge(StepKind::MergeT1IntoFactor, cur, j));
      pat = G0Pattern::T;
    } else if (cur.group().x_sq()[t1] == 0 && cur.group().y_sq()[t1] == 0) {
      // Absorbing t into t1 leaves the extension factor untouched by the
      // squares: the loop splits off <t>.
      push(step_merge(StepKind::MergeFactorIntoT1, cur, j));
      tr.outcome.decomposable = true;
      tr.outcome.factor_index = j;
      tr.outcome.factor_name =
          cur.group().factor_names()[static_cast<std::size_t>(j)];
      tr.final_loop = cur;
      return tr;
    } else {
      // x^2 = t1 shape (row 34): rotate x through u so x^2 becomes t, then
      // absorb t into t1.
      push(step_simple(StepKind::XTimesU));
      fix_t1_exp(StepKind::XTimesCentral, cur.group().x_sq()[t1], 0);
      push(step_merge(StepKind::MergeFactorIntoT1, cur, j));
      recognize();
      return tr;
    }
  }

  // Stage B: shape-specific scripts onto the canonical layouts.
  const bool sq_t1 = d == 2 || d == 4 || d == 6;  // shapes with x^2 = t1
  switch (pat) {
    case G0Pattern::One:
      if (sq_t1) {
        if (rp.m1 == 1) {
          push(step_simple(StepKind::XTimesU));
          if (d == 2) push(step_simple(StepKind::YTimesU));
        } else {
          push(step_simple(StepKind::UTimesX));
          fix_t1_exp(StepKind::UTimesCentral, cur.g0()[t1], 1);
        }
      }
      break;
    case G0Pattern::T1:
      if (d == 1) {
        if (rp.m1 == 1) {
          push(step_simple(StepKind::UTimesX));
        } else {
          push(step_simple(StepKind::SwapYU));
          push(step_simple(StepKind::XTimesY));
          fix_t1_exp(StepKind::XTimesCentral, cur.group().x_sq()[t1], 1);
          push(step_simple(StepKind::UTimesX));
          fix_t1_exp(StepKind::UTimesCentral, cur.g0()[t1], 1);
        }
      } else if (d == 3) {
        if (rp.m1 == 1) {
          push(step_simple(StepKind::UTimesX));
        } else {
          push(step_simple(StepKind::SwapXU));
          push(step_simple(StepKind::UTimesX));
          fix_t1_exp(StepKind::UTimesCentral, cur.g0()[t1], 1);
        }
      } else if (d == 5) {
        push(step_simple(StepKind::SwapXU));
        if (rp.m1 == 1) {
          push(step_simple(StepKind::XTimesU));
        } else {
          push(step_simple(StepKind::UTimesX));
          fix_t1_exp(StepKind::UTimesCentral, cur.g0()[t1], 1);
        }
      }
      // Shapes 2, 4, 6 with g0 = t1 are canonical as-is (types 2, 4, 6);
      // shapes 7, 8, 9 likewise (types 8, 11, 15).
      break;
    case G0Pattern::T:
    case G0Pattern::W: {
      const bool swap_y = d <= 2 || (pat == G0Pattern::T && d == 9) ||
                          (pat == G0Pattern::W && d == 7);
      if (swap_y)
        push(step_simple(StepKind::SwapYU));
      else if (d >= 3 && d <= 6)
        push(step_simple(StepKind::SwapXU));
      break;
    }
    default:
      break;
  }
  recognize();
  return tr;
}

namespace {

// Images carried through a trace replay: forward (current presentation's
// generators as elements of src) and backward (src generators as elements of
// the current presentation).
struct ReplayImages {
  LoopElement fx, fy, fu;
  std::vector<ExponentVector> fz;
  LoopElement bx, by, bu;
  std::vector<ExponentVector> bz;
};

ExponentVector map_central(const AbelianGroup& tgt_z,
                           const std::vector<ExponentVector>& gz,
                           const ExponentVector& v) {
  ExponentVector acc = tgt_z.identity();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) acc = tgt_z.mul(acc, tgt_z.pow(gz[i], v[i]));
  return acc;
}

LoopElement eval_elem(const RaLoop& tgt, const LoopElement& gx,
                      const LoopElement& gy, const LoopElement& gu,
                      const std::vector<ExponentVector>& gz,
                      const LoopElement& p) {
  LoopElement acc = tgt.identity();
  if (p.g.x_bit) acc = tgt.mul(acc, gx);
  if (p.g.y_bit) acc = tgt.mul(acc, gy);
  acc = tgt.mul(acc, tgt.central(map_central(tgt.center(), gz, p.g.z)));
  if (p.u_bit) acc = tgt.mul(acc, gu);
  return acc;
}

void replay_step(const RaLoop& src, const RaLoop& cur, const RaLoop& next,
                 const NormalizationStep& st, ReplayImages& im) {
  const AbelianGroup& sz = src.center();
  const std::size_t t1 = cur.group().t1_index();

  // Forward: the new presentation's generators as elements of src.
  switch (st.kind) {
    case StepKind::UTimesCentral:
      im.fu = src.mul(src.central(map_central(sz, im.fz, st.alpha)), im.fu);
      break;
    case StepKind::UTimesX: im.fu = src.mul(im.fx, im.fu); break;
    case StepKind::UTimesY: im.fu = src.mul(im.fy, im.fu); break;
    case StepKind::XTimesU: im.fx = src.mul(im.fx, im.fu); break;
    case StepKind::YTimesU: im.fy = src.mul(im.fy, im.fu); break;
    case StepKind::XTimesY: im.fx = src.mul(im.fx, im.fy); break;
    case StepKind::YTimesXLeft: im.fy = src.mul(im.fx, im.fy); break;
    case StepKind::XTimesCentral:
      im.fx = src.mul(src.central(map_central(sz, im.fz, st.alpha)), im.fx);
      break;
    case StepKind::YTimesCentral:
      im.fy = src.mul(src.central(map_central(sz, im.fz, st.alpha)), im.fy);
      break;
    case StepKind::SwapXY: std::swap(im.fx, im.fy); break;
    case StepKind::SwapXU: std::swap(im.fx, im.fu); break;
    case StepKind::SwapYU: std::swap(im.fy, im.fu); break;
    case StepKind::MergeT1IntoFactor:
      im.fz[static_cast<std::size_t>(st.factor)] =
          sz.mul(im.fz[t1], im.fz[static_cast<std::size_t>(st.factor)]);
      break;
    case StepKind::MergeFactorIntoT1:
      im.fz[t1] =
          sz.mul(im.fz[t1], im.fz[static_cast<std::size_t>(st.factor)]);
      break;
    case StepKind::PermuteFactors: {
      std::vector<ExponentVector> nz;
      for (int p : st.perm) nz.push_back(im.fz.at(static_cast<std::size_t>(p)));
      im.fz = std::move(nz);
      break;
    }
  }

  // Backward: express the old generators in the new presentation, then
  // rewrite the images of the src generators.
  LoopElement ox = next.x(), oy = next.y(), ou = next.u();
  std::vector<ExponentVector> oz;
  for (std::size_t i = 0; i < next.center().rank(); ++i)
    oz.push_back(next.center().basis_vector(i));
  switch (st.kind) {
    case StepKind::UTimesCentral:
      ou = next.mul(next.central(next.center().inverse(st.alpha)), next.u());
      break;
    case StepKind::UTimesX: ou = next.mul(next.inv(next.x()), next.u()); break;
    case StepKind::UTimesY: ou = next.mul(next.inv(next.y()), next.u()); break;
    case StepKind::XTimesU: ox = next.mul(next.x(), next.inv(next.u())); break;
    case StepKind::YTimesU: oy = next.mul(next.y(), next.inv(next.u())); break;
    case StepKind::XTimesY: ox = next.mul(next.x(), next.inv(next.y())); break;
    case StepKind::YTimesXLeft:
      oy = next.mul(next.inv(next.x()), next.y());
      break;
    case StepKind::XTimesCentral:
      ox = next.mul(next.central(next.center().inverse(st.alpha)), next.x());
      break;
    case StepKind::YTimesCentral:
      oy = next.mul(next.central(next.center().inverse(st.alpha)), next.y());
      break;
    case StepKind::SwapXY: ox = next.y(); oy = next.x(); break;
    case StepKind::SwapXU: ox = next.u(); ou = next.x(); break;
    case StepKind::SwapYU: oy = next.u(); ou = next.y(); break;
    case StepKind::MergeT1IntoFactor: {
      // old z_j = t1^(-1) * (new z_j)
      ExponentVector v = next.center().identity();
      v[t1] = -1;
      v[static_cast<std::size_t>(st.factor)] = 1;
      oz[static_cast<std::size_t>(st.factor)] = next.center().reduce(v);
      break;
    }
    case StepKind::MergeFactorIntoT1: {
      // old t1 = (new t1) * z_j^(-1)
      ExponentVector v = next.center().identity();
      v[t1] = 1;
      v[static_cast<std::size_t>(st.factor)] = -1;
      oz[t1] = next.center().reduce(v);
      break;
    }
    case StepKind::PermuteFactors:
      for (std::size_t i = 0; i < st.perm.size(); ++i)
        oz[static_cast<std::size_t>(st.perm[i])] =
            next.center().basis_vector(i);
      break;
    default:
      break;
  }

  LoopElement nbx = eval_elem(next, ox, oy, ou, oz, im.bx);
  LoopElement nby = eval_elem(next, ox, oy, ou, oz, im.by);
  LoopElement nbu = eval_elem(next, ox, oy, ou, oz, im.bu);
  std::vector<ExponentVector> nbz;
  for (const ExponentVector& v : im.bz)
    nbz.push_back(map_central(next.center(), oz, v));
  im.bx = nbx;
  im.by = nby;
  im.bu = nbu;
  im.bz = std::move(nbz);
}

LoopElement random_element(const RaLoop& loop, std::mt19937_64& rng,
                           std::int64_t bound) {
  LoopElement p = loop.identity();
  p.g.x_bit = rng() & 1;
  p.g.y_bit = rng() & 1;
  p.u_bit = rng() & 1;
  const AbelianGroup& z = loop.center();
  for (std::size_t i = 0; i < z.rank(); ++i) {
    if (z.factor(i).is_finite())
      p.g.z[i] = Int(rng()) % z.factor(i).value();
    else
      p.g.z[i] =
          Int(rng() % static_cast<std::uint64_t>(2 * bound + 1)) - bound;
  }
  p.g.z = z.reduce(p.g.z);
  return p;
}

}  // namespace

IsoMapReport verify_iso_map(const RaLoop& src, const RaLoop& dst,
                            const NormalizationTrace& trace,
                            const VerifyOptions& opts) {
  IsoMapReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.errors.push_back(std::move(msg));
  };

  ReplayImages im{src.x(), src.y(), src.u(), {}, src.x(), src.y(), src.u(), {}};
  for (std::size_t i = 0; i < src.center().rank(); ++i) {
    im.fz.push_back(src.center().basis_vector(i));
    im.bz.push_back(src.center().basis_vector(i));
  }

  RaLoop cur = src;
  for (const NormalizationStep& st : trace.steps) {
    RaLoop next = apply_step(cur, st);
    replay_step(src, cur, next, st, im);
    cur = next;
  }
  if (!(cur == dst)) {
    fail("trace does not end at the stated presentation");
    return rep;
  }

  const AbelianGroup& sz = src.center();
  const AbelianGroup& dz = dst.center();
  auto phi_z = [&](const ExponentVector& v) {
    return map_central(sz, im.fz, v);
  };
  auto phi_f = [&](const LoopElement& p) {
    return eval_elem(src, im.fx, im.fy, im.fu, im.fz, p);
  };
  auto phi_b = [&](const LoopElement& p) {
    return eval_elem(dst, im.bx, im.by, im.bu, im.bz, p);
  };

  // Center factor images must keep their orders.
  for (std::size_t i = 0; i < dz.rank(); ++i)
    if (!(sz.element_order(im.fz[i]) == dz.factor(i)))
      fail("center factor " + std::to_string(i) + " changes order");

  // Defining relations under the forward map.
  if (!(src.commutator(im.fx, im.fy) == phi_z(dst.group().s_vector())))
    fail("commutator [x, y] is not preserved");
  if (!(src.square(im.fx) == phi_z(dst.group().x_sq())))
    fail("x^2 is not preserved");
  if (!(src.square(im.fy) == phi_z(dst.group().y_sq())))
    fail("y^2 is not preserved");
  if (!(src.square(im.fu) == phi_z(dst.g0())))
    fail("u^2 is not preserved");

  // The images must span L/Z: their coset bits form an invertible 3x3
  // matrix over F2.
  auto bits = [](const LoopElement& p) {
    return (p.g.x_bit ? 1 : 0) | (p.g.y_bit ? 2 : 0) | (p.u_bit ? 4 : 0);
  };
  {
    const int r0 = bits(im.fx), r1 = bits(im.fy), r2 = bits(im.fu);
    bool seen[8] = {};
    for (int mask = 0; mask < 8; ++mask) {
      int v = 0;
      if (mask & 1) v ^= r0;
      if (mask & 2) v ^= r1;
      if (mask & 4) v ^= r2;
      seen[v] = true;
    }
    bool all = true;
    for (bool b : seen) all = all && b;
    if (!all) fail("generator images do not span L/Z");
  }

  // Both inverse compositions must be the identity on generators.
  if (!(phi_f(im.bx) == src.x())) fail("x is not recovered by the inverse");
  if (!(phi_f(im.by) == src.y())) fail("y is not recovered by the inverse");
  if (!(phi_f(im.bu) == src.u())) fail("u is not recovered by the inverse");
  for (std::size_t i = 0; i < sz.rank(); ++i)
    if (!(phi_z(im.bz[i]) == sz.basis_vector(i)))
      fail("center basis " + std::to_string(i) +
           " is not recovered by the inverse");
  if (!(phi_b(im.fx) == dst.x())) fail("x image composition mismatch");
  if (!(phi_b(im.fy) == dst.y())) fail("y image composition mismatch");
  if (!(phi_b(im.fu) == dst.u())) fail("u image composition mismatch");
  for (std::size_t i = 0; i < dz.rank(); ++i)
    if (!(map_central(dz, im.bz, im.fz[i]) == dz.basis_vector(i)))
      fail("center basis " + std::to_string(i) + " image composition mismatch");

  if (!rep.ok) return rep;

  // Homomorphism condition: exhaustive over pairs for small finite loops,
  // windowed sampling otherwise.
  const int samples = std::max(opts.samples, 1000);
  bool exhaustive = false;
  if (dst.loop_order().is_finite()) {
    const Int n = dst.loop_order().value();
    if (n * n <= samples) exhaustive = true;
  }
  if (exhaustive) {
    const auto elems = dst.enumerate();
    for (const LoopElement& p : elems) {
      for (const LoopElement& q : elems) {
        if (!(phi_f(dst.mul(p, q)) == src.mul(phi_f(p), phi_f(q)))) {
          fail("homomorphism fails at (" + dst.element_str(p) + ", " +
               dst.element_str(q) + ")");
          return rep;
        }
      }
    }
  } else {
    std::mt19937_64 rng(opts.seed);
    for (int it = 0; it < samples; ++it) {
      LoopElement p = random_element(dst, rng, opts.sample_bound);
      LoopElement q = random_element(dst, rng, opts.sample_bound);
      if (!(phi_f(dst.mul(p, q)) == src.mul(phi_f(p), phi_f(q)))) {
        fail("homomorphism fails at (" + dst.element_str(p) + ", " +
             dst.element_str(q) + ")");
        return rep;
      }
    }
    // Light check of the backward direction as well.
    for (int it = 0; it < samples / 10 + 10; ++it) {
      LoopElement p = random_element(src, rng, opts.sample_bound);
      LoopElement q = random_element(src, rng, opts.sample_bound);
      if (!(phi_b(src.mul(p, q)) == dst.mul(phi_b(p), phi_b(q)))) {
        fail("inverse homomorphism fails at (" + src.element_str(p) + ", " +
             src.element_str(q) + ")");
        return rep;
      }
    }
  }

  // Decomposition witness: the split factor must be untouched by the squares.
  if (trace.outcome.decomposable) {
    const int j = trace.outcome.factor_index;
    if (j < 0 || j >= static_cast<int>(dz.rank())) {
      fail("split factor index out of range");
    } else {
      const std::size_t ju = static_cast<std::size_t>(j);
      if (ju == dst.group().t1_index())
        fail("split factor cannot be t1");
      else if (dst.group().x_sq()[ju] != 0 || dst.group().y_sq()[ju] != 0 ||
               dst.g0()[ju] != 0)
        fail("split factor still occurs in a square");
    }
  }

  // Finite instances: certify with the independent table-level search.
  if (rep.ok && src.loop_order().is_finite()) {
    const CayleyTable a = materialize(src);
    const CayleyTable b = materialize(dst);
    if (!iso_search(a, b))
      fail("table-level isomorphism search found no map");
  }
  return rep;
}

Fingerprint fingerprint(const RaLoop& loop) {
  Fingerprint fp;
  const AbelianGroup& z = loop.center();
  fp.loop_order = loop.loop_order();
  fp.center_torsion = z.torsion_orders();
  fp.center_free_rank = static_cast<int>(z.free_rank());
  // L' = {1, s} by construction: every commutator and associator of the
  // presentation is 1 or s, and s != 1 always.
  fp.derived_size = 2;
  fp.noncentral_involutions = solve_involutions(loop).count;

  if (loop.loop_order().is_finite()) {
    for (const LoopElement& p : loop.enumerate())
      ++fp.order_histogram[loop.element_order(p)];
  }

  // Minimal order of w^2 over each of the seven non-central cosets of Z.
  // (az)^2 = a^2 z^2, so per factor the reachable exponents are
  // beta_i + 2*(Z/n_i); the minimum of the lcm splits into per-factor
  // minima because every minimum here is a power of two.
  static const int reps[7][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0},
                                 {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  for (const auto& r : reps) {
    LoopElement p = loop.identity();
    p.g.x_bit = r[0] == 1;
    p.g.y_bit = r[1] == 1;
    p.u_bit = r[2] == 1;
    const ExponentVector beta = loop.square(p);
    bool infinite = false;
    Int combined = 1;
    for (std::size_t i = 0; i < z.rank() && !infinite; ++i) {
      const bool odd = (((beta[i] % 2) + 2) % 2) == 1;
      if (!z.factor(i).is_finite()) {
        if (odd) infinite = true;
        continue;
      }
      const Int n = z.factor(i).value();
      Int mn;
      if (is_pow2(n)) {
        mn = odd ? n : Int(1);
      } else if (n % 2 == 1) {
        mn = 1;  // 2 is invertible: exponent 0 reachable
      } else if (n <= 4096) {
        mn = n;
        for (Int c = beta[i] % 2; c < n; c += 2) {
          Int g = gcd(c == 0 ? n : c, n);
          mn = std::min(mn, Int(n / g));
        }
      } else {
        throw std::domain_error(
            "fingerprint: coset square order unsupported for large "
            "non-2-power factors");
      }
      if (!is_pow2(mn))
        throw std::domain_error(
            "fingerprint: per-factor minima must be powers of two");
      combined = std::max(combined, mn);  // lcm of powers of two
    }
    fp.coset_square_orders.push_back(infinite ? Order::infinity()
                                              : Order::finite(combined));
  }
  std::sort(fp.coset_square_orders.begin(), fp.coset_square_orders.end());
  return fp;
}

ClassifyResult classify_finite(const CayleyTable& t, std::int64_t modulus,
                               int decomposability_budget) {
  ClassifyResult res;
  const ValidationReport v = validate_loop(t);
  if (!v.ok)
    throw std::invalid_argument("classify_finite: not a loop table: " +
                                v.defect);
  check_modulus(modulus);

  const RingCheckReport ring = is_ra_finite(t, modulus);
  if (!ring.ra) {
    res.status = ClassifyStatus::NotRa;
    res.detail = ring.alternative ? "loop ring is associative"
                                  : "loop ring is not alternative";
    return res;
  }

  if (t.size() <= decomposability_budget) {
    const DecompResult d = decomposability_check(t, decomposability_budget);
    if (d.status == DecompStatus::Decomposition) {
      res.status = ClassifyStatus::NotIndecomposable;
      res.factor_a = d.factor_a;
      res.factor_b = d.factor_b;
      res.detail = "direct product of proper subloops";
      return res;
    }
  }

  const Fingerprint fp = table_invariants(t);

  // Candidate types from the center structure: the torsion rank picks the
  // layout family, the factor orders give the parameter multiset.
  std::vector<std::int64_t> exps;
  for (const Int& n : fp.center_torsion) {
    if (!is_pow2(n)) {
      res.status = ClassifyStatus::NoMatch;
      res.detail = "center torsion is not 2-primary";
      return res;
    }
    exps.push_back(log2_exact(n));
  }
  std::sort(exps.begin(), exps.end());

  std::vector<std::pair<int, RowParams>> cands;
  auto add = [&](int type_id, RowParams p) {
    if ((type_id == 2 || type_id == 4 || type_id == 6) && p.m1 != 1) return;
    cands.emplace_back(type_id, p);
  };
  std::set<std::vector<std::int64_t>> seen;
  do {
    if (!seen.insert(exps).second) continue;
    RowParams p;
    switch (exps.size()) {
      case 1:
        p.m1 = exps[0];
        add(1, p);
        add(2, p);
        break;
      case 2:
        p.m1 = exps[0];
        p.m2 = exps[1];
        add(3, p);
        add(4, p);
        break;
      case 3:
        p.m1 = exps[0];
        p.m2 = exps[1];
        p.m3 = exps[2];
        add(7, p);
        add(8, p);
        break;
      case 4:
        p.m1 = exps[0];
        p.m2 = exps[1];
        p.m3 = exps[2];
        p.k = exps[3];
        add(9, p);
        break;
      default:
        break;
    }
  } while (std::next_permutation(exps.begin(), exps.end()));

  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first, a.second.m1, a.second.m2, a.second.m3,
                    a.second.k) < std::tie(b.first, b.second.m1, b.second.m2,
                                           b.second.m3, b.second.k);
  });

  for (const auto& [type_id, p] : cands) {
    const RaLoop built = build_canonical(type_id, p);
    if (!built.loop_order().is_finite() ||
        built.loop_order().value() != t.size())
      continue;
    const CayleyTable mat = materialize(built);
    if (!(table_invariants(mat) == fp)) continue;
    if (auto iso = iso_search(t, mat)) {
      res.status = ClassifyStatus::Classified;
      res.type_id = type_id;
      res.params = p;
      res.iso = *iso;
      return res;
    }
  }
  res.status = ClassifyStatus::NoMatch;
  res.detail = "no finite canonical type matches";
  return res;
}

std::string params_str(int type_id, const RowParams& p) {
  std::ostringstream os;
  os << "m1=" << p.m1;
  switch (type_id) {
    case 3: case 4: case 10: case 11: case 13:
      os << " m2=" << p.m2;
      break;
    case 7: case 8:
      os << " m2=" << p.m2 << " m3=" << p.m3;
      break;
    case 9:
      os << " m2=" << p.m2 << " m3=" << p.m3 << " k=" << p.k;
      break;
    case 12:
      os << " m2=" << p.m2 << " k=" << p.k;
      break;
    default:
      break;
  }
  return os.str();
}

}  // namespace raloops

#include "raloops/classification.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <stdexcept>

using namespace raloops;

namespace {

ExponentVector ev(std::vector<Int> e) { return ExponentVector(std::move(e)); }

NormalizationStep simple(StepKind kind) {
  NormalizationStep st;
  st.kind = kind;
  return st;
}

NormalizationStep merge(StepKind kind, int factor) {
  NormalizationStep st;
  st.kind = kind;
  st.factor = factor;
  return st;
}

}  // namespace

TEST_CASE("row specs enforce their constraints") {
  CHECK_THROWS_AS(RowSpec(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(RowSpec(55, {}), std::invalid_argument);
  CHECK_THROWS_AS(RowSpec(1, RowParams{0, 1, 1, 1}), std::invalid_argument);
  // Starred rows collapse into other rows unless m1 = 1.
  CHECK_THROWS_AS(RowSpec(8, RowParams{2, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(RowSpec(22, RowParams{3, 1, 1, 1}), std::invalid_argument);
  // Row 34 is the exception: its m1 > k branch is a real case.
  CHECK_NOTHROW(RowSpec(34, RowParams{2, 1, 1, 1}));

  const RowSpec r28(28, {});
  CHECK(r28.group_type() == 5);
  CHECK(r28.extension() == Extension::Torsion);
  CHECK(r28.g0_pattern() == G0Pattern::T1T);
  CHECK_FALSE(r28.starred());
  const RowSpec r8(8, {});
  CHECK(r8.extension() == Extension::None);
  CHECK(r8.g0_pattern() == G0Pattern::T1);
  CHECK(r8.starred());
  const RowSpec r53(53, {});
  CHECK(r53.group_type() == 9);
  CHECK(r53.extension() == Extension::Free);
  CHECK(r53.g0_pattern() == G0Pattern::W);
}

TEST_CASE("row construction") {
  const RaLoop r1 = build_row(RowSpec(1, {}));
  CHECK(r1.loop_order() == Order::finite(16));
  CHECK(r1.center().is_identity(r1.g0()));

  // Row 8 with g0 = t1 over the quaternion shape is the octonion loop.
  const RaLoop r8 = build_row(RowSpec(8, {}));
  CHECK(iso_search(materialize(r8), oracles::octonion_table()).has_value());

  // Row 28: group shape 5 extended by <t>, g0 = t1*t.
  const RaLoop r28 = build_row(RowSpec(28, {}));
  REQUIRE(r28.center().rank() == 3);
  CHECK(r28.center().factor(0) == Order::finite(2));
  CHECK(r28.center().factor(1) == Order::infinity());
  CHECK(r28.center().factor(2) == Order::finite(2));
  CHECK(r28.g0() == ev({1, 0, 1}));
  CHECK(r28.group().factor_names().back() == "t");

  const RaLoop r53 = build_row(RowSpec(53, {}));
  CHECK_FALSE(r53.loop_order().is_finite());
  CHECK(r53.group().factor_names().back() == "w");
  // Parameters scale the torsion orders.
  const RaLoop big = build_row(RowSpec(1, RowParams{3, 1, 1, 1}));
  CHECK(big.loop_order() == Order::finite(64));
}

TEST_CASE("canonical targets") {
  CHECK_THROWS_AS(build_canonical(0), std::invalid_argument);
  CHECK_THROWS_AS(build_canonical(17), std::invalid_argument);
  for (int t : {2, 4, 6}) {
    CHECK_THROWS_AS(build_canonical(t, RowParams{2, 1, 1, 1}),
                    std::invalid_argument);
  }
  const std::map<int, Int> finite_orders = {{1, 16}, {2, 16}, {3, 32}, {4, 32},
                                            {7, 64}, {8, 64}, {9, 128}};
  for (const auto& [type, n] : finite_orders) {
    const RaLoop L = build_canonical(type);
    CHECK(L.loop_order() == Order::finite(n));
    CHECK(L.group().factor_names().front() == "t1");
  }
  for (int type : {5, 6, 10, 11, 12, 13, 14, 15, 16}) {
    CHECK_FALSE(build_canonical(type).loop_order().is_finite());
  }
  // Bumped parameters reach the advertised centers.
  const RaLoop t9 = build_canonical(9, RowParams{1, 2, 1, 3});
  CHECK(t9.center().order() == Order::finite(2 * 4 * 2 * 8));
}

TEST_CASE("rewriting steps mean what they say") {
  const RaLoop L = build_canonical(4, RowParams{1, 2, 1, 1});
  // u' = y*u: the new g0 must be the old square of y*u.
  {
    const RaLoop next = apply_step(L, simple(StepKind::UTimesY));
    CHECK(next.g0() == L.square(L.mul(L.y(), L.u())));
    CHECK(next.g0() == ev({0, 1}));
  }
  // x' = x*u: the new x^2 must be the old square of x*u.
  {
    const RaLoop next = apply_step(L, simple(StepKind::XTimesU));
    CHECK(next.group().x_sq() == L.square(L.mul(L.x(), L.u())));
  }
  // x' = x*y.
  {
    const RaLoop next = apply_step(L, simple(StepKind::XTimesY));
    CHECK(next.group().x_sq() == L.square(L.mul(L.x(), L.y())));
    CHECK(next.group().y_sq() == L.group().y_sq());
  }
  // u' = a*u.
  {
    NormalizationStep st;
    st.kind = StepKind::UTimesCentral;
    st.alpha = ev({0, 3});
    const RaLoop next = apply_step(L, st);
    CHECK(next.g0() == L.square(L.mul(L.central(ev({0, 3})), L.u())));
  }
  // Swaps are involutions; factor permutations invert.
  for (StepKind k : {StepKind::SwapXY, StepKind::SwapXU, StepKind::SwapYU}) {
    CHECK(apply_step(apply_step(L, simple(k)), simple(k)) == L);
  }
  {
    NormalizationStep fwd;
    fwd.kind = StepKind::PermuteFactors;
    fwd.perm = {1, 0};
    NormalizationStep bwd = fwd;
    CHECK(apply_step(apply_step(L, fwd), bwd) == L);
    CHECK(apply_step(L, fwd).center().factor(0) == Order::finite(4));
  }
}

TEST_CASE("invalid steps are rejected") {
  const RaLoop L3 = RaLoop::make(build_group_type(3), ev({0, 0}));
  // order(t2) = 2 is not a multiple of order(t1) = 4 here.
  const RaLoop L3big = RaLoop::make(build_group_type(3, DTypeParams{2, 1, 1}),
                                    ev({0, 0}));
  CHECK_THROWS_AS(apply_step(L3big, merge(StepKind::MergeT1IntoFactor, 1)),
                  std::invalid_argument);
  // order(t2) = 2 does not divide order(t1)/2 = 1.
  CHECK_THROWS_AS(apply_step(L3, merge(StepKind::MergeFactorIntoT1, 1)),
                  std::invalid_argument);
  CHECK_NOTHROW(apply_step(L3big, merge(StepKind::MergeFactorIntoT1, 1)));
  CHECK_THROWS_AS(apply_step(L3, merge(StepKind::MergeT1IntoFactor, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_step(L3, merge(StepKind::MergeT1IntoFactor, 5)),
                  std::invalid_argument);
  {
    NormalizationStep st;
    st.kind = StepKind::PermuteFactors;
    st.perm = {0, 0};
    CHECK_THROWS_AS(apply_step(L3, st), std::invalid_argument);
    st.perm = {0};
    CHECK_THROWS_AS(apply_step(L3, st), std::invalid_argument);
  }
  {
    NormalizationStep st;
    st.kind = StepKind::UTimesCentral;
    st.alpha = ev({1});
    CHECK_THROWS_AS(apply_step(L3, st), std::invalid_argument);
  }
}

TEST_CASE("g0 reduction") {
  // Even exponents vanish by a central rescale of u.
  {
    const RaLoop L = RaLoop::make(build_group_type(1, DTypeParams{2, 1, 1}),
                                  ev({2}));
    const auto r = reduce_g0(L);
    REQUIRE(r.loop.has_value());
    CHECK(r.loop->center().is_identity(r.loop->g0()));
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].kind == StepKind::UTimesCentral);
  }
  // A shared odd factor moves out through u' = x*u when m1 > 1.
  {
    const auto g = GroupPresentation::make(
        AbelianGroup({Order::finite(4)}), 0, 2, ev({1}), ev({1}), {"t1"});
    const auto r = reduce_g0(RaLoop::make(g, ev({1})));
    REQUIRE(r.loop.has_value());
    CHECK(r.loop->center().is_identity(r.loop->g0()));
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].kind == StepKind::UTimesX);
  }
  // The octonion loop's t1 component is exceptional (m1 = 1) and stays.
  {
    const auto r = reduce_g0(RaLoop::make(build_group_type(2), ev({1})));
    REQUIRE(r.loop.has_value());
    CHECK(r.loop->g0() == ev({1}));
    CHECK(r.steps.empty());
  }
  // Higher even powers reduce too.
  {
    const RaLoop L = RaLoop::make(build_group_type(1, DTypeParams{3, 1, 1}),
                                  ev({6}));
    const auto r = reduce_g0(L);
    CHECK(r.loop->center().is_identity(r.loop->g0()));
    REQUIRE(r.steps.size() == 1);
  }
}

TEST_CASE("normalization of sample rows") {
  // Row 1 is already canonical.
  {
    const auto tr = normalize(RowSpec(1, {}));
    CHECK(tr.steps.empty());
    CHECK_FALSE(tr.outcome.decomposable);
    CHECK(tr.outcome.type_id == 1);
    CHECK(tr.outcome.params.m1 == 1);
    REQUIRE(tr.final_loop.has_value());
    CHECK(*tr.final_loop == build_canonical(1));
    CHECK(verify_iso_map(build_row(RowSpec(1, {})), *tr.final_loop, tr).ok);
  }
  // Row 6: g0 = t1*w folds t1 into w, then y and u swap.
  {
    const auto tr = normalize(RowSpec(6, {}));
    REQUIRE(tr.steps.size() == 2);
    CHECK(tr.steps[0].kind == StepKind::MergeT1IntoFactor);
    CHECK(tr.steps[0].text == "w' = t1*w");
    CHECK(tr.steps[1].kind == StepKind::SwapYU);
    CHECK(tr.outcome.type_id == 5);
    CHECK(*tr.final_loop == build_canonical(5));
    CHECK(verify_iso_map(build_row(RowSpec(6, {})), *tr.final_loop, tr).ok);
  }
  // Row 31: x^2 = t1 with trivial g0 rotates x through u.
  {
    const auto tr = normalize(RowSpec(31, {}));
    REQUIRE(tr.steps.size() == 1);
    CHECK(tr.steps[0].text == "x' = x*u");
    CHECK(tr.outcome.type_id == 5);
    CHECK(*tr.final_loop == build_canonical(5));
    CHECK(verify_iso_map(build_row(RowSpec(31, {})), *tr.final_loop, tr).ok);
  }
  // Row 28, m1 <= k branch: lands in type 10.
  {
    const auto tr = normalize(RowSpec(28, {}));
    CHECK_FALSE(tr.outcome.decomposable);
    CHECK(tr.outcome.type_id == 10);
    CHECK(tr.outcome.params.m1 == 1);
    CHECK(tr.outcome.params.m2 == 1);
    CHECK(*tr.final_loop == build_canonical(10));
    CHECK(verify_iso_map(build_row(RowSpec(28, {})), *tr.final_loop, tr).ok);
  }
  // Row 28, m1 > k branch: the extension factor splits off.
  {
    const auto tr = normalize(RowSpec(28, RowParams{2, 1, 1, 1}));
    CHECK(tr.outcome.decomposable);
    CHECK(tr.outcome.factor_name == "t");
    CHECK(verify_iso_map(build_row(RowSpec(28, RowParams{2, 1, 1, 1})),
                         *tr.final_loop, tr)
              .ok);
  }
  // Row 34, both branches.
  {
    const auto tr = normalize(RowSpec(34, {}));
    CHECK(tr.outcome.type_id == 11);
    CHECK(*tr.final_loop == build_canonical(11));
    CHECK(verify_iso_map(build_row(RowSpec(34, {})), *tr.final_loop, tr).ok);
  }
  {
    const auto tr = normalize(RowSpec(34, RowParams{2, 1, 1, 1}));
    CHECK_FALSE(tr.outcome.decomposable);
    CHECK(tr.outcome.type_id == 11);
    CHECK(tr.outcome.params.m1 == 2);
    CHECK(tr.outcome.params.m2 == 1);
    CHECK(*tr.final_loop == build_canonical(11, RowParams{2, 1, 1, 1}));
    CHECK(verify_iso_map(build_row(RowSpec(34, RowParams{2, 1, 1, 1})),
                         *tr.final_loop, tr)
              .ok);
  }
  // Row 2 at m1 = 3: the general rewriting reaches the type 2 layout with
  // m1 > 1 intact (the canonical builder would refuse such parameters, but
  // the normal form itself is still reachable and certified).
  {
    const RowSpec row(2, RowParams{3, 1, 1, 1});
    const auto tr = normalize(row);
    CHECK(tr.outcome.type_id == 2);
    CHECK(tr.outcome.params.m1 == 3);
    CHECK(verify_iso_map(build_row(row), *tr.final_loop, tr).ok);
  }
}

TEST_CASE("iso certification rejects forgeries") {
  // An empty trace cannot connect two different types.
  {
    NormalizationTrace tr;
    tr.outcome.type_id = 2;
    tr.final_loop = build_canonical(2);
    const auto rep = verify_iso_map(build_canonical(1), build_canonical(2), tr);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.errors.empty());
  }
  // A tampered step list no longer ends at the claimed presentation.
  {
    auto tr = normalize(RowSpec(6, {}));
    tr.steps.push_back(simple(StepKind::SwapXY));
    const auto rep = verify_iso_map(build_row(RowSpec(6, {})), *tr.final_loop, tr);
    CHECK_FALSE(rep.ok);
  }
  // A forged decomposability claim needs a genuinely unused factor.
  {
    auto tr = normalize(RowSpec(28, RowParams{2, 1, 1, 1}));
    tr.outcome.factor_index = 0;  // t1 can never split off
    const auto rep = verify_iso_map(build_row(RowSpec(28, RowParams{2, 1, 1, 1})),
                                    *tr.final_loop, tr);
    CHECK_FALSE(rep.ok);
  }
}

TEST_CASE("symbolic fingerprints") {
  const Fingerprint f1 = fingerprint(build_canonical(1));
  CHECK(f1.loop_order == Order::finite(16));
  CHECK(f1.center_torsion == std::vector<Int>{2});
  CHECK(f1.derived_size == 2);
  CHECK(f1.noncentral_involutions == 8);
  CHECK(f1.order_histogram.at(Order::finite(2)) == 9);
  CHECK(f1.order_histogram.at(Order::finite(4)) == 6);
  {
    std::vector<Order> want{Order::finite(1), Order::finite(1), Order::finite(1),
                            Order::finite(1), Order::finite(2), Order::finite(2),
                            Order::finite(2)};
    CHECK(f1.coset_square_orders == want);
  }
  // Symbolic and table-level invariants coincide on a finite instance.
  CHECK(f1 == table_invariants(materialize(build_canonical(1))));

  const Fingerprint f5 = fingerprint(build_canonical(5));
  CHECK(f5.loop_order == Order::infinity());
  CHECK(f5.center_free_rank == 1);
  CHECK(f5.noncentral_involutions == 4);
  CHECK(f5.order_histogram.empty());
  {
    // x and y square to 1, xy squares to s; every coset on the u side picks
    // up an odd power of the free generator and so has infinite square.
    std::vector<Order> want{Order::finite(1), Order::finite(1),
                            Order::finite(2), Order::infinity(),
                            Order::infinity(), Order::infinity(),
                            Order::infinity()};
    CHECK(f5.coset_square_orders == want);
  }
}

TEST_CASE("classification of tables") {
  // The octonion table, however labelled, is type 2.
  {
    const auto r = classify_finite(oracles::octonion_table());
    CHECK(r.status == ClassifyStatus::Classified);
    CHECK(r.type_id == 2);
    CHECK(r.params.m1 == 1);
    CHECK_FALSE(r.iso.empty());
  }
  // Groups are never RA: their loop rings associate.
  {
    const auto r = classify_finite(oracles::q8_table());
    CHECK(r.status == ClassifyStatus::NotRa);
    CHECK(r.detail.find("associative") != std::string::npos);
    CHECK(classify_finite(oracles::d4_table()).status == ClassifyStatus::NotRa);
  }
  // A direct factor is detected before type matching.
  {
    const CayleyTable prod = oracles::product_table(
        oracles::octonion_table(), oracles::cyclic_table(2));
    const auto r = classify_finite(prod);
    CHECK(r.status == ClassifyStatus::NotIndecomposable);
    CHECK(r.factor_a.size() * r.factor_b.size() == 32);
  }
  // Parameters are read back from the center: M(G1(2), *, 1) is type 1, m1=2.
  {
    const RaLoop L = RaLoop::make(build_group_type(1, DTypeParams{2, 1, 1}),
                                  ev({0}));
    const auto r = classify_finite(materialize(L));
    CHECK(r.status == ClassifyStatus::Classified);
    CHECK(r.type_id == 1);
    CHECK(r.params.m1 == 2);
  }
  // The modulus is a free choice of odd ring.
  {
    const auto r = classify_finite(oracles::octonion_table(), 7);
    CHECK(r.status == ClassifyStatus::Classified);
    CHECK(r.type_id == 2);
  }
  // Garbage tables are a constraint violation, not a verdict.
  {
    CayleyTable bad = oracles::cyclic_table(4);
    bad.set(1, 1, bad.at(1, 2));
    CHECK_THROWS_AS(classify_finite(bad), std::invalid_argument);
  }
}

TEST_CASE("parameter rendering") {
  CHECK(params_str(1, RowParams{2, 1, 1, 1}) == "m1=2");
  CHECK(params_str(5, RowParams{1, 7, 7, 7}) == "m1=1");
  CHECK(params_str(3, RowParams{1, 2, 1, 1}) == "m1=1 m2=2");
  CHECK(params_str(7, RowParams{1, 2, 3, 1}) == "m1=1 m2=2 m3=3");
  CHECK(params_str(9, RowParams{1, 1, 1, 2}) == "m1=1 m2=1 m3=1 k=2");
  CHECK(params_str(12, RowParams{2, 1, 1, 3}) == "m1=2 m2=1 k=3");
}

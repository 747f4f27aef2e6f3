#pragma once

#include "raloops/cayley_oracle.hpp"
#include "raloops/loop_ring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace raloops {

// Parameters of a row or canonical-type instance: torsion center factors
// have orders 2^m1, 2^m2, 2^m3 and a torsion extension has order 2^k.
// Entries a shape does not use are ignored.
struct RowParams {
  std::int64_t m1 = 1;
  std::int64_t m2 = 1;
  std::int64_t m3 = 1;
  std::int64_t k = 1;

  bool operator==(const RowParams& other) const = default;
};

enum class Extension { None, Torsion, Free };
enum class G0Pattern { One, T1, T, T1T, W, T1W };

// One of the 54 construction rows: a group shape (1..9), an extension of its
// center (none, a finite <t>, or an infinite <w>), and a doubling square g0
// drawn from {1, t1, t, t1*t, w, t1*w}.  Rows are numbered in blocks of six
// per group shape, in that g0 order.
class RowSpec {
public:
  RowSpec(int row_id, RowParams params);

  int row_id() const { return row_id_; }
  const RowParams& params() const { return params_; }
  int group_type() const { return (row_id_ - 1) / 6 + 1; }
  Extension extension() const;
  G0Pattern g0_pattern() const;
  // Rows that are distinct cases only in the exceptional situation m1 = 1.
  bool starred() const;

private:
  int row_id_;
  RowParams params_;
};

// Builds the loop of a row.  Throws std::invalid_argument on constraint
// violations (row id out of range, parameters < 1, starred row with m1 > 1 —
// except row 34, whose o(t) < o(t1) branch is part of the classification and
// requires m1 > k).
RaLoop build_row(const RowSpec& row);

// Builds one of the 16 canonical target types.  Types 2, 4 and 6 fix m1 = 1.
RaLoop build_canonical(int type_id, const RowParams& params = {});

// Presentation-rewriting step vocabulary used by g0 reduction and
// normalization.  Every step is an invertible change of generators or of the
// center basis.
enum class StepKind {
  UTimesCentral,      // u -> a*u, a central:     g0 += 2a
  UTimesX,            // u -> x*u:                g0 += x^2 + s
  UTimesY,            // u -> y*u:                g0 += y^2 + s
  XTimesU,            // x -> x*u:                x^2 += g0 + s
  YTimesU,            // y -> y*u:                y^2 += g0 + s
  XTimesY,            // x -> x*y:                x^2 += y^2 + s
  YTimesXLeft,        // y -> x*y:                y^2 += x^2 + s
  XTimesCentral,      // x -> a*x:                x^2 += 2a
  YTimesCentral,      // y -> a*y:                y^2 += 2a
  SwapXY,             // exchange the roles of x and y
  SwapXU,             // exchange the roles of x and u
  SwapYU,             // exchange the roles of y and u
  MergeT1IntoFactor,  // basis z_j -> t1*z_j  (j infinite, or m1 <= mj)
  MergeFactorIntoT1,  // basis t1 -> t1*z_j   (mj < m1)
  PermuteFactors,     // reorder the center factors
};

struct NormalizationStep {
  StepKind kind;
  ExponentVector alpha;   // central multiplier for *TimesCentral steps
  int factor = -1;        // j for the merge steps
  std::vector<int> perm;  // for PermuteFactors: new slot i <- old slot perm[i]
  std::string text;       // human-readable rendition ("w' = t1*w", ...)
};

// Applies one step to a presentation, returning the rewritten loop.  Throws
// std::invalid_argument if the step's validity condition fails.
RaLoop apply_step(const RaLoop& loop, const NormalizationStep& step);

struct NormalizationOutcome {
  bool decomposable = false;
  // Canonical target when not decomposable.
  int type_id = 0;
  RowParams params;
  // Split central factor when decomposable (index into the final
  // presentation's center and its display name).
  int factor_index = -1;
  std::string factor_name;
};

struct NormalizationTrace {
  std::vector<NormalizationStep> steps;
  NormalizationOutcome outcome;
  std::optional<RaLoop> final_loop;  // presentation after all steps
};

// Rewrites u by central multiples and by x/y so that g0 has exponents in
// {0, 1} and shares no factor with x^2 or y^2, except that a t1 component
// with m1 = 1 may be unremovable (the exceptional case).  Returns the
// rewritten loop and the steps taken.
struct ReduceG0Result {
  std::optional<RaLoop> loop;
  std::vector<NormalizationStep> steps;
};
ReduceG0Result reduce_g0(const RaLoop& loop);

// Replays the classification argument for a row instance: a deterministic
// sequence of rewriting steps ending in a canonical type (with recovered
// parameters) or in a decomposition witness (a split central factor).
NormalizationTrace normalize(const RowSpec& row);

struct IsoMapReport {
  bool ok = true;
  std::vector<std::string> errors;
};

// Certifies the generator map induced by a trace as an isomorphism from dst
// (the trace's final presentation) onto src (its starting loop): replays the
// steps, checks the defining relations, both inverse compositions on
// generators, coset spanning, and the homomorphism condition on sampled
// element pairs (exact arithmetic throughout; windowed sampling covers
// infinite centers).
IsoMapReport verify_iso_map(const RaLoop& src, const RaLoop& dst,
                            const NormalizationTrace& trace,
                            const VerifyOptions& opts = {});

// Isomorphism invariants computed symbolically from a presentation; the
// exact counterpart of table_invariants.  Exact for infinite centers.
Fingerprint fingerprint(const RaLoop& loop);

enum class ClassifyStatus { Classified, NotRa, NotIndecomposable, NoMatch };

struct ClassifyResult {
  ClassifyStatus status = ClassifyStatus::NoMatch;
  int type_id = 0;
  RowParams params;
  std::vector<int> iso;  // witness isomorphism for Classified
  std::vector<int> factor_a, factor_b;  // witnesses for NotIndecomposable
  std::string detail;
};

// Decides which finite canonical type a table belongs to:
// ring check over Z/modulus -> decomposability (within budget) -> center
// structure readback for candidate parameters -> certification by
// iso_search against build_canonical.
ClassifyResult classify_finite(const CayleyTable& t, std::int64_t modulus = 3,
                               int decomposability_budget = 64);

// "m1=1,m2=2" style rendition of the parameters a type uses.
std::string params_str(int type_id, const RowParams& params);

}  // namespace raloops

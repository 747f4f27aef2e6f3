#pragma once

#include "raloops/cayley_oracle.hpp"
#include "raloops/classification.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace raloops {

// File formats.  Structural problems (bad header, wrong counts, stray
// tokens) throw std::runtime_error; semantic constraint violations coming
// from the factories (bad t1 order, non-canonical vectors) propagate as
// std::invalid_argument.  Reading back a written file reproduces the value
// bit-exactly.

// Cayley table document:
//   cayley 1
//   <n>
//   n rows of n indices (row i lists i*0, i*1, ...)
//   # label <i> <name>      (optional, one per element)
// The Latin-square property is deliberately not enforced here; validate_loop
// owns that verdict.
CayleyTable read_cayley(std::istream& in);
CayleyTable read_cayley_file(const std::string& path);
void write_cayley(std::ostream& out, const CayleyTable& t);
void write_cayley_file(const std::string& path, const CayleyTable& t);

// Presentation document:
//   raloop 1
//   factors <n1> <n2> ...    (cyclic factor orders; 0 marks an infinite one)
//   names <name1> ...
//   t1 <index>
//   m1 <m1>
//   xsq <e1> <e2> ...
//   ysq <e1> <e2> ...
//   g0 <e1> <e2> ...
RaLoop read_raloop(std::istream& in);
RaLoop read_raloop_file(const std::string& path);
void write_raloop(std::ostream& out, const RaLoop& loop);
void write_raloop_file(const std::string& path, const RaLoop& loop);

// Either document, dispatched on the header line.
struct Document {
  std::optional<CayleyTable> table;
  std::optional<RaLoop> loop;
};
Document read_document_file(const std::string& path);

// Inline instance spec, e.g. "row 28 m1=2 k=1" or "type 2 m1=1".
struct BuildSpec {
  bool is_row = false;  // row L1..L54 when true, canonical type 1..16 otherwise
  int id = 0;
  RowParams params;
};
BuildSpec parse_build_spec(const std::vector<std::string>& tokens);

}  // namespace raloops

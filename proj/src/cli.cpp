#include "raloops/cli.hpp"

#include "raloops/classification.hpp"
#include "raloops/serialization.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <ostream>
#include <string>
#include <vector>

namespace raloops {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  std::ostream& err;
  explicit Timer(std::ostream& e) : err(e) {}
  ~Timer() {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    err << "time_ms=" << ms << "\n";
  }
};

int run_build(const std::vector<std::string>& spec_tokens,
              const std::string& out_path, bool emit_table, std::ostream& out,
              std::ostream& err) {
  Timer timer(err);
  const BuildSpec spec = parse_build_spec(spec_tokens);
  const RaLoop loop = spec.is_row ? build_row(RowSpec(spec.id, spec.params))
                                  : build_canonical(spec.id, spec.params);
  // --out captures whichever document would have gone to stdout.
  if (emit_table) {
    if (!loop.loop_order().is_finite())
      throw std::invalid_argument("--table requires a finite loop");
    if (loop.loop_order().value() > 4096)
      throw std::invalid_argument("--table limited to order <= 4096");
    const CayleyTable table = materialize(loop);
    if (!out_path.empty())
      write_cayley_file(out_path, table);
    else
      write_cayley(out, table);
  } else if (!out_path.empty()) {
    write_raloop_file(out_path, loop);
  } else {
    write_raloop(out, loop);
  }
  return 0;
}

int verify_table(const CayleyTable& t, std::int64_t modulus,
                 std::ostream& out) {
  bool all = true;
  const ValidationReport val = validate_loop(t);
  if (!val.ok) {
    out << "latin=fail witness=(" << val.cell->first << ","
        << val.cell->second << ") " << val.defect << "\n";
    return 1;  // remaining checks assume a quasigroup
  }
  out << "latin=pass\n";

  const MoufangTableReport mf = check_moufang_table(t);
  if (mf.ok) {
    out << "moufang=pass\n";
  } else {
    all = false;
    const auto& w = *mf.witness;
    out << "moufang=fail witness=(" << w[0] << "," << w[1] << "," << w[2]
        << ") " << mf.law << "\n";
  }

  const std::vector<int> center = center_of_table(t);
  const std::vector<int> derived = derived_subloop(t);
  if (derived.size() == 2) {
    out << "derived=pass\n";
  } else {
    all = false;
    out << "derived=fail witness=size:" << derived.size() << "\n";
  }
  bool quotient_ok =
      static_cast<std::size_t>(t.size()) == 8 * center.size();
  int bad_square = -1;
  std::vector<char> central(static_cast<std::size_t>(t.size()), 0);
  for (int z : center) central[static_cast<std::size_t>(z)] = 1;
  for (int i = 0; i < t.size() && bad_square < 0; ++i)
    if (!central[static_cast<std::size_t>(t.at(i, i))]) bad_square = i;
  quotient_ok = quotient_ok && bad_square < 0;
  if (quotient_ok) {
    out << "center_quotient=pass\n";
  } else {
    all = false;
    out << "center_quotient=fail witness=";
    if (bad_square >= 0)
      out << "noncentral_square:" << bad_square << "\n";
    else
      out << "index:" << t.size() << "/" << center.size() << "\n";
  }

  if (t.size() <= 256) {
    const RingCheckReport ring = is_ra_finite(t, modulus);
    if (ring.alternative) {
      out << "alternative=pass\n";
    } else {
      all = false;
      const auto& w = *ring.alternative_witness;
      out << "alternative=fail witness=(" << w[0] << "," << w[1] << ","
          << w[2] << ")\n";
    }
    if (!ring.associative) {
      out << "nonassociative=pass\n";
    } else {
      all = false;
      out << "nonassociative=fail witness=ring_associative\n";
    }
  }
  return all ? 0 : 1;
}

int verify_presentation_doc(const RaLoop& loop, std::uint64_t seed,
                            std::int64_t sample_bound, std::ostream& out) {
  bool all = true;
  VerifyOptions opts;
  opts.seed = seed;
  opts.sample_bound = sample_bound;

  const PresentationReport pr = verify_presentation(loop.group(), opts);
  if (pr.ok) {
    out << "presentation=pass\n";
  } else {
    all = false;
    out << "presentation=fail witness=" << pr.violations.front() << "\n";
  }
  const MoufangReport mr = moufang_check(loop, opts);
  if (mr.ok) {
    out << "moufang=pass\n";
  } else {
    all = false;
    out << "moufang=fail witness=" << mr.violations.front() << "\n";
  }
  const Order s_order =
      loop.center().element_order(loop.group().s_vector());
  if (s_order == Order::finite(2)) {
    out << "derived=pass\n";
  } else {
    all = false;
    out << "derived=fail witness=order(s)=" << s_order.str() << "\n";
  }
  return all ? 0 : 1;
}

int run_verify(const std::string& path, std::int64_t modulus,
               std::uint64_t seed, std::int64_t sample_bound,
               std::ostream& out, std::ostream& err) {
  Timer timer(err);
  const Document doc = read_document_file(path);
  if (doc.table) return verify_table(*doc.table, modulus, out);
  return verify_presentation_doc(*doc.loop, seed, sample_bound, out);
}

int run_classify(const std::string& path, std::int64_t modulus,
                 std::ostream& out, std::ostream& err) {
  Timer timer(err);
  const CayleyTable t = read_cayley_file(path);
  const ClassifyResult res = classify_finite(t, modulus);
  switch (res.status) {
    case ClassifyStatus::Classified:
      out << "type=" << res.type_id << " "
          << params_str(res.type_id, res.params) << "\n";
      return 0;
    case ClassifyStatus::NotRa:
      out << "NOT_RA\n";
      err << res.detail << "\n";
      return 1;
    case ClassifyStatus::NotIndecomposable:
      out << "NOT_INDECOMPOSABLE\n";
      err << "factors " << res.factor_a.size() << "x" << res.factor_b.size()
          << "\n";
      return 0;
    case ClassifyStatus::NoMatch:
      out << "NO_MATCH\n";
      err << res.detail << "\n";
      return 4;
  }
  return 4;
}

int run_iso(const std::string& path_a, const std::string& path_b,
            std::ostream& out, std::ostream& err) {
  Timer timer(err);
  const CayleyTable a = read_cayley_file(path_a);
  const CayleyTable b = read_cayley_file(path_b);
  const auto iso = iso_search(a, b);
  if (!iso) {
    out << "none\n";
    return 1;
  }
  out << "map=";
  for (std::size_t i = 0; i < iso->size(); ++i)
    out << (i ? " " : "") << i << ":" << (*iso)[i];
  out << "\n";
  return 0;
}

int run_normalize(const std::vector<std::string>& spec_tokens,
                  std::ostream& out, std::ostream& err) {
  Timer timer(err);
  const BuildSpec spec = parse_build_spec(spec_tokens);
  if (!spec.is_row)
    throw std::invalid_argument("normalize expects a row spec");
  const NormalizationTrace tr = normalize(RowSpec(spec.id, spec.params));
  for (const NormalizationStep& st : tr.steps) out << "step=" << st.text << "\n";
  if (tr.outcome.decomposable) {
    out << "decomposable factor=" << tr.outcome.factor_name << "\n";
  } else {
    out << "type=" << tr.outcome.type_id << "\n";
    out << "params=" << params_str(tr.outcome.type_id, tr.outcome.params)
        << "\n";
  }
  return 0;
}

int run_ring_check(const std::string& path, std::int64_t modulus,
                   std::ostream& out, std::ostream& err) {
  Timer timer(err);
  const CayleyTable t = read_cayley_file(path);
  const ValidationReport val = validate_loop(t);
  if (!val.ok)
    throw std::invalid_argument("ring-check: not a loop table: " + val.defect);
  const RingCheckReport r = is_ra_finite(t, modulus);
  out << "alternative=" << (r.alternative ? "true" : "false");
  if (!r.alternative) {
    const auto& w = *r.alternative_witness;
    out << " witness=(" << w[0] << "," << w[1] << "," << w[2] << ")";
  }
  out << "\n";
  out << "associative=" << (r.associative ? "true" : "false");
  if (!r.associative && r.associative_witness) {
    const auto& w = *r.associative_witness;
    out << " witness=(" << w[0] << "," << w[1] << "," << w[2] << ")";
  }
  out << "\n";
  out << "ra=" << (r.ra ? "true" : "false") << "\n";
  return r.ra ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"exact workbench for finitely generated RA loops"};
  app.require_subcommand(1);

  std::uint64_t seed = 12345;
  std::int64_t sample_bound = 3;
  std::int64_t modulus = 3;
  app.add_option("--seed", seed, "seed for sampled checks");
  app.add_option("--sample-bound", sample_bound,
                 "exponent window for infinite factors");
  app.add_option("--modulus", modulus, "odd coefficient modulus (default 3)");

  std::vector<std::string> build_spec;
  std::string build_out;
  bool build_table = false;
  CLI::App* build = app.add_subcommand(
      "build", "build a row or canonical type instance");
  build->fallthrough();
  build->add_option("spec", build_spec, "row <n> [m..] | type <n> [m..]")
      ->required();
  build->add_option("--out", build_out, "presentation output path");
  build->add_flag("--table", build_table, "emit the Cayley table instead");

  std::string verify_path;
  CLI::App* verify = app.add_subcommand(
      "verify", "check loop axioms and structure of a document");
  verify->fallthrough();
  verify->add_option("path", verify_path, "table or presentation file")
      ->required();

  std::string classify_path;
  CLI::App* classify =
      app.add_subcommand("classify", "identify a finite table's type");
  classify->fallthrough();
  classify->add_option("path", classify_path, "table file")->required();

  std::string iso_a, iso_b;
  CLI::App* iso =
      app.add_subcommand("iso", "search for a table isomorphism");
  iso->fallthrough();
  iso->add_option("a", iso_a, "first table")->required();
  iso->add_option("b", iso_b, "second table")->required();

  std::vector<std::string> norm_spec;
  CLI::App* norm = app.add_subcommand(
      "normalize", "replay the classification rewrite of a row");
  norm->fallthrough();
  norm->add_option("spec", norm_spec, "row <n> [m..]")->required();

  std::string ring_path;
  CLI::App* ring = app.add_subcommand(
      "ring-check", "alternative/associative laws of the loop ring");
  ring->fallthrough();
  ring->add_option("path", ring_path, "table file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }

  try {
    if (build->parsed())
      return run_build(build_spec, build_out, build_table, out, err);
    if (verify->parsed())
      return run_verify(verify_path, modulus, seed, sample_bound, out, err);
    if (classify->parsed()) return run_classify(classify_path, modulus, out, err);
    if (iso->parsed()) return run_iso(iso_a, iso_b, out, err);
    if (norm->parsed()) return run_normalize(norm_spec, out, err);
    if (ring->parsed()) return run_ring_check(ring_path, modulus, out, err);
  } catch (const std::invalid_argument& e) {
    err << "constraint: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace raloops

// qsm — exact-arithmetic Sullivan models of based mapping spaces.
//
// Subcommands
//   analyze FILE      invariants of every block declared in FILE
//   map-model FILE    Sullivan model of the based mapping space F(X, Y)
//   split-check FILE  does the attached cell split off a product factor?
//   decompose FILE    stagewise cell decomposition with a product verdict
//   selftest          built-in verification suite
//
// Exit codes: 0 success; 1 strict-mode verdict failure; 2 input error;
// 3 internal-consistency failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsm/bs.hpp"
#include "qsm/cdga.hpp"
#include "qsm/chains.hpp"
#include "qsm/cohomology.hpp"
#include "qsm/errors.hpp"
#include "qsm/freelie.hpp"
#include "qsm/model_file.hpp"
#include "qsm/rational.hpp"
#include "qsm/reduce.hpp"
#include "qsm/report.hpp"
#include "qsm/selftest.hpp"
#include "qsm/split.hpp"
#include "qsm/sullivan.hpp"

namespace {

struct CommonOpts {
  std::string file;
  int cap = 0;  // 0 = file parameter or the default formula
  std::string format = "text";
  std::string q;  // attaching-class scale; empty = file parameter or 1
  std::string out;
  bool strict = false;
};

void add_io_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--cap", o.cap,
                  "truncation degree (default: 2 * top declared degree + 2, "
                  "or the file's cap parameter)")
      ->check(CLI::Range(2, 1000));
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "write the report to this file");
}

void add_model_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("file", o.file, "model description file")->required();
  add_io_flags(cmd, o);
  cmd->add_option("--q", o.q,
                  "rational scale applied to every attaching class");
}

int resolve_cap(const qsm::ModelFile& mf, const CommonOpts& o) {
  int cap = o.cap > 0 ? o.cap : qsm::default_cap(mf);
  qsm::check_input(cap >= 2, "cap must be at least 2");
  return cap;
}

qsm::Q resolve_q(const qsm::ModelFile& mf, const CommonOpts& o) {
  if (!o.q.empty()) return qsm::q_parse(o.q);
  return mf.q ? *mf.q : qsm::Q(1);
}

int source_dimension(const qsm::FreeDGL& X) {
  int dim = 0;
  for (const auto& g : X.gens()) dim = std::max(dim, g.degree + 1);
  return dim;
}

// Emit the report (validated against the shipped schema first).
int emit(const qsm::Json& rep, const CommonOpts& o) {
  std::string why;
  qsm::check_internal(qsm::validate_report(rep, &why),
                      "report failed schema validation: " + why);
  std::string body =
      o.format == "json" ? qsm::report_dump(rep) : qsm::render_text(rep);
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    qsm::check_input(static_cast<bool>(f),
                     "cannot open output file: " + o.out);
    f << body;
  } else {
    std::cout << body;
  }
  return 0;
}

void require_blocks(const qsm::ModelFile& mf, bool need_lie,
                    bool need_sullivan) {
  if (need_lie)
    qsm::check_input(mf.lies.size() == 1,
                     mf.lies.empty()
                         ? "the model file declares no lie block"
                         : "the model file declares more than one lie block; "
                           "this command needs exactly one");
  if (need_sullivan)
    qsm::check_input(
        mf.sullivans.size() == 1,
        mf.sullivans.empty()
            ? "the model file declares no sullivan block"
            : "the model file declares more than one sullivan block; this "
              "command needs exactly one");
}

int leaf_count(const qsm::NamedWord& w) {
  if (w.is_leaf()) return 1;
  return leaf_count(*w.l) + leaf_count(*w.r);
}

// The splitting criterion assumes the attaching class is a sum of bracket
// words of one uniform length; reject mixed inputs with guidance.
void reject_mixed_bracket_length(const qsm::AttachData& at) {
  int len = -1;
  for (const auto& t : at.expr) {
    if (qsm::q_is_zero(t.coeff)) continue;
    int l = leaf_count(t.word);
    if (len == -1) {
      len = l;
    } else if (len != l) {
      qsm::fail_input(
          "attach '" + at.name + "' (" + qsm::pos_str(at.pos) +
          "): the attaching class mixes bracket lengths " +
          std::to_string(len) + " and " + std::to_string(l) +
          "; the splitting criterion needs a representative of uniform "
          "bracket length — rewrite the class or attach the summands as "
          "separate cells");
    }
  }
}

// ---------------------------------------------------------------------------
// analyze

qsm::Json cmd_analyze(const qsm::ModelFile& mf, int cap, const qsm::Q& q,
                      const std::string& file) {
  qsm::Json rep = qsm::report_envelope("analyze");
  rep["inputs"]["file"] = file;
  rep["inputs"]["cap"] = cap;
  rep["inputs"]["q"] = qsm::q_str(q);
  int top = qsm::max_declared_degree(mf);
  if (cap < top + 2)
    rep["warnings"].push_back(
        "cap " + std::to_string(cap) +
        " is below top generator degree + 2 (= " + std::to_string(top + 2) +
        "); truncation-sensitive values may be underestimates");

  rep["results"]["sullivan"] = qsm::Json::array();
  for (const auto& s : mf.sullivans) {
    qsm::MinimalModel M = qsm::build_sullivan(s, cap);
    qsm::Json row;
    row["name"] = s.name;
    row["generators"] = static_cast<int>(M.A.T.gens.size());
    row["connectivity"] = M.connectivity();
    row["top_generator_degree"] = M.top_generator_degree();
    row["d1_depth"] = qsm::d1_depth(M);
    row["whitehead_length"] = qsm::whitehead_length(M);
    if (auto dl = qsm::d_length(M))
      row["d_length"] = *dl;
    else
      row["d_length"] = "infinity";
    qsm::CupLength cl = qsm::cup_length(M.A);
    row["cup_length"] = cl.value;
    row["cup_length_within_cap_only"] = cl.within_cap_only;
    rep["results"]["sullivan"].push_back(row);
  }

  rep["results"]["lie"] = qsm::Json::array();
  int cup0 = -1;  // source cup length of the first lie block
  for (std::size_t li = 0; li < mf.lies.size(); ++li) {
    qsm::FreeDGL X = qsm::build_dgl(mf, li, q, 2);
    int dimX = source_dimension(X);
    // Deepen the Lie-side materialization a little past the dimension (the
    // homotopy of the top cell shows up there), but never past the cap.
    int bound = std::max(X.cap(), std::min(cap, dimX + 2));
    qsm::FreeDGL XA = X.cap() >= bound ? X : qsm::dgl_with_cap(X, bound);
    qsm::Json row;
    row["name"] = mf.lies[li].name;
    row["generators"] = static_cast<int>(X.gens().size());
    row["dimension"] = dimX;
    qsm::DGLHomology H = qsm::dgl_homology(XA, XA.cap() - 1);
    row["homology_ranks"] = qsm::rank_rows(H.dims, 1);
    row["linearization_ok"] = qsm::linearization_check(XA, XA.cap() - 1).ok;
    // Cochain cup length: H^n needs cochains through degree n+1, so the dual
    // algebra is requested two degrees past the dimension.
    qsm::FreeDGL XC =
        XA.cap() >= dimX + 1 ? XA : qsm::dgl_with_cap(XA, dimX + 1);
    int cup = qsm::cup_length(qsm::dual_cochains(XC, dimX + 2)).value;
    row["cup_length"] = cup;
    if (li == 0) cup0 = cup;
    row["cells"] = qsm::Json::array();
    for (std::size_t ai = 0; ai < mf.attaches.size(); ++ai) {
      if (mf.attaches[ai].lie_name != mf.lies[li].name) continue;
      qsm::SplitInput si = qsm::split_input(mf, li, ai, q, 2);
      qsm::FreeDGL base = si.base.cap() >= si.z.degree + 1
                              ? si.base
                              : qsm::dgl_with_cap(si.base, si.z.degree + 1);
      qsm::DGLHomology HB = qsm::dgl_homology(base, si.z.degree);
      qsm::Json cell;
      cell["name"] = si.name;
      cell["cell"] = si.cell;
      qsm::Vec cls = HB.class_coords(base, si.z, si.z.degree);
      bool zero = qsm::is_zero_vec(cls);
      cell["class_zero"] = zero;
      if (zero)
        cell["bracket_length"] = "infinity";
      else
        cell["bracket_length"] = HB.lie.bracket_length(si.z.degree, cls) - 1;
      row["cells"].push_back(cell);
    }
    rep["results"]["lie"].push_back(row);
  }

  // Freeness of H^*(F(X, Y)) predicted from the first block of each kind:
  // free exactly when the target's d-length exceeds the source's cup length.
  if (!mf.lies.empty() && !mf.sullivans.empty()) {
    qsm::MinimalModel Y = qsm::build_sullivan(mf.sullivans[0], cap);
    auto dl = qsm::d_length(Y);
    qsm::Json fr;
    fr["source_cup_length"] = cup0;
    if (dl)
      fr["target_d_length"] = *dl;
    else
      fr["target_d_length"] = "infinity";
    fr["predicted_free"] = qsm::kotani_predicts_free(cup0, dl);
    rep["results"]["freeness"] = fr;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// map-model

qsm::Json cmd_map_model(const qsm::ModelFile& mf, int cap, const qsm::Q& q,
                        bool raw, const std::string& file) {
  require_blocks(mf, true, true);
  qsm::FreeDGL X = qsm::build_dgl(mf, 0, q, 2);
  int dimX = source_dimension(X);
  qsm::MinimalModel Y = qsm::build_sullivan(mf.sullivans[0], cap);
  qsm::check_input(Y.connectivity() >= dimX,
                   "target connectivity " +
                       std::to_string(Y.connectivity()) +
                       " is below the source dimension " +
                       std::to_string(dimX) +
                       "; the mapping-space model needs dim X <= conn Y");
  int min_cell = dimX;
  for (const auto& g : X.gens()) min_cell = std::min(min_cell, g.degree + 1);
  int max_pair = Y.top_generator_degree() - min_cell;
  qsm::check_input(
      cap >= max_pair + 1,
      "cap " + std::to_string(cap) +
          " is insufficient: the mapping model has a generator in degree " +
          std::to_string(max_pair) + "; rerun with --cap >= " +
          std::to_string(max_pair + 1));

  qsm::FreeDGL XT = X.cap() >= dimX ? X : qsm::dgl_with_cap(X, dimX);
  auto C = std::make_shared<qsm::ChainCoalgebra>(XT, dimX + 1);
  qsm::ChainBPlus B =
      qsm::chain_bplus(C, dimX, static_cast<int>(X.gens().size()));
  qsm::BSModel BS = qsm::based_bs_model(Y, B.B, cap);

  qsm::Json rep = qsm::report_envelope("map-model");
  rep["inputs"]["file"] = file;
  rep["inputs"]["cap"] = cap;
  rep["inputs"]["q"] = qsm::q_str(q);
  rep["inputs"]["minimal"] = !raw;
  rep["results"]["source"] = {{"name", mf.lies[0].name},
                              {"dimension", dimX},
                              {"cells", static_cast<int>(X.gens().size())}};
  rep["results"]["target"] = {{"name", mf.sullivans[0].name},
                              {"connectivity", Y.connectivity()}};

  const qsm::FreeCDGA* A = nullptr;
  qsm::ReducedModel red;
  if (raw) {
    A = &BS.A;
    rep["results"]["coalgebra_elements"] = BS.B->size();
  } else {
    red = qsm::minimal_reduce(BS);
    A = &red.R;
    rep["results"]["homotopy_ranks"] = qsm::rank_rows(red.ranks, 1);
  }
  rep["results"]["generators"] = qsm::generator_table(*A);
  qsm::Cohomology coh(*A);
  std::vector<int> hdims;
  for (int n = 0; n < cap; ++n) hdims.push_back(coh.dim(n));
  rep["results"]["cohomology_ranks"] = qsm::rank_rows(hdims, 0);
  return rep;
}

// ---------------------------------------------------------------------------
// split-check

qsm::Json cmd_split_check(const qsm::ModelFile& mf, int cap, const qsm::Q& q,
                          const std::string& attach_name,
                          const std::string& file, bool* splits) {
  require_blocks(mf, true, true);
  const std::string& lie_name = mf.lies[0].name;
  std::size_t ai = mf.attaches.size();
  if (attach_name.empty()) {
    for (std::size_t i = 0; i < mf.attaches.size(); ++i)
      if (mf.attaches[i].lie_name == lie_name) ai = i;
    qsm::check_input(ai < mf.attaches.size(),
                     "the model file has no attach statement for lie block '" +
                         lie_name + "'");
  } else {
    for (std::size_t i = 0; i < mf.attaches.size(); ++i)
      if (mf.attaches[i].name == attach_name &&
          mf.attaches[i].lie_name == lie_name)
        ai = i;
    qsm::check_input(ai < mf.attaches.size(),
                     "no attach statement named '" + attach_name +
                         "' for lie block '" + lie_name + "'");
  }
  reject_mixed_bracket_length(mf.attaches[ai]);

  qsm::SplitInput si = qsm::split_input(mf, 0, ai, q, 2);
  qsm::MinimalModel Y = qsm::build_sullivan(mf.sullivans[0], cap);
  qsm::SplitCheck sc =
      qsm::splitting_check(si.base, si.z, si.cell, si.name, Y, cap);
  if (splits) *splits = sc.status == qsm::SplitStatus::Splits;

  qsm::Json rep = qsm::report_envelope("split-check");
  rep["inputs"]["file"] = file;
  rep["inputs"]["cap"] = cap;
  rep["inputs"]["q"] = qsm::q_str(q);
  rep["inputs"]["attach"] = si.name;
  rep["results"] = qsm::split_check_json(sc);
  return rep;
}

// ---------------------------------------------------------------------------
// decompose

qsm::Json cmd_decompose(const qsm::ModelFile& mf, int cap, const qsm::Q& q,
                        const std::string& file, bool* all_split) {
  require_blocks(mf, true, true);
  qsm::FreeDGL X = qsm::build_dgl(mf, 0, q, 2);
  qsm::MinimalModel Y = qsm::build_sullivan(mf.sullivans[0], cap);
  qsm::Decomposition D = qsm::decompose(X, Y, cap);
  if (all_split) *all_split = D.all_split;

  qsm::Json rep = qsm::report_envelope("decompose");
  rep["inputs"]["file"] = file;
  rep["inputs"]["cap"] = cap;
  rep["inputs"]["q"] = qsm::q_str(q);
  rep["results"] = qsm::decomposition_json(D);
  return rep;
}

// ---------------------------------------------------------------------------
// selftest

int run_selftest_cmd(const CommonOpts& o) {
  qsm::SelftestOutcome out = qsm::run_selftest(o.cap);
  if (o.format == "json" || !o.out.empty()) {
    qsm::Json rep = qsm::report_envelope("selftest");
    if (o.cap > 0) rep["inputs"]["cap"] = o.cap;
    rep["results"]["checks"] = qsm::Json::array();
    for (const std::string& line : out.lines) {
      qsm::Json row;
      std::string status = line.substr(0, 4) == "FAIL"   ? "fail"
                           : line.substr(0, 4) == "SKIP" ? "skip"
                                                         : "ok";
      std::string rest = line.substr(5);
      std::size_t sep = rest.find(" — ");
      row["name"] = sep == std::string::npos ? rest : rest.substr(0, sep);
      row["status"] = status;
      row["detail"] =
          sep == std::string::npos
              ? ""
              : rest.substr(sep + std::string(" — ").size());
      rep["results"]["checks"].push_back(row);
      if (status == "skip")
        rep["warnings"].push_back(line.substr(5));
    }
    rep["results"]["failures"] = out.failures;
    rep["results"]["skipped"] = out.skipped;
    CommonOpts oo = o;
    if (oo.format != "json") oo.format = "text";
    emit(rep, oo);
  }
  if (o.format != "json" && o.out.empty()) {
    for (const std::string& line : out.lines) std::cout << line << "\n";
    std::cout << (out.ok() ? "selftest passed" : "selftest FAILED") << " ("
              << out.lines.size() - static_cast<std::size_t>(out.skipped)
              << " checks, " << out.skipped << " skipped, " << out.failures
              << " failures)\n";
  }
  return out.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic Sullivan models of based mapping spaces"};
  app.require_subcommand(1);

  CommonOpts an, mm, sp, de, st;
  CLI::App* c_an = app.add_subcommand(
      "analyze", "invariants of every block declared in the model file");
  add_model_flags(c_an, an);

  CLI::App* c_mm = app.add_subcommand(
      "map-model", "Sullivan model of the based mapping space F(X, Y)");
  add_model_flags(c_mm, mm);
  bool mm_minimal = false, mm_raw = false;
  c_mm->add_flag("--minimal", mm_minimal,
                 "reduce to a minimal model (the default)");
  c_mm->add_flag("--raw", mm_raw, "emit the unreduced pair model instead");

  CLI::App* c_sp = app.add_subcommand(
      "split-check",
      "does the attached cell split off a product factor of F(X, Y)?");
  add_model_flags(c_sp, sp);
  std::string sp_attach;
  c_sp->add_option("--attach", sp_attach,
                   "which attach statement to check (default: the last one)");
  c_sp->add_flag("--strict", sp.strict,
                 "exit 1 unless the verdict is a verified splitting");

  CLI::App* c_de = app.add_subcommand(
      "decompose", "stagewise cell decomposition with a product verdict");
  add_model_flags(c_de, de);
  c_de->add_flag("--strict", de.strict,
                 "exit 1 unless every cell attachment splits");

  CLI::App* c_st =
      app.add_subcommand("selftest", "built-in verification suite");
  add_io_flags(c_st, st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_st->parsed()) return run_selftest_cmd(st);

    CommonOpts& o = c_an->parsed()   ? an
                    : c_mm->parsed() ? mm
                    : c_sp->parsed() ? sp
                                     : de;
    qsm::ModelFile mf = qsm::parse_model_path(o.file);
    int cap = resolve_cap(mf, o);
    qsm::Q q = resolve_q(mf, o);

    if (c_an->parsed()) return emit(cmd_analyze(mf, cap, q, o.file), o);
    if (c_mm->parsed()) {
      qsm::check_input(!(mm_minimal && mm_raw),
                       "--minimal and --raw are mutually exclusive");
      return emit(cmd_map_model(mf, cap, q, mm_raw, o.file), o);
    }
    if (c_sp->parsed()) {
      bool splits = false;
      int rc = emit(cmd_split_check(mf, cap, q, sp_attach, o.file, &splits), o);
      if (rc == 0 && o.strict && !splits) return 1;
      return rc;
    }
    bool all_split = false;
    int rc = emit(cmd_decompose(mf, cap, q, o.file, &all_split), o);
    if (rc == 0 && o.strict && !all_split) return 1;
    return rc;
  } catch (const qsm::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qsm::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

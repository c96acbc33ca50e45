#pragma once
// Text format for describing the input models: commutative-algebra blocks
// ("sullivan"), Lie blocks ("lie"), cell attachments ("attach"), and optional
// task parameters.  Hand-written lexer/parser with line/column positions on
// every error, a canonical printer (parse . print == identity on printed
// output), and resolvers that turn parsed declarations into library objects.
//
// Grammar ('#' starts a comment running to end of line):
//   file   := (block | attach | param)*
//   block  := ("sullivan" | "lie") NAME "{" decl* "}"
//   decl   := "gen" NAME INT ";" | "d" NAME "=" expr ";"
//   sullivan expr := term (("+" | "-") term)* ; term := RATIONAL ["*"] NAME
//                    ("*" NAME)* | NAME ("*" NAME)* | "0"
//   lie expr      := lterm (("+" | "-") lterm)* ; lterm := RATIONAL ["*"] word
//                    | word | "0" ; word := NAME | "[" word "," word "]"
//   attach := "attach" NAME ":" NAME "cell" INT "=" lie expr ";"
//   param  := "cap" INT ";" | "q" RATIONAL ";"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qsm/freelie.hpp"
#include "qsm/sullivan.hpp"

namespace qsm {

struct SourcePos {
  int line = 0;
  int col = 0;
};
std::string pos_str(const SourcePos& p);

// A bracket word over generator NAMES (resolution to ids happens later).
struct NamedWord {
  std::string leaf;  // set iff this node is a generator name
  std::shared_ptr<NamedWord> l, r;  // set iff this node is a bracket
  SourcePos pos;
  bool is_leaf() const { return !l; }
};

struct GenDecl {
  std::string name;
  int degree = 0;
  SourcePos pos;
};

struct SullTerm {
  Q coeff;
  std::vector<std::string> factors;  // empty with coeff 0 encodes the term "0"
  SourcePos pos;
};

struct LieTerm {
  Q coeff;
  NamedWord word;  // ignored when coeff is 0 and word.leaf is empty ("0")
  SourcePos pos;
};

struct SullivanData {
  std::string name;
  SourcePos pos;
  std::vector<GenDecl> gens;
  // (generator name, expression, position of the "d" statement)
  std::vector<std::tuple<std::string, std::vector<SullTerm>, SourcePos>> diffs;
};

struct LieData {
  std::string name;
  SourcePos pos;
  std::vector<GenDecl> gens;
  std::vector<std::tuple<std::string, std::vector<LieTerm>, SourcePos>> diffs;
};

struct AttachData {
  std::string name;      // the new cell generator's name
  std::string lie_name;  // which lie block the cell attaches to
  int cell = 0;          // cell dimension; the new generator has degree cell-1
  std::vector<LieTerm> expr;
  SourcePos pos;
};

struct ModelFile {
  std::vector<SullivanData> sullivans;
  std::vector<LieData> lies;
  std::vector<AttachData> attaches;  // in file order
  std::optional<int> cap;            // "cap N;" parameter, if present
  std::optional<Q> q;                // "q R;" parameter, if present
};

// Parse model text; errors are input_error with "line L, col C" positions.
ModelFile parse_model_file(const std::string& text);
// Read and parse a file; the path is prefixed to error messages.
ModelFile parse_model_path(const std::string& path);

// Canonical printer.  parse_model_file(print_model_file(mf)) reproduces mf.
std::string print_model_file(const ModelFile& mf);

// Largest declared generator degree across all blocks (attach cells count as
// degree cell-1 generators); 0 when the file declares nothing.
int max_declared_degree(const ModelFile& mf);
// Default truncation: 2 * max_declared_degree + 2, unless the file sets cap.
int default_cap(const ModelFile& mf);

// Build the minimal Sullivan algebra of one sullivan block.  Generator ids
// are assigned by (degree, declaration order).
MinimalModel build_sullivan(const SullivanData& s, int cap);

// Build the free Lie model of one lie block with its attach statements
// applied in file order; attach expressions are scaled by q.  Generator ids
// are assigned by (degree, declaration order); attach generators count as
// declared at the point of their statement with degree cell-1.
FreeDGL build_dgl(const ModelFile& mf, std::size_t lie_index, const Q& q,
                  int cap);

// The inputs for a splitting check of one attach statement: the complex built
// from the lie block and all earlier attaches, plus the chosen attaching
// class (scaled by q) and its cell dimension.
struct SplitInput {
  FreeDGL base;
  LieElement z;
  int cell = 0;
  std::string name;
};
SplitInput split_input(const ModelFile& mf, std::size_t lie_index,
                       std::size_t attach_index, const Q& q, int cap);

}  // namespace qsm

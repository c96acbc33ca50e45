#include "qsm/model_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "qsm/cdga.hpp"
#include "qsm/errors.hpp"

namespace qsm {

std::string pos_str(const SourcePos& p) {
  return "line " + std::to_string(p.line) + ", col " + std::to_string(p.col);
}

namespace {

[[noreturn]] void fail_at(const SourcePos& p, const std::string& m) {
  fail_input(pos_str(p) + ": " + m);
}

// ---------------------------------------------------------------- lexer ----

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long value = 0;  // for Int
  SourcePos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  const std::string punct = "{}[],;:=*+-/";
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    SourcePos pos{line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Tok::Ident, text.substr(i, j - i), 0, pos});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      std::string digits = text.substr(i, j - i);
      if (digits.size() > 9) fail_at(pos, "integer literal too large");
      out.push_back({Tok::Int, digits, std::stoll(digits), pos});
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (punct.find(c) != std::string::npos) {
      out.push_back({Tok::Punct, std::string(1, c), 0, pos});
      ++col;
      ++i;
      continue;
    }
    fail_at(pos, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", 0, {line, col}});
  return out;
}

// --------------------------------------------------------------- parser ----

const std::set<std::string> kReserved = {"sullivan", "lie", "attach", "gen",
                                         "d",        "cell", "cap",   "q"};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  ModelFile parse() {
    ModelFile mf;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind != Tok::Ident)
        fail_at(t.pos, "expected 'sullivan', 'lie', 'attach', 'cap', or 'q'");
      if (t.text == "sullivan")
        mf.sullivans.push_back(parse_sullivan());
      else if (t.text == "lie")
        mf.lies.push_back(parse_lie());
      else if (t.text == "attach")
        mf.attaches.push_back(parse_attach());
      else if (t.text == "cap") {
        SourcePos p = get().pos;
        if (mf.cap) fail_at(p, "duplicate 'cap' parameter");
        long long v = expect_int("truncation degree");
        if (v < 2 || v > 1000) fail_at(p, "cap must be between 2 and 1000");
        mf.cap = static_cast<int>(v);
        expect_punct(';');
      } else if (t.text == "q") {
        SourcePos p = get().pos;
        if (mf.q) fail_at(p, "duplicate 'q' parameter");
        mf.q = parse_signed_rational();
        expect_punct(';');
      } else {
        fail_at(t.pos, "expected 'sullivan', 'lie', 'attach', 'cap', or 'q', got '" +
                           t.text + "'");
      }
    }
    return mf;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(i_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  const Token& get() { return toks_[std::min(i_++, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }

  bool peek_punct(char c, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Punct && t.text[0] == c;
  }
  void expect_punct(char c) {
    const Token& t = get();
    if (t.kind != Tok::Punct || t.text[0] != c)
      fail_at(t.pos, std::string("expected '") + c + "', got '" +
                         (t.kind == Tok::End ? "end of file" : t.text) + "'");
  }
  std::string expect_ident(const std::string& what) {
    const Token& t = get();
    if (t.kind != Tok::Ident)
      fail_at(t.pos, "expected " + what + ", got '" +
                         (t.kind == Tok::End ? "end of file" : t.text) + "'");
    return t.text;
  }
  std::string expect_name(const std::string& what) {
    const Token& t = peek();
    std::string n = expect_ident(what);
    if (kReserved.count(n)) fail_at(t.pos, "'" + n + "' is a reserved word");
    return n;
  }
  long long expect_int(const std::string& what) {
    const Token& t = get();
    if (t.kind != Tok::Int)
      fail_at(t.pos, "expected " + what + ", got '" +
                         (t.kind == Tok::End ? "end of file" : t.text) + "'");
    return t.value;
  }
  void expect_keyword(const std::string& kw) {
    const Token& t = get();
    if (t.kind != Tok::Ident || t.text != kw)
      fail_at(t.pos, "expected '" + kw + "', got '" +
                         (t.kind == Tok::End ? "end of file" : t.text) + "'");
  }

  // RATIONAL := INT ["/" INT]; sign handled by callers.
  Q parse_rational() {
    SourcePos p = peek().pos;
    long long num = expect_int("a rational number");
    if (peek_punct('/')) {
      get();
      long long den = expect_int("a denominator");
      if (den == 0) fail_at(p, "zero denominator");
      Q r(static_cast<long>(num), static_cast<long>(den));
      r.canonicalize();
      return r;
    }
    return Q(static_cast<long>(num));
  }
  Q parse_signed_rational() {
    bool neg = false;
    if (peek_punct('-')) {
      get();
      neg = true;
    }
    Q r = parse_rational();
    return neg ? Q(-r) : r;
  }

  GenDecl parse_gen_decl() {
    expect_keyword("gen");
    SourcePos p = peek().pos;
    std::string name = expect_name("a generator name");
    long long deg = expect_int("a degree");
    if (deg < 1 || deg > 1000) fail_at(p, "generator degree must be between 1 and 1000");
    expect_punct(';');
    return {name, static_cast<int>(deg), p};
  }

  // term := RATIONAL ["*"] NAME ("*" NAME)* | NAME ("*" NAME)* | "0"
  SullTerm parse_sull_term(bool negative) {
    SullTerm t;
    t.pos = peek().pos;
    t.coeff = Q(1);
    bool had_coeff = false;
    if (peek().kind == Tok::Int) {
      t.coeff = parse_rational();
      had_coeff = true;
      if (peek_punct('*') && peek(1).kind == Tok::Ident) get();
    }
    while (peek().kind == Tok::Ident) {
      t.factors.push_back(expect_name("a generator name"));
      if (peek_punct('*')) {
        get();
        if (peek().kind != Tok::Ident)
          fail_at(peek().pos, "expected a generator name after '*'");
      } else {
        break;
      }
    }
    if (t.factors.empty()) {
      if (!had_coeff)
        fail_at(t.pos, "expected a term (coefficient, generator names, or 0)");
      if (!q_is_zero(t.coeff))
        fail_at(t.pos, "a nonzero constant is not a valid term");
    }
    if (negative) t.coeff = Q(-t.coeff);
    return t;
  }

  std::vector<SullTerm> parse_sull_expr() {
    std::vector<SullTerm> terms;
    bool neg = false;
    if (peek_punct('-')) {
      get();
      neg = true;
    }
    terms.push_back(parse_sull_term(neg));
    while (peek_punct('+') || peek_punct('-')) {
      bool minus = peek().text[0] == '-';
      get();
      terms.push_back(parse_sull_term(minus));
    }
    return terms;
  }

  // word := NAME | "[" word "," word "]"
  NamedWord parse_word() {
    NamedWord w;
    w.pos = peek().pos;
    if (peek_punct('[')) {
      get();
      w.l = std::make_shared<NamedWord>(parse_word());
      expect_punct(',');
      w.r = std::make_shared<NamedWord>(parse_word());
      expect_punct(']');
      return w;
    }
    w.leaf = expect_name("a generator name or '['");
    return w;
  }

  LieTerm parse_lie_term(bool negative) {
    LieTerm t;
    t.pos = peek().pos;
    t.coeff = Q(1);
    bool had_coeff = false;
    if (peek().kind == Tok::Int) {
      t.coeff = parse_rational();
      had_coeff = true;
      if (peek_punct('*')) get();
    }
    if (peek().kind == Tok::Ident || peek_punct('[')) {
      t.word = parse_word();
    } else if (!had_coeff || !q_is_zero(t.coeff)) {
      fail_at(t.pos, "expected a bracket word, a rational coefficient, or 0");
    }
    if (negative) t.coeff = Q(-t.coeff);
    return t;
  }

  std::vector<LieTerm> parse_lie_expr() {
    std::vector<LieTerm> terms;
    bool neg = false;
    if (peek_punct('-')) {
      get();
      neg = true;
    }
    terms.push_back(parse_lie_term(neg));
    while (peek_punct('+') || peek_punct('-')) {
      bool minus = peek().text[0] == '-';
      get();
      terms.push_back(parse_lie_term(minus));
    }
    return terms;
  }

  SullivanData parse_sullivan() {
    SullivanData s;
    s.pos = peek().pos;
    expect_keyword("sullivan");
    s.name = expect_name("a block name");
    expect_punct('{');
    while (!peek_punct('}')) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) fail_at(t.pos, "expected 'gen', 'd', or '}'");
      if (t.text == "gen") {
        s.gens.push_back(parse_gen_decl());
      } else if (t.text == "d") {
        SourcePos p = get().pos;
        std::string name = expect_name("a generator name");
        expect_punct('=');
        auto expr = parse_sull_expr();
        expect_punct(';');
        s.diffs.emplace_back(name, std::move(expr), p);
      } else {
        fail_at(t.pos, "expected 'gen', 'd', or '}', got '" + t.text + "'");
      }
    }
    expect_punct('}');
    return s;
  }

  LieData parse_lie() {
    LieData s;
    s.pos = peek().pos;
    expect_keyword("lie");
    s.name = expect_name("a block name");
    expect_punct('{');
    while (!peek_punct('}')) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) fail_at(t.pos, "expected 'gen', 'd', or '}'");
      if (t.text == "gen") {
        s.gens.push_back(parse_gen_decl());
      } else if (t.text == "d") {
        SourcePos p = get().pos;
        std::string name = expect_name("a generator name");
        expect_punct('=');
        auto expr = parse_lie_expr();
        expect_punct(';');
        s.diffs.emplace_back(name, std::move(expr), p);
      } else {
        fail_at(t.pos, "expected 'gen', 'd', or '}', got '" + t.text + "'");
      }
    }
    expect_punct('}');
    return s;
  }

  AttachData parse_attach() {
    AttachData a;
    a.pos = peek().pos;
    expect_keyword("attach");
    a.name = expect_name("a cell name");
    expect_punct(':');
    a.lie_name = expect_name("a lie block name");
    expect_keyword("cell");
    SourcePos p = peek().pos;
    long long cell = expect_int("a cell dimension");
    if (cell < 2 || cell > 1000) fail_at(p, "cell dimension must be between 2 and 1000");
    a.cell = static_cast<int>(cell);
    expect_punct('=');
    a.expr = parse_lie_expr();
    expect_punct(';');
    return a;
  }
};

// -------------------------------------------------------------- printer ----

void print_word(std::ostringstream& os, const NamedWord& w) {
  if (w.is_leaf()) {
    os << w.leaf;
    return;
  }
  os << '[';
  print_word(os, *w.l);
  os << ',';
  print_word(os, *w.r);
  os << ']';
}

// Shared sum-printing: emit("c", first) renders one term body; sign/separator
// handling is identical for both expression kinds.
template <class Term, class Body>
void print_sum(std::ostringstream& os, const std::vector<Term>& terms, Body body) {
  bool first = true;
  for (const Term& t : terms) {
    if (q_is_zero(t.coeff)) continue;
    Q c = t.coeff;
    if (first) {
      if (sgn(c) < 0) {
        os << '-';
        c = Q(-c);
      }
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
      if (sgn(c) < 0) c = Q(-c);
    }
    body(os, t, c);
    first = false;
  }
  if (first) os << '0';
}

void print_sull_expr(std::ostringstream& os, const std::vector<SullTerm>& terms) {
  print_sum(os, terms, [](std::ostringstream& o, const SullTerm& t, const Q& c) {
    if (c != 1 || t.factors.empty()) {
      o << q_str(c);
      if (!t.factors.empty()) o << '*';
    }
    for (std::size_t k = 0; k < t.factors.size(); ++k) {
      if (k) o << '*';
      o << t.factors[k];
    }
  });
}

void print_lie_expr(std::ostringstream& os, const std::vector<LieTerm>& terms) {
  print_sum(os, terms, [](std::ostringstream& o, const LieTerm& t, const Q& c) {
    if (c != 1) o << q_str(c) << '*';
    print_word(o, t.word);
  });
}

// ------------------------------------------------------------ resolvers ----

// Generators sorted by (degree, declaration order), with a name -> id map.
struct GenScope {
  std::vector<GenDecl> decls;  // sorted
  std::map<std::string, int> id;
};

GenScope sort_decls(std::vector<GenDecl> decls) {
  std::stable_sort(decls.begin(), decls.end(),
                   [](const GenDecl& a, const GenDecl& b) { return a.degree < b.degree; });
  GenScope s;
  for (std::size_t k = 0; k < decls.size(); ++k) {
    const GenDecl& g = decls[k];
    if (s.id.count(g.name)) fail_at(g.pos, "duplicate generator name '" + g.name + "'");
    s.id[g.name] = static_cast<int>(k);
  }
  s.decls = std::move(decls);
  return s;
}

int resolve_word(const NamedWord& w, const GenScope& scope,
                 const std::set<std::string>* allowed, BWord& out) {
  if (w.is_leaf()) {
    auto it = scope.id.find(w.leaf);
    if (it == scope.id.end())
      fail_at(w.pos, "undeclared generator '" + w.leaf + "'");
    if (allowed && !allowed->count(w.leaf))
      fail_at(w.pos, "generator '" + w.leaf + "' is not available here");
    out = BWord::leaf(it->second);
    return scope.decls[static_cast<std::size_t>(it->second)].degree;
  }
  BWord l, r;
  int dl = resolve_word(*w.l, scope, allowed, l);
  int dr = resolve_word(*w.r, scope, allowed, r);
  out = BWord::br(l, r);
  return dl + dr;
}

std::vector<std::pair<Q, BWord>> resolve_lie_expr(
    const std::vector<LieTerm>& expr, const GenScope& scope,
    const std::set<std::string>* allowed, int want_degree,
    const std::string& what) {
  std::vector<std::pair<Q, BWord>> terms;
  for (const LieTerm& t : expr) {
    if (t.word.is_leaf() && t.word.leaf.empty()) continue;  // literal "0"
    BWord w;
    int deg = resolve_word(t.word, scope, allowed, w);
    if (deg != want_degree)
      fail_at(t.pos, what + " term has degree " + std::to_string(deg) +
                         ", expected " + std::to_string(want_degree));
    if (q_is_zero(t.coeff)) continue;
    terms.emplace_back(t.coeff, w);
  }
  return terms;
}

// Everything needed to build a DGL from a lie block plus a prefix of its
// attach statements.
struct DglPlan {
  GenScope scope;
  std::vector<LieGenerator> gens;
  std::map<int, LieElement> diff;
  std::shared_ptr<FreeLie> lie;
  int cap = 0;
};

DglPlan plan_dgl(const ModelFile& mf, std::size_t lie_index, const Q& q,
                 std::size_t attach_stop) {
  check_input(lie_index < mf.lies.size(), "no such lie block");
  const LieData& L = mf.lies[lie_index];

  std::vector<GenDecl> decls = L.gens;
  std::set<std::string> block_names;
  for (const GenDecl& g : L.gens) block_names.insert(g.name);

  // attach statements contribute a generator of degree cell-1 each
  std::vector<std::size_t> used_attaches;
  for (std::size_t a = 0; a < mf.attaches.size() && a < attach_stop; ++a) {
    if (mf.attaches[a].lie_name != L.name) continue;
    const AttachData& at = mf.attaches[a];
    decls.push_back({at.name, at.cell - 1, at.pos});
    used_attaches.push_back(a);
  }

  DglPlan plan;
  plan.scope = sort_decls(std::move(decls));

  int maxdeg = 1;
  for (const GenDecl& g : plan.scope.decls) maxdeg = std::max(maxdeg, g.degree);
  plan.cap = maxdeg + 1;

  for (std::size_t k = 0; k < plan.scope.decls.size(); ++k)
    plan.gens.push_back({static_cast<int>(k), plan.scope.decls[k].name,
                         plan.scope.decls[k].degree});
  plan.lie = std::make_shared<FreeLie>(plan.gens, plan.cap);

  // inline block differentials (scope: block generators only)
  std::set<std::string> have_diff;
  for (const auto& [name, expr, dpos] : L.diffs) {
    auto it = plan.scope.id.find(name);
    if (it == plan.scope.id.end())
      fail_at(dpos, "differential for undeclared generator '" + name + "'");
    if (!block_names.count(name))
      fail_at(dpos, "'" + name +
                        "' is an attached cell; its differential comes from "
                        "the attach statement");
    if (have_diff.count(name)) fail_at(dpos, "duplicate differential for '" + name + "'");
    have_diff.insert(name);
    int g = it->second;
    auto terms = resolve_lie_expr(expr, plan.scope, &block_names,
                                  plan.scope.decls[static_cast<std::size_t>(g)].degree - 1,
                                  "differential");
    if (terms.empty()) continue;
    LieElement el = plan.lie->normalize(terms);
    if (!el.is_zero()) plan.diff[g] = el;
  }

  // attach differentials (scope: block generators + earlier attach cells)
  std::set<std::string> attach_scope = block_names;
  for (std::size_t a : used_attaches) {
    const AttachData& at = mf.attaches[a];
    if (have_diff.count(at.name))
      fail_at(at.pos, "duplicate differential for '" + at.name + "'");
    have_diff.insert(at.name);
    int g = plan.scope.id.at(at.name);
    auto terms =
        resolve_lie_expr(at.expr, plan.scope, &attach_scope, at.cell - 2,
                         "attaching class");
    for (auto& [c, w] : terms) c *= q;
    if (!terms.empty()) {
      LieElement el = plan.lie->normalize(terms);
      if (!el.is_zero()) plan.diff[g] = el;
    }
    attach_scope.insert(at.name);
  }
  return plan;
}

}  // namespace

// ----------------------------------------------------------- public API ----

ModelFile parse_model_file(const std::string& text) {
  return Parser(text).parse();
}

ModelFile parse_model_path(const std::string& path) {
  std::ifstream in(path);
  check_input(static_cast<bool>(in), "cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_model_file(buf.str());
  } catch (const input_error& e) {
    fail_input(path + ": " + e.what());
  }
}

std::string print_model_file(const ModelFile& mf) {
  std::ostringstream os;
  if (mf.cap) os << "cap " << *mf.cap << ";\n";
  if (mf.q) os << "q " << q_str(*mf.q) << ";\n";
  for (const SullivanData& s : mf.sullivans) {
    os << "sullivan " << s.name << " {\n";
    for (const GenDecl& g : s.gens)
      os << "  gen " << g.name << " " << g.degree << ";\n";
    for (const auto& [name, expr, pos] : s.diffs) {
      os << "  d " << name << " = ";
      print_sull_expr(os, expr);
      os << ";\n";
    }
    os << "}\n";
  }
  for (const LieData& s : mf.lies) {
    os << "lie " << s.name << " {\n";
    for (const GenDecl& g : s.gens)
      os << "  gen " << g.name << " " << g.degree << ";\n";
    for (const auto& [name, expr, pos] : s.diffs) {
      os << "  d " << name << " = ";
      print_lie_expr(os, expr);
      os << ";\n";
    }
    os << "}\n";
  }
  for (const AttachData& a : mf.attaches) {
    os << "attach " << a.name << " : " << a.lie_name << " cell " << a.cell
       << " = ";
    print_lie_expr(os, a.expr);
    os << ";\n";
  }
  return os.str();
}

int max_declared_degree(const ModelFile& mf) {
  int m = 0;
  for (const SullivanData& s : mf.sullivans)
    for (const GenDecl& g : s.gens) m = std::max(m, g.degree);
  for (const LieData& s : mf.lies)
    for (const GenDecl& g : s.gens) m = std::max(m, g.degree);
  for (const AttachData& a : mf.attaches) m = std::max(m, a.cell - 1);
  return m;
}

int default_cap(const ModelFile& mf) {
  if (mf.cap) return *mf.cap;
  return 2 * max_declared_degree(mf) + 2;
}

MinimalModel build_sullivan(const SullivanData& s, int cap) {
  GenScope scope = sort_decls(s.gens);
  std::vector<Generator> gens;
  for (std::size_t k = 0; k < scope.decls.size(); ++k)
    gens.push_back({static_cast<int>(k), scope.decls[k].name,
                    scope.decls[k].degree});
  GenTable T{gens};

  std::map<int, Polynomial> diff;
  std::set<std::string> have_diff;
  for (const auto& [name, expr, dpos] : s.diffs) {
    auto it = scope.id.find(name);
    if (it == scope.id.end())
      fail_at(dpos, "differential for undeclared generator '" + name + "'");
    if (have_diff.count(name)) fail_at(dpos, "duplicate differential for '" + name + "'");
    have_diff.insert(name);
    int g = it->second;
    int want = T.degree(g) + 1;
    Polynomial p = poly_zero();
    for (const SullTerm& t : expr) {
      if (t.factors.empty()) continue;  // literal "0"
      std::vector<int> ids;
      int deg = 0;
      for (const std::string& f : t.factors) {
        auto fit = scope.id.find(f);
        if (fit == scope.id.end())
          fail_at(t.pos, "undeclared generator '" + f + "'");
        deg += T.degree(fit->second);
        ids.push_back(fit->second);
      }
      if (deg != want)
        fail_at(t.pos, "differential term has degree " + std::to_string(deg) +
                           ", expected " + std::to_string(want) + " for '" +
                           name + "'");
      if (q_is_zero(t.coeff)) continue;
      Polynomial m = mono_poly(Monomial{}, t.coeff);
      for (int f : ids) m = poly_mul(T, m, mono_poly(Monomial{{f}}, Q(1)));
      p = poly_add(p, m);
    }
    if (!poly_is_zero(p)) diff[g] = p;
  }
  try {
    return make_minimal(make_cdga(std::move(gens), std::move(diff), cap));
  } catch (const input_error& e) {
    fail_input("sullivan block '" + s.name + "': " + e.what());
  }
}

FreeDGL build_dgl(const ModelFile& mf, std::size_t lie_index, const Q& q,
                  int cap) {
  DglPlan plan = plan_dgl(mf, lie_index, q, mf.attaches.size());
  try {
    return make_dgl(std::move(plan.gens), std::move(plan.diff),
                    std::max(cap, plan.cap));
  } catch (const input_error& e) {
    fail_input("lie block '" + mf.lies[lie_index].name + "': " + e.what());
  }
}

SplitInput split_input(const ModelFile& mf, std::size_t lie_index,
                       std::size_t attach_index, const Q& q, int cap) {
  check_input(lie_index < mf.lies.size(), "no such lie block");
  check_input(attach_index < mf.attaches.size(), "no such attach statement");
  const AttachData& at = mf.attaches[attach_index];
  check_input(at.lie_name == mf.lies[lie_index].name,
              "attach '" + at.name + "' does not target lie block '" +
                  mf.lies[lie_index].name + "'");

  DglPlan plan = plan_dgl(mf, lie_index, q, attach_index);
  std::set<std::string> base_names;
  for (const GenDecl& g : plan.scope.decls) base_names.insert(g.name);
  auto terms = resolve_lie_expr(at.expr, plan.scope, &base_names, at.cell - 2,
                                "attaching class");
  for (auto& [c, w] : terms) c *= q;

  // the attaching class must exist in the base's materialized range
  int need = std::max(plan.cap, at.cell - 2);
  SplitInput in;
  in.z = terms.empty() ? LieElement{at.cell - 2, {}}
                       : FreeLie(plan.gens, need).normalize(terms);
  try {
    in.base = make_dgl(std::move(plan.gens), std::move(plan.diff),
                       std::max(cap, need));
  } catch (const input_error& e) {
    fail_input("lie block '" + at.lie_name + "': " + e.what());
  }
  in.cell = at.cell;
  in.name = at.name;
  return in;
}

}  // namespace qsm

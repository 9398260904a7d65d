#include "pbisim/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "pbisim/plts.hpp"

namespace pbisim {

namespace {

formula make_node(fkind kind, std::string label, std::vector<formula> children,
                  std::vector<rat> weights = {},
                  std::vector<std::string> refused = {}) {
  auto node = std::make_shared<formula_node>();
  node->kind = kind;
  node->label = std::move(label);
  node->children = std::move(children);
  node->weights = std::move(weights);
  node->refused = std::move(refused);
  for (const formula& c : node->children)
    node->free_vars.insert(c->free_vars.begin(), c->free_vars.end());
  if (kind == fkind::var) node->free_vars.insert(node->label);
  if (kind == fkind::mu || kind == fkind::nu)
    node->free_vars.erase(node->label);
  return node;
}

}  // namespace

formula f_true() { return f_conj({}); }
formula f_false() { return f_disj({}); }

bool is_true(const formula& f) {
  return f->kind == fkind::conj && f->children.empty();
}
bool is_false(const formula& f) {
  return f->kind == fkind::disj && f->children.empty();
}

formula f_conj(std::vector<formula> children) {
  std::vector<formula> flat;
  for (auto& c : children) {
    if (is_true(c)) continue;
    if (is_false(c)) return f_false();
    if (c->kind == fkind::conj)
      flat.insert(flat.end(), c->children.begin(), c->children.end());
    else
      flat.push_back(c);
  }
  if (flat.size() == 1) return flat[0];
  return make_node(fkind::conj, "", std::move(flat));
}

formula f_disj(std::vector<formula> children) {
  std::vector<formula> flat;
  for (auto& c : children) {
    if (is_false(c)) continue;
    if (is_true(c)) return f_true();
    if (c->kind == fkind::disj)
      flat.insert(flat.end(), c->children.begin(), c->children.end());
    else
      flat.push_back(c);
  }
  if (flat.size() == 1) return flat[0];
  return make_node(fkind::disj, "", std::move(flat));
}

formula f_neg(formula f) {
  if (is_true(f)) return f_false();
  if (is_false(f)) return f_true();
  if (f->kind == fkind::neg) return f->children[0];
  return make_node(fkind::neg, "", {std::move(f)});
}

formula f_diamond(const std::string& action, formula f) {
  if (is_false(f)) return f_false();
  return make_node(fkind::diamond, action, {std::move(f)});
}

formula f_box(const std::string& action, formula f) {
  if (is_true(f)) return f_true();
  return make_node(fkind::box, action, {std::move(f)});
}

formula f_oplus(std::vector<formula> children) {
  if (children.size() == 1) return children[0];
  bool all_true = !children.empty();
  for (auto& c : children)
    if (!is_true(c)) all_true = false;
  if (all_true) return f_true();
  return make_node(fkind::oplus, "", std::move(children));
}

formula f_oplus_w(std::vector<std::pair<rat, formula>> parts) {
  rat sum = rat_zero();
  std::vector<formula> children;
  std::vector<rat> weights;
  for (auto& [p, c] : parts) {
    if (!is_positive(p))
      throw error("oplus weights must be positive rationals");
    sum += p;
    weights.push_back(p);
    children.push_back(c);
  }
  if (sum != 1)
    throw error("oplus weights sum to " + rat_str(sum) + ", expected 1");
  if (children.size() == 1) return children[0];
  bool all_true = true;
  for (auto& c : children)
    if (!is_true(c)) all_true = false;
  if (all_true) return f_true();
  return make_node(fkind::oplus_w, "", std::move(children),
                   std::move(weights));
}

formula f_down(formula f) {
  if (is_true(f)) return f_true();
  return make_node(fkind::down, "", {std::move(f)});
}

formula f_ref(std::vector<std::string> actions) {
  std::sort(actions.begin(), actions.end());
  actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  for (auto& a : actions)
    if (a == "tau") throw error("ref{...} must not contain tau");
  return make_node(fkind::refusal, "", {}, {}, std::move(actions));
}

formula f_var(const std::string& name) {
  return make_node(fkind::var, name, {});
}

formula f_mu(const std::string& var, formula body) {
  return make_node(fkind::mu, var, {std::move(body)});
}

formula f_nu(const std::string& var, formula body) {
  return make_node(fkind::nu, var, {std::move(body)});
}

bool formulas_equal(const formula& a, const formula& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->label != b->label ||
      a->children.size() != b->children.size() ||
      a->weights.size() != b->weights.size() || a->refused != b->refused)
    return false;
  for (std::size_t i = 0; i < a->weights.size(); ++i)
    if (a->weights[i] != b->weights[i]) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!formulas_equal(a->children[i], b->children[i])) return false;
  return true;
}

bool is_closed(const formula& f) { return f->free_vars.empty(); }

bool is_fixpoint_free(const formula& f) {
  if (f->kind == fkind::mu || f->kind == fkind::nu) return false;
  for (auto& c : f->children)
    if (!is_fixpoint_free(c)) return false;
  return true;
}

formula substitute(const formula& f, const std::string& var,
                   const formula& replacement) {
  std::map<const formula_node*, formula> memo;
  auto rec = [&](auto&& self, const formula& g) -> formula {
    if (!g->free_vars.count(var)) return g;
    auto it = memo.find(g.get());
    if (it != memo.end()) return it->second;
    formula out;
    if (g->kind == fkind::var) {
      out = replacement;
    } else if ((g->kind == fkind::mu || g->kind == fkind::nu)) {
      if (replacement->free_vars.count(g->label))
        throw error("substitution would capture variable " + g->label);
      out = make_node(g->kind, g->label, {self(self, g->children[0])});
    } else {
      std::vector<formula> children;
      children.reserve(g->children.size());
      for (auto& c : g->children) children.push_back(self(self, c));
      out = make_node(g->kind, g->label, std::move(children), g->weights,
                      g->refused);
    }
    memo.emplace(g.get(), out);
    return out;
  };
  return rec(rec, f);
}

// ------------------------------------------------------------- printing

namespace {

// Precedence: fixpoints 0, \/ 1, /\ 2, unary prefixes 3, atoms 4.
int precedence(const formula& f) {
  switch (f->kind) {
    case fkind::mu:
    case fkind::nu:
      return 0;
    case fkind::disj:
      return f->children.empty() ? 4 : 1;
    case fkind::conj:
      return f->children.empty() ? 4 : 2;
    case fkind::neg:
    case fkind::down:
    case fkind::diamond:
    case fkind::box:
      return 3;
    default:
      return 4;
  }
}

void print_rec(std::ostream& out, const formula& f, int min_prec) {
  int prec = precedence(f);
  bool parens = prec < min_prec;
  if (parens) out << "(";
  switch (f->kind) {
    case fkind::conj:
      if (f->children.empty()) {
        out << "true";
        break;
      }
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        if (i) out << " /\\ ";
        print_rec(out, f->children[i], 3);
      }
      break;
    case fkind::disj:
      if (f->children.empty()) {
        out << "false";
        break;
      }
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        if (i) out << " \\/ ";
        print_rec(out, f->children[i], 2);
      }
      break;
    case fkind::neg:
      out << "not ";
      print_rec(out, f->children[0], 3);
      break;
    case fkind::down:
      out << "down ";
      print_rec(out, f->children[0], 3);
      break;
    case fkind::diamond:
      out << "<" << f->label << ">";
      print_rec(out, f->children[0], 3);
      break;
    case fkind::box:
      out << "[" << f->label << "]";
      print_rec(out, f->children[0], 3);
      break;
    case fkind::oplus:
      out << "oplus(";
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        if (i) out << ", ";
        print_rec(out, f->children[i], 0);
      }
      out << ")";
      break;
    case fkind::oplus_w:
      out << "oplus(";
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        if (i) out << ", ";
        out << rat_str(f->weights[i]) << "*";
        print_rec(out, f->children[i], 3);
      }
      out << ")";
      break;
    case fkind::refusal:
      out << "ref{";
      for (std::size_t i = 0; i < f->refused.size(); ++i) {
        if (i) out << ",";
        out << f->refused[i];
      }
      out << "}";
      break;
    case fkind::var:
      out << f->label;
      break;
    case fkind::mu:
    case fkind::nu:
      out << (f->kind == fkind::mu ? "mu " : "nu ") << f->label << ". ";
      print_rec(out, f->children[0], 0);
      break;
  }
  if (parens) out << ")";
}

}  // namespace

std::string print_formula(const formula& f) {
  std::ostringstream out;
  print_rec(out, f, 0);
  return out.str();
}

// -------------------------------------------------------------- parsing

namespace {

enum class tok_kind { ident, number, punct, end };

struct ftoken {
  tok_kind kind;
  std::string text;
  int line;
  int col;
};

class lexer {
 public:
  explicit lexer(const std::string& text) : text_(text) { advance(); }

  const ftoken& peek() const { return cur_; }
  ftoken take() {
    ftoken t = cur_;
    advance();
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg, cur_.line, cur_.col);
  }
  void expect_punct(const std::string& p) {
    if (cur_.kind != tok_kind::punct || cur_.text != p)
      fail("expected '" + p + "'");
    advance();
  }
  bool try_punct(const std::string& p) {
    if (cur_.kind == tok_kind::punct && cur_.text == p) {
      advance();
      return true;
    }
    return false;
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
        continue;
      }
      break;
    }
    cur_ = {tok_kind::end, "", line_, col_};
    if (pos_ >= text_.size()) return;
    int line = line_, col = col_;
    char c = text_[pos_];
    auto punct = [&](const std::string& p) {
      cur_ = {tok_kind::punct, p, line, col};
      pos_ += p.size();
      col_ += static_cast<int>(p.size());
    };
    if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\\')
      return punct("/\\");
    if (c == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')
      return punct("\\/");
    if (std::string("(),.*=<>[]{}").find(c) != std::string::npos)
      return punct(std::string(1, c));
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = pos_;
      while (j < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[j])))
        ++j;
      if (j < text_.size() && text_[j] == '/') {
        std::size_t k = j + 1;
        while (k < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[k])))
          ++k;
        if (k > j + 1) j = k;
      }
      cur_ = {tok_kind::number, text_.substr(pos_, j - pos_), line, col};
      col_ += static_cast<int>(j - pos_);
      pos_ = j;
      return;
    }
    std::size_t j = pos_;
    while (j < text_.size()) {
      char d = text_[j];
      if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' ||
          d == '\'')
        ++j;
      else
        break;
    }
    if (j == pos_)
      throw parse_error("unexpected character '" + std::string(1, c) + "'",
                        line, col);
    cur_ = {tok_kind::ident, text_.substr(pos_, j - pos_), line, col};
    col_ += static_cast<int>(j - pos_);
    pos_ = j;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  ftoken cur_;
};

const std::set<std::string> keywords{"true", "false", "not",   "down", "mu",
                                     "nu",   "and",   "or",    "oplus", "ref"};

class formula_parser {
 public:
  explicit formula_parser(const std::string& text) : lex_(text) {}

  formula parse_full() {
    formula f = parse((std::set<std::string>()));
    if (lex_.peek().kind != tok_kind::end) lex_.fail("trailing input");
    return f;
  }

  formula parse(std::set<std::string> scope) {
    return parse_or(std::move(scope));
  }

 private:
  formula parse_or(std::set<std::string> scope) {
    std::vector<formula> parts{parse_and(scope)};
    while (lex_.try_punct("\\/")) parts.push_back(parse_and(scope));
    return parts.size() == 1 ? parts[0] : f_disj(std::move(parts));
  }

  formula parse_and(const std::set<std::string>& scope) {
    std::vector<formula> parts{parse_unary(scope)};
    while (lex_.try_punct("/\\")) parts.push_back(parse_unary(scope));
    return parts.size() == 1 ? parts[0] : f_conj(std::move(parts));
  }

  formula parse_unary(const std::set<std::string>& scope) {
    const ftoken& t = lex_.peek();
    if (t.kind == tok_kind::punct && t.text == "<") {
      lex_.take();
      std::string act = take_ident("action name");
      lex_.expect_punct(">");
      return f_diamond(act, parse_unary(scope));
    }
    if (t.kind == tok_kind::punct && t.text == "[") {
      lex_.take();
      std::string act = take_ident("action name");
      lex_.expect_punct("]");
      return f_box(act, parse_unary(scope));
    }
    if (t.kind == tok_kind::ident) {
      if (t.text == "not") {
        lex_.take();
        return f_neg(parse_unary(scope));
      }
      if (t.text == "down") {
        lex_.take();
        return f_down(parse_unary(scope));
      }
      if (t.text == "mu" || t.text == "nu") return parse_fix(scope);
    }
    return parse_atom(scope);
  }

  formula parse_fix(std::set<std::string> scope) {
    ftoken t = lex_.take();
    bool is_mu = t.text == "mu";
    ftoken vt = lex_.peek();
    std::string var = take_ident("variable name");
    if (keywords.count(var))
      throw parse_error("'" + var + "' is a keyword", vt.line, vt.col);
    if (scope.count(var))
      throw parse_error("variable " + var + " is already bound", vt.line,
                        vt.col);
    lex_.expect_punct(".");
    scope.insert(var);
    formula body = parse(scope);
    check_polarity(body, var, true, vt);
    return is_mu ? f_mu(var, std::move(body)) : f_nu(var, std::move(body));
  }

  formula parse_atom(const std::set<std::string>& scope) {
    const ftoken t = lex_.peek();
    if (lex_.try_punct("(")) {
      formula f = parse(scope);
      lex_.expect_punct(")");
      return f;
    }
    if (t.kind != tok_kind::ident) lex_.fail("expected a formula");
    if (t.text == "true") {
      lex_.take();
      return f_true();
    }
    if (t.text == "false") {
      lex_.take();
      return f_false();
    }
    if (t.text == "and" || t.text == "or") {
      lex_.take();
      lex_.expect_punct("(");
      std::vector<formula> parts;
      if (!lex_.try_punct(")")) {
        do {
          parts.push_back(parse(scope));
        } while (lex_.try_punct(","));
        lex_.expect_punct(")");
      }
      return t.text == "and" ? f_conj(std::move(parts))
                             : f_disj(std::move(parts));
    }
    if (t.text == "oplus") return parse_oplus(scope);
    if (t.text == "ref") return parse_ref();
    if (keywords.count(t.text)) lex_.fail("unexpected keyword " + t.text);
    lex_.take();
    return f_var(t.text);
  }

  formula parse_oplus(const std::set<std::string>& scope) {
    ftoken t = lex_.take();
    lex_.expect_punct("(");
    std::vector<formula> plain;
    std::vector<std::pair<rat, formula>> weighted;
    do {
      if (lex_.peek().kind == tok_kind::number) {
        ftoken num = lex_.take();
        rat p;
        parse_rat(num.text, p);
        lex_.expect_punct("*");
        weighted.emplace_back(p, parse_unary(scope));
      } else {
        plain.push_back(parse(scope));
      }
    } while (lex_.try_punct(","));
    lex_.expect_punct(")");
    if (!plain.empty() && !weighted.empty())
      throw parse_error("oplus mixes weighted and unweighted arguments",
                        t.line, t.col);
    try {
      if (!weighted.empty()) return f_oplus_w(std::move(weighted));
      if (plain.empty())
        throw parse_error("oplus needs at least one argument", t.line, t.col);
      return f_oplus(std::move(plain));
    } catch (const parse_error&) {
      throw;
    } catch (const error& e) {
      throw parse_error(e.what(), t.line, t.col);
    }
  }

  formula parse_ref() {
    ftoken t = lex_.take();
    lex_.expect_punct("{");
    std::vector<std::string> actions;
    if (!lex_.try_punct("}")) {
      do {
        actions.push_back(take_ident("action name"));
      } while (lex_.try_punct(","));
      lex_.expect_punct("}");
    }
    try {
      return f_ref(std::move(actions));
    } catch (const error& e) {
      throw parse_error(e.what(), t.line, t.col);
    }
  }

  std::string take_ident(const std::string& what) {
    const ftoken& t = lex_.peek();
    if (t.kind != tok_kind::ident) lex_.fail("expected " + what);
    return lex_.take().text;
  }

  // Bound variables may occur only under an even number of negations.
  void check_polarity(const formula& f, const std::string& var, bool positive,
                      const ftoken& at) {
    if (!f->free_vars.count(var)) return;
    if (f->kind == fkind::var) {
      if (!positive)
        throw parse_error("variable " + var +
                              " occurs under an odd number of negations",
                          at.line, at.col);
      return;
    }
    bool flip = f->kind == fkind::neg;
    for (auto& c : f->children)
      check_polarity(c, var, flip ? !positive : positive, at);
  }

  lexer lex_;
};

}  // namespace

formula parse_formula(const std::string& text) {
  return formula_parser(text).parse_full();
}

// ----------------------------------------------------- equation systems

const formula* equation_system::find(const std::string& var) const {
  for (auto& eq : equations)
    if (eq.var == var) return &eq.body;
  return nullptr;
}

std::vector<std::string> equation_system::variables() const {
  std::vector<std::string> out;
  for (auto& eq : equations) out.push_back(eq.var);
  return out;
}

void equation_system::validate() const {
  if (equations.empty()) throw error("equation system is empty");
  std::set<std::string> vars;
  for (auto& eq : equations) {
    if (!vars.insert(eq.var).second)
      throw error("equation system binds " + eq.var + " twice");
    if (!is_fixpoint_free(eq.body))
      throw error("equation body for " + eq.var + " contains a fixpoint");
  }
  for (auto& eq : equations)
    for (auto& v : eq.body->free_vars)
      if (!vars.count(v))
        throw error("equation body for " + eq.var +
                    " mentions unbound variable " + v);
}

equation_system parse_equation_system(const std::string& text) {
  equation_system es;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error("expected 'X = formula'", lineno, 1);
    std::istringstream head(line.substr(0, eq));
    std::string var;
    head >> var;
    std::string extra;
    if (var.empty() || (head >> extra))
      throw parse_error("expected a single variable before '='", lineno, 1);
    try {
      es.equations.push_back({var, parse_formula(line.substr(eq + 1))});
    } catch (const parse_error& e) {
      throw parse_error(e.what(), lineno, static_cast<int>(eq) + 2);
    }
  }
  try {
    es.validate();
  } catch (const error& e) {
    throw parse_error(e.what(), lineno, 1);
  }
  return es;
}

std::string print_equation_system(const equation_system& es) {
  std::ostringstream out;
  for (auto& eq : es.equations)
    out << eq.var << " = " << print_formula(eq.body) << "\n";
  return out.str();
}

}  // namespace pbisim

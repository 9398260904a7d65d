#include "pbisim/plts.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pbisim {

// ---------------------------------------------------------------- dist

dist dist::point(state_id s) {
  dist d;
  d.entries_.emplace_back(s, rat_one());
  return d;
}

dist dist::make(std::vector<entry> entries) {
  std::map<state_id, rat> acc;
  for (auto& [s, w] : entries) {
    if (is_negative(w)) throw error("negative weight in distribution");
    if (is_zero(w)) continue;
    acc[s] += w;
  }
  rat sum = rat_zero();
  dist d;
  for (auto& [s, w] : acc) {
    if (is_zero(w)) continue;
    sum += w;
    d.entries_.emplace_back(s, w);
  }
  if (sum != 1)
    throw error("distribution weights sum to " + rat_str(sum) + ", expected 1");
  return d;
}

rat dist::operator()(state_id s) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), s,
      [](const entry& e, state_id v) { return e.first < v; });
  if (it != entries_.end() && it->first == s) return it->second;
  return rat_zero();
}

bool dist::in_support(state_id s) const { return !is_zero((*this)(s)); }

std::vector<state_id> dist::support() const {
  std::vector<state_id> out;
  out.reserve(entries_.size());
  for (auto& [s, w] : entries_) out.push_back(s);
  return out;
}

int dist::compare(const dist& o) const {
  std::size_t n = std::min(entries_.size(), o.entries_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (entries_[i].first != o.entries_[i].first)
      return entries_[i].first < o.entries_[i].first ? -1 : 1;
    int c = cmp(entries_[i].second, o.entries_[i].second);
    if (c != 0) return c;
  }
  if (entries_.size() != o.entries_.size())
    return entries_.size() < o.entries_.size() ? -1 : 1;
  return 0;
}

dist convex_combine(const std::vector<std::pair<rat, dist>>& parts) {
  rat sum = rat_zero();
  std::vector<dist::entry> entries;
  for (auto& [p, d] : parts) {
    if (is_negative(p)) throw error("negative coefficient in convex combination");
    if (!d.valid()) throw error("invalid distribution in convex combination");
    sum += p;
    for (auto& [s, w] : d.entries()) entries.emplace_back(s, rat(p * w));
  }
  if (sum != 1)
    throw error("convex combination coefficients sum to " + rat_str(sum) +
                ", expected 1");
  return dist::make(std::move(entries));
}

// ---------------------------------------------------------------- plts

std::optional<state_id> plts::find_state(const std::string& name) const {
  auto it = state_ix_.find(name);
  if (it == state_ix_.end()) return std::nullopt;
  return it->second;
}

std::optional<action_id> plts::find_action(const std::string& name) const {
  auto it = action_ix_.find(name);
  if (it == action_ix_.end()) return std::nullopt;
  return it->second;
}

std::vector<action_id> plts::alphabet() const {
  std::vector<action_id> out;
  for (action_id a = 1; a < n_actions(); ++a) out.push_back(a);
  return out;
}

const std::vector<dist>& plts::targets(state_id s, action_id a) const {
  static const std::vector<dist> none;
  if (s < 0 || s >= n_states() || a < 0 || a >= n_actions()) return none;
  return targets_[s][a];
}

bool plts::enables(state_id s, action_id a) const {
  return !targets(s, a).empty();
}

std::vector<action_id> plts::enabled_actions(state_id s) const {
  std::vector<action_id> out;
  for (action_id a = 0; a < n_actions(); ++a)
    if (enables(s, a)) out.push_back(a);
  return out;
}

bool plts::is_tau_free() const {
  for (auto& t : trans_)
    if (t.act == tau_action) return false;
  return true;
}

std::vector<action_id> plts::refused_actions(state_id s) const {
  std::vector<action_id> out;
  for (action_id a = 1; a < n_actions(); ++a)
    if (!enables(s, a)) out.push_back(a);
  return out;
}

void plts::require_divergence_free() const {
  if (!divergence_) return;
  std::vector<std::string> cycle;
  std::string msg = "divergent pLTS: tau-support cycle";
  for (state_id s : *divergence_) {
    cycle.push_back(state_name(s));
    msg += " " + state_name(s);
  }
  throw divergence_error(msg, std::move(cycle));
}

// -------------------------------------------------------- plts_builder

static bool valid_token(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    if (c == '#' || c == ',') return false;
  }
  return true;
}

state_id plts_builder::add_state(const std::string& name) {
  if (!valid_token(name)) throw error("invalid state name '" + name + "'");
  if (sys_.state_ix_.count(name))
    throw error("duplicate state declaration '" + name + "'");
  state_id id = static_cast<state_id>(sys_.states_.size());
  sys_.states_.push_back(name);
  sys_.state_ix_[name] = id;
  return id;
}

action_id plts_builder::intern_action(const std::string& name) {
  if (!valid_token(name)) throw error("invalid action name '" + name + "'");
  if (sys_.actions_.empty()) {
    sys_.actions_.push_back("tau");
    sys_.action_ix_["tau"] = tau_action;
  }
  auto it = sys_.action_ix_.find(name);
  if (it != sys_.action_ix_.end()) return it->second;
  action_id id = static_cast<action_id>(sys_.actions_.size());
  sys_.actions_.push_back(name);
  sys_.action_ix_[name] = id;
  return id;
}

std::optional<state_id> plts_builder::find_state(const std::string& name) const {
  auto it = sys_.state_ix_.find(name);
  if (it == sys_.state_ix_.end()) return std::nullopt;
  return it->second;
}

void plts_builder::add_transition(state_id src, action_id act, dist target) {
  if (src < 0 || src >= static_cast<int>(sys_.states_.size()))
    throw error("transition from unknown state");
  if (!target.valid()) throw error("transition to invalid distribution");
  for (auto& [s, w] : target.entries())
    if (s < 0 || s >= static_cast<int>(sys_.states_.size()))
      throw error("transition target references unknown state");
  intern_action("tau");
  if (act < 0 || act >= static_cast<int>(sys_.actions_.size()))
    throw error("transition with unknown action");
  sys_.trans_.push_back(transition{src, act, std::move(target)});
}

std::optional<std::vector<state_id>> detect_divergence_cycle(
    const std::vector<std::string>& states,
    const std::vector<transition>& trans) {
  int n = static_cast<int>(states.size());
  std::vector<std::vector<state_id>> succ(n);
  for (auto& t : trans) {
    if (t.act != tau_action) continue;
    for (auto& [s, w] : t.target.entries()) succ[t.src].push_back(s);
  }
  for (auto& v : succ) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  // Iterative DFS, states in index order: the first cycle found is
  // deterministic.
  std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
  std::vector<state_id> parent(n, -1);
  for (state_id root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<state_id, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < succ[u].size()) {
        state_id v = succ[u][next++];
        if (color[v] == 1) {
          std::vector<state_id> cycle{v};
          for (state_id w = u; w != v; w = parent[w]) cycle.push_back(w);
          cycle.push_back(v);
          std::reverse(cycle.begin() + 1, cycle.end());
          return cycle;
        }
        if (color[v] == 0) {
          color[v] = 1;
          parent[v] = u;
          stack.emplace_back(v, 0);
        }
      } else {
        color[u] = 2;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

plts plts_builder::build() {
  if (built_) throw error("plts_builder::build called twice");
  built_ = true;
  if (sys_.states_.empty()) throw error("pLTS has no states");
  if (sys_.actions_.empty()) {
    sys_.actions_.push_back("tau");
    sys_.action_ix_["tau"] = tau_action;
  }
  int n = static_cast<int>(sys_.states_.size());
  int m = static_cast<int>(sys_.actions_.size());
  sys_.targets_.assign(n, std::vector<std::vector<dist>>(m));
  for (auto& t : sys_.trans_) sys_.targets_[t.src][t.act].push_back(t.target);
  sys_.divergence_ = detect_divergence_cycle(sys_.states_, sys_.trans_);
  return std::move(sys_);
}

// ------------------------------------------------------------- refuses

bool refuses(const plts& sys, const dist& d, const std::vector<action_id>& A) {
  for (action_id a : A)
    if (a == tau_action) throw error("refusal set must not contain tau");
  for (auto& [s, w] : d.entries()) {
    if (sys.enables(s, tau_action)) return false;
    for (action_id a : A)
      if (sys.enables(s, a)) return false;
  }
  return true;
}

// ------------------------------------------------------------- parsing

namespace {

struct token {
  std::string text;
  int col;  // 1-based
};

std::vector<token> tokenize_line(const std::string& line) {
  std::vector<token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == ',') {
      out.push_back({",", static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           line[j] != ',' && line[j] != '#')
      ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

bool looks_like_rat(const std::string& s) {
  rat tmp;
  return parse_rat(s, tmp);
}

// Parses "p1 s1 SEP p2 s2 SEP ..." (a bare state name is the point
// distribution) starting at tokens[pos].
dist parse_dist_tokens(const plts* sys, const plts_builder* bld,
                       const std::vector<token>& toks, std::size_t pos,
                       const std::string& sep, int line) {
  auto resolve = [&](const token& t) -> state_id {
    std::optional<state_id> s =
        sys ? sys->find_state(t.text) : bld->find_state(t.text);
    if (!s)
      throw parse_error("reference to undeclared state '" + t.text + "'", line,
                        t.col);
    return *s;
  };
  std::vector<dist::entry> entries;
  while (true) {
    if (pos >= toks.size())
      throw parse_error("expected distribution entry", line,
                        toks.empty() ? 0 : toks.back().col);
    rat p;
    if (parse_rat(toks[pos].text, p)) {
      if (pos + 1 >= toks.size())
        throw parse_error("expected state name after weight", line,
                          toks[pos].col);
      entries.emplace_back(resolve(toks[pos + 1]), p);
      pos += 2;
    } else {
      entries.emplace_back(resolve(toks[pos]), rat_one());
      pos += 1;
    }
    if (pos == toks.size()) break;
    if (toks[pos].text != sep)
      throw parse_error("expected '" + sep + "' between entries", line,
                        toks[pos].col);
    ++pos;
  }
  try {
    return dist::make(std::move(entries));
  } catch (const error& e) {
    throw parse_error(e.what(), line, toks.empty() ? 0 : toks[0].col);
  }
}

}  // namespace

plts parse_plts(const std::string& text) {
  plts_builder bld;
  struct pending {
    token src, act;
    std::vector<token> rest;
    int line;
  };
  std::vector<pending> transitions;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool any_states = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<token> toks = tokenize_line(line);
    if (toks.empty()) continue;
    if (toks[0].text == "states:") {
      if (toks.size() == 1)
        throw parse_error("empty state declaration", lineno, toks[0].col);
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i].text == ",")
          throw parse_error("states are separated by whitespace", lineno,
                            toks[i].col);
        try {
          bld.add_state(toks[i].text);
        } catch (const error& e) {
          throw parse_error(e.what(), lineno, toks[i].col);
        }
      }
      any_states = true;
      continue;
    }
    // Transition: <src> <action> -> <entries>. Targets may reference
    // states declared later, so resolution is deferred.
    if (toks.size() < 3 || toks[2].text != "->")
      throw parse_error("expected 'states:' or '<src> <action> -> ...'",
                        lineno, toks[0].col);
    transitions.push_back(
        {toks[0], toks[1],
         std::vector<token>(toks.begin() + 3, toks.end()), lineno});
  }
  if (!any_states) throw parse_error("no 'states:' declaration", lineno, 0);
  for (auto& p : transitions) {
    auto src = bld.find_state(p.src.text);
    if (!src)
      throw parse_error("reference to undeclared state '" + p.src.text + "'",
                        p.line, p.src.col);
    if (!valid_token(p.act.text) || looks_like_rat(p.act.text))
      throw parse_error("invalid action name '" + p.act.text + "'", p.line,
                        p.act.col);
    action_id act = bld.intern_action(p.act.text);
    dist d = parse_dist_tokens(nullptr, &bld, p.rest, 0, ",", p.line);
    bld.add_transition(*src, act, std::move(d));
  }
  return bld.build();
}

std::string serialize_plts(const plts& sys) {
  std::ostringstream out;
  out << "states:";
  for (state_id s = 0; s < sys.n_states(); ++s)
    out << " " << sys.state_name(s);
  out << "\n";
  for (auto& t : sys.transitions()) {
    out << sys.state_name(t.src) << " " << sys.action_name(t.act) << " ->";
    bool first = true;
    for (auto& [s, w] : t.target.entries()) {
      out << (first ? " " : ", ") << rat_str(w) << " " << sys.state_name(s);
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

dist parse_dist_text(const plts& sys, const std::string& text) {
  std::vector<token> toks = tokenize_line(text);
  if (toks.empty()) throw parse_error("empty distribution", 1, 1);
  return parse_dist_tokens(&sys, nullptr, toks, 0, "+", 1);
}

std::string dist_str(const plts& sys, const dist& d) {
  if (d.is_point()) return sys.state_name(d.entries()[0].first);
  std::string out;
  bool first = true;
  for (auto& [s, w] : d.entries()) {
    if (!first) out += " + ";
    out += rat_str(w) + " " + sys.state_name(s);
    first = false;
  }
  return out;
}

}  // namespace pbisim

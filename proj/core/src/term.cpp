#include "tabulog/term.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <sstream>

#include "tabulog/optable.hpp"

namespace tabulog {

const op_info* infix_op(symbol_id s) {
  static const std::unordered_map<symbol_id, op_info> table = [] {
    std::unordered_map<symbol_id, op_info> t;
    t.emplace(intern(":-"), op_info{1200, op_type::xfx});
    t.emplace(intern(","), op_info{1000, op_type::xfy});
    t.emplace(intern("is"), op_info{700, op_type::xfx});
    t.emplace(intern("<"), op_info{700, op_type::xfx});
    t.emplace(intern("=<"), op_info{700, op_type::xfx});
    t.emplace(intern(">"), op_info{700, op_type::xfx});
    t.emplace(intern(">="), op_info{700, op_type::xfx});
    t.emplace(intern("=:="), op_info{700, op_type::xfx});
    t.emplace(intern("=\\="), op_info{700, op_type::xfx});
    t.emplace(intern("+"), op_info{500, op_type::yfx});
    t.emplace(intern("-"), op_info{500, op_type::yfx});
    t.emplace(intern("*"), op_info{400, op_type::yfx});
    return t;
  }();
  auto it = table.find(s);
  return it == table.end() ? nullptr : &it->second;
}

const op_info* prefix_op(symbol_id s) {
  static const symbol_id minus = intern("-");
  static const op_info neg{200, op_type::fy};
  return s == minus ? &neg : nullptr;
}

std::size_t hash_token(const token& t) {
  std::size_t h = static_cast<std::size_t>(t.k);
  h = h * 0x9e3779b97f4a7c15ull + t.sym;
  h = h * 0x9e3779b97f4a7c15ull + t.idx;
  if (t.k == token::tkind::number) {
    std::size_t nh;
    if (t.num >= std::numeric_limits<std::int64_t>::min() &&
        t.num <= std::numeric_limits<std::int64_t>::max()) {
      nh = std::hash<std::int64_t>{}(t.num.convert_to<std::int64_t>());
    } else {
      nh = std::hash<std::string>{}(t.num.str());
    }
    h = h * 0x9e3779b97f4a7c15ull + nh;
  }
  return h;
}

term term_store::make_atom(symbol_id s) {
  auto it = atom_cache_.find(s);
  if (it != atom_cache_.end()) return it->second;
  nodes_.push_back(term_node{term_kind::atom, s, 0, 0, {}});
  term t(&nodes_.back());
  atom_cache_.emplace(s, t);
  return t;
}

term term_store::make_int(bigint v) {
  nodes_.push_back(term_node{term_kind::integer, 0, 0, std::move(v), {}});
  return term(&nodes_.back());
}

term term_store::make_compound(symbol_id f, std::vector<term> args) {
  assert(!args.empty());
  nodes_.push_back(term_node{term_kind::compound, f, 0, 0, std::move(args)});
  return term(&nodes_.back());
}

term term_store::fresh_var() {
  auto id = static_cast<std::uint32_t>(bindings_.size());
  bindings_.emplace_back();
  nodes_.push_back(term_node{term_kind::variable, 0, id, 0, {}});
  return term(&nodes_.back());
}

term term_store::deref(term t) const {
  while (t.kind() == term_kind::variable) {
    term b = bindings_[t.var_id()];
    if (!b) break;
    t = b;
  }
  return t;
}

void term_store::bind(std::uint32_t var, term t) {
  bindings_[var] = t;
  trail_.push_back(var);
}

bool term_store::unify(term a, term b) {
  std::vector<std::pair<term, term>> agenda{{a, b}};
  while (!agenda.empty()) {
    auto [x, y] = agenda.back();
    agenda.pop_back();
    x = deref(x);
    y = deref(y);
    if (x.same_node(y)) continue;
    if (x.kind() == term_kind::variable) {
      bind(x.var_id(), y);
      continue;
    }
    if (y.kind() == term_kind::variable) {
      bind(y.var_id(), x);
      continue;
    }
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case term_kind::atom:
        if (x.symbol() != y.symbol()) return false;
        break;
      case term_kind::integer:
        if (x.value() != y.value()) return false;
        break;
      case term_kind::compound: {
        if (x.symbol() != y.symbol() || x.arity() != y.arity()) return false;
        for (std::size_t i = x.arity(); i-- > 0;)
          agenda.emplace_back(x.arg(i), y.arg(i));
        break;
      }
      default:
        return false;
    }
  }
  return true;
}

void term_store::undo_to(std::size_t mark) {
  while (trail_.size() > mark) {
    bindings_[trail_.back()] = term();
    trail_.pop_back();
  }
}

namespace {

// Shared frame machinery for the iterative preorder rebuilders.
struct build_frame {
  symbol_id f;
  std::size_t need;
  std::vector<term> args;
};

class term_builder {
 public:
  explicit term_builder(term_store& st) : st_(&st) {}

  void emit(term t) {
    for (;;) {
      if (frames_.empty()) {
        result_ = t;
        return;
      }
      auto& top = frames_.back();
      top.args.push_back(t);
      if (top.args.size() < top.need) return;
      term built = st_->make_compound(top.f, std::move(top.args));
      frames_.pop_back();
      t = built;
    }
  }

  void open(symbol_id f, std::size_t arity) { frames_.push_back({f, arity, {}}); }
  bool done() const { return frames_.empty() && static_cast<bool>(result_); }
  term result() const { return result_; }

 private:
  term_store* st_;
  std::vector<build_frame> frames_;
  term result_;
};

}  // namespace

term term_store::copier::copy(term t) {
  term_builder out(*st_);
  std::vector<term> work{t};
  while (!work.empty()) {
    term cur = st_->deref(work.back());
    work.pop_back();
    switch (cur.kind()) {
      case term_kind::variable: {
        auto [it, fresh] = map_.try_emplace(cur.var_id(), term());
        if (fresh) it->second = st_->fresh_var();
        out.emit(it->second);
        break;
      }
      case term_kind::atom:
      case term_kind::integer:
        out.emit(cur);  // immutable leaves are shared
        break;
      case term_kind::compound:
        out.open(cur.symbol(), cur.arity());
        for (std::size_t i = cur.arity(); i-- > 0;) work.push_back(cur.arg(i));
        break;
    }
  }
  assert(out.done());
  return out.result();
}

void term_store::append_key(
    term t, std::vector<token>& out,
    std::unordered_map<std::uint32_t, std::uint32_t>& var_index) const {
  std::vector<term> work{t};
  while (!work.empty()) {
    term cur = deref(work.back());
    work.pop_back();
    switch (cur.kind()) {
      case term_kind::variable: {
        auto [it, fresh] = var_index.try_emplace(
            cur.var_id(), static_cast<std::uint32_t>(var_index.size()));
        (void)fresh;
        out.push_back(token::make_var(it->second));
        break;
      }
      case term_kind::atom:
        out.push_back(token::make_atom(cur.symbol()));
        break;
      case term_kind::integer:
        out.push_back(token::make_number(cur.value()));
        break;
      case term_kind::compound:
        out.push_back(token::make_functor(
            cur.symbol(), static_cast<std::uint32_t>(cur.arity())));
        for (std::size_t i = cur.arity(); i-- > 0;) work.push_back(cur.arg(i));
        break;
    }
  }
}

variant_key term_store::key_of(term t) const {
  variant_key key;
  std::unordered_map<std::uint32_t, std::uint32_t> var_index;
  append_key(t, key.tokens, var_index);
  return key;
}

term term_store::rebuild(std::span<const token> tokens,
                         std::vector<term>& varmap) {
  term_builder out(*this);
  for (const auto& tok : tokens) {
    switch (tok.k) {
      case token::tkind::var:
        while (varmap.size() <= tok.idx) varmap.push_back(fresh_var());
        out.emit(varmap[tok.idx]);
        break;
      case token::tkind::atom:
        out.emit(make_atom(tok.sym));
        break;
      case token::tkind::number:
        out.emit(make_int(tok.num));
        break;
      case token::tkind::functor:
        out.open(tok.sym, tok.idx);
        break;
    }
  }
  assert(out.done());
  return out.result();
}

namespace {

bool unquoted_ok(const std::string& s) {
  if (s.empty()) return false;
  auto lower_alnum = [](const std::string& t) {
    if (!(t[0] >= 'a' && t[0] <= 'z')) return false;
    for (char c : t)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        return false;
    return true;
  };
  auto symbolic = [](const std::string& t) {
    static const std::string chars = "+-*/\\^<>=~:.?@#&$";
    for (char c : t)
      if (chars.find(c) == std::string::npos) return false;
    return true;
  };
  return lower_alnum(s) || symbolic(s);
}

}  // namespace

std::string atom_text(symbol_id s, bool quoted) {
  const std::string& name = symbol_name(s);
  if (!quoted || unquoted_ok(name)) return name;
  std::string out = "'";
  for (char c : name) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "'";
  return out;
}

void term_writer::write(std::ostream& os, term t) {
  // Work items are either literal text or a term with the maximum operator
  // priority printable at its position without parentheses.
  struct witem {
    term t;
    int maxp = 0;
    std::string lit;
    bool is_lit = false;
  };
  auto lit = [](std::string s) { return witem{term(), 0, std::move(s), true}; };
  auto sub = [](term t, int maxp) { return witem{t, maxp, {}, false}; };

  std::vector<witem> work;
  work.push_back(sub(t, 1200));
  while (!work.empty()) {
    witem w = std::move(work.back());
    work.pop_back();
    if (w.is_lit) {
      os << w.lit;
      continue;
    }
    term cur = st_->deref(w.t);
    switch (cur.kind()) {
      case term_kind::variable: {
        auto [it, fresh] = names_.try_emplace(
            cur.var_id(), static_cast<std::uint32_t>(names_.size()));
        (void)fresh;
        os << opts_.var_prefix << it->second;
        break;
      }
      case term_kind::atom:
        os << atom_text(cur.symbol(), opts_.quoted);
        break;
      case term_kind::integer:
        os << cur.value();
        break;
      case term_kind::compound: {
        const op_info* in = cur.arity() == 2 ? infix_op(cur.symbol()) : nullptr;
        const op_info* pre = cur.arity() == 1 ? prefix_op(cur.symbol()) : nullptr;
        if (in) {
          bool paren = in->priority > w.maxp;
          int lp = in->priority - (in->type == op_type::yfx ? 0 : 1);
          int rp = in->priority - (in->type == op_type::xfy ? 0 : 1);
          const std::string& name = symbol_name(cur.symbol());
          std::string sep = name == "," ? ", " : " " + name + " ";
          if (paren) work.push_back(lit(")"));
          work.push_back(sub(cur.arg(1), rp));
          work.push_back(lit(std::move(sep)));
          work.push_back(sub(cur.arg(0), lp));
          if (paren) work.push_back(lit("("));
          break;
        }
        if (pre) {
          bool paren = pre->priority > w.maxp;
          // Keep "- 5" from re-reading as the literal -5.
          term operand = st_->deref(cur.arg(0));
          bool space = operand.kind() == term_kind::integer;
          if (paren) work.push_back(lit(")"));
          work.push_back(sub(cur.arg(0), pre->priority));
          work.push_back(lit(space ? "- " : "-"));
          if (paren) work.push_back(lit("("));
          break;
        }
        os << atom_text(cur.symbol(), opts_.quoted) << '(';
        work.push_back(lit(")"));
        for (std::size_t i = cur.arity(); i-- > 0;) {
          work.push_back(sub(cur.arg(i), 999));
          if (i > 0) work.push_back(lit(", "));
        }
        break;
      }
    }
  }
}

std::string term_writer::str(term t) {
  std::ostringstream os;
  write(os, t);
  return os.str();
}

std::string to_display(const term_store& st, term t) {
  return term_writer(st).str(t);
}

}  // namespace tabulog

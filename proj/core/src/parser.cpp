#include "tabulog/parser.hpp"

#include <cctype>
#include <optional>
#include <unordered_map>

#include "tabulog/optable.hpp"

namespace tabulog {
namespace {

bool symbolic_char(char c) {
  static const std::string chars = "+-*/\\^<>=~:.?@#&$";
  return chars.find(c) != std::string::npos;
}

struct src_token {
  enum class type : std::uint8_t {
    atom,       // name or symbolic run or quoted, also ","
    variable,   // including "_"
    integer,
    lparen,
    rparen,
    end_clause,
    eof
  };
  type t = type::eof;
  std::string text;
  bigint num;
  int line = 1;
  int col = 1;
};

class lexer {
 public:
  explicit lexer(std::string_view text) : text_(text) { advance(); }

  const src_token& peek() const { return cur_; }
  src_token take() {
    prev_ = cur_;  // copy before the move: operand_position reads it
    src_token t = std::move(cur_);
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, int line, int col) const {
    throw parse_error(msg, line, col);
  }

  char at(std::size_t i) const { return i < text_.size() ? text_[i] : '\0'; }
  bool done() const { return pos_ >= text_.size(); }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_layout() {
    while (!done()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (c == '%') {
        while (!done() && text_[pos_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  // A '-' starts a negative literal only when adjacent to digits in a
  // position where an operand is expected; "1 - 2" keeps the operator.
  bool operand_position() const {
    switch (prev_.t) {
      case src_token::type::eof:
      case src_token::type::lparen:
      case src_token::type::end_clause:
        return true;
      case src_token::type::atom:
        return infix_op(intern(prev_.text)) != nullptr ||
               prefix_op(intern(prev_.text)) != nullptr ||
               prev_.text == ",";
      default:
        return false;
    }
  }

  void advance() {
    skip_layout();
    src_token t;
    t.line = line_;
    t.col = col_;
    if (done()) {
      t.t = src_token::type::eof;
      cur_ = std::move(t);
      return;
    }
    char c = text_[pos_];
    if (c == '(') {
      bump();
      t.t = src_token::type::lparen;
    } else if (c == ')') {
      bump();
      t.t = src_token::type::rparen;
    } else if (c == ',') {
      bump();
      t.t = src_token::type::atom;
      t.text = ",";
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.t = src_token::type::integer;
      std::string digits;
      while (!done() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits += text_[pos_];
        bump();
      }
      t.num = bigint(digits);
    } else if (c == '-' && std::isdigit(static_cast<unsigned char>(at(pos_ + 1))) &&
               operand_position()) {
      bump();
      std::string digits = "-";
      while (!done() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits += text_[pos_];
        bump();
      }
      t.t = src_token::type::integer;
      t.num = bigint(digits);
    } else if (c == '\'') {
      bump();
      std::string name;
      for (;;) {
        if (done()) fail("unterminated quoted atom", t.line, t.col);
        char q = text_[pos_];
        if (q == '\n') fail("newline in quoted atom", line_, col_);
        if (q == '\'') {
          bump();
          if (!done() && text_[pos_] == '\'') {  // doubled quote
            name += '\'';
            bump();
            continue;
          }
          break;
        }
        if (q == '\\') {
          bump();
          if (done()) fail("unterminated escape", line_, col_);
          char e = text_[pos_];
          bump();
          switch (e) {
            case 'n': name += '\n'; break;
            case 't': name += '\t'; break;
            case '\\': name += '\\'; break;
            case '\'': name += '\''; break;
            default:
              fail(std::string("unknown escape \\") + e, line_, col_);
          }
          continue;
        }
        name += q;
        bump();
      }
      t.t = src_token::type::atom;
      t.text = std::move(name);
    } else if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
      std::string name;
      while (!done() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                         text_[pos_] == '_')) {
        name += text_[pos_];
        bump();
      }
      t.t = src_token::type::variable;
      t.text = std::move(name);
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::string name;
      while (!done() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                         text_[pos_] == '_')) {
        name += text_[pos_];
        bump();
      }
      t.t = src_token::type::atom;
      t.text = std::move(name);
    } else if (symbolic_char(c)) {
      // A '.' followed by layout, a comment, or the end of input closes the
      // clause; otherwise it joins the symbolic run.
      if (c == '.') {
        char n = at(pos_ + 1);
        if (n == '\0' || std::isspace(static_cast<unsigned char>(n)) || n == '%') {
          bump();
          t.t = src_token::type::end_clause;
          cur_ = std::move(t);
          return;
        }
      }
      std::string name;
      while (!done() && symbolic_char(text_[pos_])) {
        if (text_[pos_] == '.') {
          char n = at(pos_ + 1);
          if (n == '\0' || std::isspace(static_cast<unsigned char>(n)) ||
              n == '%')
            break;
        }
        name += text_[pos_];
        bump();
      }
      t.t = src_token::type::atom;
      t.text = std::move(name);
    } else {
      fail(std::string("unexpected character '") + c + "'", line_, col_);
    }
    cur_ = std::move(t);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  src_token cur_;
  src_token prev_;
};

class term_parser {
 public:
  term_parser(std::string_view text, term_store& st) : lex_(text), st_(st) {}

  bool at_eof() const { return lex_.peek().t == src_token::type::eof; }
  const src_token& peek() const { return lex_.peek(); }

  void reset_vars() {
    vars_.clear();
    var_order_.clear();
  }
  const std::vector<std::pair<std::string, term>>& var_order() const {
    return var_order_;
  }

  term parse(int maxp) {
    auto [left, lp] = parse_primary(maxp);
    for (;;) {
      const src_token& t = lex_.peek();
      if (t.t != src_token::type::atom) break;
      const op_info* op = infix_op(intern(t.text));
      if (op == nullptr || op->priority > maxp) break;
      int left_max = op->priority - (op->type == op_type::yfx ? 0 : 1);
      if (lp > left_max) break;
      src_token taken = lex_.take();
      int right_max = op->priority - (op->type == op_type::xfy ? 0 : 1);
      term right = parse(right_max);
      left = st_.make_compound(intern(taken.text), {left, right});
      lp = op->priority;
    }
    return left;
  }

  void expect_end_clause() {
    src_token t = lex_.take();
    if (t.t != src_token::type::end_clause)
      throw parse_error("expected '.' to end the clause" + describe(t), t.line,
                        t.col);
  }

  src_token take() { return lex_.take(); }

 private:
  static std::string describe(const src_token& t) {
    switch (t.t) {
      case src_token::type::eof:
        return ", found end of input";
      case src_token::type::atom:
      case src_token::type::variable:
        return ", found '" + t.text + "'";
      case src_token::type::integer:
        return ", found '" + t.num.str() + "'";
      case src_token::type::lparen:
        return ", found '('";
      case src_token::type::rparen:
        return ", found ')'";
      case src_token::type::end_clause:
        return ", found '.'";
    }
    return "";
  }

  term var_for(const std::string& name) {
    if (name == "_") return st_.fresh_var();
    auto it = vars_.find(name);
    if (it != vars_.end()) return it->second;
    term v = st_.fresh_var();
    vars_.emplace(name, v);
    var_order_.emplace_back(name, v);
    return v;
  }

  // Returns the term and the priority it carries (operators keep their
  // priority; everything else is 0).
  std::pair<term, int> parse_primary(int maxp) {
    src_token t = lex_.take();
    switch (t.t) {
      case src_token::type::integer:
        return {st_.make_int(t.num), 0};
      case src_token::type::variable:
        return {var_for(t.text), 0};
      case src_token::type::lparen: {
        term inner = parse(1200);
        src_token close = lex_.take();
        if (close.t != src_token::type::rparen)
          throw parse_error("expected ')'" + describe(close), close.line,
                            close.col);
        return {inner, 0};
      }
      case src_token::type::atom: {
        if (lex_.peek().t == src_token::type::lparen) {
          lex_.take();
          std::vector<term> args;
          for (;;) {
            args.push_back(parse(999));
            src_token sep = lex_.take();
            if (sep.t == src_token::type::rparen) break;
            if (sep.t == src_token::type::atom && sep.text == ",") continue;
            throw parse_error("expected ',' or ')' in argument list" +
                                  describe(sep),
                              sep.line, sep.col);
          }
          return {st_.make_compound(intern(t.text), std::move(args)), 0};
        }
        const op_info* pre = prefix_op(intern(t.text));
        if (pre != nullptr && pre->priority <= maxp && starts_term()) {
          term operand = parse(pre->priority);
          return {st_.make_compound(intern(t.text), {operand}), pre->priority};
        }
        return {st_.make_atom(intern(t.text)), 0};
      }
      default:
        throw parse_error("expected a term" + describe(t), t.line, t.col);
    }
  }

  bool starts_term() const {
    switch (lex_.peek().t) {
      case src_token::type::integer:
      case src_token::type::variable:
      case src_token::type::lparen:
        return true;
      case src_token::type::atom:
        return lex_.peek().text != ",";
      default:
        return false;
    }
  }

  lexer lex_;
  term_store& st_;
  std::unordered_map<std::string, term> vars_;
  std::vector<std::pair<std::string, term>> var_order_;
};

// Splits nested comma conjunctions into a flat goal list, left to right.
std::vector<term> flatten_conj(const term_store& st, term t) {
  static const symbol_id comma = intern(",");
  std::vector<term> goals;
  std::vector<term> pending{t};
  while (!pending.empty()) {
    term cur = st.deref(pending.back());
    pending.pop_back();
    if (cur.kind() == term_kind::compound && cur.symbol() == comma &&
        cur.arity() == 2) {
      pending.push_back(cur.arg(1));
      pending.push_back(cur.arg(0));
    } else {
      goals.push_back(cur);
    }
  }
  return goals;
}

void read_table_directive(term_parser& p, program& prog, int line, int col) {
  src_token kw = p.take();
  if (kw.t != src_token::type::atom || kw.text != "table") {
    std::string what =
        kw.t == src_token::type::atom ? " ':- " + kw.text + "'" : "";
    throw parse_error("unsupported directive" + what, line, col);
  }
  src_token name = p.take();
  if (name.t != src_token::type::atom || name.text == ",")
    throw parse_error("expected a predicate name in table directive",
                      name.line, name.col);
  src_token slash = p.take();
  if (slash.t != src_token::type::atom || slash.text != "/")
    throw parse_error("expected '/' in table directive", slash.line,
                      slash.col);
  src_token arity = p.take();
  if (arity.t != src_token::type::integer || arity.num < 0)
    throw parse_error("expected an arity in table directive", arity.line,
                      arity.col);
  p.expect_end_clause();
  prog.declare_table(intern(name.text),
                     arity.num.convert_to<std::uint32_t>());
}

}  // namespace

program parse_program(std::string_view text) {
  program prog;
  term_store scratch;
  term_parser p(text, scratch);
  static const symbol_id neck = intern(":-");

  while (!p.at_eof()) {
    p.reset_vars();
    const src_token& first = p.peek();
    if (first.t == src_token::type::atom && first.text == ":-") {
      int line = first.line, col = first.col;
      p.take();
      read_table_directive(p, prog, line, col);
      continue;
    }
    int line = first.line, col = first.col;
    term t = p.parse(1200);
    p.expect_end_clause();

    term head = t;
    std::vector<term> goals;
    term root = scratch.deref(t);
    if (root.kind() == term_kind::compound && root.symbol() == neck &&
        root.arity() == 2) {
      head = root.arg(0);
      goals = flatten_conj(scratch, root.arg(1));
    }
    head = scratch.deref(head);
    if (head.kind() != term_kind::atom && head.kind() != term_kind::compound)
      throw parse_error("clause head must be an atom or a compound", line,
                        col);

    clause_tmpl c;
    std::unordered_map<std::uint32_t, std::uint32_t> var_index;
    scratch.append_key(head, c.head, var_index);
    c.body.reserve(goals.size());
    for (term g : goals) {
      c.body.emplace_back();
      scratch.append_key(g, c.body.back(), var_index);
    }
    c.var_count = static_cast<std::uint32_t>(var_index.size());
    prog.add_clause(std::move(c));
  }
  prog.finalize();
  return prog;
}

query parse_query(std::string_view text, term_store& st) {
  term_parser p(text, st);
  if (p.at_eof()) throw parse_error("empty query", 1, 1);
  term t = p.parse(1200);
  p.expect_end_clause();
  if (!p.at_eof()) {
    const src_token& extra = p.peek();
    throw parse_error("unexpected text after query", extra.line, extra.col);
  }
  query q;
  q.goals = flatten_conj(st, t);
  q.vars = p.var_order();
  return q;
}

}  // namespace tabulog

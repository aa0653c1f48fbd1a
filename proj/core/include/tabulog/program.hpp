#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "tabulog/term.hpp"

namespace tabulog {

// One clause as a canonical token template. Head and body goals share one
// variable numbering, so rebuilding them through one varmap re-creates the
// clause's variable sharing with fresh variables.
struct clause_tmpl {
  std::vector<token> head;
  std::vector<std::vector<token>> body;  // one token run per goal
  std::uint32_t var_count = 0;

  pred_key head_key() const {
    const token& h = head.front();
    return h.k == token::tkind::functor ? make_pred_key(h.sym, h.idx)
                                        : make_pred_key(h.sym, 0);
  }
};

struct pred_def {
  symbol_id name = 0;
  std::uint32_t arity = 0;
  bool tabled = false;
  std::vector<clause_tmpl> clauses;

  // First-argument index: clause positions by the principal token of the
  // head's first argument, plus the clauses whose first argument is a
  // variable. Built by program::finalize.
  std::unordered_map<token, std::vector<std::uint32_t>, token_hash> by_first;
  std::vector<std::uint32_t> var_first;

  // Candidate clause positions for a call whose dereferenced first argument
  // starts with `principal` (nullptr: variable or arity 0 - all clauses).
  void candidates(const token* principal, std::vector<std::uint32_t>& out) const;
};

// An immutable rule base: clauses grouped by predicate indicator plus the
// set of tabled indicators. Plain value data; shareable across engines.
class program {
 public:
  void declare_table(symbol_id name, std::uint32_t arity);
  void add_clause(clause_tmpl c);

  // Appends the other program's clauses after this one's, per predicate,
  // and unions the tabled sets.
  void merge(program other);

  // Builds clause indices. Idempotent; called by parse_program.
  void finalize();

  // Tabled indicators always resolve, possibly with no clauses.
  const pred_def* find(pred_key k) const;
  bool tabled(pred_key k) const;

  const std::unordered_map<pred_key, pred_def>& predicates() const {
    return preds_;
  }

 private:
  std::unordered_map<pred_key, pred_def> preds_;
};

// Renders one clause in source syntax with canonical variable names.
std::string format_clause(const clause_tmpl& c);

}  // namespace tabulog

#include "tabulog/program.hpp"

#include <algorithm>
#include <stdexcept>

#include "tabulog/errors.hpp"

namespace tabulog {

void pred_def::candidates(const token* principal,
                          std::vector<std::uint32_t>& out) const {
  out.clear();
  if (principal == nullptr) {
    out.resize(clauses.size());
    for (std::uint32_t i = 0; i < clauses.size(); ++i) out[i] = i;
    return;
  }
  auto it = by_first.find(*principal);
  const std::vector<std::uint32_t>* keyed =
      it == by_first.end() ? nullptr : &it->second;
  if (keyed == nullptr) {
    out = var_first;
    return;
  }
  // Both lists are ascending clause positions; merge preserves source order.
  out.reserve(keyed->size() + var_first.size());
  std::merge(keyed->begin(), keyed->end(), var_first.begin(), var_first.end(),
             std::back_inserter(out));
}

void program::declare_table(symbol_id name, std::uint32_t arity) {
  auto& def = preds_[make_pred_key(name, arity)];
  def.name = name;
  def.arity = arity;
  def.tabled = true;
}

void program::add_clause(clause_tmpl c) {
  const token& h = c.head.front();
  if (h.k != token::tkind::atom && h.k != token::tkind::functor)
    throw error("clause head must be an atom or a compound");
  pred_key k = c.head_key();
  auto& def = preds_[k];
  def.name = pred_key_name(k);
  def.arity = pred_key_arity(k);
  def.clauses.push_back(std::move(c));
}

void program::merge(program other) {
  for (auto& [k, def] : other.preds_) {
    auto& mine = preds_[k];
    mine.name = def.name;
    mine.arity = def.arity;
    mine.tabled = mine.tabled || def.tabled;
    for (auto& c : def.clauses) mine.clauses.push_back(std::move(c));
  }
  finalize();
}

void program::finalize() {
  for (auto& [k, def] : preds_) {
    def.by_first.clear();
    def.var_first.clear();
    if (def.arity == 0) continue;
    for (std::uint32_t i = 0; i < def.clauses.size(); ++i) {
      // head tokens: functor, then the first argument's principal token.
      const token& first = def.clauses[i].head[1];
      if (first.k == token::tkind::var)
        def.var_first.push_back(i);
      else
        def.by_first[first].push_back(i);
    }
  }
}

const pred_def* program::find(pred_key k) const {
  auto it = preds_.find(k);
  return it == preds_.end() ? nullptr : &it->second;
}

bool program::tabled(pred_key k) const {
  auto it = preds_.find(k);
  return it != preds_.end() && it->second.tabled;
}

std::string format_clause(const clause_tmpl& c) {
  term_store st;
  std::vector<term> varmap;
  term head = st.rebuild(c.head, varmap);
  term shown = head;
  if (!c.body.empty()) {
    term body = st.rebuild(c.body.back(), varmap);
    for (std::size_t i = c.body.size() - 1; i-- > 0;) {
      term g = st.rebuild(c.body[i], varmap);
      body = st.make_compound(",", {g, body});
    }
    shown = st.make_compound(":-", {head, body});
  }
  return term_writer(st).str(shown) + ".";
}

}  // namespace tabulog

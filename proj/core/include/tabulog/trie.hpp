#pragma once

#include <algorithm>
#include <memory>
#include <unordered_map>
#include <vector>

#include "tabulog/term.hpp"

namespace tabulog {

// Prefix tree over canonical token sequences. Each distinct variant key gets
// exactly one leaf; children and leaves keep insertion order, so enumeration
// is deterministic for a fixed insertion history.
template <class Payload>
class term_trie {
 public:
  struct node {
    node* parent = nullptr;
    token edge;  // token on the edge from parent; unset on the root
    std::vector<std::pair<token, std::unique_ptr<node>>> children;
    std::unordered_map<token, std::size_t, token_hash> child_index;
    bool leaf = false;
    std::size_t ordinal = 0;  // position in insertion order, leaves only
    Payload payload{};
  };

  term_trie() = default;
  term_trie(const term_trie&) = delete;
  term_trie& operator=(const term_trie&) = delete;

  // Returns the leaf for the key and whether it was newly created.
  std::pair<node*, bool> insert(const variant_key& key) {
    node* cur = &root_;
    for (const auto& tok : key.tokens) {
      auto it = cur->child_index.find(tok);
      if (it != cur->child_index.end()) {
        cur = cur->children[it->second].second.get();
        continue;
      }
      auto child = std::make_unique<node>();
      child->parent = cur;
      child->edge = tok;
      cur->child_index.emplace(tok, cur->children.size());
      cur->children.emplace_back(tok, std::move(child));
      cur = cur->children.back().second.get();
    }
    bool was_new = !cur->leaf;
    if (was_new) {
      cur->leaf = true;
      cur->ordinal = leaves_.size();
      leaves_.push_back(cur);
    }
    return {cur, was_new};
  }

  // Leaf for the key, or nullptr if the key was never inserted.
  node* lookup(const variant_key& key) {
    node* cur = &root_;
    for (const auto& tok : key.tokens) {
      auto it = cur->child_index.find(tok);
      if (it == cur->child_index.end()) return nullptr;
      cur = cur->children[it->second].second.get();
    }
    return cur->leaf ? cur : nullptr;
  }
  const node* lookup(const variant_key& key) const {
    return const_cast<term_trie*>(this)->lookup(key);
  }

  std::size_t size() const { return leaves_.size(); }
  bool empty() const { return leaves_.empty(); }
  node* leaf(std::size_t i) { return leaves_[i]; }
  const node* leaf(std::size_t i) const { return leaves_[i]; }

  // Rebuilds the canonical key from the leaf's path.
  variant_key key_at(const node* leaf) const {
    variant_key key;
    for (const node* n = leaf; n->parent != nullptr; n = n->parent)
      key.tokens.push_back(n->edge);
    std::reverse(key.tokens.begin(), key.tokens.end());
    return key;
  }

  // Keys of all leaves in insertion order.
  std::vector<variant_key> enumerate() const {
    std::vector<variant_key> out;
    out.reserve(leaves_.size());
    for (const node* l : leaves_) out.push_back(key_at(l));
    return out;
  }

  void clear() {
    root_.children.clear();
    root_.child_index.clear();
    root_.leaf = false;
    leaves_.clear();
  }

 private:
  node root_;
  std::vector<node*> leaves_;
};

}  // namespace tabulog

#include "tabulog/trie.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "support/oracles.hpp"

namespace tb = tabulog;

namespace {

tb::variant_key key(tb::term_store& st, tb::term t) { return st.key_of(t); }

TEST(trie, insert_then_lookup) {
  tb::term_store st;
  tb::term_trie<int> tr;
  tb::variant_key k1 = key(st, st.make_compound("f", {st.make_atom("a")}));
  tb::variant_key k2 = key(st, st.make_compound("f", {st.make_atom("b")}));

  auto [leaf1, new1] = tr.insert(k1);
  EXPECT_TRUE(new1);
  leaf1->payload = 7;
  EXPECT_EQ(tr.size(), 1u);

  EXPECT_EQ(tr.lookup(k1), leaf1);
  EXPECT_EQ(tr.lookup(k1)->payload, 7);
  EXPECT_EQ(tr.lookup(k2), nullptr);
}

TEST(trie, duplicate_insert_is_idempotent) {
  tb::term_store st;
  tb::term_trie<int> tr;
  tb::term x = st.fresh_var();
  tb::term y = st.fresh_var();
  tb::variant_key k1 = key(st, st.make_compound("p", {x, y, x}));
  // A variant with different variables has the same key.
  tb::term a = st.fresh_var();
  tb::term b = st.fresh_var();
  tb::variant_key k2 = key(st, st.make_compound("p", {a, b, a}));

  auto [leaf1, new1] = tr.insert(k1);
  leaf1->payload = 1;
  auto [leaf2, new2] = tr.insert(k2);
  EXPECT_TRUE(new1);
  EXPECT_FALSE(new2);
  EXPECT_EQ(leaf1, leaf2);
  EXPECT_EQ(leaf2->payload, 1);
  EXPECT_EQ(tr.size(), 1u);
}

TEST(trie, prefix_keys_are_distinct_entries) {
  tb::term_store st;
  tb::term_trie<int> tr;
  // The key of f(a) is a proper prefix of the key of f(a) wrapped deeper;
  // a shorter key must form its own leaf, not clash with the longer one.
  tb::variant_key ka = key(st, st.make_atom("f"));
  tb::variant_key kfa = key(st, st.make_compound("f", {st.make_atom("f")}));
  tr.insert(kfa);
  EXPECT_EQ(tr.lookup(ka), nullptr);
  auto [leaf, was_new] = tr.insert(ka);
  EXPECT_TRUE(was_new);
  EXPECT_EQ(tr.size(), 2u);
  EXPECT_NE(tr.lookup(ka), tr.lookup(kfa));
}

TEST(trie, key_at_reconstructs_the_inserted_key) {
  tb::term_store st;
  tb::term_trie<int> tr;
  std::mt19937 rng(21);
  for (int i = 0; i < 100; ++i) {
    std::vector<tb::term> pool;
    tb::variant_key k = st.key_of(tsup::random_term(st, rng, 4, pool));
    auto [leaf, was_new] = tr.insert(k);
    EXPECT_EQ(tr.key_at(leaf), k) << "iteration " << i;
  }
}

TEST(trie, enumerate_lists_distinct_variants_in_first_insertion_order) {
  tb::term_store st;
  tb::term_trie<int> tr;
  auto atom = [&](const char* n) { return key(st, st.make_atom(n)); };
  tr.insert(atom("c"));
  tr.insert(atom("a"));
  tr.insert(atom("c"));
  tr.insert(atom("b"));
  tr.insert(atom("a"));
  auto keys = tr.enumerate();
  ASSERT_EQ(keys.size(), 3u);
  EXPECT_EQ(keys[0], atom("c"));
  EXPECT_EQ(keys[1], atom("a"));
  EXPECT_EQ(keys[2], atom("b"));
  EXPECT_EQ(tr.leaf(1)->ordinal, 1u);
}

TEST(trie, clear_empties_everything) {
  tb::term_store st;
  tb::term_trie<int> tr;
  tr.insert(key(st, st.make_atom("a")));
  tr.clear();
  EXPECT_TRUE(tr.empty());
  EXPECT_EQ(tr.lookup(key(st, st.make_atom("a"))), nullptr);
  auto [leaf, was_new] = tr.insert(key(st, st.make_atom("a")));
  EXPECT_TRUE(was_new);
  EXPECT_EQ(tr.size(), 1u);
}

// Random multisets: insertion becomes idempotent per variant class, and
// enumeration equals the distinct variants in first-occurrence order.
TEST(trie, random_multisets_behave_like_an_ordered_set_of_variants) {
  std::mt19937 rng(22);
  for (int round = 0; round < 50; ++round) {
    tb::term_store st;
    tb::term_trie<int> tr;
    std::vector<tb::variant_key> inserted;
    std::set<std::vector<std::size_t>> dummy;  // silence unused-include lint
    (void)dummy;

    int n = 1 + static_cast<int>(rng() % 60);
    std::vector<tb::variant_key> expected_order;
    for (int i = 0; i < n; ++i) {
      tb::variant_key k;
      if (!inserted.empty() && rng() % 3 == 0) {
        k = inserted[rng() % inserted.size()];  // force duplicates
      } else {
        std::vector<tb::term> pool;
        k = st.key_of(tsup::random_term(st, rng, 3, pool));
      }
      bool seen = false;
      for (const auto& e : expected_order) seen = seen || e == k;
      auto [leaf, was_new] = tr.insert(k);
      EXPECT_EQ(was_new, !seen) << "round " << round << " insert " << i;
      if (!seen) expected_order.push_back(k);
      inserted.push_back(k);
      EXPECT_EQ(tr.size(), expected_order.size());
    }
    auto keys = tr.enumerate();
    ASSERT_EQ(keys.size(), expected_order.size()) << "round " << round;
    for (std::size_t i = 0; i < keys.size(); ++i)
      EXPECT_EQ(keys[i], expected_order[i]) << "round " << round << " pos " << i;
  }
}

}  // namespace

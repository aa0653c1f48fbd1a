#include "tabulog/bench.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace tabulog {
namespace {

[[noreturn]] void size_fail(std::string_view name, std::int64_t size,
                            std::int64_t lo, std::int64_t hi) {
  std::ostringstream os;
  os << "bench '" << name << "': size " << size << " out of range [" << lo
     << ", " << hi << "]";
  throw error(os.str());
}

void check_size(std::string_view name, std::int64_t size, std::int64_t lo,
                std::int64_t hi) {
  if (size < lo || size > hi) size_fail(name, size, lo, hi);
}

std::string fib_program(std::int64_t) {
  return ":- table fib/2.\n"
         "fib(0, 0).\n"
         "fib(1, 1).\n"
         "fib(N, F) :- N > 1, N1 is N - 1, N2 is N - 2, fib(N1, F1), "
         "fib(N2, F2), F is F1 + F2.\n";
}

bigint fib_oracle(std::int64_t n) {
  bigint a = 0, b = 1;
  for (std::int64_t i = 0; i < n; ++i) {
    bigint c = a + b;
    a = b;
    b = c;
  }
  return a;
}

std::string recognize_program(std::int64_t n) {
  std::ostringstream os;
  os << ":- table s/2.\n"
     << "s(I, K) :- s(I, J), s(J, K).\n"
     << "s(I, K) :- w(I, K).\n";
  for (std::int64_t i = 0; i < n; ++i)
    os << "w(" << i << ", " << i + 1 << ").\n";
  return os.str();
}

std::string cons_list(std::int64_t n) {
  std::ostringstream os;
  for (std::int64_t i = 0; i < n; ++i) os << "cons(" << i << ", ";
  os << "nil";
  for (std::int64_t i = 0; i < n; ++i) os << ")";
  return os.str();
}

std::string cons_list_reversed(std::int64_t n) {
  std::ostringstream os;
  for (std::int64_t i = n; i-- > 0;) os << "cons(" << i << ", ";
  os << "nil";
  for (std::int64_t i = 0; i < n; ++i) os << ")";
  return os.str();
}

std::string nreverse_program(std::int64_t) {
  return ":- table nrev/2.\n"
         ":- table app/3.\n"
         "nrev(nil, nil).\n"
         "nrev(cons(H, T), R) :- nrev(T, RT), app(RT, cons(H, nil), R).\n"
         "app(nil, L, L).\n"
         "app(cons(H, T), L, cons(H, TR)) :- app(T, L, TR).\n";
}

std::string shuttle_program(std::int64_t n) {
  std::ostringstream os;
  os << ":- table sh/1.\n"
     << "sh(0).\n"
     << "sh(X) :- sh(Y), X is Y + 1, X =< " << n << ".\n"
     << "sh(X) :- sh(Y), X is Y - 1, X >= -" << n << ".\n";
  return os.str();
}

std::string pingpong_program(std::int64_t n) {
  std::ostringstream os;
  os << ":- table ping/1.\n"
     << ":- table pong/1.\n"
     << "ping(0).\n"
     << "ping(X) :- pong(Y), X is Y + 1, X =< " << n << ".\n"
     << "pong(X) :- ping(Y), X is Y + 1, X =< " << n << ".\n";
  return os.str();
}

// Graph benchmarks share the edge relation name e/1..; reachability counted
// by breadth-first search for the expected answer count.
std::int64_t closure_pair_count(std::int64_t nodes,
                                const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(nodes);
  for (auto [a, b] : edges) adj[a].push_back(b);
  std::int64_t total = 0;
  std::vector<int> seen(nodes, -1);
  for (int s = 0; s < nodes; ++s) {
    std::queue<int> q;
    q.push(s);
    seen[s] = s;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (seen[v] == s) continue;
        seen[v] = s;
        ++total;  // s reaches v (s itself only counts via a cycle)
        q.push(v);
      }
    }
  }
  return total;
}

std::string edges_text(const std::vector<std::pair<int, int>>& edges) {
  std::ostringstream os;
  for (auto [a, b] : edges) os << "e(n" << a << ", n" << b << ").\n";
  return os.str();
}

std::vector<std::pair<int, int>> chain_edges(std::int64_t n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return edges;
}

// Layered pyramid: layer i holds i+1 nodes; each node feeds the two below.
std::pair<std::int64_t, std::vector<std::pair<int, int>>> pyramid_graph(
    std::int64_t layers) {
  auto id = [](std::int64_t i, std::int64_t j) {
    return static_cast<int>(i * (i + 1) / 2 + j);
  };
  std::vector<std::pair<int, int>> edges;
  for (std::int64_t i = 0; i + 1 < layers; ++i) {
    for (std::int64_t j = 0; j <= i; ++j) {
      edges.emplace_back(id(i, j), id(i + 1, j));
      edges.emplace_back(id(i, j), id(i + 1, j + 1));
    }
  }
  return {layers * (layers + 1) / 2, std::move(edges)};
}

// Complete binary tree of the given depth, nodes 1..2^depth-1 renumbered
// from 0.
std::pair<std::int64_t, std::vector<std::pair<int, int>>> btree_graph(
    std::int64_t depth) {
  std::int64_t nodes = (std::int64_t(1) << depth) - 1;
  std::vector<std::pair<int, int>> edges;
  for (std::int64_t k = 1; 2 * k + 1 <= nodes; ++k) {
    edges.emplace_back(static_cast<int>(k - 1), static_cast<int>(2 * k - 1));
    edges.emplace_back(static_cast<int>(k - 1), static_cast<int>(2 * k));
  }
  return {nodes, std::move(edges)};
}

std::string double_first_program(const std::string& edges) {
  return ":- table p/2.\n"
         "p(X, Y) :- p(X, Z), p(Z, Y).\n"
         "p(X, Y) :- e(X, Y).\n" +
         edges;
}

std::string right_last_program(const std::string& edges) {
  return ":- table p/2.\n"
         "p(X, Y) :- e(X, Z), p(Z, Y).\n"
         "p(X, Y) :- e(X, Y).\n" +
         edges;
}

struct join_data {
  std::vector<std::pair<int, int>> r1, r2, r3;
};

join_data join_relations(std::int64_t n) {
  std::mt19937 rng(static_cast<std::uint32_t>(1042 + n));
  int domain = std::max<int>(4, static_cast<int>(n / 8));
  // n distinct pairs must fit in domain^2, with slack so the fill loop
  // does not crawl near exhaustion.
  while (static_cast<std::int64_t>(domain) * domain < 2 * n) ++domain;
  auto gen = [&](std::vector<std::pair<int, int>>& rel) {
    std::set<std::pair<int, int>> seen;
    std::uniform_int_distribution<int> d(0, domain - 1);
    while (static_cast<std::int64_t>(seen.size()) < n)
      seen.emplace(d(rng), d(rng));
    rel.assign(seen.begin(), seen.end());
  };
  join_data j;
  gen(j.r1);
  gen(j.r2);
  gen(j.r3);
  return j;
}

std::string large_join_program(std::int64_t n) {
  join_data j = join_relations(n);
  std::ostringstream os;
  os << ":- table j/2.\n"
     << "j(X, W) :- r1(X, Y), r2(Y, Z), r3(Z, W).\n";
  for (auto [a, b] : j.r1) os << "r1(x" << a << ", y" << b << ").\n";
  for (auto [a, b] : j.r2) os << "r2(y" << a << ", z" << b << ").\n";
  for (auto [a, b] : j.r3) os << "r3(z" << a << ", w" << b << ").\n";
  return os.str();
}

std::int64_t large_join_expected(std::int64_t n) {
  join_data j = join_relations(n);
  std::set<int> ys;
  std::multimap<int, int> r2_by_y;
  for (auto [y, z] : j.r2) r2_by_y.emplace(y, z);
  std::multimap<int, int> r3_by_z;
  for (auto [z, w] : j.r3) r3_by_z.emplace(z, w);
  std::set<std::pair<int, int>> result;
  for (auto [x, y] : j.r1) {
    auto [zb, ze] = r2_by_y.equal_range(y);
    for (auto it = zb; it != ze; ++it) {
      auto [wb, we] = r3_by_z.equal_range(it->second);
      for (auto jt = wb; jt != we; ++jt) result.emplace(x, jt->second);
    }
  }
  return static_cast<std::int64_t>(result.size());
}

struct bench_case {
  std::string program;
  std::string query;
  std::int64_t expected_answers;
  std::string expected_binding;  // value of the named var, when not empty
  std::string binding_var;
};

bench_case make_case(std::string_view name, std::int64_t size) {
  bench_case c;
  if (name == "fib") {
    check_size(name, size, 0, 5000);
    c.program = fib_program(size);
    c.query = "fib(" + std::to_string(size) + ", F).";
    c.expected_answers = 1;
    c.binding_var = "F";
    c.expected_binding = fib_oracle(size).str();
  } else if (name == "recognize") {
    check_size(name, size, 1, 200);
    c.program = recognize_program(size);
    c.query = "s(0, " + std::to_string(size) + ").";
    c.expected_answers = 1;
  } else if (name == "nreverse") {
    check_size(name, size, 0, 200);
    c.program = nreverse_program(size);
    c.query = "nrev(" + cons_list(size) + ", R).";
    c.expected_answers = 1;
    c.binding_var = "R";
    c.expected_binding = cons_list_reversed(size);
  } else if (name == "shuttle") {
    check_size(name, size, 1, 100000);
    c.program = shuttle_program(size);
    c.query = "sh(X).";
    c.expected_answers = 2 * size + 1;
  } else if (name == "pingpong") {
    check_size(name, size, 0, 100000);
    c.program = pingpong_program(size);
    c.query = "ping(X).";
    c.expected_answers = size / 2 + 1;
  } else if (name == "path_double_first") {
    check_size(name, size, 1, 250);
    c.program = double_first_program(edges_text(chain_edges(size)));
    c.query = "p(X, Y).";
    c.expected_answers = size * (size - 1) / 2;
  } else if (name == "path_right_last_pyramid") {
    check_size(name, size, 1, 45);
    auto [nodes, edges] = pyramid_graph(size);
    c.program = right_last_program(edges_text(edges));
    c.query = "p(X, Y).";
    c.expected_answers = closure_pair_count(nodes, edges);
  } else if (name == "path_right_last_btree") {
    check_size(name, size, 1, 13);
    auto [nodes, edges] = btree_graph(size);
    c.program = right_last_program(edges_text(edges));
    c.query = "p(X, Y).";
    c.expected_answers = closure_pair_count(nodes, edges);
  } else if (name == "large_join") {
    check_size(name, size, 1, 5000);
    c.program = large_join_program(size);
    c.query = "j(X, W).";
    c.expected_answers = large_join_expected(size);
  } else {
    throw error("unknown benchmark '" + std::string(name) + "'");
  }
  return c;
}

std::uint64_t peak_rss_bytes() {
  rusage ru{};
  if (getrusage(RUSAGE_SELF, &ru) != 0) return 0;
  return static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;  // Linux: KiB
}

}  // namespace

std::vector<std::string> bench_names() {
  return {"fib",
          "recognize",
          "nreverse",
          "shuttle",
          "pingpong",
          "path_double_first",
          "path_right_last_pyramid",
          "path_right_last_btree",
          "large_join"};
}

bool is_bench(std::string_view name) {
  auto names = bench_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string bench_program_text(std::string_view name, std::int64_t size) {
  return make_case(name, size).program;
}

std::string bench_query_text(std::string_view name, std::int64_t size) {
  return make_case(name, size).query;
}

bench_report run_bench(std::string_view name, std::int64_t size) {
  bench_case c = make_case(name, size);
  std::ostringstream sink;
  session s(parse_program(c.program), sink);

  auto t0 = std::chrono::steady_clock::now();
  std::vector<solution> answers = s.all(c.query);
  auto t1 = std::chrono::steady_clock::now();

  if (static_cast<std::int64_t>(answers.size()) != c.expected_answers) {
    std::ostringstream os;
    os << "bench '" << name << "' size " << size << ": got "
       << answers.size() << " answers, expected " << c.expected_answers;
    throw error(os.str());
  }
  if (!c.binding_var.empty()) {
    bool found = false;
    for (const auto& b : answers.at(0).bindings) {
      if (b.name != c.binding_var) continue;
      found = true;
      if (b.value != c.expected_binding)
        throw error("bench '" + std::string(name) + "': wrong result for " +
                    c.binding_var);
    }
    if (!found)
      throw error("bench '" + std::string(name) + "': binding " +
                  c.binding_var + " missing from the answer");
  }

  bench_report r;
  r.name = std::string(name);
  r.size = size;
  r.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.answers = answers.size();
  r.stats = s.stats();
  r.peak_rss_bytes = peak_rss_bytes();
  return r;
}

}  // namespace tabulog

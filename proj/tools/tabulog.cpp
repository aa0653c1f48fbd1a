#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "tabulog/bench.hpp"
#include "tabulog/parser.hpp"
#include "tabulog/session.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tabulog::error("cannot open program file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

tabulog::program load_programs(const std::vector<std::string>& files) {
  tabulog::program prog;
  for (const auto& f : files) prog.merge(tabulog::parse_program(read_file(f)));
  prog.finalize();
  return prog;
}

void print_stats(std::ostream& os, const tabulog::engine_stats& st) {
  os << "% tables: " << st.tables << "\n"
     << "% answers: " << st.answers << "\n"
     << "% dependencies: " << st.dependencies << "\n"
     << "% suspensions: " << st.suspensions << "\n"
     << "% resumptions: " << st.resumptions << "\n"
     << "% worker invocations: " << st.worker_invocations << "\n"
     << "% steps: " << st.steps << "\n";
}

// Returns the number of answers printed.
std::size_t run_query(tabulog::session& s, const std::string& text,
                      std::size_t limit, bool sorted) {
  std::vector<std::string> lines;
  auto stream = s.query(text);
  std::size_t n = 0;
  while (stream.next()) {
    std::string line = stream.current().to_string() + ".";
    ++n;
    if (sorted)
      lines.push_back(std::move(line));
    else
      std::cout << line << "\n";
    if (limit != 0 && n >= limit) break;
  }
  if (sorted) {
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) std::cout << l << "\n";
  }
  if (n == 0) std::cout << "false.\n";
  return n;
}

int repl(tabulog::session& s, bool stats, bool sorted) {
  bool tty = isatty(STDIN_FILENO) != 0;
  std::string line;
  for (;;) {
    if (tty) {
      std::cout << "?- " << std::flush;
    }
    std::string text;
    for (;;) {
      if (!std::getline(std::cin, line)) return 0;
      text += line;
      // A clause-terminating dot ends the query.
      auto end = text.find_last_not_of(" \t\r");
      if (end != std::string::npos && text[end] == '.') break;
      text += "\n";
    }
    auto trimmed = text.substr(text.find_first_not_of(" \t\r\n"));
    if (trimmed == "halt." || trimmed == "quit.") return 0;
    try {
      run_query(s, text, 0, sorted);
      if (stats) print_stats(std::cout, s.stats());
    } catch (const tabulog::error& e) {
      std::cerr << "error: " << e.what() << "\n";
    }
  }
}

int run_bench_cmd(const std::string& name, std::int64_t size, bool json_out) {
  tabulog::bench_report r = tabulog::run_bench(name, size);
  if (json_out) {
    nlohmann::json j{{"name", r.name},
                     {"size", r.size},
                     {"ms", r.ms},
                     {"answers", r.answers},
                     {"tables", r.stats.tables},
                     {"deps", r.stats.dependencies},
                     {"suspensions", r.stats.suspensions},
                     {"resumptions", r.stats.resumptions}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << r.name << " size=" << r.size << " ms=" << r.ms
              << " answers=" << r.answers << " tables=" << r.stats.tables
              << " deps=" << r.stats.dependencies
              << " suspensions=" << r.stats.suspensions
              << " resumptions=" << r.stats.resumptions
              << " peak_rss=" << r.peak_rss_bytes << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabulog - tabled logic programming engine"};
  app.require_subcommand(0, 1);

  std::vector<std::string> program_files;
  std::string query_text;
  bool all = false;
  std::size_t limit = 0;
  bool stats = false;
  bool sorted = false;
  app.add_option("-p,--program", program_files,
                 "program file to load (repeatable, loaded in order)");
  app.add_option("-q,--query", query_text,
                 "query to run, e.g. \"p(X, Y).\"; without it a REPL starts");
  app.add_flag("--all", all, "enumerate all answers (default: first only)");
  app.add_option("--limit", limit, "stop after this many answers");
  app.add_flag("--stats", stats, "print engine statistics after the answers");
  app.add_flag("--sorted", sorted,
               "sort answer lines for reproducible output");

  auto* bench_cmd =
      app.add_subcommand("bench", "run a named benchmark and report");
  std::string bench_name;
  std::int64_t bench_size = 0;
  bool json_out = false;
  bench_cmd->add_option("name", bench_name, "benchmark name")->required();
  bench_cmd->add_option("size", bench_size, "problem size")->required();
  bench_cmd->add_flag("--json", json_out, "emit the report as one JSON object");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench_cmd->parsed()) {
      if (!tabulog::is_bench(bench_name)) {
        std::cerr << "error: unknown benchmark '" << bench_name << "'; known:";
        for (const auto& n : tabulog::bench_names()) std::cerr << " " << n;
        std::cerr << "\n";
        return 2;
      }
      return run_bench_cmd(bench_name, bench_size, json_out);
    }

    tabulog::session s(load_programs(program_files));
    if (query_text.empty()) return repl(s, stats, sorted);

    std::size_t effective_limit = limit != 0 ? limit : (all ? 0 : 1);
    std::size_t n = run_query(s, query_text, effective_limit, sorted);
    if (stats) print_stats(std::cout, s.stats());
    return n > 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

// repzeta: batch front end. Reads a JSON job from a file (or "-" for stdin), writes JSON.
// Exit codes: 0 ok, 1 domain error (bad input, budget, divergence), 2 internal error or failed check.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "repzeta/cli/commands.hpp"

using namespace repzeta;

namespace {

io::Json read_input(const std::string& path) {
  if (path != "-") return io::read_json_file(path);
  std::stringstream ss;
  ss << std::cin.rdbuf();
  return io::parse_json_text(ss.str(), "stdin");
}

int fail(int code, const char* kind, const std::string& message) {
  std::cerr << io::Json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"representation zeta function toolkit"};
  app.require_subcommand(1);
  cli::Options opt;
  std::string output;
  app.add_option("--budget", opt.budget, "group order cap / point-count budget (0 = default)");
  app.add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", opt.seed, "seed for randomized corpora and Dixon splitting");
  app.add_option("--prime-bound", opt.prime_bound, "prime bound for densities, fits and bisection (0 = default)");
  app.add_option("--output", output, "write the result here instead of stdout");

  std::string input, suite;
  for (const auto& name : cli::command_names()) {
    if (name == "verify") {
      auto* sub = app.add_subcommand(name, "run an invariant suite");
      sub->add_option("suite", suite, "clifford | orbit | bch | cones | langweil | artin | trees")->required();
      sub->add_option("--pairs", opt.fuzz_pairs, "fuzz pairs per configuration (bch)");
      continue;
    }
    app.add_subcommand(name, name + " job")->add_option("input", input, "JSON job file or - for stdin")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  default_threads() = opt.threads;
  std::string command = app.get_subcommands().front()->get_name();

  try {
    auto result = command == "verify" ? cli::cmd_verify(suite, opt) : cli::dispatch(command, read_input(input), opt);
    std::string text = result.output.dump() + "\n";
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(output);
      if (!out) return fail(1, "io", "cannot write '" + output + "'");
      out << text;
    }
    return result.status;
  } catch (const SizeError& e) {
    return fail(1, "size", e.what());
  } catch (const DomainError& e) {
    return fail(1, "domain", e.what());
  } catch (const cli::UnknownSuiteError& e) {
    return fail(2, "unknown_suite", e.what());
  } catch (const std::exception& e) {
    return fail(2, "internal", e.what());
  }
}

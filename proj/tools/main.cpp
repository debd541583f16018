#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"

namespace {

using nco::cli::RunReport;
using nco::cli::Scenario;

struct Options {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string filter;
};

using Command = std::function<RunReport(const Scenario&, std::uint64_t, const std::string&)>;

int run_all(const Options& opt, const std::string& name, const Command& cmd) {
  const nco::cli::ConfigFile cfg = nco::cli::parse_config(opt.config);
  bool all_pass = true;
  std::size_t matched = 0;
  for (const Scenario& sc : cfg.scenarios) {
    if (!opt.filter.empty() && sc.name.find(opt.filter) == std::string::npos) continue;
    ++matched;
    const std::uint64_t seed = opt.seed_set ? opt.seed : sc.get_u64("seed", 1);
    const std::string out_dir =
        sc.has("out") ? opt.out + "/" + sc.get_string("out", "") : opt.out;
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    try {
      rep = cmd(sc, seed, out_dir);
    } catch (const nco::cli::config_error&) {
      throw;
    } catch (const std::exception& e) {
      rep.command = name;
      rep.scenario = sc.name;
      rep.seed = seed;
      rep.add("exception", false, 0.0, true, e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string rep_path = out_dir + "/" + name + "_" + sc.name + ".json";
    nco::cli::write_text_atomic(rep_path, rep.to_json().dump(2) + "\n");

    std::printf("[%s] %s %s (seed %llu, %.2f s)\n", rep.pass() ? " ok " : "FAIL", name.c_str(),
                sc.name.c_str(), static_cast<unsigned long long>(seed), secs);
    for (const nco::cli::Check& c : rep.checks)
      if (c.asserted && !c.pass)
        std::printf("       failed: %s (value %s)%s%s\n", c.name.c_str(),
                    nco::cli::fmt_g(c.value).c_str(), c.detail.empty() ? "" : " ",
                    c.detail.c_str());
    all_pass = all_pass && rep.pass();
  }
  if (matched == 0) {
    std::fprintf(stderr, "no scenarios matched filter '%s'\n", opt.filter.c_str());
    return 2;
  }
  return all_pass ? 0 : 1;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config, "scenario config file")->required();
  sub->add_option("--out", opt.out, "output directory");
  sub->add_option("--seed", opt.seed, "override every scenario seed")
      ->each([&opt](const std::string&) { opt.seed_set = true; });
  sub->add_option("--scenarios", opt.filter, "substring filter on scenario names");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz-space experiment runner"};
  app.require_subcommand(1);
  Options opt;

  struct Sub {
    const char* name;
    const char* help;
    Command cmd;
  };
  const std::vector<Sub> subs = {
      {"verify", "run the invariant suite", nco::cli::cmd_verify},
      {"ergodic", "averages, limits and decay rates", nco::cli::cmd_ergodic},
      {"maximal", "projection searches and witnesses", nco::cli::cmd_maximal},
      {"boyd", "dilation-norm index estimates", nco::cli::cmd_boyd},
      {"norms", "dual-path Luxemburg norm tables", nco::cli::cmd_norms},
  };
  for (const Sub& s : subs) add_common(app.add_subcommand(s.name, s.help), opt);

  CLI11_PARSE(app, argc, argv);

  try {
    for (const Sub& s : subs)
      if (app.got_subcommand(s.name)) return run_all(opt, s.name, s.cmd);
  } catch (const nco::cli::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

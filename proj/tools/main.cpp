#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gltower/errors.hpp"
#include "run_config.hpp"

using gltower::cli::RunConfig;

namespace {

void add_pair(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("n1", cfg.n1, "larger entry of the pair")->required();
  sub->add_option("n2", cfg.n2, "smaller entry of the pair")->required();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string seeds;

  CLI::App app{"Euclidean tower checks with JSON output"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", cfg.out, "write the JSON here instead of stdout");
  app.add_flag("--pretty", cfg.pretty, "indent the JSON");
  app.add_option("--limit", cfg.limit, "max candidate matrices per finite enumeration");

  add_pair(app.add_subcommand("chain", "Euclidean division chain"), cfg);
  add_pair(app.add_subcommand("partition", "claimed and Richardson partitions"), cfg);
  auto* tower = app.add_subcommand("tower", "tower of parabolics with per-step checks");
  add_pair(tower, cfg);
  tower->add_option("--corner", cfg.corner, "upper-left (default) or lower-right");
  add_pair(app.add_subcommand("verify-lemma", "Jordan type of J against both partitions"), cfg);

  auto* scan = app.add_subcommand("scan", "verify-lemma for every coprime pair up to a bound");
  scan->add_option("max_n", cfg.max_n, "bound on n1 + n2 (default 14)");
  scan->add_option("--max-n", cfg.max_n, "same as the positional bound");

  auto* prop1 = app.add_subcommand("finite-prop1", "orbit identity in the finite model");
  add_pair(prop1, cfg);
  prop1->add_option("--q", cfg.q, "prime field size")->required();
  prop1->add_option("--seeds", seeds, "e.g. 0..19 or 1,2,5")->required();

  auto* unfold = app.add_subcommand("finite-unfold", "unfolding identity in the finite model");
  add_pair(unfold, cfg);
  unfold->add_option("--q", cfg.q, "prime field size")->required();
  unfold->add_option("--chi", cfg.chi, "0 trivial, 1 quadratic");
  unfold->add_option("--seeds", seeds, "e.g. 0..9 or 1,2,5")->required();
  unfold->add_option("--sign", cfg.sign, "negated (default) or plus");
  unfold->add_option("--corner", cfg.corner, "corner of the reduced tower");

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (!seeds.empty()) cfg.seeds = gltower::cli::parse_seeds(seeds);
    const auto result = gltower::cli::run_command(cfg);
    const std::string text = gltower::cli::render(result.json, cfg.pretty);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!(f << text)) {
        std::cerr << "error: cannot write " << cfg.out << "\n";
        return 2;
      }
    }
    return result.exit_code;
  } catch (const gltower::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

// framelift: verify | lift | export
#include "framelift/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace fl = framelift;

int main(int argc, char** argv) {
  CLI::App app{"Frame multiplier lifting workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::int64_t> seed;
  std::optional<double> tol;
  std::optional<int> threads;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (default: config 'output' or '.')");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--tol", tol, "override the identity tolerance");
    sub->add_option("--threads", threads, "worker threads for independent sizes");
  };
  CLI::App* verify = app.add_subcommand("verify", "identity suite; writes identities.json");
  CLI::App* lift = app.add_subcommand("lift", "lifting experiment; writes per-size JSON and scaling tables");
  CLI::App* exp = app.add_subcommand("export", "frame and Gram serialization");
  for (CLI::App* sub : {verify, lift, exp}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fl::cli::kUsage;
  }

  try {
    fl::cli::ExperimentConfig cfg = fl::cli::load_config(config_path);
    if (seed) {
      if (*seed < 0) throw fl::cli::ConfigError("--seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(*seed);
    }
    if (tol) {
      if (!(*tol > 0)) throw fl::cli::ConfigError("--tol must be positive");
      cfg.tol.identity = *tol;
    }
    if (threads) {
      if (*threads < 1) throw fl::cli::ConfigError("--threads must be positive");
      cfg.threads = *threads;
    }
    const std::filesystem::path out = !out_dir.empty() ? out_dir : (!cfg.output.empty() ? cfg.output : ".");
    if (verify->parsed()) return fl::cli::cmd_verify(cfg, out);
    if (lift->parsed()) return fl::cli::cmd_lift(cfg, out);
    return fl::cli::cmd_export(cfg, out);
  } catch (const fl::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return fl::cli::kUsage;
  } catch (const fl::IoError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return fl::cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fl::cli::kFailure;
  }
}

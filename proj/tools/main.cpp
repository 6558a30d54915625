#include "experiments.hpp"

#include "qig/errors.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char **argv) {
  CLI::App app{"qig - information-geometry experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  qig::cli::RunOptions options;
  options.threads = 0; // 0: resolve from QIG_THREADS or default to 1

  for (const auto &name : qig::cli::experiment_names()) {
    CLI::App *sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", options.out_dir, "output directory");
    sub->add_option("--threads", options.threads, "worker threads");
    sub->add_option("--seed", options.seed, "RNG seed recorded in the manifest");
  }

  CLI11_PARSE(app, argc, argv);

  if (options.threads <= 0) {
    const char *env = std::getenv("QIG_THREADS");
    options.threads = env ? std::max(1, std::atoi(env)) : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    qig::cli::Config config = qig::cli::Config::parse_file(config_path);
    const qig::cli::RunManifest manifest =
        qig::cli::run_experiment(name, config, options);
    std::cout << name << ": wrote " << manifest.outputs.size() << " file(s) to "
              << options.out_dir << " in " << manifest.duration_seconds << " s\n";
    return 0;
  } catch (const qig::cli::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qig::Error &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  }
}

// Command-line front end: fit, repair, eval, sweep, benchmark.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ckspline/benchmark.hpp"
#include "ckspline/io.hpp"

namespace {

using ckspline::RunManifest;

// Every manifest key doubles as a --flag; flags override the config file.
struct ManifestOptions {
  std::string config;
  std::map<std::string, std::string> values;
  bool nesterov = false;
  bool repair = false;
  CLI::Option* nesterov_opt = nullptr;
  CLI::Option* repair_opt = nullptr;
  std::map<std::string, CLI::Option*> opts;

  void attach(CLI::App& app) {
    app.add_option("-c,--config", config, "key=value run manifest");
    for (const auto& key : ckspline::manifest_keys()) {
      if (key == "nesterov" || key == "repair") continue;
      opts[key] = app.add_option("--" + key, values[key]);
    }
    nesterov_opt = app.add_flag("--nesterov", nesterov, "Nesterov momentum (sgd)");
    repair_opt = app.add_flag("--repair", repair, "repair continuity after fitting");
  }

  RunManifest build() const {
    RunManifest m = config.empty() ? RunManifest{} : ckspline::load_manifest(config);
    for (const auto& [key, opt] : opts)
      if (opt->count() > 0) ckspline::apply_setting(m, key, values.at(key));
    if (nesterov_opt->count() > 0) m.train.optimizer.nesterov = nesterov;
    if (repair_opt->count() > 0) m.repair = repair;
    return m;
  }
};

int with_manifest(const ManifestOptions& opts, auto&& body) {
  try {
    return body(opts.build());
  } catch (const ckspline::ConfigError& e) {
    std::cerr << "ckspline: error: " << e.what() << '\n';
    return ckspline::kExitConfig;
  } catch (const ckspline::IoError& e) {
    std::cerr << "ckspline: error: " << e.what() << '\n';
    return ckspline::kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit C^k-continuous piecewise polynomial splines by gradient descent"};
  app.require_subcommand(1);

  ManifestOptions fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "fit a spline to x,y samples");
  fit_opts.attach(*fit_cmd);

  ManifestOptions sweep_opts;
  std::vector<double> lambdas;
  auto* sweep_cmd = app.add_subcommand("sweep", "fit once per lambda value and summarize");
  sweep_opts.attach(*sweep_cmd);
  sweep_cmd->add_option("--lambdas", lambdas, "comma-separated lambda values")
      ->delimiter(',')
      ->required();

  std::string model_path, out_path, input_path, mode = "open";
  int k = 0, resolution = 32;
  auto* repair_cmd = app.add_subcommand("repair", "make a stored model exactly C^k-continuous");
  repair_cmd->add_option("--model", model_path, "model.json to repair")->required();
  repair_cmd->add_option("--k", k, "continuity order");
  repair_cmd->add_option("--boundary-mode", mode, "open, cyclic or periodic");
  repair_cmd->add_option("--out", out_path, "output directory")->required();
  repair_cmd->add_option("--resolution", resolution, "curve points per segment");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a stored model and its derivatives");
  eval_cmd->add_option("--model", model_path, "model.json")->required();
  eval_cmd->add_option("--input", input_path, "x,y CSV whose xs are evaluated");
  eval_cmd->add_option("--k", k, "highest derivative order to emit");
  eval_cmd->add_option("--resolution", resolution, "grid points per segment without --input");
  eval_cmd->add_option("--out", out_path, "output CSV ('-' for stdout)")->default_val("-");

  std::size_t count = 128;
  auto* bench_cmd = app.add_subcommand("benchmark", "write the synthetic benchmark samples");
  bench_cmd->add_option("--out", out_path, "output CSV")->required();
  bench_cmd->add_option("--count", count, "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ckspline::kExitConfig;
  }

  if (*fit_cmd)
    return with_manifest(fit_opts, [](const RunManifest& m) { return ckspline::run(m); });
  if (*sweep_cmd)
    return with_manifest(sweep_opts,
                         [&](const RunManifest& m) { return ckspline::sweep(m, lambdas); });
  if (*repair_cmd) {
    try {
      return ckspline::repair_command(model_path, k, ckspline::parse_boundary_mode(mode),
                                      out_path, resolution);
    } catch (const ckspline::ConfigError& e) {
      std::cerr << "ckspline: error: " << e.what() << '\n';
      return ckspline::kExitConfig;
    }
  }
  if (*eval_cmd) return ckspline::eval_command(model_path, input_path, k, resolution, out_path);
  if (*bench_cmd) {
    try {
      ckspline::write_samples(out_path, ckspline::benchmark_samples(count));
    } catch (const std::exception& e) {
      std::cerr << "ckspline: error: " << e.what() << '\n';
      return ckspline::kExitIo;
    }
    return ckspline::kExitOk;
  }
  return ckspline::kExitConfig;
}

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"glued free-group actions, schedules and stabilizer stage measures"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", point;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed_override, stage_override;
  std::optional<std::uint32_t> n_flag, t_flag;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config JSON")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed_override, "override the alpha family seed");
    sub->add_option("--stage", stage_override, "override the measure stage m");
    sub->add_option("--jobs", jobs, "worker threads for sweeps");
  };

  CLI::App* sched = app.add_subcommand("schedule", "build the schedule and density report");
  add_common(sched);
  CLI::App* build = app.add_subcommand("build", "assemble the truncation, emit JSON and DOT");
  add_common(build);
  CLI::App* theta = app.add_subcommand("theta", "tabulate stage measures of the clopen sets");
  add_common(theta);
  CLI::App* verify = app.add_subcommand("verify", "run the full verification report");
  add_common(verify);
  CLI::App* appears = app.add_subcommand("appears", "search for a block action inside an orbit");
  add_common(appears);
  appears->add_option("--point", point, "start point, e.g. w:3:0 or u:5")->required();
  appears->add_option("--n", n_flag, "block action index");
  appears->add_option("--t", t_flag, "eligibility threshold t");
  CLI::App* navigate = app.add_subcommand("navigate", "build a staged witness chain");
  add_common(navigate);
  navigate->add_option("--point", point, "start point, e.g. w:3:0 or u:5")->required();
  navigate->add_option("--n", n_flag, "target block action index");
  navigate->add_option("--t", t_flag, "eligibility threshold t");

  CLI11_PARSE(app, argc, argv);

  try {
    irs::tools::RunConfig cfg = irs::tools::load_config(config_path);
    if (seed_override) cfg.alpha.seed = *seed_override;
    if (stage_override) cfg.stage = *stage_override;
    irs::tools::validate(cfg);

    if (sched->parsed()) return irs::tools::cmd_schedule(cfg, out_dir);
    if (build->parsed()) return irs::tools::cmd_build(cfg, out_dir);
    if (theta->parsed()) return irs::tools::cmd_theta(cfg, out_dir);
    if (verify->parsed()) return irs::tools::cmd_verify(cfg, out_dir, jobs);
    if (appears->parsed()) return irs::tools::cmd_appears(cfg, out_dir, point, n_flag, t_flag);
    if (navigate->parsed()) return irs::tools::cmd_navigate(cfg, out_dir, point, n_flag, t_flag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// Command-line front end: evolve | enumerate | maxent | blocks | analytic |
// krylov | scaling | reproduce. Exit codes: 0 success, 2 validation error,
// 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracton/analytic.hpp"
#include "fracton/automaton.hpp"
#include "fracton/blocks.hpp"
#include "fracton/harness.hpp"
#include "fracton/maxent.hpp"
#include "fracton/sector_exact.hpp"

namespace {

using namespace fracton;
namespace fs = std::filesystem;
using nlohmann::json;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw ValidationError("expected a comma-separated integer list");
  return out;
}

std::vector<long long> parse_ll_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(std::stoll(item));
  }
  return out;
}

SpinState make_initial(int length, const std::string& literal, const std::string& plus_sites) {
  if (!literal.empty() && !plus_sites.empty()) {
    throw ValidationError("give either --initial or --plus, not both");
  }
  if (!literal.empty()) {
    SpinState state = SpinState::parse(literal);
    if (length > 0 && state.length() != length) {
      throw ValidationError("--length disagrees with the --initial string");
    }
    return state;
  }
  if (plus_sites.empty()) throw ValidationError("an initial state is required");
  if (length <= 0) throw ValidationError("--plus needs --length");
  return SpinState::with_charges(length, parse_int_list(plus_sites));
}

struct CommonOptions {
  std::uint64_t seed = 1;
  int workers = 0;  // 0 -> default_workers()
  std::string out_dir;

  int worker_count() const { return workers > 0 ? workers : default_workers(); }
};

void add_common(CLI::App* cmd, CommonOptions& common, bool with_out) {
  cmd->add_option("--seed", common.seed, "master seed")->capture_default_str();
  cmd->add_option("--workers", common.workers, "worker threads (default: hardware)");
  if (with_out) cmd->add_option("--out", common.out_dir, "output directory")->required();
}

int run_cli(int argc, char** argv) {
  CLI::App app{"dipole-conserving spin-1 chain circuits: Monte Carlo evolution,\n"
               "exact sector tools, block dynamics and closed-form profiles"};
  app.require_subcommand(1);

  // evolve -----------------------------------------------------------------
  auto* evolve = app.add_subcommand("evolve", "run the spin-string automaton ensemble");
  CommonOptions evolve_common;
  int evolve_length = 0, evolve_width = 3;
  long long evolve_steps = 1000, evolve_real = 500;
  std::string evolve_initial, evolve_plus, evolve_record;
  evolve->add_option("--length", evolve_length, "chain length");
  evolve->add_option("--gate-width", evolve_width, "gate window width (3 or 4)")
      ->capture_default_str();
  evolve->add_option("--initial", evolve_initial, "initial state string, e.g. 00+0-");
  evolve->add_option("--plus", evolve_plus, "comma list of sites carrying +1");
  evolve->add_option("--steps", evolve_steps, "time steps")->capture_default_str();
  evolve->add_option("--realizations", evolve_real, "ensemble size")->capture_default_str();
  evolve->add_option("--record", evolve_record,
                     "comma list of snapshot steps (default: geometric ladder)");
  add_common(evolve, evolve_common, true);

  // blocks -----------------------------------------------------------------
  auto* blocks_cmd = app.add_subcommand("blocks", "run the sliding-block ensemble");
  CommonOptions blocks_common;
  int blocks_length = 0, blocks_single = 0;
  long long blocks_steps = 1000, blocks_real = 500;
  std::string blocks_two, blocks_record;
  blocks_cmd->add_option("--length", blocks_length, "chain length")->required();
  blocks_cmd->add_option("--single", blocks_single, "single fracton site");
  blocks_cmd->add_option("--two", blocks_two, "two fracton sites i1,i2");
  blocks_cmd->add_option("--steps", blocks_steps, "time steps")->capture_default_str();
  blocks_cmd->add_option("--realizations", blocks_real, "ensemble size")->capture_default_str();
  blocks_cmd->add_option("--record", blocks_record,
                         "comma list of snapshot steps (default: geometric ladder)");
  add_common(blocks_cmd, blocks_common, true);

  // enumerate ----------------------------------------------------------------
  auto* enumerate = app.add_subcommand("enumerate", "exhaustively list a symmetry sector");
  int enum_length = 0, enum_charge = 0;
  long long enum_dipole = 0;
  std::string enum_profile;
  enumerate->add_option("--length", enum_length, "chain length")->required();
  enumerate->add_option("--charge", enum_charge, "total charge")->required();
  enumerate->add_option("--dipole", enum_dipole, "total dipole moment")->required();
  enumerate->add_option("--profile", enum_profile, "write the sector-mean profile CSV here");

  // maxent -------------------------------------------------------------------
  auto* maxent = app.add_subcommand("maxent", "solve the maximum-entropy multipliers");
  int maxent_length = 0, maxent_charge = 0;
  long long maxent_dipole = 0;
  std::string maxent_profile, maxent_linear_profile;
  maxent->add_option("--length", maxent_length, "chain length")->required();
  maxent->add_option("--charge", maxent_charge, "total charge")->required();
  maxent->add_option("--dipole", maxent_dipole, "total dipole moment")->required();
  maxent->add_option("--profile", maxent_profile, "write the exact-solver profile CSV here");
  maxent->add_option("--linear-profile", maxent_linear_profile,
                     "write the linearized profile CSV here");

  // analytic -------------------------------------------------------------------
  auto* analytic = app.add_subcommand("analytic", "closed-form infinite-time profiles");
  std::string analytic_single, analytic_two, analytic_out;
  analytic->add_option("--single", analytic_single, "L,p for one fracton at site p");
  analytic->add_option("--two", analytic_two, "L,i1,i2 for two fractons");
  analytic->add_option("--out", analytic_out, "output CSV path")->required();

  // krylov -------------------------------------------------------------------
  auto* krylov = app.add_subcommand("krylov", "reachability decomposition of a sector");
  int krylov_length = 0, krylov_charge = 0, krylov_width = 3;
  long long krylov_dipole = 0;
  std::string krylov_json;
  krylov->add_option("--length", krylov_length, "chain length")->required();
  krylov->add_option("--charge", krylov_charge, "total charge")->required();
  krylov->add_option("--dipole", krylov_dipole, "total dipole moment")->required();
  krylov->add_option("--gate-width", krylov_width, "gate window width")->capture_default_str();
  krylov->add_option("--json", krylov_json, "write the summary JSON here (default stdout)");

  // scaling -------------------------------------------------------------------
  auto* scaling = app.add_subcommand("scaling", "relaxation-time sweep and power-law fit");
  CommonOptions scaling_common;
  std::string scaling_kind = "single", scaling_scales;
  double scaling_ratio = 0.5;
  long long scaling_real = 320;
  int scaling_groups = 8;
  scaling->add_option("--kind", scaling_kind, "single | double")->capture_default_str();
  scaling->add_option("--scales", scaling_scales, "comma list of sizes")->required();
  scaling->add_option("--ratio", scaling_ratio, "separation/length for kind double")
      ->capture_default_str();
  scaling->add_option("--realizations", scaling_real, "total realizations per scale")
      ->capture_default_str();
  scaling->add_option("--groups", scaling_groups, "seed groups for error bars")
      ->capture_default_str();
  add_common(scaling, scaling_common, true);

  // reproduce -------------------------------------------------------------------
  auto* reproduce = app.add_subcommand("reproduce", "run bundled experiment presets");
  CommonOptions reproduce_common;
  bool reproduce_all = false, reproduce_paper = false;
  std::string reproduce_kind, reproduce_config;
  reproduce->add_flag("--all", reproduce_all, "run every preset");
  reproduce->add_option("--kind", reproduce_kind, "preset name, e.g. fig4_two");
  reproduce->add_option("--config", reproduce_config, "experiment file (key = value lines)");
  reproduce->add_flag("--paper-scale", reproduce_paper,
                      "full ensemble sizes instead of the scaled-down defaults");
  add_common(reproduce, reproduce_common, true);

  CLI11_PARSE(app, argc, argv);

  if (evolve->parsed()) {
    EvolutionConfig config;
    config.gate_width = evolve_width;
    config.initial_state = make_initial(evolve_length, evolve_initial, evolve_plus);
    config.n_steps = evolve_steps;
    config.n_realizations = evolve_real;
    config.record_times =
        evolve_record.empty() ? geometric_record_times(evolve_steps) : parse_ll_list(evolve_record);
    config.master_seed = evolve_common.seed;
    const EnsembleResult result = run_ensemble(config, evolve_common.worker_count());
    save_ensemble(result, evolve_common.out_dir);
    std::cout << "wrote " << result.times.size() << " snapshots to " << evolve_common.out_dir
              << "\n";
    return 0;
  }

  if (blocks_cmd->parsed()) {
    if ((blocks_single == 0) == blocks_two.empty()) {
      throw ValidationError("give exactly one of --single or --two");
    }
    EvolutionConfig config;
    config.gate_width = 3;
    if (blocks_single != 0) {
      config.initial_state = SpinState::with_charges(blocks_length, {blocks_single});
    } else {
      config.initial_state = SpinState::with_charges(blocks_length, parse_int_list(blocks_two));
    }
    config.n_steps = blocks_steps;
    config.n_realizations = blocks_real;
    config.record_times =
        blocks_record.empty() ? geometric_record_times(blocks_steps) : parse_ll_list(blocks_record);
    config.master_seed = blocks_common.seed;
    const EnsembleResult result = run_block_ensemble(config, blocks_common.worker_count());
    save_ensemble(result, blocks_common.out_dir);
    std::cout << "wrote " << result.times.size() << " snapshots to " << blocks_common.out_dir
              << "\n";
    return 0;
  }

  if (enumerate->parsed()) {
    const SymmetrySector sector =
        enumerate_sector(enum_length, SectorLabel{enum_charge, enum_dipole});
    json out;
    out["length"] = enum_length;
    out["charge"] = enum_charge;
    out["dipole"] = enum_dipole;
    out["sector_size"] = sector.size();
    if (!enum_profile.empty()) {
      write_profile_csv(enum_profile, sector_mean_profile(sector));
      out["profile_csv"] = enum_profile;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (maxent->parsed()) {
    const SectorLabel label{maxent_charge, maxent_dipole};
    const auto [lq, lp] = linearized_multipliers_rational(maxent_length, label);
    const MultiplierSolution solution = solve_multipliers(maxent_length, label);
    json out;
    out["lambda_charge"] = solution.multipliers.lambda_charge;
    out["lambda_dipole"] = solution.multipliers.lambda_dipole;
    out["residual_charge"] = solution.residual_charge;
    out["residual_dipole"] = solution.residual_dipole;
    out["iterations"] = solution.iterations;
    out["linearized"] = {{"lambda_charge", lq.value()},
                         {"lambda_dipole", lp.value()},
                         {"lambda_charge_rational", std::to_string(lq.num) + "/" + std::to_string(lq.den)},
                         {"lambda_dipole_rational", std::to_string(lp.num) + "/" + std::to_string(lp.den)}};
    if (!maxent_profile.empty()) {
      write_profile_csv(maxent_profile,
                        profile_from_distribution(
                            distribution_from_multipliers(maxent_length, solution.multipliers)));
      out["profile_csv"] = maxent_profile;
    }
    if (!maxent_linear_profile.empty()) {
      write_profile_csv(maxent_linear_profile,
                        linear_profile(maxent_length, linearized_multipliers(maxent_length, label)));
      out["linear_profile_csv"] = maxent_linear_profile;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (analytic->parsed()) {
    if (analytic_single.empty() == analytic_two.empty()) {
      throw ValidationError("give exactly one of --single or --two");
    }
    ChargeProfile profile;
    if (!analytic_single.empty()) {
      const auto v = parse_int_list(analytic_single);
      if (v.size() != 2) throw ValidationError("--single expects L,p");
      profile = single_fracton_final(v[0], v[1]);
    } else {
      const auto v = parse_int_list(analytic_two);
      if (v.size() != 3) throw ValidationError("--two expects L,i1,i2");
      profile = two_fracton_final_profile(v[0], v[1], v[2]);
    }
    write_profile_csv(analytic_out, profile);
    std::cout << "wrote " << analytic_out << "\n";
    return 0;
  }

  if (krylov->parsed()) {
    const SymmetrySector sector =
        enumerate_sector(krylov_length, SectorLabel{krylov_charge, krylov_dipole});
    const KrylovDecomposition decomposition =
        krylov_decompose(sector, build_class_table(krylov_width));
    const std::string text = decomposition_summary_json(decomposition);
    if (krylov_json.empty()) {
      std::cout << text << "\n";
    } else {
      std::ofstream(krylov_json) << text << "\n";
      std::cout << "wrote " << krylov_json << "\n";
    }
    return 0;
  }

  if (scaling->parsed()) {
    SweepKind kind;
    if (scaling_kind == "single") {
      kind = SweepKind::single_fracton;
    } else if (scaling_kind == "double") {
      kind = SweepKind::two_fracton;
    } else {
      throw ValidationError("--kind must be single or double");
    }
    const auto points =
        tau_sweep(kind, parse_int_list(scaling_scales), scaling_ratio, scaling_real,
                  scaling_groups, scaling_common.seed, scaling_common.worker_count());
    fs::create_directories(scaling_common.out_dir);
    std::string csv = "scale,tau,tau_stderr,crossed\n";
    std::vector<std::pair<double, double>> fit_points;
    for (const auto& point : points) {
      csv += std::to_string(point.scale) + "," + std::to_string(point.tau) + "," +
             std::to_string(point.tau_stderr) + "," + (point.crossed ? "1" : "0") + "\n";
      if (point.crossed) fit_points.emplace_back(point.scale, point.tau);
    }
    std::ofstream(fs::path(scaling_common.out_dir) / "tau.csv") << csv;
    const PowerLawFit fit = powerlaw_fit(fit_points);
    json out = {{"exponent", fit.exponent},
                {"exponent_stderr", fit.exponent_stderr},
                {"prefactor", fit.prefactor},
                {"r_squared", fit.r_squared}};
    std::ofstream(fs::path(scaling_common.out_dir) / "fit.json") << out.dump(2) << "\n";
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  if (reproduce->parsed()) {
    const int given = (reproduce_all ? 1 : 0) + (reproduce_kind.empty() ? 0 : 1) +
                      (reproduce_config.empty() ? 0 : 1);
    if (given != 1) throw ValidationError("give exactly one of --all, --kind, --config");
    if (reproduce_all) {
      for (ExperimentKind kind : all_experiment_kinds()) {
        ExperimentSpec spec = default_experiment(kind, reproduce_paper);
        spec.seed = reproduce_common.seed;
        const std::string dir =
            (fs::path(reproduce_common.out_dir) / to_string(kind)).string();
        std::cout << "running " << to_string(kind) << " -> " << dir << "\n" << std::flush;
        run_experiment(spec, dir, reproduce_common.worker_count());
      }
      return 0;
    }
    ExperimentSpec spec;
    if (!reproduce_kind.empty()) {
      spec = default_experiment(experiment_kind_from_string(reproduce_kind), reproduce_paper);
    } else {
      spec = parse_experiment_file(reproduce_config);
      if (reproduce_paper) {
        // re-apply file overrides on top of paper-scale defaults
        ExperimentSpec base = default_experiment(spec.kind, true);
        ExperimentSpec file = parse_experiment_file(reproduce_config);
        const ExperimentSpec ci_defaults = default_experiment(spec.kind, false);
        for (const auto& [key, value] : file.params) {
          if (value != ci_defaults.params.at(key)) base.params[key] = value;
        }
        base.seed = file.seed;
        spec = base;
      }
    }
    spec.seed = reproduce_common.seed;
    run_experiment(spec, reproduce_common.out_dir, reproduce_common.worker_count());
    std::cout << "wrote " << reproduce_common.out_dir << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const fracton::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const fracton::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fracton/spin_state.hpp"

namespace fracton {

enum class ExperimentKind {
  fig1_thermal,
  fig2_single,
  fig3_scaling,
  fig4_two,
  fig5_scaling,
  fig8_overlay,
  krylov_report,
  equivalence,
};

const std::vector<ExperimentKind>& all_experiment_kinds();
std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

// One experiment: a kind plus flat, validated key/value parameters. The
// parameters always have every key the kind understands (defaults filled
// in); unknown keys are rejected.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::fig1_thermal;
  std::uint64_t seed = 1;
  bool paper_scale = false;
  std::map<std::string, std::string> params;
};

ExperimentSpec default_experiment(ExperimentKind kind, bool paper_scale = false);

// Flat key = value file; '#' starts a comment. The file must name `kind`.
ExperimentSpec parse_experiment_file(const std::string& path);

// Runs the experiment and writes meta.json, data CSVs and summary.json into
// out_dir. Identical spec + seed give identical outputs for any worker count.
void run_experiment(const ExperimentSpec& spec, const std::string& out_dir, int workers);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double exponent_stderr = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares on (log scale, log value); needs >= 4 positive
// points.
PowerLawFit powerlaw_fit(const std::vector<std::pair<double, double>>& points);

struct TauPoint {
  double scale = 0.0;
  double tau = 0.0;
  double tau_stderr = 0.0;
  bool crossed = false;
};

enum class SweepKind { single_fracton, two_fracton };

// Threshold-crossing times over a ladder of sizes. single_fracton: scale is
// the chain length, a centered fracton must spread to width L/4.
// two_fracton: scale is the separation Delta at fixed Delta/L ratio, the
// peaks must approach to Delta/2. Per scale the realizations are split into
// seed groups and tau_stderr is the scatter of the group estimates. Scales
// whose metric never crosses are reported with crossed = false, not fatal.
std::vector<TauPoint> tau_sweep(SweepKind kind, const std::vector<int>& scales,
                                double separation_ratio, long long realizations,
                                int seed_groups, std::uint64_t seed, int workers);

// Peak descriptors measured from a (possibly noisy) profile. The apex value
// comes from a least-squares parabola over center_site +- fit_radius, which
// is robust against picking the largest noise excursion; the full width at
// half maximum interpolates the measured profile around the interior
// maximum, boundary sites excluded.
struct PeakSummary {
  int max_site = 0;
  double max_value = 0.0;
  double apex_value = 0.0;
  double fwhm = 0.0;
};

PeakSummary summarize_peak(const ChargeProfile& profile, int center_site, int fit_radius = 2);

int default_workers();
std::string code_version();

}  // namespace fracton

#include "fracton/harness.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "fracton/analytic.hpp"
#include "fracton/automaton.hpp"
#include "fracton/blocks.hpp"
#include "fracton/maxent.hpp"
#include "fracton/sector_exact.hpp"

#ifndef FRACTONSIM_VERSION
#define FRACTONSIM_VERSION "unknown"
#endif

namespace fracton {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<ExperimentKind>& all_experiment_kinds() {
  static const std::vector<ExperimentKind> kinds = {
      ExperimentKind::fig1_thermal, ExperimentKind::fig2_single, ExperimentKind::fig3_scaling,
      ExperimentKind::fig4_two,     ExperimentKind::fig5_scaling, ExperimentKind::fig8_overlay,
      ExperimentKind::krylov_report, ExperimentKind::equivalence,
  };
  return kinds;
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::fig1_thermal: return "fig1_thermal";
    case ExperimentKind::fig2_single: return "fig2_single";
    case ExperimentKind::fig3_scaling: return "fig3_scaling";
    case ExperimentKind::fig4_two: return "fig4_two";
    case ExperimentKind::fig5_scaling: return "fig5_scaling";
    case ExperimentKind::fig8_overlay: return "fig8_overlay";
    case ExperimentKind::krylov_report: return "krylov_report";
    case ExperimentKind::equivalence: return "equivalence";
  }
  throw ValidationError("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (ExperimentKind kind : all_experiment_kinds()) {
    if (to_string(kind) == name) return kind;
  }
  throw ValidationError("unknown experiment kind '" + name + "'");
}

namespace {

long long to_ll(const std::string& name, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("parameter '" + name + "' is not an integer: " + value);
  }
}

int to_int(const std::string& name, const std::string& value) {
  const long long v = to_ll(name, value);
  if (v < INT_MIN || v > INT_MAX) throw ValidationError("parameter '" + name + "' out of range");
  return static_cast<int>(v);
}

double to_double(const std::string& name, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("parameter '" + name + "' is not a number: " + value);
  }
}

std::vector<int> to_int_list(const std::string& name, const std::string& value) {
  std::vector<int> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(to_int(name, item));
  }
  if (out.empty()) throw ValidationError("parameter '" + name + "' is an empty list");
  return out;
}

std::vector<long long> to_ll_list(const std::string& name, const std::string& value) {
  std::vector<long long> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(to_ll(name, item));
  }
  if (out.empty()) throw ValidationError("parameter '" + name + "' is an empty list");
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace

ExperimentSpec default_experiment(ExperimentKind kind, bool paper_scale) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.paper_scale = paper_scale;
  auto& p = spec.params;
  switch (kind) {
    case ExperimentKind::fig1_thermal:
      p["length"] = "14";
      p["charge"] = "2";
      p["dipole"] = "7";
      p["initial_a"] = "3,4";
      p["initial_b"] = "2,5";
      p["steps"] = paper_scale ? "45000" : "10000";
      p["realizations"] = paper_scale ? "5000" : "500";
      break;
    case ExperimentKind::fig2_single:
      p["length"] = "51";
      p["position"] = "26";
      p["steps"] = paper_scale ? "60000" : "26000";
      p["realizations"] = paper_scale ? "5000" : "500";
      p["snapshots"] = "";  // empty -> geometric ladder
      break;
    case ExperimentKind::fig3_scaling:
      p["sizes"] = "17,25,33,49,65";
      p["realizations"] = paper_scale ? "1600" : "320";
      p["seed_groups"] = "8";
      break;
    case ExperimentKind::fig4_two:
      p["length"] = "51";
      p["first"] = "16";
      p["second"] = "36";
      p["steps"] = paper_scale ? "60000" : "26000";
      p["realizations"] = paper_scale ? "5000" : "1000";
      break;
    case ExperimentKind::fig5_scaling:
      p["separations"] = "12,16,20,24,32";
      p["ratio"] = "0.5";
      p["realizations"] = paper_scale ? "1600" : "320";
      p["seed_groups"] = "8";
      break;
    case ExperimentKind::fig8_overlay:
      p["length"] = "80";
      p["first"] = "21";
      p["second"] = "61";
      p["steps"] = paper_scale ? "120000" : "64000";
      p["realizations"] = paper_scale ? "5000" : "4000";
      break;
    case ExperimentKind::krylov_report:
      p["lengths"] = "10,11,12";
      p["charge"] = "2";
      p["dipole"] = "7";
      p["initial"] = "3,4";
      break;
    case ExperimentKind::equivalence:
      p["length"] = "31";
      p["single_position"] = "16";
      p["pair"] = "8,24";
      p["times"] = "290,1160,4640";
      p["realizations"] = paper_scale ? "4000" : "1000";
      break;
  }
  return spec;
}

ExperimentSpec parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open experiment file " + path);
  std::map<std::string, std::string> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(path + ":" + std::to_string(line_no) + ": empty key");
    if (pairs.contains(key)) {
      throw ValidationError(path + ": duplicate key '" + key + "'");
    }
    pairs[key] = value;
  }
  const auto kind_it = pairs.find("kind");
  if (kind_it == pairs.end()) throw ValidationError(path + ": missing 'kind'");
  const ExperimentKind kind = experiment_kind_from_string(kind_it->second);
  pairs.erase(kind_it);

  bool paper_scale = false;
  if (const auto it = pairs.find("paper_scale"); it != pairs.end()) {
    if (it->second != "true" && it->second != "false") {
      throw ValidationError(path + ": paper_scale must be true or false");
    }
    paper_scale = it->second == "true";
    pairs.erase(it);
  }
  ExperimentSpec spec = default_experiment(kind, paper_scale);
  if (const auto it = pairs.find("seed"); it != pairs.end()) {
    spec.seed = static_cast<std::uint64_t>(to_ll("seed", it->second));
    pairs.erase(it);
  }
  for (const auto& [key, value] : pairs) {
    if (!spec.params.contains(key)) {
      throw ValidationError(path + ": unknown parameter '" + key + "' for kind " +
                            to_string(kind));
    }
    spec.params[key] = value;
  }
  return spec;
}

PowerLawFit powerlaw_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw ValidationError("power-law fit needs at least 4 points");
  const auto n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs, ys;
  for (const auto& [scale, value] : points) {
    if (!(scale > 0) || !(value > 0)) throw ValidationError("power-law fit needs positive data");
    const double x = std::log(scale);
    const double y = std::log(value);
    xs.push_back(x);
    ys.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw ValidationError("degenerate abscissas in power-law fit");
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.prefactor = std::exp(intercept);

  double ss_res = 0, ss_tot = 0;
  const double y_mean = sy / n;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double fit_y = intercept + fit.exponent * xs[k];
    ss_res += (ys[k] - fit_y) * (ys[k] - fit_y);
    ss_tot += (ys[k] - y_mean) * (ys[k] - y_mean);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  const double sigma2 = ss_res / (n - 2);
  fit.exponent_stderr = std::sqrt(sigma2 * n / denom);
  return fit;
}

std::vector<TauPoint> tau_sweep(SweepKind kind, const std::vector<int>& scales,
                                double separation_ratio, long long realizations,
                                int seed_groups, std::uint64_t seed, int workers) {
  if (seed_groups < 1) throw ValidationError("need at least one seed group");
  if (realizations < seed_groups) throw ValidationError("fewer realizations than seed groups");
  std::vector<TauPoint> points;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const int scale = scales[si];
    EvolutionConfig config;
    config.gate_width = 3;
    TauMetric metric;
    double threshold;
    if (kind == SweepKind::single_fracton) {
      const int length = scale;
      if (length < 9) throw ValidationError("single-fracton sweep needs L >= 9");
      config.initial_state = SpinState::with_charges(length, {(length + 1) / 2});
      config.n_steps = static_cast<long long>(std::ceil(3.0 * length * length));
      metric = TauMetric::peak_width;
      threshold = length / 4.0;
    } else {
      const int separation = scale;
      if (!(separation_ratio > 0) || !(separation_ratio < 1)) {
        throw ValidationError("separation ratio must be in (0, 1)");
      }
      const int length = static_cast<int>(std::lround(separation / separation_ratio));
      const int first = std::max(2, (length - separation) / 2);
      const int second = first + separation;
      if (second > length - 1) throw ValidationError("separation too large for the chain");
      config.initial_state = SpinState::with_charges(length, {first, second});
      config.n_steps = static_cast<long long>(std::ceil(6.0 * separation * separation));
      metric = TauMetric::pair_separation;
      threshold = separation / 2.0;
    }
    config.record_times = geometric_record_times(config.n_steps);
    config.n_realizations = std::max<long long>(1, realizations / seed_groups);

    std::vector<double> taus;
    bool crossed = true;
    for (int g = 0; g < seed_groups && crossed; ++g) {
      config.master_seed = derive_seed(seed, si * 1024 + static_cast<std::uint64_t>(g));
      try {
        taus.push_back(measure_tau(config, metric, threshold, workers));
      } catch (const NumericError&) {
        crossed = false;
      }
    }
    TauPoint point;
    point.scale = scale;
    point.crossed = crossed;
    if (crossed) {
      double mean = 0;
      for (double t : taus) mean += t;
      mean /= static_cast<double>(taus.size());
      double var = 0;
      for (double t : taus) var += (t - mean) * (t - mean);
      point.tau = mean;
      point.tau_stderr = taus.size() > 1
                             ? std::sqrt(var / (static_cast<double>(taus.size()) - 1) /
                                         static_cast<double>(taus.size()))
                             : 0.0;
    } else {
      point.tau = std::nan("");
      point.tau_stderr = std::nan("");
    }
    points.push_back(point);
  }
  return points;
}

PeakSummary summarize_peak(const ChargeProfile& profile, int center_site, int fit_radius) {
  const int length = profile.length();
  if (center_site - fit_radius < 2 || center_site + fit_radius > length - 1) {
    throw ValidationError("peak window must stay inside the interior");
  }
  PeakSummary summary;

  // interior maximum
  summary.max_site = 2;
  for (int i = 2; i <= length - 1; ++i) {
    const double v = profile.mean_charge[static_cast<std::size_t>(i - 1)];
    if (v > summary.max_value) {
      summary.max_value = v;
      summary.max_site = i;
    }
  }

  // least-squares parabola around the declared center
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
  for (int u = -fit_radius; u <= fit_radius; ++u) {
    const double y = profile.mean_charge[static_cast<std::size_t>(center_site + u - 1)];
    const double x = u;
    s0 += 1;
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
    t0 += y;
    t1 += x * y;
    t2 += x * x * y;
  }
  // solve the 3x3 normal equations for y = a + b x + c x^2
  const double d = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s2 * s3) + s2 * (s1 * s3 - s2 * s2);
  if (d == 0) throw NumericError("degenerate parabola fit");
  const double a = (t0 * (s2 * s4 - s3 * s3) - s1 * (t1 * s4 - t2 * s3) + s2 * (t1 * s3 - t2 * s2)) / d;
  const double b = (s0 * (t1 * s4 - t2 * s3) - t0 * (s1 * s4 - s2 * s3) + s2 * (s1 * t2 - s2 * t1)) / d;
  const double c = (s0 * (s2 * t2 - s3 * t1) - s1 * (s1 * t2 - s3 * t0) + t0 * (s1 * s3 - s2 * s2)) / d;
  summary.apex_value = c < 0 ? a - b * b / (4 * c) : a;

  // FWHM interpolated around the interior maximum
  const double half = summary.max_value / 2.0;
  double left = summary.max_site, right = summary.max_site;
  for (int i = summary.max_site; i >= 2; --i) {
    const double v = profile.mean_charge[static_cast<std::size_t>(i - 1)];
    if (v < half) {
      const double next = profile.mean_charge[static_cast<std::size_t>(i)];
      left = i + (half - v) / (next - v);
      break;
    }
    left = i;
  }
  for (int i = summary.max_site; i <= length - 1; ++i) {
    const double v = profile.mean_charge[static_cast<std::size_t>(i - 1)];
    if (v < half) {
      const double prev = profile.mean_charge[static_cast<std::size_t>(i - 2)];
      right = i - 1 + (prev - half) / (prev - v);
      break;
    }
    right = i;
  }
  summary.fwhm = right - left;
  return summary;
}

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::string code_version() { return FRACTONSIM_VERSION; }

// ---------------------------------------------------------------------------
// experiment pipelines

namespace {

json profile_stats_vs(const ChargeProfile& sampled, const ChargeProfile& reference) {
  double max_dev = 0, max_z = 0;
  for (int i = 0; i < sampled.length(); ++i) {
    const double dev = std::abs(sampled.mean_charge[static_cast<std::size_t>(i)] -
                                reference.mean_charge[static_cast<std::size_t>(i)]);
    max_dev = std::max(max_dev, dev);
    if (!sampled.std_error.empty() && sampled.std_error[static_cast<std::size_t>(i)] > 0) {
      max_z = std::max(max_z, dev / sampled.std_error[static_cast<std::size_t>(i)]);
    }
  }
  return json{{"max_abs_deviation", max_dev}, {"max_abs_z", max_z}};
}

void run_fig1(const ExperimentSpec& spec, const fs::path& dir, int workers, json& summary) {
  const auto& p = spec.params;
  const int length = to_int("length", p.at("length"));
  const SectorLabel label{to_int("charge", p.at("charge")), to_ll("dipole", p.at("dipole"))};
  const long long steps = to_ll("steps", p.at("steps"));
  const long long realizations = to_ll("realizations", p.at("realizations"));

  const SymmetrySector sector = enumerate_sector(length, label);
  if (sector.states.empty()) throw ValidationError("empty symmetry sector");
  const ChargeProfile enumeration = sector_mean_profile(sector);
  write_profile_csv((dir / "enumeration_profile.csv").string(), enumeration);

  const MultiplierSolution solution = solve_multipliers(length, label);
  const ChargeProfile exact_profile =
      profile_from_distribution(distribution_from_multipliers(length, solution.multipliers));
  write_profile_csv((dir / "maxent_exact_profile.csv").string(), exact_profile);
  const ChargeProfile line = linear_profile(length, linearized_multipliers(length, label));
  write_profile_csv((dir / "maxent_linear_profile.csv").string(), line);

  json ad = json::object();
  std::vector<std::pair<std::string, std::string>> runs = {{"initial_a", "ad_profile_a.csv"},
                                                           {"initial_b", "ad_profile_b.csv"}};
  std::vector<ChargeProfile> finals;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    EvolutionConfig config;
    config.gate_width = 4;
    config.initial_state =
        SpinState::with_charges(length, to_int_list(runs[k].first, p.at(runs[k].first)));
    if (sector_of(config.initial_state) != label) {
      throw ValidationError(runs[k].first + " is not in the requested sector");
    }
    config.n_steps = steps;
    config.n_realizations = realizations;
    config.record_times = {steps};
    config.master_seed = derive_seed(spec.seed, k);
    const EnsembleResult result = run_ensemble(config, workers);
    const ChargeProfile& final_profile = result.profiles.back();
    write_profile_csv((dir / runs[k].second).string(), final_profile);
    ad[runs[k].first] = profile_stats_vs(final_profile, enumeration);
    finals.push_back(final_profile);
  }
  double max_cross_z = 0;
  for (int i = 0; i < length; ++i) {
    const double dev = std::abs(finals[0].mean_charge[static_cast<std::size_t>(i)] -
                                finals[1].mean_charge[static_cast<std::size_t>(i)]);
    const double err = std::hypot(finals[0].std_error[static_cast<std::size_t>(i)],
                                  finals[1].std_error[static_cast<std::size_t>(i)]);
    if (dev > 0 && err > 0) max_cross_z = std::max(max_cross_z, dev / err);
  }

  json deviation = profile_stats_vs(exact_profile, enumeration);
  summary["sector_size"] = sector.size();
  summary["multipliers"] = {{"lambda_charge", solution.multipliers.lambda_charge},
                            {"lambda_dipole", solution.multipliers.lambda_dipole},
                            {"residual_charge", solution.residual_charge},
                            {"residual_dipole", solution.residual_dipole}};
  summary["enumeration_vs_maxent_max_abs"] = deviation["max_abs_deviation"];
  summary["ad_vs_enumeration"] = ad;
  summary["ad_cross_max_z"] = max_cross_z;
}

void run_fig2(const ExperimentSpec& spec, const fs::path& dir, int workers, json& summary) {
  const auto& p = spec.params;
  const int length = to_int("length", p.at("length"));
  const int position = to_int("position", p.at("position"));
  const long long steps = to_ll("steps", p.at("steps"));

  EvolutionConfig config;
  config.gate_width = 3;
  config.initial_state = SpinState::with_charges(length, {position});
  config.n_steps = steps;
  config.n_realizations = to_ll("realizations", p.at("realizations"));
  if (p.at("snapshots").empty()) {
    config.record_times = {0};
    for (long long t = steps; t > 0 && config.record_times.size() < 8; t /= 4) {
      config.record_times.push_back(t);
    }
    std::sort(config.record_times.begin(), config.record_times.end());
    config.record_times.erase(
        std::unique(config.record_times.begin(), config.record_times.end()),
        config.record_times.end());
  } else {
    config.record_times = to_ll_list("snapshots", p.at("snapshots"));
  }
  config.master_seed = spec.seed;

  const EnsembleResult result = run_ensemble(config, workers);
  save_ensemble(result, dir.string());
  const ChargeProfile expected = single_fracton_final(length, position);
  write_profile_csv((dir / "final_expected.csv").string(), expected);

  const ChargeProfile& final_profile = result.profiles.back();
  double interior_max_z = 0, interior_max_abs = 0;
  for (int i = 2; i <= length - 1; ++i) {
    const double v = std::abs(final_profile.mean_charge[static_cast<std::size_t>(i - 1)]);
    interior_max_abs = std::max(interior_max_abs, v);
    if (final_profile.std_error[static_cast<std::size_t>(i - 1)] > 0) {
      interior_max_z = std::max(interior_max_z, v / final_profile.std_error[static_cast<std::size_t>(i - 1)]);
    }
  }
  auto boundary = [&](int site) {
    const double mean = final_profile.mean_charge[static_cast<std::size_t>(site - 1)];
    const double err = final_profile.std_error[static_cast<std::size_t>(site - 1)];
    const double want = expected.mean_charge[static_cast<std::size_t>(site - 1)];
    return json{{"mean", mean},
                {"stderr", err},
                {"expected", want},
                {"z", err > 0 ? std::abs(mean - want) / err : 0.0}};
  };
  summary["interior_max_abs"] = interior_max_abs;
  summary["interior_max_z"] = interior_max_z;
  summary["left_boundary"] = boundary(1);
  summary["right_boundary"] = boundary(length);
}

void write_tau_csv(const fs::path& path, const std::vector<TauPoint>& points) {
  std::string csv = "scale,tau,tau_stderr,crossed\n";
  char line[128];
  for (const auto& point : points) {
    std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%d\n", point.scale, point.tau,
                  point.tau_stderr, point.crossed ? 1 : 0);
    csv += line;
  }
  write_text(path, csv);
}

json fit_summary(const std::vector<TauPoint>& points) {
  std::vector<std::pair<double, double>> data;
  for (const auto& point : points) {
    if (point.crossed) data.emplace_back(point.scale, point.tau);
  }
  const PowerLawFit fit = powerlaw_fit(data);
  return json{{"exponent", fit.exponent},
              {"exponent_stderr", fit.exponent_stderr},
              {"prefactor", fit.prefactor},
              {"r_squared", fit.r_squared},
              {"points_used", data.size()}};
}

void run_fig3(const ExperimentSpec& spec, const fs::path& dir, int workers, json& summary) {
  const auto& p = spec.params;
  const auto points = tau_sweep(SweepKind::single_fracton, to_int_list("sizes", p.at("sizes")),
                                0.0, to_ll("realizations", p.at("realizations")),
                                to_int("seed_groups", p.at("seed_groups")), spec.seed, workers);
  write_tau_csv(dir / "tau_vs_size.csv", points);
  summary["fit"] = fit_summary(points);
}

void run_fig5(const ExperimentSpec& spec, const fs::path& dir, int workers, json& summary) {
  const auto& p = spec.params;
  const auto points = tau_sweep(SweepKind::two_fracton,
                                to_int_list("separations", p.at("separations")),
                                to_double("ratio", p.at("ratio")),
                                to_ll("realizations", p.at("realizations")),
                                to_int("seed_groups", p.at("seed_groups")), spec.seed, workers);
  write_tau_csv(dir / "tau_vs_separation.csv", points);
  summary["fit"] = fit_summary(points);
  summary["ratio"] = to_double("ratio", p.at("ratio"));
}

void run_fig4(const ExperimentSpec& spec, const fs::path& dir, int workers, json& summary) {
  const auto& p = spec.params;
  const int length = to_int("length", p.at("length"));
  const int first = to_int("first", p.at("first"));
  const int second = to_int("second", p.at("second"));
  const long long steps = to_ll("steps", p.at("steps"));

  EvolutionConfig config;
  config.gate_width = 3;
  config.initial_state = SpinState::with_charges(length, {first, second});
  config.n_steps = steps;
  config.n_realizations = to_ll("realizations", p.at("realizations"));
  config.record_times = {0, steps / 16, steps / 4, steps};
  std::sort(config.record_times.begin(), config.record_times.end());
  config.record_times.erase(std::unique(config.record_times.begin(), config.record_times.end()),
                            config.record_times.end());
  config.master_seed = spec.seed;

  const EnsembleResult result = run_ensemble(config, workers);
  save_ensemble(result, dir.string());
  const ChargeProfile analytic = two_fracton_final_profile(length, first, second);
  write_profile_csv((dir / "final_expected.csv").string(), analytic);

  const ChargeProfile& final_profile = result.profiles.back();
  const int center = (first + second) / 2;
  const PeakSummary peak = summarize_peak(final_profile, center);
  double sigma_center = final_profile.std_error[static_cast<std::size_t>(center - 1)];
  summary["peak"] = {{"max_site", peak.max_site},
                     {"max_value", peak.max_value},
                     {"apex_value", peak.apex_value},
                     {"fwhm", peak.fwhm},
                     {"center_stderr", sigma_center}};
  summary["separation"] = second - first;
  summary["analytic_center_value"] =
      analytic.mean_charge[static_cast<std::size_t>(center - 1)];
}

void run_fig8(const ExperimentSpec& spec, const fs::path& dir, int workers, json& summary) {
  const auto& p = spec.params;
  const int length = to_int("length", p.at("length"));
  const int first = to_int("first", p.at("first"));
  const int second = to_int("second", p.at("second"));
  const long long steps = to_ll("steps", p.at("steps"));

  EvolutionConfig config;
  config.gate_width = 3;
  config.initial_state = SpinState::with_charges(length, {first, second});
  config.n_steps = steps;
  config.n_realizations = to_ll("realizations", p.at("realizations"));
  config.record_times = {0, steps};
  config.master_seed = spec.seed;

  const EnsembleResult result = run_ensemble(config, workers);
  save_ensemble(result, dir.string());
  const ChargeProfile analytic = two_fracton_final_profile(length, first, second);
  write_profile_csv((dir / "analytic_profile.csv").string(), analytic);

  const ChargeProfile& final_profile = result.profiles.back();
  double interior_max_z = 0;
  for (int i = 2; i <= length - 1; ++i) {
    const double dev = std::abs(final_profile.mean_charge[static_cast<std::size_t>(i - 1)] -
                                analytic.mean_charge[static_cast<std::size_t>(i - 1)]);
    const double err = final_profile.std_error[static_cast<std::size_t>(i - 1)];
    if (err > 0) interior_max_z = std::max(interior_max_z, dev / err);
  }
  const int center = (first + second) / 2;
  const PeakSummary peak = summarize_peak(final_profile, center);
  const TwoFractonGeometry geometry{static_cast<double>(length),
                                    static_cast<double>(second - first)};
  summary["interior_max_z"] = interior_max_z;
  summary["peak_apex"] = peak.apex_value;
  summary["analytic_peak"] = interior_charge_density(geometry, 0.0);
  summary["peak_relative_error"] =
      std::abs(peak.apex_value - interior_charge_density(geometry, 0.0)) /
      interior_charge_density(geometry, 0.0);
  summary["boundary_charge_analytic"] = boundary_charge(geometry);
}

void run_krylov(const ExperimentSpec& spec, const fs::path& dir, int, json& summary) {
  const auto& p = spec.params;
  const SectorLabel label{to_int("charge", p.at("charge")), to_ll("dipole", p.at("dipole"))};
  const std::vector<int> initial = to_int_list("initial", p.at("initial"));
  json reports = json::array();
  for (int length : to_int_list("lengths", p.at("lengths"))) {
    const SymmetrySector sector = enumerate_sector(length, label);
    json entry;
    entry["length"] = length;
    entry["sector_size"] = sector.size();
    for (int width : {3, 4}) {
      const GateClassTable table = build_class_table(width);
      const KrylovDecomposition decomposition = krylov_decompose(sector, table);
      json d = json::parse(decomposition_summary_json(decomposition));
      const SpinState seed_state = SpinState::with_charges(length, initial);
      const auto component = reachable_set(seed_state, table);
      d["initial_component_size"] = component.size();
      d["initial_component_fraction"] =
          static_cast<double>(component.size()) / static_cast<double>(sector.size());
      entry[width == 3 ? "gate3" : "gate4"] = d;
    }
    reports.push_back(entry);
  }
  write_text(dir / "krylov_report.json", reports.dump(2) + "\n");
  summary["reports"] = reports;
}

void run_equivalence(const ExperimentSpec& spec, const fs::path& dir, int workers,
                     json& summary) {
  const auto& p = spec.params;
  const int length = to_int("length", p.at("length"));
  const long long realizations = to_ll("realizations", p.at("realizations"));
  const std::vector<long long> times = to_ll_list("times", p.at("times"));

  const SpinState single =
      SpinState::with_charges(length, {to_int("single_position", p.at("single_position"))});
  const SpinState pair = SpinState::with_charges(length, to_int_list("pair", p.at("pair")));

  json out = json::object();
  int case_index = 0;
  for (const auto& [name, initial] : {std::pair<std::string, SpinState>{"single", single},
                                      {"two", pair}}) {
    const EquivalenceReport report = equivalence_check(
        initial, times, realizations, derive_seed(spec.seed, static_cast<std::uint64_t>(case_index)),
        workers);
    out[name] = {{"automaton_times", report.automaton_times},
                 {"block_times", report.block_times},
                 {"max_abs_deviation", report.max_abs_deviation},
                 {"max_abs_z", report.max_abs_z}};
    ++case_index;
  }
  write_text(dir / "equivalence.json", out.dump(2) + "\n");
  summary["cases"] = out;
}

}  // namespace

void run_experiment(const ExperimentSpec& spec, const std::string& out_dir, int workers) {
  // validate all keys against the kind's schema before any compute
  const ExperimentSpec defaults = default_experiment(spec.kind, spec.paper_scale);
  for (const auto& [key, value] : spec.params) {
    if (!defaults.params.contains(key)) {
      throw ValidationError("unknown parameter '" + key + "' for kind " + to_string(spec.kind));
    }
  }
  ExperimentSpec full = defaults;
  full.seed = spec.seed;
  for (const auto& [key, value] : spec.params) full.params[key] = value;

  const fs::path dir(out_dir);
  fs::create_directories(dir);

  json meta;
  meta["kind"] = to_string(full.kind);
  meta["seed"] = full.seed;
  meta["paper_scale"] = full.paper_scale;
  meta["params"] = full.params;
  meta["code_version"] = code_version();
  write_text(dir / "meta.json", meta.dump(2) + "\n");

  json summary;
  summary["kind"] = to_string(full.kind);
  try {
    switch (full.kind) {
      case ExperimentKind::fig1_thermal: run_fig1(full, dir, workers, summary); break;
      case ExperimentKind::fig2_single: run_fig2(full, dir, workers, summary); break;
      case ExperimentKind::fig3_scaling: run_fig3(full, dir, workers, summary); break;
      case ExperimentKind::fig4_two: run_fig4(full, dir, workers, summary); break;
      case ExperimentKind::fig5_scaling: run_fig5(full, dir, workers, summary); break;
      case ExperimentKind::fig8_overlay: run_fig8(full, dir, workers, summary); break;
      case ExperimentKind::krylov_report: run_krylov(full, dir, workers, summary); break;
      case ExperimentKind::equivalence: run_equivalence(full, dir, workers, summary); break;
    }
  } catch (const ValidationError& e) {
    throw ValidationError(to_string(full.kind) + ": " + e.what());
  } catch (const std::exception& e) {
    throw NumericError(to_string(full.kind) + ": " + e.what());
  }
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace fracton

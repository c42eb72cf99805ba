// larvest: temperature-dependent larval growth curves and hatching-time
// estimation.
//
// Subcommands:
//   fit       estimate a growth field from constant-temperature experiments
//   estimate  infer the hatching time for a case from scene lengths
//   simulate  run the robustness studies
//   synth     emit synthetic datasets / weather series
//
// Exit codes: 0 ok, 2 input parsing, 3 fitting, 4 no admissible candidate,
// 5 variance undefined (CI/posterior with a single length).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "larvest/data_model.hpp"
#include "larvest/errors.hpp"
#include "larvest/growth_dynamics.hpp"
#include "larvest/inference.hpp"
#include "larvest/parallel.hpp"
#include "larvest/sim_harness.hpp"
#include "larvest/synth_model.hpp"
#include "larvest/temperature_field.hpp"

namespace fs = std::filesystem;
using namespace larvest;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitFit = 3;
constexpr int kExitNoAdmissible = 4;
constexpr int kExitVarianceUndefined = 5;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  if (out.empty())
    throw Error(ErrorCode::OutOfRange, "empty list '" + text + "'");
  return out;
}

template <typename T>
T load_csv(const std::string& path, T (*parser)(std::istream&)) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::MalformedRow, "cannot open '" + path + "'");
  return parser(in);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::MalformedRow,
                "cannot open '" + path.string() + "' for writing");
  out << text;
}

struct FitArgs {
  std::string data_path;
  std::string out_path = "field.json";
  double h_time = 0.0;
  double h_temp = 0.0;
  std::string kernel_time = "gaussian";
  std::string kernel_temp = "gaussian";
  double alpha = 0.0;
  int grid_points = 8192;
  int shape_points = 8192;
  int curve_points = 2048;
  double dev_threshold = 1.0;
};

int run_fit(const FitArgs& args) {
  ExperimentalDataset dataset;
  try {
    dataset = load_csv(args.data_path, parse_experimental_csv);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  }
  try {
    FitOptions opts;
    opts.smoother.bandwidth_h = args.h_time;
    opts.smoother.kernel = kernel_from_string(args.kernel_time);
    opts.smoother.grid_points = args.grid_points;
    opts.temp_kernel = kernel_from_string(args.kernel_temp);
    opts.h_temp = args.h_temp;
    opts.alpha = args.alpha;
    opts.shape_grid_points = args.shape_points;
    opts.curve_grid_points = args.curve_points;
    opts.dev_threshold_c = args.dev_threshold;

    FitDiagnostics diag;
    const GrowthField field = fit_growth_field(dataset, opts, &diag);
    field.save(args.out_path);

    std::cout << "field written to " << args.out_path << "\n";
    std::cout << "alpha = " << diag.alpha << ", h_temp = " << diag.h_temp
              << " degC\n";
    for (const auto& e : diag.entries)
      std::cout << "  T=" << e.temperature_c << " degC: t_max=" << e.t_max_h
                << " h, t_pup=" << e.t_pup_h << " h, h_time=" << e.bandwidth_h
                << " h\n";
    for (const auto& [temp, reason] : diag.excluded)
      std::cout << "  warning: excluded T=" << temp << " degC: " << reason
                << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitFit;
  }
}

struct EstimateArgs {
  std::string field_path;
  std::string profile_path;
  std::string lengths_path;
  std::string lengths_inline;
  double t_a = 0.0;
  double t_star = 0.0;
  std::string stage = "unknown";
  std::string prior;
  double alpha_level = 0.05;
  bool alpha_level_given = false;
  double dt = 1.0;
  double step = 1.0;
  std::string out_dir = ".";
  std::string trajectory_path;
};

int run_estimate(const EstimateArgs& args) {
  std::optional<GrowthField> field;
  TemperatureProfile profile({0.0, 1.0}, {0.0, 0.0});
  CaseObservation obs;
  try {
    field = GrowthField::load(args.field_path);
    profile = load_csv(args.profile_path, parse_temperature_csv);
    if (!args.lengths_inline.empty())
      obs.lengths_mm = parse_list(args.lengths_inline);
    else
      obs.lengths_mm = load_csv(args.lengths_path, parse_lengths_csv);
    obs.t_a_h = args.t_a;
    obs.t_star_h = args.t_star;
    obs.stage = stage_from_string(args.stage);
    validate_case(obs, profile);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (profile.max_temperature() > field->temp_max())
      std::cout << "warning: profile exceeds the hottest experimental "
                   "temperature ("
                << field->temp_max() << " degC); extrapolating\n";

    const auto candidates =
        make_candidate_grid(obs.t_a_h, obs.t_star_h, args.step);
    const auto criterion =
        criterion_profile(*field, profile, obs, candidates, args.dt);
    HatchingEstimate est = estimate_hatching(criterion, obs);

    const bool want_ci = args.alpha_level_given || obs.n_obs() >= 2;
    if (want_ci) {
      try {
        add_likelihood_ci(est, args.alpha_level);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::VarianceUndefined) throw;
        if (args.alpha_level_given) {
          std::cerr << e.what() << '\n';
          return kExitVarianceUndefined;
        }
      }
    }
    if (!args.prior.empty()) {
      try {
        add_posterior(est, PriorSpec::parse(args.prior), args.step);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::VarianceUndefined) throw;
        std::cerr << e.what() << '\n';
        return kExitVarianceUndefined;
      }
    }

    fs::create_directories(args.out_dir);
    write_file(fs::path(args.out_dir) / "report.json",
               estimate_report_json(est) + "\n");
    {
      std::ostringstream csv;
      write_criterion_csv(csv, est);
      write_file(fs::path(args.out_dir) / "criterion.csv", csv.str());
    }
    if (est.posterior) {
      std::ostringstream csv;
      write_posterior_csv(csv, est);
      write_file(fs::path(args.out_dir) / "posterior.csv", csv.str());
    }
    if (!args.trajectory_path.empty()) {
      const auto traj = reconstruct_growth(*field, profile, est.t_hat_h,
                                           obs.t_star_h, args.dt);
      std::ostringstream csv;
      write_trajectory_csv(csv, traj);
      write_file(args.trajectory_path, csv.str());
    }

    std::cout << "t_hat = " << est.t_hat_h << " h (pmi " << est.pmi_h
              << " h)\n";
    if (est.ci)
      std::cout << "ci" << (1.0 - est.ci_alpha) * 100 << " = ["
                << est.ci->first << ", " << est.ci->second << "]"
                << (est.ci_lo_on_boundary || est.ci_hi_on_boundary
                        ? " (touches the admissible boundary)"
                        : "")
                << "\n";
    if (est.map) std::cout << "map = " << *est.map << " h\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    if (e.code() == ErrorCode::NoAdmissibleCandidate) return kExitNoAdmissible;
    if (e.code() == ErrorCode::VarianceUndefined) return kExitVarianceUndefined;
    return kExitFit;
  }
}

struct SimulateArgs {
  std::string study = "const-temp-noise";
  std::string sigma = "0.1,0.25,0.75,1";
  std::string rho = "0.9,0.7";
  int reps = 1000;
  int n_lengths = 20;
  double length_noise = 0.0;
  double t_h = 0.0;
  bool t_h_given = false;
  double t_a = -200.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double dt = 1.0;
  double step = 1.0;
  std::string field_path;
  std::string profile_path;
  std::string out_dir = ".";
};

int run_simulate(const SimulateArgs& args) {
  try {
    const Study study = study_from_string(args.study);
    StudyConfig cfg;
    cfg.replicates = args.reps;
    cfg.n_lengths = args.n_lengths;
    cfg.sigma_T = parse_list(args.sigma);
    cfg.rho_T = parse_list(args.rho);
    cfg.length_noise_sd = args.length_noise;
    cfg.t_a_h = args.t_a;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    cfg.dt = args.dt;
    cfg.candidate_step = args.step;
    cfg.true_hatch_h = args.t_h_given ? args.t_h
                       : study == Study::ConstTempNoise    ? -100.0
                       : study == Study::StationCorrelation ? -45.0
                                                            : -90.0;

    const GrowthField field = args.field_path.empty()
                                  ? canonical_study_field()
                                  : GrowthField::load(args.field_path);

    StudyResult result;
    switch (study) {
      case Study::ConstTempNoise:
        result = run_const_temp_noise(cfg, field);
        break;
      case Study::StationCorrelation:
        result = run_station_correlation(cfg, field);
        break;
      case Study::VaryingTempNoise: {
        const TemperatureProfile profile =
            args.profile_path.empty()
                ? synthetic_weather_profile()
                : load_csv(args.profile_path, parse_temperature_csv);
        result = run_varying_temp_noise(cfg, field, profile);
        break;
      }
    }

    fs::create_directories(args.out_dir);
    {
      std::ostringstream csv;
      write_samples_csv(csv, result);
      write_file(fs::path(args.out_dir) / "samples.csv", csv.str());
    }
    {
      std::ostringstream csv;
      write_histogram_csv(csv, result);
      write_file(fs::path(args.out_dir) / "histogram.csv", csv.str());
    }
    const std::string summary = summary_json(result);
    write_file(fs::path(args.out_dir) / "summary.json", summary + "\n");
    std::cout << summary << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  }
}

struct SynthArgs {
  std::string kind = "dataset";
  std::string temps = "6,9,12,15,18,21,24,27,30";
  int times = 25;
  int reps = 1;
  double noise_sd = 0.0;
  double rate = 0.006;
  double base_temp = 4.0;
  double max_len = 11.0;
  double hatch_len = 3.0;
  double shrink = 0.85;
  std::uint64_t seed = 42;
  std::string out_path = "dataset.csv";
};

int run_synth(const SynthArgs& args) {
  try {
    std::ostringstream csv;
    if (args.kind == "weather") {
      write_temperature_csv(csv, synthetic_weather_profile());
    } else if (args.kind == "dataset") {
      SynthFamily family;
      family.rate_coeff = args.rate;
      family.base_temp_c = args.base_temp;
      family.max_len_mm = args.max_len;
      family.hatch_len_mm = args.hatch_len;
      family.shrink_frac = args.shrink;
      family.noise_sd_mm = args.noise_sd;
      const auto ds = synth_dataset(family, parse_list(args.temps), args.times,
                                    args.reps, args.seed);
      write_experimental_csv(csv, ds);
    } else {
      throw Error(ErrorCode::OutOfRange,
                  "synth kind must be 'dataset' or 'weather'");
    }
    write_file(args.out_path, csv.str());
    std::cout << args.kind << " written to " << args.out_path << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"temperature-dependent larval growth curves and "
               "hatching-time estimation"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "fit a growth field from experiments");
  fit->add_option("--data", fit_args.data_path, "experimental CSV")->required();
  fit->add_option("--out", fit_args.out_path, "output field JSON");
  fit->add_option("--h-time", fit_args.h_time,
                  "time bandwidth in hours (default: 2 x median gap)");
  fit->add_option("--h-temp", fit_args.h_temp,
                  "temperature bandwidth in degC (default: 2 x max gap)");
  fit->add_option("--kernel-time", fit_args.kernel_time,
                  "epanechnikov|gaussian");
  fit->add_option("--kernel-temp", fit_args.kernel_temp,
                  "gaussian|epanechnikov");
  fit->add_option("--alpha", fit_args.alpha,
                  "landmark level in (0,1) (default: data-driven)");
  fit->add_option("--grid-points", fit_args.grid_points, "curve grid size");
  fit->add_option("--shape-points", fit_args.shape_points, "shape grid size");
  fit->add_option("--curve-points", fit_args.curve_points,
                  "query curve grid size");
  fit->add_option("--dev-threshold", fit_args.dev_threshold,
                  "lower developmental threshold in degC");

  EstimateArgs est_args;
  auto* est = app.add_subcommand("estimate", "estimate a hatching time");
  est->add_option("--field", est_args.field_path, "field JSON")->required();
  est->add_option("--profile", est_args.profile_path, "temperature CSV")
      ->required();
  auto* lengths_file =
      est->add_option("--lengths", est_args.lengths_path, "lengths CSV");
  est->add_option("--lengths-inline", est_args.lengths_inline,
                  "comma-separated lengths in mm")
      ->excludes(lengths_file);
  est->add_option("--t-a", est_args.t_a,
                  "earliest admissible hatching time (hours, negative)")
      ->required();
  est->add_option("--t-star", est_args.t_star,
                  "collection time (default 0, the relative clock origin)");
  est->add_option("--stage", est_args.stage, "feeding|postfeeding|unknown");
  est->add_option("--prior", est_args.prior,
                  "uniform:lo:hi | gaussian:mean:sd | exp:offset:mean");
  auto* alpha_opt = est->add_option("--alpha-level", est_args.alpha_level,
                                    "CI level (default 0.05)");
  est->add_option("--dt", est_args.dt, "Euler step in hours");
  est->add_option("--step", est_args.step, "candidate grid step in hours");
  est->add_option("--out-dir", est_args.out_dir, "report directory");
  est->add_option("--trajectory", est_args.trajectory_path,
                  "also write the best trajectory CSV here");

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "run a robustness study");
  sim->add_option("--study", sim_args.study,
                  "const-temp-noise|station|varying-temp-noise");
  sim->add_option("--sigma", sim_args.sigma, "temperature noise sds");
  sim->add_option("--rho", sim_args.rho, "station correlations");
  sim->add_option("--reps", sim_args.reps, "replicates per cell");
  sim->add_option("--n-lengths", sim_args.n_lengths, "lengths per sample");
  sim->add_option("--length-noise", sim_args.length_noise,
                  "sd of the length measurement noise (default 0)");
  auto* th_opt = sim->add_option("--t-h", sim_args.t_h, "planted hatching time");
  sim->add_option("--t-a", sim_args.t_a, "earliest admissible hatching time");
  sim->add_option("--seed", sim_args.seed, "RNG seed");
  sim->add_option("--threads", sim_args.threads,
                  "worker threads (default: LARVEST_THREADS or hardware)");
  sim->add_option("--dt", sim_args.dt, "Euler step");
  sim->add_option("--step", sim_args.step, "candidate step");
  sim->add_option("--field", sim_args.field_path,
                  "field JSON (default: bundled synthetic field)");
  sim->add_option("--profile", sim_args.profile_path,
                  "weather CSV for varying-temp-noise");
  sim->add_option("--out-dir", sim_args.out_dir, "output directory");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "emit synthetic inputs");
  synth->add_option("--kind", synth_args.kind, "dataset|weather");
  synth->add_option("--temps", synth_args.temps, "temperatures in degC");
  synth->add_option("--times", synth_args.times, "observation times per batch");
  synth->add_option("--reps", synth_args.reps, "replicates per time");
  synth->add_option("--noise-sd", synth_args.noise_sd, "length noise sd in mm");
  synth->add_option("--rate", synth_args.rate, "growth rate per degree-hour");
  synth->add_option("--base-temp", synth_args.base_temp,
                    "developmental threshold in degC");
  synth->add_option("--max-len", synth_args.max_len, "peak length in mm");
  synth->add_option("--hatch-len", synth_args.hatch_len, "hatch length in mm");
  synth->add_option("--shrink", synth_args.shrink, "pupation length fraction");
  synth->add_option("--seed", synth_args.seed, "RNG seed");
  synth->add_option("--out", synth_args.out_path, "output path");

  CLI11_PARSE(app, argc, argv);

  est_args.alpha_level_given = alpha_opt->count() > 0;
  sim_args.t_h_given = th_opt->count() > 0;

  if (fit->parsed()) return run_fit(fit_args);
  if (est->parsed()) return run_estimate(est_args);
  if (sim->parsed()) return run_simulate(sim_args);
  if (synth->parsed()) return run_synth(synth_args);
  return 0;
}

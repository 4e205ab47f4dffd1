// warpmesh: simulate triangular waveguide meshes and their allpass-warped
// versions, and export dispersion, modal and cost data as CSV.

#include "warpmesh/analysis.hpp"
#include "warpmesh/cost.hpp"
#include "warpmesh/errors.hpp"
#include "warpmesh/io.hpp"
#include "warpmesh/lattice.hpp"
#include "warpmesh/sim.hpp"
#include "warpmesh/warp.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace warpmesh;

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr double kDefaultAlpha = -0.45;
constexpr double kReferenceRateFactor = 1.75;

struct RunConfig {
  std::string scheme = "twm";
  int side_sections = 24;
  std::optional<double> alpha;
  std::int64_t steps = 16384;
  Eigen::Index fft_size = 65536;
  double direction = 0.0;
  int n_points = 512;
  std::string output = "-";
  std::string wav;
  std::string spectrum_path;
  std::uint32_t sample_rate = 44100;
  double floor_db = 20.0;
  double max_omega = kTemporalBandEdge;
  std::vector<double> alphas;
  bool one_multiply = false;
  std::string format = "both";
};

// Writes to stdout for "-" and to a file otherwise.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open " + path + " for writing");
  body(file);
}

Scheme scheme_of(const RunConfig& config) {
  auto s = parse_scheme(config.scheme);
  if (!s) throw std::invalid_argument("unknown scheme '" + config.scheme + "'");
  return *s;
}

// Validates alpha against the scheme, defaulting it for warped schemes.
std::optional<double> alpha_for(Scheme scheme, const RunConfig& config) {
  if (!is_warped(scheme)) {
    if (config.alpha) throw std::invalid_argument("--alpha only applies to warped schemes");
    return std::nullopt;
  }
  const double alpha = config.alpha.value_or(kDefaultAlpha);
  AllpassSpec<double> check(alpha);
  return alpha;
}

void cmd_simulate(const RunConfig& config) {
  const Scheme scheme = scheme_of(config);
  const auto alpha = alpha_for(scheme, config);
  if (config.steps < 1) throw std::invalid_argument("--steps must be at least 1");
  const TriangularLattice lattice = build_square_lattice(config.side_sections);
  const ProbeRecord probe = run_impulse_response(lattice, scheme, alpha, config.steps,
                                                 lattice.center(), lattice.center());
  with_output(config.output, [&](std::ostream& out) {
    out << "step,value\n";
    for (Eigen::Index n = 0; n < probe.samples.size(); ++n) {
      out << n << ',' << format_sig9(probe.samples(n)) << '\n';
    }
  });
  if (!config.wav.empty()) {
    std::ofstream file(config.wav, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open " + config.wav + " for writing");
    write_wav(file, std::span<const double>(probe.samples.data(), probe.samples.size()),
              WavOptions{config.sample_rate, -1.0});
  }
}

void cmd_dispersion(const RunConfig& config) {
  if (config.n_points < 2) throw std::invalid_argument("--points must be at least 2");
  std::optional<double> alpha;
  if (config.alpha) alpha = alpha_for(Scheme::WTWM, config);
  const DispersionCurve curve = alpha ? warped_dispersion_curve(*alpha, config.direction, config.n_points)
                                      : dispersion_curve(config.direction, config.n_points);
  with_output(config.output, [&](std::ostream& out) { write_dispersion_csv(out, curve); });

  const double fraction = tolerance_band_fraction(curve, 0.02);
  std::cerr << "# speed ratio within 2% up to " << format_sig9(100.0 * fraction)
            << "% of the band (omega_nominal <= " << format_sig9(fraction * kTemporalBandEdge)
            << " rad/sample)\n";
  if (alpha) {
    const RateComparison rate = compare_with_dense_mesh(*alpha);
    std::cerr << "# dc realignment rho = " << format_sig9(rate.realignment)
              << "; rate factor vs the 9x denser TWM = " << format_sig9(rate.rate_factor)
              << " (reference " << kReferenceRateFactor << ", "
              << format_sig9(100.0 * (rate.rate_factor / kReferenceRateFactor - 1.0)) << "%)\n"
              << "# 2% band: warped " << format_sig9(rate.warped_band_fraction) << ", dense TWM "
              << format_sig9(rate.dense_band_fraction) << '\n';
  }
}

void cmd_modes(const RunConfig& config) {
  ModeExperimentConfig experiment;
  experiment.side_sections = config.side_sections;
  experiment.scheme = scheme_of(config);
  experiment.alpha = alpha_for(experiment.scheme, config);
  experiment.steps = config.steps;
  experiment.fft_size = config.fft_size;
  experiment.max_omega = config.max_omega;
  experiment.peaks.floor_db = config.floor_db;
  if (config.steps < 1) throw std::invalid_argument("--steps must be at least 1");
  const ModeExperiment result = run_mode_experiment(experiment);

  with_output(config.output, [&](std::ostream& out) { write_mode_csv(out, result.match); });
  if (!config.spectrum_path.empty()) {
    with_output(config.spectrum_path, [&](std::ostream& out) { write_spectrum_csv(out, result.spectrum); });
  }
  std::cerr << "# " << result.match.matched_count() << " of " << result.match.entries.size()
            << " modes matched; max |deviation| = " << format_sig9(result.match.max_abs_deviation())
            << "; alignment factor = " << format_sig9(result.alignment) << '\n';
}

void cmd_warp_map(const RunConfig& config) {
  if (config.n_points < 2) throw std::invalid_argument("--points must be at least 2");
  std::vector<double> alphas = config.alphas;
  if (alphas.empty()) {
    for (int i = 0; i <= 9; ++i) alphas.push_back(-0.1 * i);
  }
  std::vector<AllpassSpec<double>> specs;
  for (double a : alphas) specs.emplace_back(a);
  with_output(config.output, [&](std::ostream& out) {
    out << "alpha,omega,omega_tilde\n";
    for (const auto& spec : specs) {
      for (int i = 0; i < config.n_points; ++i) {
        const double omega = M_PI * i / (config.n_points - 1);
        out << format_sig9(spec.alpha) << ',' << format_sig9(omega) << ','
            << format_sig9(warp_frequency(omega, spec)) << '\n';
      }
    }
  });
}

void cmd_cost(const RunConfig& config) {
  if (config.format != "csv" && config.format != "table" && config.format != "both") {
    throw std::invalid_argument("--format must be csv, table or both");
  }
  const CostReport report = cost_report(config.one_multiply ? one_multiply_cost_basis() : default_cost_basis());
  with_output(config.output, [&](std::ostream& out) {
    if (config.format != "table") write_cost_csv(out, report);
    if (config.format == "both") out << '\n';
    if (config.format != "csv") write_cost_table(out, report);
  });
}

void cmd_lattice(const RunConfig& config) {
  const TriangularLattice lattice = build_square_lattice(config.side_sections);
  with_output(config.output, [&](std::ostream& out) { write_lattice_csv(out, lattice); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangular waveguide mesh simulator with allpass dispersion correction"};
  app.set_config("--config", "", "key=value configuration file (flags take precedence)");
  app.require_subcommand(1);
  RunConfig config;

  auto add_side = [&](CLI::App* cmd) {
    cmd->add_option("--side", config.side_sections, "Square side in waveguide sections")->capture_default_str();
  };
  auto add_alpha = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", config.alpha, "Allpass coefficient in (-1, 0]; default -0.45 for warped schemes");
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", config.output, "Output CSV path ('-' for stdout)")->capture_default_str();
  };
  const auto scheme_check = CLI::IsMember({"twm", "fds", "wtwm", "wfds"});

  auto* simulate = app.add_subcommand("simulate", "Impulse response at the center junction");
  simulate->add_option("--scheme", config.scheme, "twm, fds, wtwm or wfds")->check(scheme_check)->capture_default_str();
  add_side(simulate);
  add_alpha(simulate);
  simulate->add_option("--steps", config.steps, "Number of samples")->capture_default_str();
  add_output(simulate);
  simulate->add_option("--wav", config.wav, "Also write the normalized probe as 16-bit PCM");
  simulate->add_option("--sample-rate", config.sample_rate, "Declared audio sample rate")->capture_default_str();

  auto* dispersion = app.add_subcommand("dispersion", "Speed ratio versus nominal frequency");
  add_alpha(dispersion);
  dispersion->add_option("--direction", config.direction, "Wavenumber direction in radians")->capture_default_str();
  dispersion->add_option("--points", config.n_points, "Number of samples")->capture_default_str();
  add_output(dispersion);

  auto* modes = app.add_subcommand("modes", "Ideal, predicted and measured odd modes of the square");
  modes->add_option("--scheme", config.scheme, "twm, fds, wtwm or wfds")->check(scheme_check)->capture_default_str();
  add_side(modes);
  add_alpha(modes);
  modes->add_option("--steps", config.steps, "Number of samples")->capture_default_str();
  modes->add_option("--fft-size", config.fft_size, "Zero-padded FFT length")->capture_default_str();
  modes->add_option("--max-omega", config.max_omega, "Highest ideal mode frequency (rad/sample)")->capture_default_str();
  modes->add_option("--floor-db", config.floor_db, "Peak floor below the strongest peak (dB)")->capture_default_str();
  modes->add_option("--spectrum", config.spectrum_path, "Also write the spectrum CSV here");
  add_output(modes);

  auto* warp_map = app.add_subcommand("warp-map", "Frequency warping maps for a set of coefficients");
  warp_map->add_option("--alpha", config.alphas, "Coefficients (default 0, -0.1, ..., -0.9)")->delimiter(',');
  warp_map->add_option("--points", config.n_points, "Samples on [0, pi]")->capture_default_str();
  add_output(warp_map);

  auto* cost = app.add_subcommand("cost", "Operation and memory counts at equal dispersion tolerance");
  cost->add_flag("--one-multiply", config.one_multiply, "Use one-multiply allpass sections");
  cost->add_option("--format", config.format, "csv, table or both")->capture_default_str();
  add_output(cost);

  auto* lattice = app.add_subcommand("lattice", "Dump the lattice as CSV");
  add_side(lattice);
  add_output(lattice);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) cmd_simulate(config);
    if (*dispersion) cmd_dispersion(config);
    if (*modes) cmd_modes(config);
    if (*warp_map) cmd_warp_map(config);
    if (*cost) cmd_cost(config);
    if (*lattice) cmd_lattice(config);
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}

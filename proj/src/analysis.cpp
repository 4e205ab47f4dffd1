#include "warpmesh/analysis.hpp"

#include "warpmesh/errors.hpp"
#include "warpmesh/io.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace warpmesh {

double twm_dispersion_omega(const SpatialFrequency& k) {
  if (k.norm() > kSpatialBandEdge * (1.0 + 1e-12)) {
    throw numerical_domain_error("wavenumber beyond the spatial band edge");
  }
  double acc = 0.0;
  for (int d = 0; d < 3; ++d) {
    const double h = std::sin(0.5 * k.dot(direction_vector(d)));
    acc += h * h;
  }
  const double half_sine = std::sqrt(acc / 3.0);
  if (half_sine > 1.0 + 1e-12) throw numerical_domain_error("dispersion relation out of range");
  return 2.0 * std::asin(std::min(half_sine, 1.0));
}

double speed_ratio(const SpatialFrequency& k, std::optional<double> alpha) {
  const double nominal = k.norm() * kNominalSpeed;
  const double mesh = twm_dispersion_omega(k);
  if (!alpha) return mesh / nominal;
  const AllpassSpec<double> spec(*alpha);
  return dc_realignment(spec) * warp_frequency_inverse(mesh, spec) / nominal;
}

namespace {

DispersionCurve sample_curve(std::optional<double> alpha, double direction, int n_points) {
  if (n_points < 2) throw usage_error("a dispersion curve needs at least 2 points");
  DispersionCurve curve;
  curve.scheme = alpha ? Scheme::WTWM : Scheme::TWM;
  curve.alpha = alpha;
  curve.direction = direction;
  curve.omega_nominal.resize(n_points);
  curve.speed_ratio.resize(n_points);
  const SpatialFrequency unit(std::cos(direction), std::sin(direction));
  for (int i = 0; i < n_points; ++i) {
    const double fraction = std::max(static_cast<double>(i) / (n_points - 1), 1e-6);
    const double magnitude = fraction * kSpatialBandEdge;
    curve.omega_nominal(i) = magnitude * kNominalSpeed;
    curve.speed_ratio(i) = speed_ratio(magnitude * unit, alpha);
  }
  return curve;
}

}  // namespace

DispersionCurve dispersion_curve(double direction, int n_points) {
  return sample_curve(std::nullopt, direction, n_points);
}

DispersionCurve warped_dispersion_curve(double alpha, double direction, int n_points) {
  return sample_curve(alpha, direction, n_points);
}

double tolerance_band_fraction(const DispersionCurve& curve, double tolerance) {
  double reach = 0.0;
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    if (!(std::abs(curve.speed_ratio(i) - 1.0) < tolerance)) break;
    reach = curve.omega_nominal(i);
  }
  return reach / kTemporalBandEdge;
}

void write_dispersion_csv(std::ostream& out, const DispersionCurve& curve) {
  out << "omega_nominal,speed_ratio\n";
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    out << format_sig9(curve.omega_nominal(i)) << ',' << format_sig9(curve.speed_ratio(i)) << '\n';
  }
}

RateComparison compare_with_dense_mesh(double alpha, double tolerance, int refinement,
                                       int n_points) {
  RateComparison r;
  const AllpassSpec<double> spec(alpha);
  r.alpha = alpha;
  r.realignment = dc_realignment(spec);
  r.reference_realignment = dc_realignment(AllpassSpec<double>(0.0));
  r.rate_factor = r.realignment / r.reference_realignment;
  r.refinement = refinement;
  r.tolerance = tolerance;
  r.warped_band_fraction = tolerance_band_fraction(warped_dispersion_curve(alpha, 0.0, n_points), tolerance);
  // A waveguide 1/refinement as long maps coarse frequency f onto f/refinement
  // of its own band.
  const double unwarped = tolerance_band_fraction(dispersion_curve(0.0, n_points), tolerance);
  r.dense_band_fraction = std::min(1.0, refinement * unwarped);
  return r;
}

std::vector<Mode> theoretical_modes(int side_sections, double max_omega) {
  if (side_sections < 2) throw invalid_size("side_sections must be at least 2");
  const double scale = M_PI / side_sections * kNominalSpeed;
  std::vector<Mode> modes;
  for (int m = 1; scale * std::sqrt(2.0 * m * m) <= max_omega; m += 2) {
    for (int n = m;; n += 2) {
      const double omega = scale * std::hypot(m, n);
      if (omega > max_omega) break;
      modes.push_back(Mode{m, n, m == n ? 1 : 2, omega, 0.0});
    }
  }
  std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    if (a.omega_ideal != b.omega_ideal) return a.omega_ideal < b.omega_ideal;
    return a.m < b.m;
  });
  return modes;
}

std::vector<Mode> predicted_modes(std::vector<Mode> modes, int side_sections,
                                  std::optional<double> alpha) {
  for (Mode& mode : modes) {
    const SpatialFrequency k = (M_PI / side_sections) * SpatialFrequency(mode.m, mode.n);
    mode.omega_predicted = mode.omega_ideal * speed_ratio(k, alpha);
  }
  return modes;
}

Eigen::ArrayXd Spectrum::magnitude_db() const {
  return 20.0 * magnitude.max(std::numeric_limits<double>::min()).log10();
}

Spectrum spectrum(const Eigen::VectorXd& signal, Eigen::Index fft_size) {
  if (fft_size < signal.size() || fft_size < 2 || (fft_size & (fft_size - 1)) != 0) {
    throw usage_error("fft size must be a power of two no smaller than the signal (" +
                      std::to_string(signal.size()) + " samples)");
  }
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(fft_size);
  padded.head(signal.size()) = signal;
  Eigen::FFT<double> fft;
  Eigen::VectorXcd bins;
  fft.fwd(bins, padded);

  const Eigen::Index half = fft_size / 2 + 1;
  Spectrum s;
  s.fft_size = fft_size;
  s.signal_length = signal.size();
  s.omega = Eigen::ArrayXd::LinSpaced(half, 0.0, M_PI);
  s.magnitude = bins.head(half).array().abs();
  return s;
}

double spectral_energy(const Spectrum& s) {
  const Eigen::Index last = s.magnitude.size() - 1;
  const double edges = s.magnitude(0) * s.magnitude(0) + s.magnitude(last) * s.magnitude(last);
  const double inner = s.magnitude.segment(1, last - 1).square().sum();
  return (edges + 2.0 * inner) / static_cast<double>(s.fft_size);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "omega,magnitude_db\n";
  const Eigen::ArrayXd db = s.magnitude_db();
  for (Eigen::Index i = 0; i < db.size(); ++i) {
    out << format_sig9(s.omega(i)) << ',' << format_sig9(db(i)) << '\n';
  }
}

std::vector<Peak> find_peaks(const Spectrum& s, const PeakOptions& options) {
  const Eigen::ArrayXd db = s.magnitude_db();
  const Eigen::Index n = db.size();
  std::vector<Eigen::Index> maxima;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    if (db(i) > db(i - 1) && db(i) > db(i + 1)) maxima.push_back(i);
  }
  if (maxima.empty()) return {};

  const double cell_bins = static_cast<double>(s.fft_size) / static_cast<double>(s.signal_length);
  const auto window = static_cast<Eigen::Index>(std::ceil(options.separation_cells * cell_bins));
  double strongest = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i : maxima) strongest = std::max(strongest, db(i));

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i : maxima) {
    if (db(i) < strongest - options.floor_db) continue;
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - window);
    const Eigen::Index hi = std::min(n - 1, i + window);
    Eigen::Index arg = lo;
    db.segment(lo, hi - lo + 1).maxCoeff(&arg);
    if (lo + arg == i) kept.push_back(i);
  }
  if (options.max_count > 0 && kept.size() > options.max_count) {
    std::stable_sort(kept.begin(), kept.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return db(a) > db(b); });
    kept.resize(options.max_count);
    std::sort(kept.begin(), kept.end());
  }

  std::vector<Peak> peaks;
  peaks.reserve(kept.size());
  for (Eigen::Index i : kept) {
    const double left = db(i - 1);
    const double mid = db(i);
    const double right = db(i + 1);
    const double denom = left - 2.0 * mid + right;
    // Neighbors deep in the noise (a line exactly on a bin with no padding)
    // carry no shape information.
    const bool isolated = std::min(mid - left, mid - right) > 40.0;
    const double offset = denom != 0.0 && !isolated ? 0.5 * (left - right) / denom : 0.0;
    peaks.push_back(Peak{s.omega(i) + offset * s.bin_width(),
                         mid - 0.25 * (left - right) * offset, false});
  }
  const double twin_span = options.twin_cells * cell_bins * s.bin_width();
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    if (peaks[i].omega - peaks[i - 1].omega < twin_span) peaks[i].twin = peaks[i - 1].twin = true;
  }
  return peaks;
}

double ModeMatch::max_abs_deviation() const {
  double worst = 0.0;
  for (const auto& e : entries) {
    if (e.deviation) worst = std::max(worst, std::abs(*e.deviation));
  }
  return worst;
}

std::size_t ModeMatch::matched_count() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const auto& e) { return e.omega_measured.has_value(); }));
}

ModeMatch match_modes(const std::vector<Mode>& predicted, const std::vector<double>& measured) {
  ModeMatch match;
  const std::size_t np = predicted.size();
  for (const Mode& mode : predicted) match.entries.push_back({mode, std::nullopt, std::nullopt});
  if (np == 0 || measured.empty()) return match;

  std::vector<double> reach(np, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < np; ++i) {
    const double w = predicted[i].omega_predicted;
    if (i > 0) reach[i] = std::min(reach[i], 0.5 * (w - predicted[i - 1].omega_predicted));
    if (i + 1 < np) reach[i] = std::min(reach[i], 0.5 * (predicted[i + 1].omega_predicted - w));
    if (np == 1) reach[i] = 0.5 * w;
  }

  struct Candidate {
    double distance;
    std::size_t p;
    std::size_t m;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t m = 0; m < measured.size(); ++m) {
      const double distance = std::abs(measured[m] - predicted[p].omega_predicted);
      if (distance <= reach[p]) candidates.push_back({distance, p, m});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });
  std::vector<bool> used(measured.size(), false);
  for (const Candidate& c : candidates) {
    auto& entry = match.entries[c.p];
    if (entry.omega_measured || used[c.m]) continue;
    used[c.m] = true;
    entry.omega_measured = measured[c.m];
    entry.deviation = (measured[c.m] - predicted[c.p].omega_predicted) / predicted[c.p].omega_predicted;
  }
  return match;
}

void write_mode_csv(std::ostream& out, const ModeMatch& match) {
  out << "m,n,omega_ideal,omega_predicted,omega_measured,deviation\n";
  for (const auto& e : match.entries) {
    out << e.mode.m << ',' << e.mode.n << ',' << format_sig9(e.mode.omega_ideal) << ','
        << format_sig9(e.mode.omega_predicted) << ','
        << (e.omega_measured ? format_sig9(*e.omega_measured) : std::string()) << ','
        << (e.deviation ? format_sig9(*e.deviation) : std::string()) << '\n';
  }
}

std::optional<double> deviation_from_ideal(const ModeMatchEntry& entry) {
  if (!entry.omega_measured) return std::nullopt;
  return (*entry.omega_measured - entry.mode.omega_ideal) / entry.mode.omega_ideal;
}

ModeExperiment run_mode_experiment(const ModeExperimentConfig& config) {
  const TriangularLattice lattice = build_square_lattice(config.side_sections);
  ModeExperiment result;
  result.probe = run_impulse_response(lattice, config.scheme, config.alpha, config.steps,
                                      lattice.center(), lattice.center());
  result.spectrum = spectrum(result.probe, config.fft_size);
  result.peaks = find_peaks(result.spectrum, config.peaks);

  const auto modes = predicted_modes(theoretical_modes(config.side_sections, config.max_omega),
                                     config.side_sections, config.alpha);
  std::vector<double> measured;
  for (const Peak& p : result.peaks) measured.push_back(p.omega);

  if (config.alpha && !modes.empty() && !measured.empty()) {
    // Align on the (1,1) mode: the peak nearest to where it should land before
    // realignment.
    const double expected = modes.front().omega_predicted / dc_realignment(AllpassSpec<double>(*config.alpha));
    const auto nearest = std::min_element(measured.begin(), measured.end(), [&](double a, double b) {
      return std::abs(a - expected) < std::abs(b - expected);
    });
    result.alignment = modes.front().omega_ideal / *nearest;
    for (double& w : measured) w *= result.alignment;
  }
  result.match = match_modes(modes, measured);
  return result;
}

}  // namespace warpmesh

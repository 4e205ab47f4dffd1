#pragma once

#include "warpmesh/sim.hpp"
#include "warpmesh/warp.hpp"

#include <Eigen/Core>

#include <cmath>
#include <iosfwd>
#include <optional>
#include <vector>

namespace warpmesh {

// Nominal propagation speed of the triangular schemes, spatial per time sample.
inline const double kNominalSpeed = 1.0 / std::sqrt(2.0);
// Isotropic spatial band edge for unit waveguides, rad per spatial sample.
inline const double kSpatialBandEdge = 2.0 * M_PI / std::sqrt(3.0);
// Temporal band edge implied by the two above, rad per sample.
inline const double kTemporalBandEdge = kSpatialBandEdge * kNominalSpeed;

using SpatialFrequency = Eigen::Vector2d;

/// Plane-wave temporal frequency of the triangular FDS/TWM:
///   cos(omega) = (1/3) sum_i cos(k . d_i)
/// evaluated through 2 asin(sqrt((1/3) sum sin^2(k . d_i / 2))), which is exact
/// near dc. Throws numerical_domain_error when |k| exceeds the band edge.
double twm_dispersion_omega(const SpatialFrequency& k);

/// Ratio of actual to nominal speed for a plane wave with wavenumber k. With an
/// allpass coefficient, frequencies pass through the inverse warp map and the
/// dc realignment factor.
double speed_ratio(const SpatialFrequency& k, std::optional<double> alpha = std::nullopt);

struct DispersionCurve {
  Scheme scheme = Scheme::TWM;
  std::optional<double> alpha;
  double direction = 0.0;
  Eigen::ArrayXd omega_nominal;
  Eigen::ArrayXd speed_ratio;

  Eigen::Index size() const { return omega_nominal.size(); }
};

/// |k| sampled uniformly on (0, band edge]; the first point sits at 1e-6 of
/// the band, standing in for the dc limit. Requires n_points >= 2.
DispersionCurve dispersion_curve(double direction, int n_points);
DispersionCurve warped_dispersion_curve(double alpha, double direction, int n_points);

/// Largest fraction f of the temporal band such that |speed_ratio - 1| < tolerance
/// for every sample with omega_nominal <= f * band edge.
double tolerance_band_fraction(const DispersionCurve& curve, double tolerance);

void write_dispersion_csv(std::ostream& out, const DispersionCurve& curve);

/// Compares the warped mesh against the 9x denser (one-third waveguide) TWM
/// that reaches similar accuracy.
struct RateComparison {
  double alpha = 0.0;
  double realignment = 0.0;            // dc realignment of the warped mesh
  double reference_realignment = 2.0;  // same mesh with plain double delays (alpha = 0)
  double rate_factor = 0.0;            // realignment / reference_realignment
  int refinement = 3;                  // linear refinement of the dense TWM
  double tolerance = 0.02;
  double warped_band_fraction = 0.0;   // band within tolerance, warped mesh
  double dense_band_fraction = 0.0;    // same for the dense TWM, in coarse-band units
};

RateComparison compare_with_dense_mesh(double alpha, double tolerance = 0.02,
                                       int refinement = 3, int n_points = 4096);

struct Mode {
  int m = 1;
  int n = 1;
  int multiplicity = 1;
  double omega_ideal = 0.0;
  double omega_predicted = 0.0;
};

/// Odd (m, n) modes of a clamped square of side L at nominal speed, with
/// omega_ideal <= max_omega, ascending. (m, n) and (n, m) are listed once, as
/// m <= n, with multiplicity 2.
std::vector<Mode> theoretical_modes(int side_sections, double max_omega);

/// Fills omega_predicted: the frequency the mesh places each mode at, given the
/// mode's wavenumber (pi / L)(m, n) with m along the waveguide axis.
std::vector<Mode> predicted_modes(std::vector<Mode> modes, int side_sections,
                                  std::optional<double> alpha = std::nullopt);

struct Spectrum {
  Eigen::ArrayXd omega;      // bins on [0, pi]
  Eigen::ArrayXd magnitude;  // |X(omega)|
  Eigen::Index fft_size = 0;
  Eigen::Index signal_length = 0;

  Eigen::ArrayXd magnitude_db() const;
  double bin_width() const { return 2.0 * M_PI / static_cast<double>(fft_size); }
};

/// Rectangular-window, zero-padded magnitude spectrum. fft_size must be a power
/// of two no smaller than the probe length.
Spectrum spectrum(const Eigen::VectorXd& signal, Eigen::Index fft_size);
inline Spectrum spectrum(const ProbeRecord& probe, Eigen::Index fft_size) {
  return spectrum(probe.samples, fft_size);
}

// Signal energy recovered from a half spectrum (Parseval).
double spectral_energy(const Spectrum& s);

void write_spectrum_csv(std::ostream& out, const Spectrum& s);

struct PeakOptions {
  double floor_db = 20.0;        // keep peaks at most this far below the strongest
  std::size_t max_count = 0;     // 0: unlimited
  double separation_cells = 3.0; // dominance window, in resolution cells of the signal
  double twin_cells = 8.0;       // reported peaks this close are flagged as twins
};

struct Peak {
  double omega = 0.0;
  double magnitude_db = 0.0;
  bool twin = false;
};

/// Local maxima within floor_db of the strongest one, refined by parabolic
/// interpolation of the dB magnitude, ascending in frequency.
///
/// A rectangular window puts sidelobes 13 dB below every line, one and a half
/// cells away. A maximum is therefore dropped when a stronger one lies within
/// separation_cells resolution cells (2 pi / signal length). Lines closer than
/// that merge into one peak; reported peaks closer than twin_cells are flagged.
std::vector<Peak> find_peaks(const Spectrum& s, const PeakOptions& options = {});

struct ModeMatchEntry {
  Mode mode;
  std::optional<double> omega_measured;
  std::optional<double> deviation;  // (measured - predicted) / predicted
};

struct ModeMatch {
  std::vector<ModeMatchEntry> entries;

  double max_abs_deviation() const;
  std::size_t matched_count() const;
};

/// Greedy nearest-neighbor pairing. A prediction accepts measurements within
/// half the distance to its nearest neighbouring prediction; pairs are taken
/// in order of increasing distance.
ModeMatch match_modes(const std::vector<Mode>& predicted, const std::vector<double>& measured);

void write_mode_csv(std::ostream& out, const ModeMatch& match);

// Relative distance of a matched measurement from the ideal mode position.
std::optional<double> deviation_from_ideal(const ModeMatchEntry& entry);

struct ModeExperimentConfig {
  int side_sections = 24;
  Scheme scheme = Scheme::TWM;
  std::optional<double> alpha;
  std::int64_t steps = 16384;
  Eigen::Index fft_size = 65536;
  double max_omega = kTemporalBandEdge;
  PeakOptions peaks;
};

struct ModeExperiment {
  ProbeRecord probe;
  Spectrum spectrum;
  std::vector<Peak> peaks;
  // Factor applied to measured frequencies before matching: 1 for unwarped
  // schemes; for warped ones, ideal (1,1) over the measured (1,1) peak.
  double alignment = 1.0;
  ModeMatch match;
};

/// Center-excited, center-probed impulse response of the square membrane,
/// its spectral peaks, and their pairing with the predicted odd modes.
ModeExperiment run_mode_experiment(const ModeExperimentConfig& config);

}  // namespace warpmesh

#pragma once

#include "warpmesh/lattice.hpp"
#include "warpmesh/warp.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string_view>

namespace warpmesh {

enum class Scheme { TWM, FDS, WTWM, WFDS };

constexpr bool is_warped(Scheme s) { return s == Scheme::WTWM || s == Scheme::WFDS; }
constexpr bool is_wave_scheme(Scheme s) { return s == Scheme::TWM || s == Scheme::WTWM; }

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

using PortArray = Eigen::Array<double, kDirections, Eigen::Dynamic>;

/// Full state of one of the four mesh schemes. Only the planes belonging to
/// the scheme are sized; the others stay empty.
///
/// Wave schemes: `waves(d, j)` is the wave arriving at junction j through port
/// d (from its neighbor in direction d). In the warped variant it is the
/// output register of that edge's delay element and `wave_allpass(d, j)` is the
/// allpass state of the edge leaving j in direction d.
///
/// Stencil schemes: `now` is p(n) and `delayed` is D[p](n), where D is the unit
/// delay (FDS, so `delayed` = p(n-1)) or z^-1 A(z) (WFDS). The WFDS keeps the
/// allpass states of its two per-junction delay chains in `first_allpass`
/// and `second_allpass`.
struct MeshState {
  Scheme scheme = Scheme::TWM;
  AllpassSpec<double> allpass;
  std::size_t junctions = 0;
  std::int64_t step_count = 0;

  PortArray waves;
  PortArray wave_allpass;

  Eigen::ArrayXd now;
  Eigen::ArrayXd delayed;
  Eigen::ArrayXd first_allpass;
  Eigen::ArrayXd second_allpass;
};

/// Zero state. `alpha` must be given exactly when the scheme is warped.
MeshState rest_state(const TriangularLattice& lattice, Scheme scheme,
                     std::optional<double> alpha = std::nullopt);

/// One synchronous step of TWM / WTWM: scatter at every junction, then move
/// the outgoing waves through the edge delay elements. Rim junctions are held
/// at zero, so they reflect every incoming wave with inverted sign.
void scatter_step(const TriangularLattice& lattice, MeshState& state);

/// One step of FDS / WFDS: p(n+1) = (1/3) sum D[p_i](n+1) - D^2[p_j](n+1) on
/// interior junctions, zero on the rim.
void fds_step(const TriangularLattice& lattice, MeshState& state);

// Dispatches on state.scheme.
void step(const TriangularLattice& lattice, MeshState& state);

/// Junction signal at the current time index.
double junction_signal(const TriangularLattice& lattice, const MeshState& state, JunctionId j);
Eigen::ArrayXd junction_signals(const TriangularLattice& lattice, const MeshState& state);

/// Impulse of the given amplitude at interior junction j.
///
/// Wave schemes add amplitude/2 to each of the six incoming waves, so the
/// junction reads `amplitude` at the current step. Stencil schemes add
/// `amplitude` to p(n) and amplitude/6 to the delayed plane of every interior
/// neighbor: that is the past the equal wave split implies, which makes both
/// forms produce identical junction signals.
void excite_impulse(const TriangularLattice& lattice, MeshState& state, JunctionId j,
                    double amplitude);

struct ProbeRecord {
  JunctionId junction;
  Eigen::VectorXd samples;
};

/// Unit impulse at `input`, then `steps` samples of the signal at `output`
/// (the first sample is taken before the first step).
ProbeRecord run_impulse_response(const TriangularLattice& lattice, Scheme scheme,
                                 std::optional<double> alpha, std::int64_t steps,
                                 JunctionId input, JunctionId output);

}  // namespace warpmesh

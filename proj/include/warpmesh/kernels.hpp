#pragma once

// Per-junction arithmetic shared by the mesh steppers. Everything is templated
// on the sample type so the cost model can run the exact same code with an
// operation-counting scalar.

#include "warpmesh/lattice.hpp"
#include "warpmesh/warp.hpp"

#include <array>

namespace warpmesh::kernels {

template <typename S>
using Ports = std::array<S, kDirections>;

inline constexpr double kThird = 1.0 / 3.0;

/// Lossless 6-port junction: v = (1/3) sum(in), out_d = v - in_d.
template <typename S>
S scatter(const Ports<S>& in, Ports<S>& out) {
  S sum = in[0];
  for (int d = 1; d < kDirections; ++d) sum = sum + in[d];
  S v = kThird * sum;
  for (int d = 0; d < kDirections; ++d) out[d] = v - in[d];
  return v;
}

/// Outgoing waves through the edges' allpass sections (WTWM).
template <typename S, typename Coeff>
void warp_ports(const AllpassSpec<Coeff>& spec, std::array<AllpassState<S>, kDirections>& states,
                Ports<S>& out) {
  for (int d = 0; d < kDirections; ++d) out[d] = allpass_step(spec, states[d], out[d]);
}

/// Triangular stencil: (1/3) sum(delayed neighbors) - twice-delayed self.
template <typename S>
S stencil(const Ports<S>& delayed_neighbors, S twice_delayed) {
  S sum = delayed_neighbors[0];
  for (int d = 1; d < kDirections; ++d) sum = sum + delayed_neighbors[d];
  return kThird * sum - twice_delayed;
}

template <typename S>
struct ChainOutputs {
  S once;   // D[p](n+1)
  S twice;  // D^2[p](n+1)
};

/// Advances the two per-junction warped delay chains of the WFDS. `now` is p(n),
/// `delayed` is D[p](n); on return `delayed` holds D[p](n+1).
template <typename S, typename Coeff>
ChainOutputs<S> advance_chains(const AllpassSpec<Coeff>& spec, S now, S& delayed,
                               AllpassState<S>& first, AllpassState<S>& second) {
  S once = allpass_step(spec, first, now);
  S twice = allpass_step(spec, second, delayed);
  delayed = once;
  return {once, twice};
}

}  // namespace warpmesh::kernels

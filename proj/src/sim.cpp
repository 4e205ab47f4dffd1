#include "warpmesh/sim.hpp"

#include "warpmesh/errors.hpp"
#include "warpmesh/kernels.hpp"

#include <string>

namespace warpmesh {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::TWM: return "twm";
    case Scheme::FDS: return "fds";
    case Scheme::WTWM: return "wtwm";
    case Scheme::WFDS: return "wfds";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::TWM, Scheme::FDS, Scheme::WTWM, Scheme::WFDS}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

namespace {

void check_matches(const TriangularLattice& lattice, const MeshState& state) {
  if (state.junctions != lattice.size()) {
    throw usage_error("mesh state was built for a different lattice");
  }
}

}  // namespace

MeshState rest_state(const TriangularLattice& lattice, Scheme scheme, std::optional<double> alpha) {
  if (alpha.has_value() != is_warped(scheme)) {
    throw usage_error(std::string("allpass coefficient must be given exactly for warped schemes (scheme ") +
                      std::string(to_string(scheme)) + ")");
  }
  MeshState state;
  state.scheme = scheme;
  state.junctions = lattice.size();
  if (alpha) state.allpass = AllpassSpec<double>(*alpha);
  const auto n = static_cast<Eigen::Index>(lattice.size());
  if (is_wave_scheme(scheme)) {
    state.waves = PortArray::Zero(kDirections, n);
    if (is_warped(scheme)) state.wave_allpass = PortArray::Zero(kDirections, n);
  } else {
    state.now = Eigen::ArrayXd::Zero(n);
    state.delayed = Eigen::ArrayXd::Zero(n);
    if (is_warped(scheme)) {
      state.first_allpass = Eigen::ArrayXd::Zero(n);
      state.second_allpass = Eigen::ArrayXd::Zero(n);
    }
  }
  return state;
}

void scatter_step(const TriangularLattice& lattice, MeshState& state) {
  if (!is_wave_scheme(state.scheme)) throw usage_error("scatter_step needs a TWM or WTWM state");
  check_matches(lattice, state);

  const auto& table = lattice.neighbor_table();
  const auto& rim = lattice.rim_flags();
  const bool warped = is_warped(state.scheme);
  PortArray next = PortArray::Zero(kDirections, state.waves.cols());

  kernels::Ports<double> in{};
  kernels::Ports<double> out{};
  std::array<AllpassState<double>, kDirections> edge_states{};
  for (Eigen::Index j = 0; j < state.waves.cols(); ++j) {
    for (int d = 0; d < kDirections; ++d) in[d] = state.waves(d, j);
    if (rim[j]) {
      for (int d = 0; d < kDirections; ++d) out[d] = -in[d];
    } else {
      kernels::scatter(in, out);
    }
    if (warped) {
      for (int d = 0; d < kDirections; ++d) edge_states[d].s = state.wave_allpass(d, j);
      kernels::warp_ports(state.allpass, edge_states, out);
      for (int d = 0; d < kDirections; ++d) state.wave_allpass(d, j) = edge_states[d].s;
    }
    for (int d = 0; d < kDirections; ++d) {
      const std::int32_t target = table(d, j);
      if (target >= 0) next(opposite(d), target) = out[d];
    }
  }
  state.waves = std::move(next);
  ++state.step_count;
}

void fds_step(const TriangularLattice& lattice, MeshState& state) {
  if (is_wave_scheme(state.scheme)) throw usage_error("fds_step needs an FDS or WFDS state");
  check_matches(lattice, state);

  const auto& table = lattice.neighbor_table();
  const auto& rim = lattice.rim_flags();
  const auto n = state.now.size();

  // once = D[p](n+1), twice = D^2[p](n+1)
  Eigen::ArrayXd once;
  Eigen::ArrayXd twice;
  if (is_warped(state.scheme)) {
    once.resize(n);
    twice.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      AllpassState<double> first{state.first_allpass(j)};
      AllpassState<double> second{state.second_allpass(j)};
      const auto out = kernels::advance_chains(state.allpass, state.now(j), state.delayed(j),
                                               first, second);
      state.first_allpass(j) = first.s;
      state.second_allpass(j) = second.s;
      once(j) = out.once;
      twice(j) = out.twice;
    }
  } else {
    once = state.now;
    twice = state.delayed;
    state.delayed = state.now;
  }

  kernels::Ports<double> nb{};
  for (Eigen::Index j = 0; j < n; ++j) {
    if (rim[j]) {
      state.now(j) = 0.0;
      continue;
    }
    for (int d = 0; d < kDirections; ++d) nb[d] = once(table(d, j));
    state.now(j) = kernels::stencil(nb, twice(j));
  }
  ++state.step_count;
}

void step(const TriangularLattice& lattice, MeshState& state) {
  if (is_wave_scheme(state.scheme)) {
    scatter_step(lattice, state);
  } else {
    fds_step(lattice, state);
  }
}

double junction_signal(const TriangularLattice& lattice, const MeshState& state, JunctionId j) {
  check_matches(lattice, state);
  if (lattice.is_rim(j)) return 0.0;
  if (is_wave_scheme(state.scheme)) {
    kernels::Ports<double> in{};
    kernels::Ports<double> out{};
    for (int d = 0; d < kDirections; ++d) in[d] = state.waves(d, j.index);
    return kernels::scatter(in, out);
  }
  return state.now(j.index);
}

Eigen::ArrayXd junction_signals(const TriangularLattice& lattice, const MeshState& state) {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(lattice.size()));
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out(j) = junction_signal(lattice, state, JunctionId{static_cast<std::int32_t>(j)});
  }
  return out;
}

void excite_impulse(const TriangularLattice& lattice, MeshState& state, JunctionId j,
                    double amplitude) {
  check_matches(lattice, state);
  if (lattice.is_rim(j)) throw usage_error("cannot excite a clamped rim junction");
  if (is_wave_scheme(state.scheme)) {
    state.waves.col(j.index) += 0.5 * amplitude;
    return;
  }
  state.now(j.index) += amplitude;
  for (const Neighbor& nb : neighbors(lattice, j)) {
    if (!lattice.is_rim(nb.target)) state.delayed(nb.target.index) += amplitude / 6.0;
  }
}

ProbeRecord run_impulse_response(const TriangularLattice& lattice, Scheme scheme,
                                 std::optional<double> alpha, std::int64_t steps,
                                 JunctionId input, JunctionId output) {
  if (steps < 1) throw usage_error("steps must be at least 1");
  if (!lattice.contains(output)) throw std::out_of_range("unknown probe junction");
  MeshState state = rest_state(lattice, scheme, alpha);
  excite_impulse(lattice, state, input, 1.0);
  ProbeRecord record{output, Eigen::VectorXd(steps)};
  for (std::int64_t n = 0; n < steps; ++n) {
    record.samples(n) = junction_signal(lattice, state, output);
    if (n + 1 < steps) step(lattice, state);
  }
  return record;
}

}  // namespace warpmesh

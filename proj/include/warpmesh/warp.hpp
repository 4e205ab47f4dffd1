#pragma once

// First-order allpass A(z) = (alpha + z^-1) / (1 + alpha z^-1), the warped delay
// element z^-1 A(z), and the frequency maps it induces.

#include "warpmesh/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace warpmesh {

template <typename Scalar>
struct AllpassSpec {
  Scalar alpha{0};

  AllpassSpec() = default;
  explicit AllpassSpec(Scalar a) : alpha(a) {
    using std::isfinite;
    if (!(a > Scalar(-1) && a <= Scalar(0)) || !isfinite(a)) {
      throw std::invalid_argument("allpass coefficient must lie in (-1, 0], got " +
                                  std::to_string(static_cast<double>(a)));
    }
  }
};

template <typename Scalar>
struct AllpassState {
  Scalar s{0};
};

/// One sample of the canonical (one-state, two-multiply) allpass:
///   y = alpha x + s,  s' = x - alpha y.
template <typename Scalar, typename Coeff>
Scalar allpass_step(const AllpassSpec<Coeff>& spec, AllpassState<Scalar>& state, Scalar x) {
  Scalar y = spec.alpha * x + state.s;
  state.s = x - spec.alpha * y;
  return y;
}

/// Allpass followed by a unit delay. The output at step n only depends on
/// inputs before n.
template <typename Scalar>
struct WarpedDelayState {
  AllpassState<Scalar> allpass;
  Scalar reg{0};
};

template <typename Scalar, typename Coeff>
Scalar warped_delay_step(const AllpassSpec<Coeff>& spec, WarpedDelayState<Scalar>& state,
                         Scalar x) {
  Scalar y = state.reg;
  state.reg = allpass_step(spec, state.allpass, x);
  return y;
}

template <typename Scalar>
std::complex<Scalar> allpass_response(Scalar omega, const AllpassSpec<Scalar>& spec) {
  const std::complex<Scalar> zinv = std::polar(Scalar(1), -omega);
  return (spec.alpha + zinv) / (Scalar(1) + spec.alpha * zinv);
}

/// Unwrapped phase lag of z^-1 A(z) at omega: a continuous, strictly increasing
/// map of [0, pi] onto [0, 2 pi].
template <typename Scalar>
Scalar warp_frequency(Scalar omega, const AllpassSpec<Scalar>& spec) {
  using std::atan2;
  using std::cos;
  using std::sin;
  if (!(omega >= Scalar(0) && omega <= Scalar(M_PI))) {
    throw numerical_domain_error("warp_frequency: omega must lie in [0, pi]");
  }
  const Scalar a = spec.alpha;
  return Scalar(2) * omega - Scalar(2) * atan2(a * sin(omega), Scalar(1) + a * cos(omega));
}

/// d(warp_frequency)/d(omega): one plus the group delay of A.
template <typename Scalar>
Scalar warp_derivative(Scalar omega, const AllpassSpec<Scalar>& spec) {
  const Scalar a = spec.alpha;
  return Scalar(1) + (Scalar(1) - a * a) / (Scalar(1) + Scalar(2) * a * std::cos(omega) + a * a);
}

/// The printed closed form: the principal-value arctan of the same phase.
/// Differs from warp_frequency by a multiple of pi.
template <typename Scalar>
Scalar warp_frequency_principal(Scalar omega, const AllpassSpec<Scalar>& spec) {
  const Scalar a = spec.alpha;
  const Scalar s = std::sin(omega);
  const Scalar c = std::cos(omega);
  return std::atan(Scalar(2) * s * (a + c) / (Scalar(1) + a * a + Scalar(2) * a * c - Scalar(2) * s * s));
}

/// Inverse of warp_frequency on [0, warp_frequency(pi)] = [0, 2 pi].
/// Safeguarded Newton iteration inside a shrinking bracket.
template <typename Scalar>
Scalar warp_frequency_inverse(Scalar omega_tilde, const AllpassSpec<Scalar>& spec) {
  const Scalar top = Scalar(2 * M_PI);
  if (!(omega_tilde >= Scalar(0) && omega_tilde <= top)) {
    throw numerical_domain_error("warp_frequency_inverse: argument must lie in [0, 2 pi]");
  }
  if (omega_tilde == Scalar(0)) return Scalar(0);
  if (omega_tilde == top) return Scalar(M_PI);

  Scalar lo = 0;
  Scalar hi = Scalar(M_PI);
  // dc slope of the map is 2 / (1 + alpha).
  Scalar x = omega_tilde * (Scalar(1) + spec.alpha) / Scalar(2);
  if (!(x > lo && x < hi)) x = Scalar(0.5) * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const Scalar f = warp_frequency(x, spec) - omega_tilde;
    if (f == Scalar(0)) return x;
    if (f > 0) hi = x; else lo = x;
    Scalar next = x - f / warp_derivative(x, spec);
    if (!(next > lo && next < hi)) next = Scalar(0.5) * (lo + hi);
    if (std::abs(next - x) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * x) {
      return next;
    }
    x = next;
  }
  return x;
}

/// Phase delay of A alone, in samples. At dc it equals (1 - alpha) / (1 + alpha);
/// at pi it is one sample.
template <typename Scalar>
Scalar phase_delay(Scalar omega, const AllpassSpec<Scalar>& spec) {
  const Scalar a = spec.alpha;
  if (omega <= Scalar(0)) return (Scalar(1) - a) / (Scalar(1) + a);
  return (omega - Scalar(2) * std::atan2(a * std::sin(omega), Scalar(1) + a * std::cos(omega))) / omega;
}

/// Frequency scale that restores dc propagation speed in a mesh whose unit
/// delays were replaced by z^-1 A(z): the dc slope of warp_frequency.
template <typename Scalar>
Scalar dc_realignment(const AllpassSpec<Scalar>& spec) {
  return Scalar(2) / (Scalar(1) + spec.alpha);
}

}  // namespace warpmesh

#pragma once

#include "warpmesh/lattice.hpp"
#include "warpmesh/sim.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace warpmesh {

using Rational = boost::rational<std::int64_t>;

/// Per-junction, per-sample cost of one scheme, plus the refinement it needs
/// to reach a given dispersion tolerance. Unwarped schemes are scaled by the
/// density factor (junction count), warped ones by the rate factor (samples).
struct CostBasis {
  Scheme scheme = Scheme::TWM;
  Rational sums;
  Rational mults;
  Rational memory;
  Rational density_factor{1};
  Rational rate_factor{1};
};

struct CostRow {
  Scheme scheme = Scheme::TWM;
  Rational sums;
  Rational mults;
  Rational memory;
};

struct CostReport {
  std::vector<CostRow> rows;

  const CostRow& row(Scheme s) const;
};

/// TWM (11, 1, 6) x 9, WTWM (23, 13, 13) x 7/4, FDS (6, 1, 2) x 9,
/// WFDS (10, 5, 4) x 7/4: canonical two-multiply, one-state allpass sections.
std::vector<CostBasis> default_cost_basis();

/// Same comparison with one-multiply allpass sections (one multiply, two
/// sums and two memory words per section).
std::vector<CostBasis> one_multiply_cost_basis();

/// Sets every density and rate factor to one.
std::vector<CostBasis> unit_factors(std::vector<CostBasis> basis);

CostReport cost_report(const std::vector<CostBasis>& basis);

/// Exact decimal when the denominator only has factors 2 and 5, "p/q" otherwise.
std::string to_decimal(const Rational& r);

void write_cost_csv(std::ostream& out, const CostReport& report);
void write_cost_table(std::ostream& out, const CostReport& report);

struct MeasuredOps {
  double sums = 0.0;
  double mults = 0.0;
};

/// Runs the simulator's per-junction kernels with an operation-counting scalar
/// over every interior junction of one step and returns the per-junction
/// averages.
MeasuredOps verify_basis_against_simulator(const TriangularLattice& lattice, Scheme scheme,
                                           double alpha = -0.45);

}  // namespace warpmesh

#include "warpmesh/cost.hpp"

#include <doctest.h>

#include <sstream>

using namespace warpmesh;

namespace {

void check_row(const CostReport& r, Scheme s, Rational sums, Rational mults, Rational memory) {
  CAPTURE(to_string(s));
  const CostRow& row = r.row(s);
  CHECK(row.sums == sums);
  CHECK(row.mults == mults);
  CHECK(row.memory == memory);
}

}  // namespace

TEST_CASE("refinement-scaled costs") {
  const auto r = cost_report(default_cost_basis());
  check_row(r, Scheme::TWM, Rational(99), Rational(9), Rational(54));
  check_row(r, Scheme::WTWM, Rational(161, 4), Rational(91, 4), Rational(91, 4));
  check_row(r, Scheme::FDS, Rational(54), Rational(9), Rational(18));
  check_row(r, Scheme::WFDS, Rational(35, 2), Rational(35, 4), Rational(7));

  for (auto [plain, warped] : {std::pair{Scheme::TWM, Scheme::WTWM}, std::pair{Scheme::FDS, Scheme::WFDS}}) {
    CHECK(r.row(warped).sums < r.row(plain).sums);
    CHECK(r.row(warped).memory < r.row(plain).memory);
  }
  // Allpass multiplies outweigh the TWM's single one even after refinement.
  CHECK(r.row(Scheme::WTWM).mults > r.row(Scheme::TWM).mults);
  CHECK(r.row(Scheme::WFDS).mults < r.row(Scheme::FDS).mults);
}

TEST_CASE("unit factors return the per-junction basis") {
  const auto basis = default_cost_basis();
  const auto r = cost_report(unit_factors(basis));
  for (const auto& b : basis) check_row(r, b.scheme, b.sums, b.mults, b.memory);
}

TEST_CASE("one-multiply allpass variant") {
  const auto r = cost_report(one_multiply_cost_basis());
  check_row(r, Scheme::WTWM, Rational(161, 4), Rational(49, 4), Rational(133, 4));
  check_row(r, Scheme::WFDS, Rational(35, 2), Rational(21, 4), Rational(21, 2));
}

TEST_CASE("basis matches the simulator's kernels") {
  const auto lattice = build_square_lattice(8);
  for (const auto& b : unit_factors(default_cost_basis())) {
    CAPTURE(to_string(b.scheme));
    const MeasuredOps ops = verify_basis_against_simulator(lattice, b.scheme);
    CHECK(ops.sums == doctest::Approx(boost::rational_cast<double>(b.sums)));
    CHECK(ops.mults == doctest::Approx(boost::rational_cast<double>(b.mults)));
  }
}

TEST_CASE("decimal rendering") {
  CHECK(to_decimal(Rational(99)) == "99");
  CHECK(to_decimal(Rational(161, 4)) == "40.25");
  CHECK(to_decimal(Rational(35, 2)) == "17.5");
  CHECK(to_decimal(Rational(-1, 8)) == "-0.125");
  CHECK(to_decimal(Rational(1, 3)) == "1/3");
  CHECK(to_decimal(Rational(0)) == "0");
}

TEST_CASE("csv output") {
  std::ostringstream out;
  write_cost_csv(out, cost_report(default_cost_basis()));
  CHECK(out.str() ==
        "scheme,sums,mults,memory\n"
        "TWM,99,9,54\n"
        "WTWM,40.25,22.75,22.75\n"
        "FDS,54,9,18\n"
        "WFDS,17.5,8.75,7\n");
}

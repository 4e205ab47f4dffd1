#include "warpmesh/cost.hpp"

#include "warpmesh/counted.hpp"
#include "warpmesh/kernels.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace warpmesh {

namespace {

const Rational kDensity{9};
const Rational kRate{7, 4};

CostBasis basis(Scheme s, std::int64_t sums, std::int64_t mults, std::int64_t memory) {
  CostBasis b{s, Rational(sums), Rational(mults), Rational(memory)};
  if (is_warped(s)) {
    b.rate_factor = kRate;
  } else {
    b.density_factor = kDensity;
  }
  return b;
}

}  // namespace

const CostRow& CostReport::row(Scheme s) const {
  auto it = std::find_if(rows.begin(), rows.end(), [s](const CostRow& r) { return r.scheme == s; });
  if (it == rows.end()) throw std::out_of_range("scheme missing from cost report");
  return *it;
}

std::vector<CostBasis> default_cost_basis() {
  // WTWM memory: 6 delay registers + 6 allpass states + the junction value.
  return {basis(Scheme::TWM, 11, 1, 6), basis(Scheme::WTWM, 23, 13, 13),
          basis(Scheme::FDS, 6, 1, 2), basis(Scheme::WFDS, 10, 5, 4)};
}

std::vector<CostBasis> one_multiply_cost_basis() {
  return {basis(Scheme::TWM, 11, 1, 6), basis(Scheme::WTWM, 23, 7, 19),
          basis(Scheme::FDS, 6, 1, 2), basis(Scheme::WFDS, 10, 3, 6)};
}

std::vector<CostBasis> unit_factors(std::vector<CostBasis> basis) {
  for (auto& b : basis) b.density_factor = b.rate_factor = Rational(1);
  return basis;
}

CostReport cost_report(const std::vector<CostBasis>& basis) {
  CostReport report;
  for (const CostBasis& b : basis) {
    const Rational scale = is_warped(b.scheme) ? b.rate_factor : b.density_factor;
    report.rows.push_back({b.scheme, b.sums * scale, b.mults * scale, b.memory * scale});
  }
  return report;
}

std::string to_decimal(const Rational& r) {
  std::int64_t den = r.denominator();
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  std::ostringstream out;
  if (den != 1) {
    out << r.numerator() << '/' << r.denominator();
    return out.str();
  }
  const int digits = std::max(twos, fives);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const std::int64_t scaled = r.numerator() * (scale / r.denominator());
  const std::int64_t whole = scaled / scale;
  std::int64_t frac = scaled % scale;
  if (scaled < 0 && whole == 0) out << '-';
  out << whole;
  if (digits > 0) {
    frac = frac < 0 ? -frac : frac;
    std::string tail = std::to_string(frac);
    tail.insert(0, static_cast<std::size_t>(digits) - tail.size(), '0');
    while (!tail.empty() && tail.back() == '0') tail.pop_back();
    if (!tail.empty()) out << '.' << tail;
  }
  return out.str();
}

namespace {

std::string label(Scheme s) {
  std::string name(to_string(s));
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
  return name;
}

}  // namespace

void write_cost_csv(std::ostream& out, const CostReport& report) {
  out << "scheme,sums,mults,memory\n";
  for (const CostRow& r : report.rows) {
    out << label(r.scheme) << ',' << to_decimal(r.sums) << ',' << to_decimal(r.mults) << ','
        << to_decimal(r.memory) << '\n';
  }
}

void write_cost_table(std::ostream& out, const CostReport& report) {
  out << std::left << std::setw(8) << "" << std::right << std::setw(10) << "Sums"
      << std::setw(10) << "Mult" << std::setw(10) << "Memory" << '\n';
  for (const CostRow& r : report.rows) {
    out << std::left << std::setw(8) << label(r.scheme) << std::right << std::setw(10)
        << to_decimal(r.sums) << std::setw(10) << to_decimal(r.mults) << std::setw(10)
        << to_decimal(r.memory) << '\n';
  }
}

MeasuredOps verify_basis_against_simulator(const TriangularLattice& lattice, Scheme scheme,
                                           double alpha) {
  const auto interior = lattice.interior();
  if (interior.empty()) return {};
  MeshState state = rest_state(lattice, scheme, is_warped(scheme) ? std::optional(alpha) : std::nullopt);
  excite_impulse(lattice, state, lattice.center(), 1.0);
  const auto& spec = state.allpass;
  const auto& table = lattice.neighbor_table();

  OpCounts& counts = Counted::counts();
  const OpCounts before = counts;
  for (JunctionId j : interior) {
    if (is_wave_scheme(scheme)) {
      kernels::Ports<Counted> in{};
      kernels::Ports<Counted> out{};
      for (int d = 0; d < kDirections; ++d) in[d] = state.waves(d, j.index);
      kernels::scatter(in, out);
      if (is_warped(scheme)) {
        std::array<AllpassState<Counted>, kDirections> states{};
        for (int d = 0; d < kDirections; ++d) states[d].s = state.wave_allpass(d, j.index);
        kernels::warp_ports(spec, states, out);
      }
    } else {
      kernels::Ports<Counted> nb{};
      for (int d = 0; d < kDirections; ++d) nb[d] = state.now(table(d, j.index));
      Counted twice = state.delayed(j.index);
      if (is_warped(scheme)) {
        Counted delayed = state.delayed(j.index);
        AllpassState<Counted> first{state.first_allpass(j.index)};
        AllpassState<Counted> second{state.second_allpass(j.index)};
        twice = kernels::advance_chains(spec, Counted(state.now(j.index)), delayed, first, second).twice;
      }
      kernels::stencil(nb, twice);
    }
  }
  const double n = static_cast<double>(interior.size());
  return {static_cast<double>(counts.sums - before.sums) / n,
          static_cast<double>(counts.mults - before.mults) / n};
}

}  // namespace warpmesh

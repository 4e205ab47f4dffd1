#include "warpmesh/lattice.hpp"

#include "warpmesh/errors.hpp"
#include "warpmesh/io.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace warpmesh {

namespace {

const double kRowPitch = std::sqrt(3.0) / 2.0;

// Offsets of the six directions in (doubled x, row) coordinates.
constexpr std::array<std::array<int, 2>, kDirections> kStep = {{
    {2, 0}, {1, 1}, {-1, 1}, {-2, 0}, {-1, -1}, {1, -1}}};

}  // namespace

Eigen::Vector2d direction_vector(int direction) {
  const double angle = direction * M_PI / 3.0;
  return {std::cos(angle), std::sin(angle)};
}

TriangularLattice::TriangularLattice(int side_sections, Eigen::Matrix2Xd positions,
                                     NeighborTable neighbors, std::vector<bool> rim)
    : side_sections_(side_sections),
      positions_(std::move(positions)),
      neighbors_(std::move(neighbors)),
      rim_(std::move(rim)) {
  const Eigen::Vector2d lo = positions_.rowwise().minCoeff();
  const Eigen::Vector2d hi = positions_.rowwise().maxCoeff();
  const Eigen::Vector2d centroid = 0.5 * (lo + hi);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    if (rim_[i]) continue;
    const double d = (positions_.col(i) - centroid).norm();
    if (d < best - 1e-12) {
      best = d;
      center_ = JunctionId{static_cast<std::int32_t>(i)};
    }
  }
}

bool TriangularLattice::contains(JunctionId j) const {
  return j.index >= 0 && static_cast<std::size_t>(j.index) < size();
}

void TriangularLattice::check(JunctionId j) const {
  if (!contains(j)) {
    throw std::out_of_range("unknown junction id " + std::to_string(j.index));
  }
}

bool TriangularLattice::is_rim(JunctionId j) const {
  check(j);
  return rim_[j.index];
}

Eigen::Vector2d TriangularLattice::position(JunctionId j) const {
  check(j);
  return positions_.col(j.index);
}

std::optional<JunctionId> TriangularLattice::neighbor(JunctionId j, int direction) const {
  check(j);
  const std::int32_t t = neighbors_(direction, j.index);
  if (t < 0) return std::nullopt;
  return JunctionId{t};
}

std::size_t TriangularLattice::interior_count() const {
  std::size_t n = 0;
  for (bool r : rim_) n += r ? 0 : 1;
  return n;
}

std::vector<JunctionId> TriangularLattice::interior() const {
  std::vector<JunctionId> out;
  out.reserve(interior_count());
  for (std::size_t i = 0; i < size(); ++i) {
    if (!rim_[i]) out.push_back(JunctionId{static_cast<std::int32_t>(i)});
  }
  return out;
}

double TriangularLattice::height() const {
  return positions_.row(1).maxCoeff() - positions_.row(1).minCoeff();
}

TriangularLattice build_square_lattice(int side_sections) {
  if (side_sections < 2) {
    throw invalid_size("side_sections must be at least 2, got " +
                       std::to_string(side_sections));
  }
  const int cols = side_sections + 1;
  const int rows = static_cast<int>(std::lround(side_sections / kRowPitch)) + 1;
  const int count = rows * cols;

  auto doubled_x = [](int row, int col) { return 2 * col - (row % 2); };
  auto index_of = [&](int row, int x2) -> std::int32_t {
    if (row < 0 || row >= rows) return -1;
    const int shifted = x2 + (row % 2);
    if (shifted % 2 != 0) return -1;
    const int col = shifted / 2;
    if (col < 0 || col >= cols) return -1;
    return row * cols + col;
  };

  Eigen::Matrix2Xd positions(2, count);
  TriangularLattice::NeighborTable table(kDirections, count);
  std::vector<bool> rim(count);
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      const int i = row * cols + col;
      const int x2 = doubled_x(row, col);
      positions(0, i) = 0.5 * x2;
      positions(1, i) = row * kRowPitch;
      rim[i] = row == 0 || row == rows - 1 || col == 0 || col == cols - 1;
      for (int d = 0; d < kDirections; ++d) {
        table(d, i) = index_of(row + kStep[d][1], x2 + kStep[d][0]);
      }
    }
  }
  return TriangularLattice(side_sections, std::move(positions), std::move(table),
                           std::move(rim));
}

std::vector<Neighbor> neighbors(const TriangularLattice& lattice, JunctionId j) {
  std::vector<Neighbor> out;
  for (int d = 0; d < kDirections; ++d) {
    if (auto t = lattice.neighbor(j, d)) out.push_back({*t, d});
  }
  return out;
}

void write_lattice_csv(std::ostream& out, const TriangularLattice& lattice) {
  out << "id,x,y,is_rim,n0,n1,n2,n3,n4,n5\n";
  const auto& table = lattice.neighbor_table();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    out << i << ',' << format_sig9(lattice.positions()(0, i)) << ','
        << format_sig9(lattice.positions()(1, i)) << ','
        << (lattice.rim_flags()[i] ? 1 : 0);
    for (int d = 0; d < kDirections; ++d) out << ',' << table(d, i);
    out << '\n';
  }
}

}  // namespace warpmesh

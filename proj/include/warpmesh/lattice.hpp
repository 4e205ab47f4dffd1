#pragma once

#include <Eigen/Core>

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace warpmesh {

struct JunctionId {
  std::int32_t index = -1;

  constexpr auto operator<=>(const JunctionId&) const = default;
};

inline constexpr int kDirections = 6;

constexpr int opposite(int direction) { return (direction + 3) % kDirections; }

// Unit vector of lattice direction d (angle d * 60 degrees).
Eigen::Vector2d direction_vector(int direction);

struct Neighbor {
  JunctionId target;
  int direction = 0;
};

/// Triangular lattice of unit-length waveguides approximating a clamped square.
///
/// Junctions sit on rows spaced sqrt(3)/2 apart. Even rows hold x = 0..L, odd
/// rows x = -1/2..L-1/2, so every row spans exactly L sections between its two
/// rim junctions and the left and right edges form a zigzag staircase. The
/// first and last rows are rim as well. The row count is the integer closest to
/// 2L/sqrt(3), which makes the height differ slightly from L.
class TriangularLattice {
 public:
  using NeighborTable = Eigen::Matrix<std::int32_t, kDirections, Eigen::Dynamic>;

  TriangularLattice(int side_sections, Eigen::Matrix2Xd positions,
                    NeighborTable neighbors, std::vector<bool> rim);

  std::size_t size() const { return rim_.size(); }
  int side_sections() const { return side_sections_; }
  JunctionId center() const { return center_; }

  bool contains(JunctionId j) const;
  bool is_rim(JunctionId j) const;
  Eigen::Vector2d position(JunctionId j) const;

  // Neighbor in direction d, if present. Throws std::out_of_range for unknown ids.
  std::optional<JunctionId> neighbor(JunctionId j, int direction) const;

  const Eigen::Matrix2Xd& positions() const { return positions_; }
  const NeighborTable& neighbor_table() const { return neighbors_; }
  const std::vector<bool>& rim_flags() const { return rim_; }

  std::size_t interior_count() const;
  std::vector<JunctionId> interior() const;

  // Distance between the first and last row.
  double height() const;

 private:
  void check(JunctionId j) const;

  int side_sections_;
  Eigen::Matrix2Xd positions_;
  NeighborTable neighbors_;
  std::vector<bool> rim_;
  JunctionId center_;
};

/// Builds the staircase approximation of a side_sections x side_sections
/// clamped square. Throws invalid_size when side_sections < 2.
TriangularLattice build_square_lattice(int side_sections);

/// Present neighbors of j sorted by direction index (exactly 6 for interior
/// junctions). Throws std::out_of_range for unknown ids.
std::vector<Neighbor> neighbors(const TriangularLattice& lattice, JunctionId j);

/// Writes `id,x,y,is_rim,n0,...,n5` with -1 for absent neighbors.
void write_lattice_csv(std::ostream& out, const TriangularLattice& lattice);

}  // namespace warpmesh

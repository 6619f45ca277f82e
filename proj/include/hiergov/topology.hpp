#ifndef HIERGOV_TOPOLOGY_HPP
#define HIERGOV_TOPOLOGY_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hiergov::topology {

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

// Continuous position in (row, col) coordinates.
struct Point {
  double row = 0.0;
  double col = 0.0;
};

enum class Neighborhood { VonNeumann, Moore };

// What happens to cells outside the full n x n tiles when n does not divide R.
//   Merged:       they form one remainder subgroup.
//   PartialTiles: the tiling continues past the border and each truncated tile
//                 is its own subgroup.
enum class RemainderPolicy { Merged, PartialTiles };

// R x R lattice with non-wrapping borders. Cells are indexed row-major.
class GridTopology {
 public:
  GridTopology(int side, Neighborhood neighborhood);

  int side() const { return side_; }
  std::size_t size() const { return static_cast<std::size_t>(side_) * side_; }
  Neighborhood neighborhood() const { return neighborhood_; }

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * side_ + c.col;
  }
  Cell cell(std::size_t idx) const {
    return {static_cast<int>(idx / side_), static_cast<int>(idx % side_)};
  }

  std::span<const std::uint32_t> neighbors(std::size_t idx) const {
    return {adjacency_.data() + offsets_[idx], adjacency_.data() + offsets_[idx + 1]};
  }
  bool adjacent(std::size_t a, std::size_t b) const;

  // Number of undirected neighbor pairs.
  std::size_t pair_count() const { return adjacency_.size() / 2; }

 private:
  int side_;
  Neighborhood neighborhood_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adjacency_;
};

GridTopology build_grid(int side, Neighborhood neighborhood = Neighborhood::VonNeumann);

struct Subgroup {
  int id = 0;
  std::vector<std::size_t> members;  // cell indices, ascending
  Point governor;                    // centroid of the member cells
  bool remainder = false;
  int tile_row = -1;  // position in the coarse grid of tiles; -1 for the remainder
  int tile_col = -1;
};

// n x n tiles anchored at (0,0). Under RemainderPolicy::Merged every cell
// outside a full tile belongs to a single remainder subgroup, which is always
// the last subgroup.
class GridPartition {
 public:
  GridPartition(GridTopology topology, int subgroup_size,
                RemainderPolicy policy = RemainderPolicy::Merged);

  const GridTopology& topology() const { return topology_; }
  int subgroup_size() const { return subgroup_size_; }
  RemainderPolicy remainder_policy() const { return policy_; }
  // Tiles per axis in the coarse grid, counting truncated tiles.
  int tiles_per_axis() const { return tiles_per_axis_; }
  const std::vector<Subgroup>& subgroups() const { return subgroups_; }
  int subgroup_of(std::size_t cell) const { return assignment_[cell]; }
  const std::vector<int>& assignment() const { return assignment_; }
  bool has_remainder() const { return !subgroups_.empty() && subgroups_.back().remainder; }

  // Governors a given governor may learn from: 4-adjacent tiles in the coarse
  // grid, plus the remainder for tiles that border it (and those tiles for the
  // remainder).
  const std::vector<int>& peers(int subgroup) const { return peers_[subgroup]; }

 private:
  GridTopology topology_;
  int subgroup_size_;
  RemainderPolicy policy_;
  int tiles_per_axis_;
  std::vector<Subgroup> subgroups_;
  std::vector<int> assignment_;
  std::vector<std::vector<int>> peers_;
};

GridPartition partition_grid(const GridTopology& topology, int subgroup_size,
                             RemainderPolicy policy = RemainderPolicy::Merged);

std::string_view to_string(RemainderPolicy policy);
RemainderPolicy parse_remainder_policy(std::string_view name);

double distance(Point a, Point b);
Point centroid(const GridTopology& topology, std::span<const std::size_t> members);

// Sum over all agents of the Euclidean distance to their governor.
double communication_cost(const GridPartition& partition);

// communication_cost(partition) / communication_cost(centralized).
double pom(const GridPartition& partition, const GridPartition& centralized);

}  // namespace hiergov::topology

#endif

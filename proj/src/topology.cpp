#include "hiergov/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hiergov/error.hpp"

namespace hiergov::topology {

GridTopology::GridTopology(int side, Neighborhood neighborhood)
    : side_(side), neighborhood_(neighborhood) {
  if (side < 1) {
    throw Error(ErrorKind::InvalidParameter,
                "grid side must be positive, got " + std::to_string(side));
  }
  offsets_.reserve(size() + 1);
  offsets_.push_back(0);
  for (int r = 0; r < side_; ++r) {
    for (int c = 0; c < side_; ++c) {
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (neighborhood_ == Neighborhood::VonNeumann && dr != 0 && dc != 0) continue;
          const int nr = r + dr;
          const int nc = c + dc;
          if (nr < 0 || nc < 0 || nr >= side_ || nc >= side_) continue;
          adjacency_.push_back(static_cast<std::uint32_t>(index({nr, nc})));
        }
      }
      offsets_.push_back(adjacency_.size());
    }
  }
}

bool GridTopology::adjacent(std::size_t a, std::size_t b) const {
  const auto nb = neighbors(a);
  return std::find(nb.begin(), nb.end(), b) != nb.end();
}

GridTopology build_grid(int side, Neighborhood neighborhood) {
  return GridTopology(side, neighborhood);
}

double distance(Point a, Point b) { return std::hypot(a.row - b.row, a.col - b.col); }

Point centroid(const GridTopology& topology, std::span<const std::size_t> members) {
  double r = 0.0;
  double c = 0.0;
  for (auto idx : members) {
    const Cell cell = topology.cell(idx);
    r += cell.row;
    c += cell.col;
  }
  const auto count = static_cast<double>(members.size());
  return {r / count, c / count};
}

GridPartition::GridPartition(GridTopology topology, int subgroup_size, RemainderPolicy policy)
    : topology_(std::move(topology)), subgroup_size_(subgroup_size), policy_(policy) {
  const int side = topology_.side();
  if (subgroup_size < 1 || subgroup_size > side) {
    throw Error(ErrorKind::InvalidParameter,
                "subgroup size must lie in [1, " + std::to_string(side) + "], got " +
                    std::to_string(subgroup_size));
  }
  const bool partial = policy_ == RemainderPolicy::PartialTiles;
  tiles_per_axis_ = partial ? (side + subgroup_size - 1) / subgroup_size : side / subgroup_size;
  const int covered = partial ? side : tiles_per_axis_ * subgroup_size;

  const int tiles = tiles_per_axis_ * tiles_per_axis_;
  subgroups_.resize(tiles);
  for (int tr = 0; tr < tiles_per_axis_; ++tr) {
    for (int tc = 0; tc < tiles_per_axis_; ++tc) {
      auto& g = subgroups_[tr * tiles_per_axis_ + tc];
      g.id = tr * tiles_per_axis_ + tc;
      g.tile_row = tr;
      g.tile_col = tc;
    }
  }

  assignment_.assign(topology_.size(), -1);
  Subgroup rest;
  rest.id = tiles;
  rest.remainder = true;
  for (std::size_t idx = 0; idx < topology_.size(); ++idx) {
    const Cell c = topology_.cell(idx);
    if (c.row < covered && c.col < covered) {
      const int id = (c.row / subgroup_size) * tiles_per_axis_ + c.col / subgroup_size;
      subgroups_[id].members.push_back(idx);
      assignment_[idx] = id;
    } else {
      rest.members.push_back(idx);
      assignment_[idx] = rest.id;
    }
  }
  if (!rest.members.empty()) subgroups_.push_back(std::move(rest));

  for (auto& g : subgroups_) g.governor = centroid(topology_, g.members);

  peers_.resize(subgroups_.size());
  const bool remainder = has_remainder();
  for (int id = 0; id < tiles; ++id) {
    const int tr = id / tiles_per_axis_;
    const int tc = id % tiles_per_axis_;
    auto& p = peers_[id];
    if (tr > 0) p.push_back(id - tiles_per_axis_);
    if (tc > 0) p.push_back(id - 1);
    if (tc + 1 < tiles_per_axis_) p.push_back(id + 1);
    if (tr + 1 < tiles_per_axis_) p.push_back(id + tiles_per_axis_);
    if (remainder && (tr + 1 == tiles_per_axis_ || tc + 1 == tiles_per_axis_)) {
      p.push_back(tiles);
      peers_[tiles].push_back(id);
    }
  }
}

GridPartition partition_grid(const GridTopology& topology, int subgroup_size,
                             RemainderPolicy policy) {
  return GridPartition(topology, subgroup_size, policy);
}

std::string_view to_string(RemainderPolicy policy) {
  return policy == RemainderPolicy::Merged ? "merged" : "partial-tiles";
}

RemainderPolicy parse_remainder_policy(std::string_view name) {
  if (name == "merged") return RemainderPolicy::Merged;
  if (name == "partial-tiles") return RemainderPolicy::PartialTiles;
  throw Error(ErrorKind::InvalidConfiguration,
              "unknown remainder policy '" + std::string(name) + "'");
}

double communication_cost(const GridPartition& partition) {
  const auto& topo = partition.topology();
  double total = 0.0;
  for (const auto& g : partition.subgroups()) {
    for (auto idx : g.members) {
      const Cell c = topo.cell(idx);
      total += distance({static_cast<double>(c.row), static_cast<double>(c.col)}, g.governor);
    }
  }
  return total;
}

double pom(const GridPartition& partition, const GridPartition& centralized) {
  if (partition.topology().side() != centralized.topology().side()) {
    throw Error(ErrorKind::InvalidParameter, "partitions cover different grids");
  }
  if (centralized.subgroup_size() != centralized.topology().side()) {
    throw Error(ErrorKind::InvalidParameter, "reference partition is not centralized");
  }
  const double reference = communication_cost(centralized);
  if (reference <= 0.0) {
    throw Error(ErrorKind::UndefinedRatio, "centralized communication cost is zero");
  }
  return communication_cost(partition) / reference;
}

}  // namespace hiergov::topology

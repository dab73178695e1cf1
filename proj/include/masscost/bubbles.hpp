#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "masscost/grid.hpp"

namespace masscost {

struct BallMass {
  double mass;
  std::array<double, 2> center;
  std::size_t index;  // grid index of the center
};

/// Largest mass in a closed ball of radius r centered at a grid node. Ties go
/// to the lexicographically smallest center. Requires r >= spacing.
BallMass bubbling_sup(const GridDensity& u, double r);

struct BubbleParams {
  double radius;        // scan radius r
  double floor;         // mass floor delta
  std::size_t max_bubbles = 64;
  /// Growth stops once the mass gained per unit radius drops to this value.
  /// Defaults to 0.01 * total mass / r.
  std::optional<double> growth_tolerance;
};

struct Bubble {
  std::array<double, 2> center;
  double radius;
  double mass;
  std::size_t merged = 0;  // later candidates absorbed into this bubble
};

struct BubbleSet {
  std::vector<Bubble> bubbles;
  double remainder_mass = 0.0;
  double vanishing_sup = 0.0;  // bubbling_sup of the remainder at the scan radius
  double total_mass = 0.0;
  int dim = 1;
  bool incomplete = false;     // max_bubbles reached with sup still >= floor
  BubbleParams params;
  std::vector<double> remainder;  // remainder density values, same grid
};

/// Greedy decomposition: take the heaviest ball of radius r centered at a node
/// carrying mass, stop below the
/// floor, grow its radius while the marginal gain per unit radius exceeds the
/// growth tolerance, record and zero it. A candidate whose ball would come
/// closer than r to a recorded ball is merged into the nearest one; the
/// recorded radius grows to cover it as far as separation allows.
BubbleSet extract_bubbles(const GridDensity& u, const BubbleParams& params);

struct BubbleTrack {
  std::size_t first_index;
  std::vector<double> masses;  // per index from first_index on
  std::vector<std::array<double, 2>> centers;
};

struct DecompositionReport {
  std::vector<BubbleSet> sets;
  std::vector<BubbleTrack> tracks;
  std::vector<double> vanishing_sup;
  std::vector<std::optional<double>> min_separation;  // smallest center distance per index
  bool ambiguous = false;
  std::vector<std::string> notes;
};

/// Extraction along a sequence with bubbles matched to the nearest center of
/// the previous index. Two candidates within r of one previous center, or one
/// previous bubble claimed twice, flag the matching as ambiguous.
DecompositionReport decomposition_report(std::span<const GridDensity> sequence, const BubbleParams& params);

}  // namespace masscost

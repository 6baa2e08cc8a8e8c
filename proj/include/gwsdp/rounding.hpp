#pragma once

// Goemans-Williamson random-hyperplane rounding, cut evaluation, the SDP cut
// bound, and a brute-force Max-Cut oracle for small instances.
//
// Cut values are single-counted edge-weight units (the double-counted
// sum_{i,j} form divided by 4), directly comparable to published best-known
// Gset cuts.
//
// Randomness: trial t of a run with seed s uses an mt19937_64 seeded with
// splitmix64(s + t); standard normals come from the Marsaglia polar method.
// Both are fixed by this implementation, so results are reproducible
// bit-for-bit for a given seed.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "gwsdp/graph.hpp"
#include "gwsdp/linalg.hpp"

namespace gwsdp {

struct CutResult {
  std::vector<int> assignment;  // entries +1 / -1
  double cut_value = 0.0;       // best over trials
  int trials = 0;
  std::uint64_t seed = 0;
  double mean_cut = 0.0;
  bool best_over_trials = true;
};

/// Total weight of edges crossing the partition. Throws on entries not +-1
/// or size mismatch.
double cut_value(const Graph& g, std::span<const int> x);

/// (total_weight(g) - Tr(C X)) / 4: the relaxation value in cut units.
double sdp_cut_bound(const Graph& g, const SymMatrix& x);
double sdp_cut_bound(const Graph& g, double tr_cx);

std::uint64_t splitmix64(std::uint64_t z);
std::uint64_t trial_seed(std::uint64_t seed, int trial);
double standard_normal(std::mt19937_64& rng);

/// x_i = sign(V_i . r) for a standard normal r; zero dot products go to +1.
std::vector<int> hyperplane_round(const Eigen::MatrixXd& v, std::mt19937_64& rng);

/// Factors X once (psd_factor, clip defaulting to 1e-9) and rounds `trials`
/// times; returns the best cut and records the mean.
CutResult best_of_rounds(const Graph& g, const SymMatrix& x, int trials,
                         std::uint64_t seed, double clip = 1e-9);

/// Exact maximum over all 2^(n-1) sign patterns; requires n <= 22. Ties go
/// to the first assignment in enumeration order with x_1 = +1.
std::pair<double, std::vector<int>> brute_force_maxcut(const Graph& g);

}  // namespace gwsdp

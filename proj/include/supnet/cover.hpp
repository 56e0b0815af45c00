#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "supnet/space.hpp"

namespace supnet {

/// Finite family of points sampled from one product space.
struct SampleSet {
  std::vector<ProductPoint> points;
  std::string label;

  SampleSet() = default;
  explicit SampleSet(std::vector<ProductPoint> pts, std::string lbl = "");

  int size() const { return static_cast<int>(points.size()); }
  const Grid& grid() const { return points.front().grid(); }
  int n() const { return points.front().n(); }

  /// Raw values stacked one column per point (n*nodes x N).
  Eigen::MatrixXd stacked() const;
};

using Functional = std::function<double(const ProductPoint&)>;

/// Evaluates f once per sample. Non-finite results raise an evaluation error
/// carrying the offending sample index. With parallel=true the evaluations
/// fan out over hardware threads (the handle must then be thread-safe);
/// results are written by index, so the output is identical either way.
Eigen::VectorXd evaluate_all(const Functional& f, const SampleSet& samples, bool parallel = false);

/// Subset of sample indices covering every sample within `radius`.
/// Coverage is verified when the net is built.
struct Net {
  std::vector<int> center_indices;
  double radius = 0.0;
};

/// Farthest-point traversal: starts at index 0, repeatedly promotes the
/// sample farthest from the current centers (ties keep the lowest index)
/// until everything is within `radius` of a center.
Net greedy_net(const SampleSet& samples, double radius);

/// Distance from every sample to its nearest center.
Eigen::VectorXd net_coverage_distances(const SampleSet& samples, const Net& net);

/// Smallest k such that some k-subset of the samples covers all of them at
/// `radius`. Exhaustive; instances beyond 16 points raise a capacity error.
/// max_subset < 0 means "up to the full set".
int covering_number_bruteforce(const SampleSet& samples, double radius, int max_subset = -1);

/// Empirical upper envelope of |f(x)-f(x')| against ||x-x'||, tabulated on
/// the examined pairs as a nondecreasing staircase.
class ModulusEstimate {
 public:
  ModulusEstimate(std::vector<std::pair<double, double>> table, double diameter,
                  long pairs_examined);

  /// Largest tabulated |f difference| among pairs at distance <= d.
  double envelope(double distance) const;

  /// Largest tabulated distance whose envelope stays below eps_third,
  /// capped at the set diameter, divided by the safety factor 2. Raises
  /// epsilon_unattainable when even the closest examined pair jumps by
  /// eps_third or more.
  double suggested_delta(double eps_third) const;

  double diameter() const { return diameter_; }
  long pairs_examined() const { return pairs_examined_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

 private:
  std::vector<std::pair<double, double>> table_;  // ascending distance, nondecreasing envelope
  double diameter_ = 0.0;
  long pairs_examined_ = 0;
};

/// Builds the envelope from precomputed sample values: every sample's
/// nearest-neighbor pair, the diameter pair, and `pair_budget` seeded
/// random pairs.
ModulusEstimate estimate_modulus_values(const Eigen::VectorXd& values, const SampleSet& samples,
                                        int pair_budget, std::uint64_t seed);

ModulusEstimate estimate_modulus(const Functional& f, const SampleSet& samples, int pair_budget,
                                 std::uint64_t seed, bool parallel = false);

/// suggested_delta(epsilon/3): the interpolation scale the downstream
/// pipeline may use for a target accuracy of epsilon. Strictly positive,
/// nondecreasing in epsilon.
double choose_delta(const ModulusEstimate& modulus, double epsilon);

}  // namespace supnet

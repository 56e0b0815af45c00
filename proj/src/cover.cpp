#include "supnet/cover.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "supnet/rng.hpp"

namespace supnet {

SampleSet::SampleSet(std::vector<ProductPoint> pts, std::string lbl)
    : points(std::move(pts)), label(std::move(lbl)) {
  if (points.empty()) throw Error(ErrorCode::usage, "sample set is empty");
  for (std::size_t i = 1; i < points.size(); ++i) require_same_shape(points[0], points[i]);
}

Eigen::MatrixXd SampleSet::stacked() const {
  if (points.empty()) throw Error(ErrorCode::usage, "sample set is empty");
  Eigen::MatrixXd out(points.front().flat().size(), size());
  for (int i = 0; i < size(); ++i) out.col(i) = points[static_cast<std::size_t>(i)].flat();
  return out;
}

Eigen::VectorXd evaluate_all(const Functional& f, const SampleSet& samples, bool parallel) {
  const int N = samples.size();
  Eigen::VectorXd out(N);
  if (!parallel || N < 2) {
    for (int i = 0; i < N; ++i) out[i] = f(samples.points[static_cast<std::size_t>(i)]);
  } else {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(N)));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < N; i += workers) out[i] = f(samples.points[static_cast<std::size_t>(i)]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (int i = 0; i < N; ++i)
    if (!std::isfinite(out[i]))
      throw Error(ErrorCode::evaluation, "functional returned a non-finite value", i);
  return out;
}

Net greedy_net(const SampleSet& samples, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::usage, "net radius must be positive");
  const int N = samples.size();
  Net net;
  net.radius = radius;
  net.center_indices.push_back(0);
  Eigen::VectorXd dist(N);
  for (int i = 0; i < N; ++i)
    dist[i] = prod_dist(samples.points[static_cast<std::size_t>(i)], samples.points[0]);
  for (;;) {
    int farthest = 0;
    for (int i = 1; i < N; ++i)
      if (dist[i] > dist[farthest]) farthest = i;
    if (dist[farthest] < radius) break;
    net.center_indices.push_back(farthest);
    const ProductPoint& c = samples.points[static_cast<std::size_t>(farthest)];
    for (int i = 0; i < N; ++i)
      dist[i] = std::min(dist[i], prod_dist(samples.points[static_cast<std::size_t>(i)], c));
  }
  return net;
}

Eigen::VectorXd net_coverage_distances(const SampleSet& samples, const Net& net) {
  if (net.center_indices.empty()) throw Error(ErrorCode::usage, "net has no centers");
  const int N = samples.size();
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(N, std::numeric_limits<double>::infinity());
  for (int c : net.center_indices) {
    if (c < 0 || c >= N) throw Error(ErrorCode::usage, "net center index out of range", c);
    const ProductPoint& center = samples.points[static_cast<std::size_t>(c)];
    for (int i = 0; i < N; ++i)
      dist[i] = std::min(dist[i], prod_dist(samples.points[static_cast<std::size_t>(i)], center));
  }
  return dist;
}

int covering_number_bruteforce(const SampleSet& samples, double radius, int max_subset) {
  if (!(radius > 0.0)) throw Error(ErrorCode::usage, "covering radius must be positive");
  const int N = samples.size();
  if (N > 16)
    throw Error(ErrorCode::capacity, "exhaustive covering search is limited to 16 points", N);
  std::vector<std::uint32_t> cover_mask(static_cast<std::size_t>(N), 0);
  for (int c = 0; c < N; ++c)
    for (int i = 0; i < N; ++i)
      if (prod_dist(samples.points[static_cast<std::size_t>(c)],
                    samples.points[static_cast<std::size_t>(i)]) <= radius)
        cover_mask[static_cast<std::size_t>(c)] |= (1u << i);
  const std::uint32_t all = (N == 32) ? ~0u : ((1u << N) - 1u);
  const int kmax = (max_subset < 0 || max_subset > N) ? N : max_subset;
  for (int k = 1; k <= kmax; ++k) {
    std::vector<char> pick(static_cast<std::size_t>(N), 0);
    std::fill(pick.begin(), pick.begin() + k, 1);
    do {
      std::uint32_t covered = 0;
      for (int c = 0; c < N; ++c)
        if (pick[static_cast<std::size_t>(c)]) covered |= cover_mask[static_cast<std::size_t>(c)];
      if (covered == all) return k;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  throw Error(ErrorCode::capacity, "no subset within the requested size covers the samples",
              max_subset);
}

ModulusEstimate::ModulusEstimate(std::vector<std::pair<double, double>> table, double diameter,
                                 long pairs_examined)
    : table_(std::move(table)), diameter_(diameter), pairs_examined_(pairs_examined) {
  std::sort(table_.begin(), table_.end());
  double run = 0.0;
  for (auto& entry : table_) {
    run = std::max(run, entry.second);
    entry.second = run;
  }
}

double ModulusEstimate::envelope(double distance) const {
  auto it = std::upper_bound(table_.begin(), table_.end(), distance,
                             [](double d, const std::pair<double, double>& e) { return d < e.first; });
  if (it == table_.begin()) return 0.0;
  return std::prev(it)->second;
}

double ModulusEstimate::suggested_delta(double eps_third) const {
  if (!(eps_third > 0.0)) throw Error(ErrorCode::usage, "accuracy target must be positive");
  const bool crosses = !table_.empty() && table_.back().second >= eps_third;
  double dstar = 0.0;
  if (!crosses) {
    dstar = diameter_;
  } else {
    for (const auto& entry : table_) {
      if (entry.second < eps_third)
        dstar = entry.first;
      else
        break;
    }
  }
  if (!(dstar > 0.0)) {
    if (crosses)
      throw Error(ErrorCode::epsilon_unattainable, "epsilon unattainable at this sampling density",
                  -1, eps_third);
    return 0.5;  // every sample coincides; any positive scale certifies the point
  }
  return dstar / 2.0;
}

ModulusEstimate estimate_modulus_values(const Eigen::VectorXd& values, const SampleSet& samples,
                                        int pair_budget, std::uint64_t seed) {
  const int N = samples.size();
  if (values.size() != N)
    throw Error(ErrorCode::usage, "value count does not match the sample count");
  if (pair_budget < 0) throw Error(ErrorCode::usage, "pair budget must be nonnegative");
  for (int i = 0; i < N; ++i)
    if (!std::isfinite(values[i]))
      throw Error(ErrorCode::evaluation, "functional returned a non-finite value", i);

  std::vector<std::pair<double, double>> table;
  double diameter = 0.0;
  long pairs = 0;
  if (N >= 2) {
    table.reserve(static_cast<std::size_t>(N + 1 + pair_budget));
    std::vector<int> nn(static_cast<std::size_t>(N), -1);
    std::vector<double> nnd(static_cast<std::size_t>(N), std::numeric_limits<double>::infinity());
    int di = 0, dj = 1;
    double dmax = -1.0;
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) {
        const double d = prod_dist(samples.points[static_cast<std::size_t>(i)],
                                   samples.points[static_cast<std::size_t>(j)]);
        if (d < nnd[static_cast<std::size_t>(i)]) {
          nnd[static_cast<std::size_t>(i)] = d;
          nn[static_cast<std::size_t>(i)] = j;
        }
        if (d < nnd[static_cast<std::size_t>(j)]) {
          nnd[static_cast<std::size_t>(j)] = d;
          nn[static_cast<std::size_t>(j)] = i;
        }
        if (d > dmax) {
          dmax = d;
          di = i;
          dj = j;
        }
      }
    }
    diameter = dmax;
    auto add_pair = [&](int i, int j, double d) {
      table.emplace_back(d, std::abs(values[i] - values[j]));
      ++pairs;
    };
    for (int i = 0; i < N; ++i) add_pair(i, nn[static_cast<std::size_t>(i)], nnd[static_cast<std::size_t>(i)]);
    add_pair(di, dj, dmax);
    auto eng = seeded_engine(seed, 0);
    for (int t = 0; t < pair_budget; ++t) {
      int i = static_cast<int>(eng() % static_cast<std::uint64_t>(N));
      int j = static_cast<int>(eng() % static_cast<std::uint64_t>(N));
      if (i == j) j = (i + 1) % N;
      add_pair(i, j,
               prod_dist(samples.points[static_cast<std::size_t>(i)],
                         samples.points[static_cast<std::size_t>(j)]));
    }
  }
  return ModulusEstimate(std::move(table), diameter, pairs);
}

ModulusEstimate estimate_modulus(const Functional& f, const SampleSet& samples, int pair_budget,
                                 std::uint64_t seed, bool parallel) {
  return estimate_modulus_values(evaluate_all(f, samples, parallel), samples, pair_budget, seed);
}

double choose_delta(const ModulusEstimate& modulus, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::usage, "epsilon must be positive");
  return modulus.suggested_delta(epsilon / 3.0);
}

}  // namespace supnet

#include "gwsdp/rounding.hpp"

#include <stdexcept>

namespace gwsdp {

double cut_value(const Graph& g, std::span<const int> x) {
  if (static_cast<int>(x.size()) != g.n) throw std::invalid_argument("cut_value: size mismatch");
  for (int xi : x) {
    if (xi != 1 && xi != -1) throw std::invalid_argument("cut_value: entries must be +-1");
  }
  double cut = 0.0;
  for (const Edge& e : g.edges) {
    if (x[e.u] != x[e.v]) cut += e.w;
  }
  return cut;
}

double sdp_cut_bound(const Graph& g, double tr_cx) {
  return (total_weight(g) - tr_cx) / 4.0;
}

double sdp_cut_bound(const Graph& g, const SymMatrix& x) {
  double tr_cx = 0.0;  // Tr(C X) = 2 sum_edges w X_uv
  for (const Edge& e : g.edges) tr_cx += 2.0 * e.w * x.at(e.u, e.v).to_double();
  return sdp_cut_bound(g, tr_cx);
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return splitmix64(seed + static_cast<std::uint64_t>(trial));
}

double standard_normal(std::mt19937_64& rng) {
  // Marsaglia polar method; one fresh pair per call keeps the stream simple
  // and deterministic.
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (;;) {
    double a = unit(rng);
    double b = unit(rng);
    double s = a * a + b * b;
    if (s > 0.0 && s < 1.0) return a * std::sqrt(-2.0 * std::log(s) / s);
  }
}

std::vector<int> hyperplane_round(const Eigen::MatrixXd& v, std::mt19937_64& rng) {
  const int n = static_cast<int>(v.rows());
  Eigen::VectorXd r(v.cols());
  for (int i = 0; i < r.size(); ++i) r[i] = standard_normal(rng);
  std::vector<int> x(n);
  for (int i = 0; i < n; ++i) x[i] = v.row(i).dot(r) >= 0.0 ? 1 : -1;
  return x;
}

CutResult best_of_rounds(const Graph& g, const SymMatrix& x, int trials,
                         std::uint64_t seed, double clip) {
  if (trials < 1) throw std::invalid_argument("best_of_rounds: trials must be >= 1");
  Eigen::MatrixXd v = psd_factor(x, clip);

  CutResult best;
  best.trials = trials;
  best.seed = seed;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(trial_seed(seed, t));
    std::vector<int> a = hyperplane_round(v, rng);
    double c = cut_value(g, a);
    sum += c;
    if (t == 0 || c > best.cut_value) {
      best.cut_value = c;
      best.assignment = std::move(a);
    }
  }
  best.mean_cut = sum / trials;
  return best;
}

std::pair<double, std::vector<int>> brute_force_maxcut(const Graph& g) {
  if (g.n > 22) throw std::invalid_argument("brute_force_maxcut: n > 22");
  const int n = g.n;
  if (n == 0) return {0.0, {}};

  std::vector<int> x(n, 1), best_x(n, 1);
  double best = cut_value(g, x);
  const std::uint64_t patterns = n > 1 ? (1ULL << (n - 1)) : 1;
  for (std::uint64_t mask = 1; mask < patterns; ++mask) {
    // bit j set => vertex j+1 on the -1 side; x_1 fixed at +1
    for (int j = 0; j < n - 1; ++j) x[j + 1] = (mask >> j) & 1 ? -1 : 1;
    double c = cut_value(g, x);
    if (c > best) {
      best = c;
      best_x = x;
    }
  }
  return {best, best_x};
}

}  // namespace gwsdp

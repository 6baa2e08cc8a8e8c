#include "gwsdp/hwmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace gwsdp {

double traffic_per_cg_iter(int n, int matrix_bits, int vector_bits, const HwParams& hw) {
  if (n < 0) throw std::invalid_argument("traffic_per_cg_iter: n < 0");
  const double nn = static_cast<double>(n);
  return nn * nn * (matrix_bits / 8.0) + hw.vector_streams * nn * (vector_bits / 8.0);
}

double cg_iter_time(int n, int precision_bits, const HwParams& hw) {
  const int vector_bits = std::min(precision_bits, 512);
  double t = traffic_per_cg_iter(n, 64, vector_bits, hw) / hw.mem_bandwidth;
  if (precision_bits > 512) t *= hw.penalty_1024;
  return t;
}

int cores_to_saturate(const HwParams& hw) {
  const double per_core = 8.0 * hw.loads_per_cycle * hw.clock_hz;  // bytes/s
  if (per_core <= 0.0) return 0;
  return static_cast<int>(std::ceil(hw.mem_bandwidth / per_core));
}

double roofline(double intensity, const HwParams& hw, double peak_flops) {
  if (intensity < 0.0) throw std::invalid_argument("roofline: negative intensity");
  return std::min(peak_flops, intensity * hw.mem_bandwidth);
}

double estimate_trace_time(std::span<const int> cg_iters_per_step, int n,
                           int precision_bits, const HwParams& hw) {
  const double per_iter = cg_iter_time(n, precision_bits, hw);
  double total = 0.0;
  for (int it : cg_iters_per_step) total += it * per_iter;
  return total;
}

PrecisionSchedule adaptive_schedule(const std::map<int, std::vector<int>>& traces,
                                    int n, const HwParams& hw) {
  if (traces.empty()) throw std::invalid_argument("adaptive_schedule: no traces");
  const std::size_t steps = traces.begin()->second.size();
  for (const auto& [bits, t] : traces) {
    if (t.size() != steps) {
      throw std::invalid_argument("adaptive_schedule: traces cover different step counts");
    }
  }

  PrecisionSchedule sched;
  sched.bits_per_step.resize(steps);
  sched.step_seconds.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    double best = 0.0;
    int best_bits = 0;
    for (const auto& [bits, t] : traces) {  // map order: ties go to lower bits
      double sec = t[k] * cg_iter_time(n, bits, hw);
      if (best_bits == 0 || sec < best) {
        best = sec;
        best_bits = bits;
      }
    }
    sched.bits_per_step[k] = best_bits;
    sched.step_seconds[k] = best;
    sched.total_seconds += best;
  }
  for (const auto& [bits, t] : traces) {
    sched.fixed_totals[bits] = estimate_trace_time(t, n, bits, hw);
  }
  if (auto it = sched.fixed_totals.find(64);
      it != sched.fixed_totals.end() && sched.total_seconds > 0.0) {
    sched.gain_vs_64b = it->second / sched.total_seconds;
  }
  if (auto it = sched.fixed_totals.find(1024);
      it != sched.fixed_totals.end() && sched.total_seconds > 0.0) {
    sched.gain_vs_1024b = it->second / sched.total_seconds - 1.0;
  }
  return sched;
}

}  // namespace gwsdp

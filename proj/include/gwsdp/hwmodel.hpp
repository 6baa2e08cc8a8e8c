#pragma once

// Analytical roofline / memory-traffic model of a hypothetical
// extended-precision accelerator. Converts CG iteration counts into
// estimated execution times and computes adaptive precision schedules.
//
// All outputs are estimates for a modeled machine, never measured silicon
// performance. The modeled design point: two HBM3E stacks (2.4 TB/s), one
// 64-bit load per 4 cycles per core at 512-bit precision, ~600 cores at a
// 2 GHz clock, roughly 400 mm^2 in a 7 nm-class process. 1024-bit precision
// is modeled as a flat 20% execution-time penalty over 512-bit; precisions
// below 512 bits run at the 512-bit (memory-bound) rate.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace gwsdp {

struct HwParams {
  double mem_bandwidth = 2.4e12;   // bytes/s
  double loads_per_cycle = 0.25;   // 64-bit loads per cycle per core (1 per 4 cycles)
  double clock_hz = 2e9;           // chosen so 600 cores saturate 2.4 TB/s
  double penalty_1024 = 1.2;       // execution-time factor at 1024-bit
  int cores = 600;
  int cache_line_bytes = 64;
  int vector_streams = 6;          // resident CG vectors: x, r, p, Ap + 2 working
};

/// Bytes moved per CG iteration: n^2 matrix streaming at matrix_bits plus
/// vector_streams * n entries at vector_bits. The matrix term dominates for
/// n much larger than the stream count.
double traffic_per_cg_iter(int n, int matrix_bits, int vector_bits,
                           const HwParams& hw = {});

/// Estimated seconds per CG iteration: memory traffic divided by bandwidth.
/// Precisions <= 512 use their own vector traffic; 1024-bit is exactly
/// penalty_1024 times the 512-bit time.
double cg_iter_time(int n, int precision_bits, const HwParams& hw = {});

/// ceil(bandwidth / per-core load bandwidth); 0 for zero bandwidth.
int cores_to_saturate(const HwParams& hw = {});

/// min(peak_flops, intensity * bandwidth).
double roofline(double intensity, const HwParams& hw, double peak_flops);

/// Sum over steps of cg_iterations(step) * cg_iter_time(n, bits).
double estimate_trace_time(std::span<const int> cg_iters_per_step, int n,
                           int precision_bits, const HwParams& hw = {});

struct PrecisionSchedule {
  std::vector<int> bits_per_step;        // chosen precision at each step
  std::vector<double> step_seconds;      // time of the chosen precision
  double total_seconds = 0.0;
  std::map<int, double> fixed_totals;    // per fixed-precision total
  double gain_vs_64b = 0.0;              // fixed64 / adaptive (speedup factor)
  double gain_vs_1024b = 0.0;            // fixed1024 / adaptive - 1 (fraction)
};

/// Per step, the precision minimizing estimated step time; ties go to the
/// lower precision. All traces must cover identical step indices.
PrecisionSchedule adaptive_schedule(const std::map<int, std::vector<int>>& traces,
                                    int n, const HwParams& hw = {});

}  // namespace gwsdp

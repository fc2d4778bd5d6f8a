#pragma once

#include "bnaccel/bn_coeffs.hpp"
#include "bnaccel/coefficient_table.hpp"
#include "bnaccel/operators.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace bnaccel {

/// Scalar diagnostics of one iterate, recorded at a checkpoint.
struct TracePoint {
    int n = 0;
    double norm_sq = 0.0;  ///< |x_n|^2
    double vel_sq = 0.0;   ///< |x_n - x_{n+1}|^2
    double res_sq = 0.0;   ///< |x_n - T x_n|^2
    double dist_sq = -1.0; ///< |x_n - P_{Fix T} x_0|^2, or -1 if no projector
};

struct IterationTrace {
    std::vector<TracePoint> points;
    Vector final_iterate;  ///< x_{n_max + 1}
    int n_max = 0;

    const TracePoint& at(int n) const;
    bool has_dist() const;
};

/// Geometric checkpoint grid {ceil(1.25^j)} capped at n_max, always including
/// 1 and n_max, merged with any extras.
std::vector<int> geometric_checkpoints(int n_max, std::span<const int> extras = {});

/// Runs the momentum iteration
///   x_1 = x_0,
///   x_{n+1} = (1 - a/(2(n+a))) x_n + a/(2(n+a)) T x_n + n/(n+a)(T x_n - T x_{n-1})
/// recording diagnostics at the requested checkpoints. Exactly one operator
/// application per step (T x_{n-1} is cached). Aborts with NumericError if an
/// iterate stops being finite.
IterationTrace bn_iterate(const OperatorModel& op, const Vector& x0, Alpha alpha,
                          int n_max, std::span<const int> checkpoints,
                          const FixedPointProjector* projector = nullptr);

/// Equal-weights baseline x_{n+1} = (1/(n+1)) sum_{k=0}^{n} T^k x_0, streamed
/// with one operator application per step; the residual uses the linear
/// identity x_m - T x_m = (x_0 - T^m x_0)/m instead of a second application.
IterationTrace cesaro_iterate(const OperatorModel& op, const Vector& x0, int n_max,
                              std::span<const int> checkpoints,
                              const FixedPointProjector* projector = nullptr);

/// sum_{k=0}^{n} c_{n,k} T^k x_0, accumulating powers iteratively.
Vector ergodic_sum(const OperatorModel& op, const Vector& x0,
                   const CoefficientTable& table, int n);

/// Max over checkpoints of |x_{n+1} - sum_k c_{n,k} T^k x_0|, the
/// direct-iteration vs weighted-mean-expansion oracle. An empty checkpoint
/// set means the geometric grid.
double equivalence_check(const OperatorModel& op, const Vector& x0, Alpha alpha,
                         int n_max, std::span<const int> checkpoints = {});

/// Equal-weights table: row n holds n+1 copies of 1/(n+1).
CoefficientTable cesaro_table(int n_max);

/// CSV with header `n,norm_sq,vel_sq,res_sq,dist_sq` (dist_sq column empty
/// when no projector was supplied).
void write_trace_csv(const IterationTrace& trace, std::ostream& out);

}  // namespace bnaccel

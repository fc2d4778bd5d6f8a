#pragma once

#include "bnaccel/beta_binomial.hpp"
#include "bnaccel/coefficient_table.hpp"
#include "bnaccel/ergodic.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bnaccel {

enum class ConditionStatus { verified_at_scale, violated, inconclusive };

std::string condition_status_name(ConditionStatus s);

/// A concrete counterexample (required whenever status == violated).
struct ConditionWitness {
    int n = 0;
    int k = 0;
    double value = 0.0;
};

struct ConditionEvidence {
    ConditionStatus status = ConditionStatus::inconclusive;
    /// Sampled (index, value) pairs backing the verdict: (n, value) for row
    /// quantities, (K, tail sup) for the uniform-tail condition.
    std::vector<std::pair<int, double>> samples;
    std::optional<ConditionWitness> witness;
    std::string detail;
};

/// Finite-scale certificate for the regularity/strong-convergence conditions.
/// "verified-at-scale" records decreasing-trend evidence over the generated
/// rows, never a proof of the limit statement.
struct ConditionReport {
    ConditionEvidence st1;  ///< sup_n sum_k |c_{n,k}| bounded
    ConditionEvidence st2;  ///< columns c_{n,k} -> 0
    ConditionEvidence st3;  ///< row sums -> 1
    ConditionEvidence lorentz;         ///< sum_k |c_{n,k} - c_{n,k+1}| -> 0
    ConditionEvidence cohen;           ///< tail sums, uniform in n (truncated at n_max)
    ConditionEvidence brezis_browder;  ///< positive parts only
    int n_max = 0;
    std::vector<int> n_samples;
    std::vector<int> k_samples;
};

/// Evaluates all six conditions on the generated rows. n_samples defaults to
/// the geometric grid when empty; k_samples defaults to a small fixed set.
ConditionReport check_conditions(const CoefficientTable& table,
                                 std::span<const int> n_samples = {},
                                 std::span<const int> k_samples = {});

nlohmann::json condition_report_to_json(const ConditionReport& report);

/// Entry-wise difference of two weight rows at the same n.
struct RowComparison {
    int n = 0;
    std::vector<double> delta;
    double max_abs = 0.0;
    int argmax_k = 0;
    double tv = 0.0;  ///< sum_k |delta_k|
};

RowComparison compare_rows(std::span<const double> first, std::span<const double> second,
                           int n);

/// Closed form of c_{n,k} - b_{n,k} for the matched pair alpha=4, beta=2:
///   delta_{n,0} = 6n/((n+2)(n+3)(n+4)),
///   delta_{n,k} = 2(9k^2 - (10n+1)k + 2n^2 - 2n - 4)/((n+1)(n+2)(n+3)(n+4)).
double delta_closed_alpha4_beta2(int n, int k);

struct TvCurvePoint {
    int n;
    double tv;                ///< sum_k |c_{n,k} - b_{n,k}|
    double n_times_max_abs;   ///< n * max_k |c_{n,k} - b_{n,k}|
};

/// Row-distance curve between the two distributions for n = 0..n_max.
/// beta = alpha/2 is the matched pairing; anything else is accepted but
/// flagged by the caller-visible `matched` field being false.
struct TvCurve {
    double alpha;
    double beta;
    bool matched;
    std::vector<TvCurvePoint> points;
};

TvCurve tv_distance_curve(Alpha alpha, Beta beta, int n_max);

enum class Diagnostic { norm_sq, vel_sq, res_sq, dist_sq };

std::string diagnostic_name(Diagnostic d);

/// Power-law fit value ~ constant * n^exponent over a checkpoint window.
struct RateFit {
    double exponent = 0.0;
    double constant = 0.0;
    double r_squared = 0.0;
    int n_lo = 0;
    int n_hi = 0;
};

/// Least squares on (log n, log value) over checkpoints with n in
/// [n_lo, n_hi]. Requires >= 8 checkpoints in the window and strictly
/// positive values (throws std::invalid_argument otherwise).
RateFit fit_rate(const IterationTrace& trace, Diagnostic diagnostic, int n_lo, int n_hi);

/// Default window: the last half-decade of checkpoints, widened to the last
/// full decade when the half-decade holds fewer than 8 points.
RateFit fit_rate(const IterationTrace& trace, Diagnostic diagnostic);

/// CSV grid `n,k,n2_times_delta` of n^2 (c_{n,k} - b_{n,k}) for n = 1..n_max
/// (the rescaling used by the difference heatmap; the reference axis tops out
/// at n = 220).
void write_heatmap_csv(Alpha alpha, Beta beta, int n_max, std::ostream& out);

/// CSV `n,value` helper for curve exports.
void write_curve_csv(std::span<const std::pair<int, double>> points, std::ostream& out);

}  // namespace bnaccel

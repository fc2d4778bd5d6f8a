#include "bnaccel/ergodic.hpp"

#include "bnaccel/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

namespace bnaccel {

namespace {

void require_dim(const OperatorModel& op, const Vector& x0)
{
    if (static_cast<int>(x0.size()) != op.dim())
        throw std::invalid_argument("starting point dimension mismatch");
    if (!all_finite(x0)) throw std::invalid_argument("starting point must be finite");
}

void require_finite_iterate(const Vector& x, int n)
{
    if (!all_finite(x))
        throw NumericError("iterate became non-finite at step " + std::to_string(n));
}

TracePoint make_point(int n, const Vector& xn, const Vector& xnp1, const Vector& txn,
                      const Vector* px0)
{
    TracePoint p;
    p.n = n;
    p.norm_sq = norm_sq(xn);
    p.vel_sq = distance_sq(xn, xnp1);
    p.res_sq = distance_sq(xn, txn);
    if (px0) p.dist_sq = distance_sq(xn, *px0);
    return p;
}

}  // namespace

const TracePoint& IterationTrace::at(int n) const
{
    for (const auto& p : points)
        if (p.n == n) return p;
    throw std::out_of_range("no checkpoint at n = " + std::to_string(n));
}

bool IterationTrace::has_dist() const
{
    return !points.empty() && points.front().dist_sq >= 0.0;
}

std::vector<int> geometric_checkpoints(int n_max, std::span<const int> extras)
{
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::set<int> grid = {1, n_max};
    for (double v = 1.0; v <= static_cast<double>(n_max); v *= 1.25)
        grid.insert(static_cast<int>(std::ceil(v)));
    for (int e : extras) {
        if (e < 0 || e > n_max)
            throw std::invalid_argument("checkpoint outside [0, n_max]");
        grid.insert(e);
    }
    return {grid.begin(), grid.end()};
}

IterationTrace bn_iterate(const OperatorModel& op, const Vector& x0, Alpha alpha,
                          int n_max, std::span<const int> checkpoints,
                          const FixedPointProjector* projector)
{
    require_dim(op, x0);
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::set<int> marks(checkpoints.begin(), checkpoints.end());
    if (!marks.empty() && (*marks.begin() < 0 || *marks.rbegin() > n_max))
        throw std::invalid_argument("checkpoint outside [0, n_max]");

    Vector px0;
    if (projector) px0 = projector->project(x0);
    const Vector* px = projector ? &px0 : nullptr;

    const double a = alpha.value;
    IterationTrace trace;
    trace.n_max = n_max;

    Vector xn = x0;             // x_1 = x_0
    Vector t_prev = op.apply(x0);  // T x_0
    if (marks.count(0))
        trace.points.push_back(make_point(0, x0, x0, t_prev, px));
    for (int n = 1; n <= n_max; ++n) {
        const Vector tn = op.apply(xn);
        const double an = a / (2.0 * (n + a));
        const double bn = static_cast<double>(n) / (n + a);
        Vector next(xn.size());
        for (std::size_t i = 0; i < xn.size(); ++i)
            next[i] = (1.0 - an) * xn[i] + an * tn[i] + bn * (tn[i] - t_prev[i]);
        require_finite_iterate(next, n);
        if (marks.count(n)) trace.points.push_back(make_point(n, xn, next, tn, px));
        t_prev = tn;
        xn = std::move(next);
    }
    trace.final_iterate = std::move(xn);
    return trace;
}

IterationTrace cesaro_iterate(const OperatorModel& op, const Vector& x0, int n_max,
                              std::span<const int> checkpoints,
                              const FixedPointProjector* projector)
{
    require_dim(op, x0);
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::set<int> marks(checkpoints.begin(), checkpoints.end());
    if (!marks.empty() && (*marks.begin() < 0 || *marks.rbegin() > n_max))
        throw std::invalid_argument("checkpoint outside [0, n_max]");

    Vector px0;
    if (projector) px0 = projector->project(x0);
    const Vector* px = projector ? &px0 : nullptr;

    IterationTrace trace;
    trace.n_max = n_max;

    Vector ym = x0;     // y_1 = x_0
    Vector power = x0;  // T^m x_0 once step m runs
    if (marks.count(0)) {
        const Vector t0 = op.apply(x0);
        trace.points.push_back(make_point(0, x0, x0, t0, px));
    }
    for (int m = 1; m <= n_max; ++m) {
        power = op.apply(power);  // T^m x_0
        Vector next(ym.size());
        for (std::size_t i = 0; i < ym.size(); ++i)
            next[i] = (m * ym[i] + power[i]) / (m + 1.0);
        require_finite_iterate(next, m);
        if (marks.count(m)) {
            // T is linear, so y_m - T y_m = (x_0 - T^m x_0)/m; no extra apply.
            Vector tym(ym.size());
            for (std::size_t i = 0; i < ym.size(); ++i)
                tym[i] = ym[i] - (x0[i] - power[i]) / static_cast<double>(m);
            trace.points.push_back(make_point(m, ym, next, tym, px));
        }
        ym = std::move(next);
    }
    trace.final_iterate = std::move(ym);
    return trace;
}

Vector ergodic_sum(const OperatorModel& op, const Vector& x0,
                   const CoefficientTable& table, int n)
{
    require_dim(op, x0);
    if (n < 0 || n > table.n_max())
        throw std::invalid_argument("n outside the generated table");
    const auto& row = table.row(n);
    Vector acc(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) acc[i] = row[0] * x0[i];
    Vector power = x0;
    for (int k = 1; k <= n; ++k) {
        power = op.apply(power);
        const double c = row[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * power[i];
    }
    return acc;
}

double equivalence_check(const OperatorModel& op, const Vector& x0, Alpha alpha,
                         int n_max, std::span<const int> checkpoints)
{
    require_dim(op, x0);
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const CoefficientTable table = bn_row_recursive(alpha, n_max);
    std::set<int> mark_set;
    if (checkpoints.empty()) {
        const auto marks = geometric_checkpoints(n_max);
        mark_set.insert(marks.begin(), marks.end());
    } else {
        for (int c : checkpoints) {
            if (c < 1 || c > n_max)
                throw std::invalid_argument("checkpoint outside [1, n_max]");
            mark_set.insert(c);
        }
    }

    const double a = alpha.value;
    double max_dev = 0.0;
    Vector xn = x0;
    Vector t_prev = op.apply(x0);
    for (int n = 1; n <= n_max; ++n) {
        const Vector tn = op.apply(xn);
        const double an = a / (2.0 * (n + a));
        const double bn = static_cast<double>(n) / (n + a);
        Vector next(xn.size());
        for (std::size_t i = 0; i < xn.size(); ++i)
            next[i] = (1.0 - an) * xn[i] + an * tn[i] + bn * (tn[i] - t_prev[i]);
        require_finite_iterate(next, n);
        if (mark_set.count(n)) {
            const Vector expanded = ergodic_sum(op, x0, table, n);
            max_dev = std::max(max_dev, std::sqrt(distance_sq(next, expanded)));
        }
        t_prev = tn;
        xn = std::move(next);
    }
    return max_dev;
}

CoefficientTable cesaro_table(int n_max)
{
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    CoefficientTable table;
    table.kind = TableKind::cesaro;
    table.rows.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        table.rows.emplace_back(static_cast<std::size_t>(n) + 1, 1.0 / (n + 1));
    return table;
}

void write_trace_csv(const IterationTrace& trace, std::ostream& out)
{
    out << "n,norm_sq,vel_sq,res_sq,dist_sq\n";
    for (const auto& p : trace.points) {
        out << p.n << ',' << format_double(p.norm_sq) << ',' << format_double(p.vel_sq)
            << ',' << format_double(p.res_sq) << ',';
        if (p.dist_sq >= 0.0) out << format_double(p.dist_sq);
        out << '\n';
    }
}

}  // namespace bnaccel

#include "bnaccel/analysis.hpp"

#include "bnaccel/beta_binomial.hpp"
#include "bnaccel/numerics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

namespace bnaccel {

namespace {

constexpr double kTinyTerminal = 1e-8;

std::vector<int> default_n_samples(int n_max)
{
    std::set<int> grid = {1, n_max};
    for (double v = 1.0; v <= static_cast<double>(n_max); v *= 1.25)
        grid.insert(static_cast<int>(std::ceil(v)));
    return {grid.begin(), grid.end()};
}

std::vector<int> default_k_samples(int n_max)
{
    std::vector<int> ks;
    for (int k : {0, 1, 2, 5, 10, 20, 50, 100})
        if (k <= n_max) ks.push_back(k);
    return ks;
}

double row_abs_sum(const std::vector<double>& row)
{
    CompensatedSum acc;
    for (double v : row) acc.add(std::abs(v));
    return acc.value();
}

double lorentz_sum(const std::vector<double>& row)
{
    CompensatedSum acc;
    for (std::size_t k = 0; k < row.size(); ++k) {
        const double next = k + 1 < row.size() ? row[k + 1] : 0.0;
        acc.add(std::abs(row[k] - next));
    }
    return acc.value();
}

double positive_part_sum(const std::vector<double>& row)
{
    CompensatedSum acc;
    for (std::size_t k = 0; k < row.size(); ++k) {
        const double next = k + 1 < row.size() ? row[k + 1] : 0.0;
        acc.add(std::max(0.0, next - row[k]));
    }
    return acc.value();
}

double tail_lorentz_sum(const std::vector<double>& row, int from_k)
{
    CompensatedSum acc;
    for (std::size_t k = static_cast<std::size_t>(std::max(from_k, 0)); k < row.size(); ++k) {
        const double next = k + 1 < row.size() ? row[k + 1] : 0.0;
        acc.add(std::abs(row[k] - next));
    }
    return acc.value();
}

/// Decay-trend verdict over sampled (n, value) pairs: looks at the last decade
/// of samples (n >= n_max/10) and asks for a strict decrease.
struct Trend {
    bool enough_data = false;
    bool strictly_decreasing = false;
    double window_start = 0.0;
    double terminal = 0.0;
    int terminal_n = 0;
};

Trend decay_trend(const std::vector<std::pair<int, double>>& samples, int n_max)
{
    Trend t;
    std::vector<std::pair<int, double>> window;
    for (const auto& s : samples)
        if (s.first * 10 >= n_max) window.push_back(s);
    if (window.size() < 3) {
        if (samples.size() < 3) return t;
        window = samples;
    }
    t.enough_data = true;
    t.strictly_decreasing = true;
    for (std::size_t i = 1; i < window.size(); ++i)
        if (!(window[i].second < window[i - 1].second)) t.strictly_decreasing = false;
    t.window_start = window.front().second;
    t.terminal = window.back().second;
    t.terminal_n = window.back().first;
    return t;
}

/// Envelope for the decaying-row quantities, where the table kind defines one.
/// scale = 1 for column entries (max_k bound), 2 for the Lorentz sum.
std::optional<double> decay_envelope(const CoefficientTable& table, int n, double scale)
{
    switch (table.kind) {
        case TableKind::cesaro:
            return scale / (n + 1.0);
        case TableKind::beta_binomial: {
            const double b = table.parameter;
            return scale * std::exp2(2.0 * (1.0 - b)) / (beta_constant(b) * (n + 1.0));
        }
        default:
            return std::nullopt;
    }
}

ConditionEvidence judge_decay(const CoefficientTable& table,
                              std::vector<std::pair<int, double>> samples,
                              std::optional<double> envelope_at_terminal,
                              const std::string& quantity)
{
    ConditionEvidence ev;
    ev.samples = std::move(samples);
    const Trend t = decay_trend(ev.samples, table.n_max());
    if (!t.enough_data) {
        ev.status = ConditionStatus::inconclusive;
        ev.detail = quantity + ": insufficient samples";
        return ev;
    }
    const bool below_envelope =
        !envelope_at_terminal || t.terminal <= 10.0 * *envelope_at_terminal;
    if (t.strictly_decreasing && below_envelope) {
        ev.status = ConditionStatus::verified_at_scale;
        ev.detail = quantity + " strictly decreasing over the last decade, terminal " +
                    format_double(t.terminal);
        return ev;
    }
    if (!t.strictly_decreasing && t.terminal >= 0.999 * t.window_start &&
        t.terminal > kTinyTerminal) {
        ev.status = ConditionStatus::violated;
        ev.witness = ConditionWitness{t.terminal_n, -1, t.terminal};
        ev.detail = quantity + " does not decay at scale";
        return ev;
    }
    ev.status = ConditionStatus::inconclusive;
    ev.detail = quantity + ": trend not strictly decreasing at scale";
    return ev;
}

}  // namespace

std::string condition_status_name(ConditionStatus s)
{
    switch (s) {
        case ConditionStatus::verified_at_scale: return "verified-at-scale";
        case ConditionStatus::violated: return "violated";
        case ConditionStatus::inconclusive: return "inconclusive";
    }
    throw std::logic_error("unknown condition status");
}

ConditionReport check_conditions(const CoefficientTable& table,
                                 std::span<const int> n_samples,
                                 std::span<const int> k_samples)
{
    const int n_max = table.n_max();
    if (n_max < 0) throw std::invalid_argument("table is empty");

    ConditionReport report;
    report.n_max = n_max;
    report.n_samples = n_samples.empty() ? default_n_samples(std::max(n_max, 1))
                                         : std::vector<int>(n_samples.begin(), n_samples.end());
    report.k_samples = k_samples.empty() ? default_k_samples(n_max)
                                         : std::vector<int>(k_samples.begin(), k_samples.end());
    for (int n : report.n_samples)
        if (n < 0 || n > n_max) throw std::invalid_argument("n sample outside table");
    for (int k : report.k_samples)
        if (k < 0) throw std::invalid_argument("k sample must be >= 0");

    // ST1: sup of row absolute sums over everything generated.
    {
        double sup = 0.0;
        int sup_n = 0;
        for (int n = 0; n <= n_max; ++n) {
            const double s = row_abs_sum(table.row(n));
            if (s > sup) {
                sup = s;
                sup_n = n;
            }
        }
        ConditionEvidence ev;
        for (int n : report.n_samples) ev.samples.emplace_back(n, row_abs_sum(table.row(n)));
        const Trend t = decay_trend(ev.samples, n_max);
        const bool bounded_at_scale =
            t.enough_data && t.terminal <= t.window_start * (1.0 + 1e-9);
        ev.status = bounded_at_scale ? ConditionStatus::verified_at_scale
                                     : ConditionStatus::inconclusive;
        ev.detail = "sup of row absolute sums = " + format_double(sup) + " at n = " +
                    std::to_string(sup_n);
        report.st1 = std::move(ev);
    }

    // ST2: sampled columns must die out along n.
    {
        ConditionEvidence ev;
        ev.status = ConditionStatus::verified_at_scale;
        for (int k : report.k_samples) {
            std::vector<std::pair<int, double>> column;
            for (int n : report.n_samples)
                if (n >= k) column.emplace_back(n, table.value(n, k));
            if (column.empty()) continue;
            ev.samples.emplace_back(k, column.back().second);
            const Trend t = decay_trend(column, n_max);
            if (!t.enough_data) {
                if (ev.status == ConditionStatus::verified_at_scale)
                    ev.status = ConditionStatus::inconclusive;
                continue;
            }
            const auto envelope = decay_envelope(table, t.terminal_n, 1.0);
            const bool below = !envelope || t.terminal <= 10.0 * *envelope;
            if (t.strictly_decreasing && below) continue;
            if (!t.strictly_decreasing && t.terminal >= 0.999 * t.window_start &&
                t.terminal > kTinyTerminal) {
                ev.status = ConditionStatus::violated;
                ev.witness = ConditionWitness{t.terminal_n, k, t.terminal};
                ev.detail = "column k = " + std::to_string(k) + " does not decay";
                break;
            }
            ev.status = ConditionStatus::inconclusive;
        }
        if (ev.detail.empty())
            ev.detail = "terminal column values at sampled k (samples hold (k, c_{n_max,k}))";
        report.st2 = std::move(ev);
    }

    // ST3: row sums approach 1.
    {
        ConditionEvidence ev;
        double worst = 0.0;
        int worst_n = 0;
        for (int n : report.n_samples) {
            const double s = table.row_sum(n);
            ev.samples.emplace_back(n, s);
            const double dev = std::abs(s - 1.0);
            if (dev >= worst) {
                worst = dev;
                worst_n = n;
            }
        }
        const double terminal_dev = std::abs(ev.samples.back().second - 1.0);
        if (terminal_dev <= 1e-9 * (n_max + 1.0)) {
            ev.status = ConditionStatus::verified_at_scale;
            ev.detail = "max |row sum - 1| over samples = " + format_double(worst);
        } else {
            std::vector<std::pair<int, double>> devs;
            for (const auto& s : ev.samples) devs.emplace_back(s.first, std::abs(s.second - 1.0));
            const Trend t = decay_trend(devs, n_max);
            if (t.enough_data && t.strictly_decreasing) {
                ev.status = ConditionStatus::inconclusive;
                ev.detail = "row sums still approaching 1 at scale";
            } else {
                ev.status = ConditionStatus::violated;
                ev.witness = ConditionWitness{worst_n, -1, table.row_sum(worst_n)};
                ev.detail = "row sums do not approach 1";
            }
        }
        report.st3 = std::move(ev);
    }

    // Lorentz (L): full adjacent-difference sums along n.
    {
        std::vector<std::pair<int, double>> samples;
        for (int n : report.n_samples) samples.emplace_back(n, lorentz_sum(table.row(n)));
        const auto envelope = decay_envelope(table, samples.back().first, 2.0);
        report.lorentz = judge_decay(table, std::move(samples), envelope, "Lorentz sum");
    }

    // Brezis-Browder: positive parts only; dominated by the Lorentz sum.
    {
        std::vector<std::pair<int, double>> samples;
        for (int n : report.n_samples) samples.emplace_back(n, positive_part_sum(table.row(n)));
        const auto envelope = decay_envelope(table, samples.back().first, 2.0);
        report.brezis_browder =
            judge_decay(table, std::move(samples), envelope, "positive-part sum");
    }

    // Cohen (C): tail sups, uniform over the generated n only.
    {
        ConditionEvidence ev;
        for (int k0 : report.k_samples) {
            double sup = 0.0;
            for (int n = 0; n <= n_max; ++n)
                sup = std::max(sup, tail_lorentz_sum(table.row(n), k0));
            ev.samples.emplace_back(k0, sup);
        }
        bool decreasing = ev.samples.size() >= 3;
        for (std::size_t i = 1; i < ev.samples.size(); ++i)
            if (!(ev.samples[i].second < ev.samples[i - 1].second)) decreasing = false;
        const double terminal = ev.samples.empty() ? 0.0 : ev.samples.back().second;
        if (decreasing && terminal < ev.samples.front().second) {
            ev.status = ConditionStatus::verified_at_scale;
        } else if (!ev.samples.empty() && terminal >= 0.999 * ev.samples.front().second &&
                   terminal > kTinyTerminal) {
            ev.status = ConditionStatus::violated;
            ev.witness = ConditionWitness{n_max, ev.samples.back().first, terminal};
        } else {
            ev.status = ConditionStatus::inconclusive;
        }
        ev.detail = "tail sups quantified over generated n <= " + std::to_string(n_max) +
                    " only (samples hold (K, sup_n tail))";
        report.cohen = std::move(ev);
    }

    return report;
}

nlohmann::json condition_report_to_json(const ConditionReport& report)
{
    const auto evidence_json = [](const ConditionEvidence& ev) {
        nlohmann::json j;
        j["status"] = condition_status_name(ev.status);
        j["detail"] = ev.detail;
        nlohmann::json samples = nlohmann::json::array();
        for (const auto& [idx, value] : ev.samples)
            samples.push_back({{"index", idx}, {"value", value}});
        j["samples"] = samples;
        if (ev.witness)
            j["witness"] = {{"n", ev.witness->n}, {"k", ev.witness->k},
                            {"value", ev.witness->value}};
        return j;
    };
    nlohmann::json j;
    j["n_max"] = report.n_max;
    j["n_samples"] = report.n_samples;
    j["k_samples"] = report.k_samples;
    j["ST1"] = evidence_json(report.st1);
    j["ST2"] = evidence_json(report.st2);
    j["ST3"] = evidence_json(report.st3);
    j["lorentz"] = evidence_json(report.lorentz);
    j["cohen"] = evidence_json(report.cohen);
    j["brezis_browder"] = evidence_json(report.brezis_browder);
    return j;
}

RowComparison compare_rows(std::span<const double> first, std::span<const double> second,
                           int n)
{
    if (first.size() != second.size())
        throw std::invalid_argument("compare_rows: length mismatch");
    if (static_cast<int>(first.size()) != n + 1)
        throw std::invalid_argument("compare_rows: rows are not at the stated n");
    RowComparison cmp;
    cmp.n = n;
    cmp.delta.resize(first.size());
    CompensatedSum tv;
    for (std::size_t k = 0; k < first.size(); ++k) {
        cmp.delta[k] = first[k] - second[k];
        tv.add(std::abs(cmp.delta[k]));
        if (std::abs(cmp.delta[k]) > cmp.max_abs) {
            cmp.max_abs = std::abs(cmp.delta[k]);
            cmp.argmax_k = static_cast<int>(k);
        }
    }
    cmp.tv = tv.value();
    return cmp;
}

double delta_closed_alpha4_beta2(int n, int k)
{
    if (n < 0 || k < 0 || k > n)
        throw std::invalid_argument("(n,k) must satisfy 0 <= k <= n");
    if (k == 0)
        return 6.0 * n / (static_cast<double>(n + 2) * (n + 3) * (n + 4));
    const double kk = k;
    return 2.0 * (9.0 * kk * kk - (10.0 * n + 1.0) * kk + 2.0 * n * n - 2.0 * n - 4.0) /
           (static_cast<double>(n + 1) * (n + 2) * (n + 3) * (n + 4));
}

TvCurve tv_distance_curve(Alpha alpha, Beta beta, int n_max)
{
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    TvCurve curve;
    curve.alpha = alpha.value;
    curve.beta = beta.value;
    curve.matched = std::abs(beta.value - 0.5 * alpha.value) <= 1e-12;
    curve.points.reserve(static_cast<std::size_t>(n_max) + 1);
    BnRowStream<double> stream(alpha.value);
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) stream.advance();
        const auto brow = beta_binomial_row(beta, n);
        const auto cmp = compare_rows(stream.row(), brow, n);
        curve.points.push_back(TvCurvePoint{n, cmp.tv, n * cmp.max_abs});
    }
    return curve;
}

std::string diagnostic_name(Diagnostic d)
{
    switch (d) {
        case Diagnostic::norm_sq: return "norm_sq";
        case Diagnostic::vel_sq: return "vel_sq";
        case Diagnostic::res_sq: return "res_sq";
        case Diagnostic::dist_sq: return "dist_sq";
    }
    throw std::logic_error("unknown diagnostic");
}

namespace {

double diagnostic_value(const TracePoint& p, Diagnostic d)
{
    switch (d) {
        case Diagnostic::norm_sq: return p.norm_sq;
        case Diagnostic::vel_sq: return p.vel_sq;
        case Diagnostic::res_sq: return p.res_sq;
        case Diagnostic::dist_sq: return p.dist_sq;
    }
    throw std::logic_error("unknown diagnostic");
}

}  // namespace

RateFit fit_rate(const IterationTrace& trace, Diagnostic diagnostic, int n_lo, int n_hi)
{
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("fit window is empty");
    std::vector<double> xs, ys;
    for (const auto& p : trace.points) {
        if (p.n < n_lo || p.n > n_hi) continue;
        const double v = diagnostic_value(p, diagnostic);
        if (diagnostic == Diagnostic::dist_sq && v < 0.0)
            throw std::invalid_argument("trace has no distance diagnostics");
        if (!(v > 0.0))
            throw std::invalid_argument("diagnostic " + diagnostic_name(diagnostic) +
                                        " is not strictly positive at n = " +
                                        std::to_string(p.n));
        xs.push_back(std::log(static_cast<double>(p.n)));
        ys.push_back(std::log(v));
    }
    if (xs.size() < 8)
        throw std::invalid_argument("need at least 8 checkpoints in the fit window");
    const LineFit f = fit_line(xs, ys);
    RateFit fit;
    fit.exponent = f.slope;
    fit.constant = std::exp(f.intercept);
    fit.r_squared = f.r_squared;
    fit.n_lo = n_lo;
    fit.n_hi = n_hi;
    return fit;
}

RateFit fit_rate(const IterationTrace& trace, Diagnostic diagnostic)
{
    if (trace.points.empty()) throw std::invalid_argument("trace has no checkpoints");
    const int n_hi = trace.points.back().n;
    int n_lo = std::max(1, static_cast<int>(std::ceil(n_hi / std::sqrt(10.0))));
    std::size_t count = 0;
    for (const auto& p : trace.points)
        if (p.n >= n_lo && p.n <= n_hi) ++count;
    if (count < 8) n_lo = std::max(1, static_cast<int>(std::ceil(n_hi / 10.0)));
    return fit_rate(trace, diagnostic, n_lo, n_hi);
}

void write_heatmap_csv(Alpha alpha, Beta beta, int n_max, std::ostream& out)
{
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    out << "n,k,n2_times_delta\n";
    BnRowStream<double> stream(alpha.value);
    for (int n = 1; n <= n_max; ++n) {
        stream.advance();
        const auto brow = beta_binomial_row(beta, n);
        const auto& crow = stream.row();
        const double n2 = static_cast<double>(n) * n;
        for (int k = 0; k <= n; ++k)
            out << n << ',' << k << ','
                << format_double(n2 * (crow[static_cast<std::size_t>(k)] -
                                       brow[static_cast<std::size_t>(k)]))
                << '\n';
    }
}

void write_curve_csv(std::span<const std::pair<int, double>> points, std::ostream& out)
{
    out << "n,value\n";
    for (const auto& [n, value] : points)
        out << n << ',' << format_double(value) << '\n';
}

}  // namespace bnaccel

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnaccel {

/// Neumaier-compensated accumulator. Long traces and high-dimensional inner
/// products need a few extra digits beyond naive summation; this keeps the
/// error independent of the number of terms.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs)
{
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

inline double dot(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
    return acc.value();
}

inline double norm_sq(std::span<const double> a)
{
    CompensatedSum acc;
    for (double x : a) acc.add(x * x);
    return acc.value();
}

inline double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

inline double distance_sq(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw std::invalid_argument("distance: dimension mismatch");
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc.add(d * d);
    }
    return acc.value();
}

inline bool all_finite(std::span<const double> a)
{
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Shortest round-trip decimal representation (never more than 17 significant
/// digits); parsing the result recovers the exact bit pattern.
inline std::string format_double(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Sign with a relative dead zone: values within `rel_tol * scale` of zero
/// count as zero.
inline int sign_with_tolerance(double x, double scale, double rel_tol)
{
    if (std::abs(x) <= rel_tol * std::abs(scale)) return 0;
    return x > 0 ? 1 : -1;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares for y = slope*x + intercept.
inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_line: need at least two points");
    const double n = static_cast<double>(xs.size());
    CompensatedSum sx, sy;
    for (double x : xs) sx.add(x);
    for (double y : ys) sy.add(y);
    const double mx = sx.value() / n, my = sy.value() / n;
    CompensatedSum sxx, sxy, syy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx.add((xs[i] - mx) * (xs[i] - mx));
        sxy.add((xs[i] - mx) * (ys[i] - my));
        syy.add((ys[i] - my) * (ys[i] - my));
    }
    if (sxx.value() == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy.value() / sxx.value();
    f.intercept = my - f.slope * mx;
    const double ss_res = syy.value() - f.slope * sxy.value();
    f.r_squared = syy.value() == 0.0 ? 1.0 : std::max(0.0, 1.0 - ss_res / syy.value());
    return f;
}

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb,
                    double whole, double eps, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with Richardson correction. `eps` is an
/// absolute tolerance budget for the whole interval.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double eps, int max_depth = 60)
{
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

}  // namespace bnaccel

#include "bnaccel/beta_binomial.hpp"

#include "bnaccel/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bnaccel {

BetaRatioIdentities beta_ratio_identities(double x, double y, double z)
{
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("require x > 0 and y > 0");
    if (!(z > 1.0)) throw std::invalid_argument("require z > 1");
    return BetaRatioIdentities{x / (x + y), y / (x + y), x / (z - 1.0)};
}

std::vector<double> beta_binomial_row(Beta beta, int n)
{
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    const double b = beta.value;
    std::vector<double> row(static_cast<std::size_t>(n) + 1);
    double v = 1.0;
    for (int m = 0; m < n; ++m) v *= (m + b) / (m + 2.0 * b);
    row[0] = v;
    for (int k = 0; k < n; ++k) {
        v *= (static_cast<double>(n - k) / (k + 1)) * ((k + b) / (n - k - 1 + b));
        row[static_cast<std::size_t>(k) + 1] = v;
    }
    return row;
}

std::vector<Rational> beta_binomial_row_exact(const Rational& beta, int n)
{
    if (!(beta > 1)) throw std::invalid_argument("beta must exceed 1");
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    std::vector<Rational> row(static_cast<std::size_t>(n) + 1);
    Rational v(1);
    for (int m = 0; m < n; ++m) v *= (m + beta) / (m + 2 * beta);
    row[0] = v;
    for (int k = 0; k < n; ++k) {
        v *= Rational(n - k, k + 1) * ((k + beta) / (n - k - 1 + beta));
        row[static_cast<std::size_t>(k) + 1] = v;
    }
    return row;
}

CoefficientTable beta_binomial_table(Beta beta, int n_max)
{
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    CoefficientTable table;
    table.kind = TableKind::beta_binomial;
    table.parameter = beta.value;
    table.rows.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) table.rows.push_back(beta_binomial_row(beta, n));
    return table;
}

double beta_binomial_closed_beta2(int n, int k)
{
    if (n < 0 || k < 0 || k > n)
        throw std::invalid_argument("(n,k) must satisfy 0 <= k <= n");
    return 6.0 * (k + 1.0) * (n - k + 1.0) /
           (static_cast<double>(n + 1) * (n + 2) * (n + 3));
}

bool beta_constant_has_closed_form(double beta)
{
    const double doubled = 2.0 * beta;
    return doubled == std::round(doubled);
}

double beta_constant(double beta)
{
    if (!(beta > 1.0)) throw std::invalid_argument("beta must exceed 1");
    if (beta_constant_has_closed_form(beta)) {
        if (beta == std::round(beta)) {
            const int m = static_cast<int>(beta);
            // B(m,m) = (m-1)! / prod_{j=m}^{2m-1} j, paired into a running product
            double prod = 1.0;
            for (int j = 1; j <= m - 1; ++j) prod *= static_cast<double>(j) / (m + j);
            return prod / m;
        }
        const int m = static_cast<int>(std::floor(beta));  // beta = m + 1/2
        double prod = 1.0;
        for (int j = 1; j <= m; ++j) prod *= (2.0 * j - 1.0) / (8.0 * j);
        return std::numbers::pi * prod;
    }
    // Quadrature oracle: t = sin^2(theta) turns the integrand into
    // 2^{1-2 beta} sin^{2 beta - 1}(phi) on [0, pi], which adaptive Simpson
    // handles to ~1e-10 relative even for beta close to 1.
    const double p = 2.0 * beta - 1.0;
    const auto integrand = [p](double phi) { return std::pow(std::sin(phi), p); };
    const double integral = adaptive_simpson(integrand, 0.0, std::numbers::pi, 1e-13);
    return std::exp2(1.0 - 2.0 * beta) * integral;
}

double beta_binomial_row_bound(Beta beta, int n)
{
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    return std::exp2(2.0 * (1.0 - beta.value)) / (beta_constant(beta.value) * (n + 1.0));
}

BetaLorentzSum beta_binomial_lorentz_sum(Beta beta, int n)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const auto row = beta_binomial_row(beta, n);
    CompensatedSum direct;
    for (int k = 0; k <= n; ++k) {
        const double next = k + 1 <= n ? row[static_cast<std::size_t>(k) + 1] : 0.0;
        direct.add(std::abs(row[static_cast<std::size_t>(k)] - next));
    }
    const double identity = 2.0 * row[static_cast<std::size_t>(n / 2)] - row[0];
    return BetaLorentzSum{direct.value(), identity};
}

std::vector<std::vector<double>> q_polynomial_recursion(Beta beta, int n_max)
{
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const double b = beta.value;
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(n_max) + 1);
    rows.push_back({1.0});
    rows.push_back({0.5, 0.5});
    const auto at = [](const std::vector<double>& r, int k) {
        if (k < 0 || k >= static_cast<int>(r.size())) return 0.0;
        return r[static_cast<std::size_t>(k)];
    };
    for (int n = 1; n < n_max; ++n) {
        const auto& qn = rows[static_cast<std::size_t>(n)];
        const auto& qm = rows[static_cast<std::size_t>(n) - 1];
        std::vector<double> next(static_cast<std::size_t>(n) + 2);
        for (int k = 0; k <= n + 1; ++k)
            next[static_cast<std::size_t>(k)] =
                ((n + b) * (at(qn, k) + at(qn, k - 1)) - n * at(qm, k - 1)) / (n + 2.0 * b);
        rows.push_back(std::move(next));
    }
    return rows;
}

}  // namespace bnaccel

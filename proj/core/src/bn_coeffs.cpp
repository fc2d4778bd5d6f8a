#include "bnaccel/bn_coeffs.hpp"

#include "bnaccel/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace bnaccel {

CoefficientTable bn_row_recursive(Alpha alpha, int n_max)
{
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    CoefficientTable table;
    table.kind = TableKind::bn;
    table.parameter = alpha.value;
    table.rows.reserve(static_cast<std::size_t>(n_max) + 1);
    BnRowStream<double> stream(alpha.value);
    table.rows.push_back(stream.row());
    for (int n = 1; n <= n_max; ++n) {
        stream.advance();
        table.rows.push_back(stream.row());
    }
    return table;
}

std::vector<std::vector<Rational>> bn_table_rational(const Rational& alpha, int n_max)
{
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    std::vector<std::vector<Rational>> rows;
    rows.reserve(static_cast<std::size_t>(n_max) + 1);
    BnRowStream<Rational> stream(alpha);
    rows.push_back(stream.row());
    for (int n = 1; n <= n_max; ++n) {
        stream.advance();
        rows.push_back(stream.row());
    }
    return rows;
}

std::vector<double> bn_row_closed_alpha4(int n)
{
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    std::vector<double> row(static_cast<std::size_t>(n) + 1);
    const double d = static_cast<double>(n + 2) * (n + 3) * (n + 4);
    row[0] = 12.0 / (static_cast<double>(n + 3) * (n + 4));
    for (int k = 1; k <= n; ++k) {
        const double kk = k;
        row[static_cast<std::size_t>(k)] =
            2.0 * (-3.0 * kk * kk + (3.0 * n - 1.0) * kk + 5.0 * n + 8.0) / d;
    }
    return row;
}

std::vector<Rational> bn_row_closed_alpha4_exact(int n)
{
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    std::vector<Rational> row(static_cast<std::size_t>(n) + 1);
    const BigInt dn = BigInt(n + 2) * (n + 3) * (n + 4);
    row[0] = Rational(12, BigInt(n + 3) * (n + 4));
    for (int k = 1; k <= n; ++k) {
        const BigInt q = BigInt(-3) * k * k + BigInt(3 * n - 1) * k + 5 * n + 8;
        row[static_cast<std::size_t>(k)] = Rational(2 * q, dn);
    }
    return row;
}

double bn_constant_coeff(Alpha alpha, int n)
{
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    const double a = alpha.value;
    double prod = 1.0;
    for (int m = 1; m <= n; ++m) prod *= (2.0 * m + a) / (2.0 * (m + a));
    return prod;
}

double bn_constant_coeff_gamma_ratio(Alpha alpha, int n)
{
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    if (n == 0) return 1.0;
    const double a = alpha.value;
    double num = 1.0, den = 1.0;
    for (int m = 2; m <= n; ++m) {
        num *= m + 0.5 * a;
        den *= m + a;
    }
    return (a + 2.0) / (2.0 * (a + 1.0)) * (num / den);
}

BnScalarIdentities bn_scalar_identities(Alpha alpha, int n)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const double a = alpha.value;
    return BnScalarIdentities{
        a / (2.0 + a),
        a * (a * n + 2.0) / ((a + 2.0) * (a + 2.0 * n)),
    };
}

ForwardDifferenceRow bn_forward_differences_alpha4(int n)
{
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    ForwardDifferenceRow out;
    out.n = n;
    out.values.assign(static_cast<std::size_t>(n) + 2, 0.0);
    if (n == 0) {
        out.values[0] = 1.0;   // d_{0,-1}
        out.values[1] = -1.0;  // d_{0,0}
        return out;
    }
    const double d2 = static_cast<double>(n + 3) * (n + 4);
    const double d3 = static_cast<double>(n + 2) * d2;
    out.values[0] = 12.0 / d2;
    out.values[1] = 4.0 * (n - 4.0) / d3;
    for (int k = 1; k <= n - 1; ++k)
        out.values[static_cast<std::size_t>(k) + 1] = 2.0 * (3.0 * n - 6.0 * k - 4.0) / d3;
    out.values[static_cast<std::size_t>(n) + 1] = -8.0 / d2;
    return out;
}

int bn_sign_dichotomy(Alpha alpha, int n)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const double a = alpha.value;
    const double crit = n * (a * a - 2.0 * a - 4.0) - a * a;
    if (crit > 0.0) return 1;
    if (crit < 0.0) return -1;
    return 0;
}

int bn_sign_from_row(const std::vector<double>& row, double rel_tol)
{
    if (row.size() < 2) throw std::invalid_argument("row must have entries for k=0 and k=1");
    const double diff = row[1] - row[0];
    const double scale = std::max(std::abs(row[0]), std::abs(row[1]));
    return sign_with_tolerance(diff, scale, rel_tol);
}

}  // namespace bnaccel

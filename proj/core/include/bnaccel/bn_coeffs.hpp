#pragma once

#include "bnaccel/coefficient_table.hpp"
#include "bnaccel/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bnaccel {

/// Momentum parameter of the accelerated Krasnoselskii-Mann scheme.
/// Construction rejects anything that is not a finite real > 2.
struct Alpha {
    double value;
    explicit Alpha(double v) : value(v)
    {
        if (!std::isfinite(v) || !(v > 2.0))
            throw std::invalid_argument("alpha must be a finite real > 2");
    }
};

/// Streaming generator for the weight rows (c_{n,k}).
///
/// Keeps only the two previous rows, so sweeps to n ~ 1e4 run in O(n) memory.
/// Works in double or exact rational arithmetic; the recursion is
///   c_{n,k} = (2n+a)/(2(n+a)) * (c_{n-1,k} + c_{n-1,k-1}) - n/(n+a) * c_{n-2,k-1}
/// with c_{0,0} = 1, c_{1,0} = (2+a)/(2(1+a)), c_{1,1} = a/(2(1+a)), and
/// out-of-triangle entries read as 0.
template <class Scalar>
class BnRowStream {
public:
    explicit BnRowStream(Scalar alpha) : alpha_(std::move(alpha))
    {
        if (!(alpha_ > Scalar(2))) throw std::invalid_argument("alpha must exceed 2");
        curr_ = {Scalar(1)};
    }

    int n() const { return n_; }
    const std::vector<Scalar>& row() const { return curr_; }

    void advance()
    {
        ++n_;
        if (n_ == 1) {
            const Scalar den = 2 * (1 + alpha_);
            prev_ = curr_;
            curr_ = {(2 + alpha_) / den, alpha_ / den};
            return;
        }
        const Scalar a = (2 * n_ + alpha_) / (2 * (n_ + alpha_));
        const Scalar b = Scalar(n_) / (n_ + alpha_);
        std::vector<Scalar> next(static_cast<std::size_t>(n_) + 1);
        for (int k = 0; k <= n_; ++k)
            next[static_cast<std::size_t>(k)] =
                a * (at(curr_, k) + at(curr_, k - 1)) - b * at(prev_, k - 1);
        prev_ = std::move(curr_);
        curr_ = std::move(next);
    }

private:
    static Scalar at(const std::vector<Scalar>& r, int k)
    {
        if (k < 0 || k >= static_cast<int>(r.size())) return Scalar(0);
        return r[static_cast<std::size_t>(k)];
    }

    Scalar alpha_;
    int n_ = 0;
    std::vector<Scalar> prev_;
    std::vector<Scalar> curr_;
};

/// Full table of rows 0..n_max by the three-term recursion.
CoefficientTable bn_row_recursive(Alpha alpha, int n_max);

/// Exact-mode table for rational alpha > 2.
std::vector<std::vector<Rational>> bn_table_rational(const Rational& alpha, int n_max);

/// Closed-form row for alpha = 4:
///   c_{n,0} = 12/((n+3)(n+4)),
///   c_{n,k} = 2(-3k^2 + (3n-1)k + 5n + 8)/((n+2)(n+3)(n+4))  for 1 <= k <= n.
std::vector<double> bn_row_closed_alpha4(int n);
std::vector<Rational> bn_row_closed_alpha4_exact(int n);

/// Constant coefficient c_{n,0} = prod_{m=1}^{n} (2m+a)/(2(m+a)), evaluated
/// left to right.
double bn_constant_coeff(Alpha alpha, int n);

/// Cross-check form of c_{n,0}: (a+2)/(2(a+1)) * prod_{m=2}^{n} (m+a/2)/(m+a),
/// the gamma-ratio rewrite expressed as a ratio of running products (no gamma
/// evaluation anywhere).
double bn_constant_coeff_gamma_ratio(Alpha alpha, int n);

struct BnScalarIdentities {
    double c_nn_over_c_n0;  ///< a/(2+a)
    double c_n1_over_c_n0;  ///< a(an+2)/((a+2)(a+2n))
};

/// Row-ratio identities, valid for n >= 1.
BnScalarIdentities bn_scalar_identities(Alpha alpha, int n);

/// Forward differences d_{n,k} = c_{n,k+1} - c_{n,k} at alpha = 4, stored for
/// k = -1..n; `at` is total in k (0 outside that range).
struct ForwardDifferenceRow {
    int n = 0;
    std::vector<double> values;  ///< values[i] = d_{n, i-1}

    double at(int k) const
    {
        const int i = k + 1;
        if (i < 0 || i >= static_cast<int>(values.size())) return 0.0;
        return values[static_cast<std::size_t>(i)];
    }
};

ForwardDifferenceRow bn_forward_differences_alpha4(int n);

/// Sign of c_{n,1} - c_{n,0} from the closed ratio: sign of n(a^2-2a-4) - a^2.
/// Below the critical parameter 1+sqrt(5) this is always -1; above it the sign
/// switches at N = a^2/(a^2-2a-4), with an exact 0 when N is an integer.
int bn_sign_dichotomy(Alpha alpha, int n);

/// Sign of c_{n,1} - c_{n,0} read off a generated row, with a relative dead
/// zone so recursion round-off cannot masquerade as a strict inequality.
int bn_sign_from_row(const std::vector<double>& row, double rel_tol = 1e-11);

}  // namespace bnaccel

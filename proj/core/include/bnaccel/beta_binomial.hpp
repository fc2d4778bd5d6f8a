#pragma once

#include "bnaccel/coefficient_table.hpp"
#include "bnaccel/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bnaccel {

/// Shape parameter of the symmetric beta-binomial distribution; must be a
/// finite real > 1.
struct Beta {
    double value;
    explicit Beta(double v) : value(v)
    {
        if (!std::isfinite(v) || !(v > 1.0))
            throw std::invalid_argument("beta must be a finite real > 1");
    }
};

/// The three ratio facts the generator is built on:
///   B(x+1,y)/B(x,y) = x/(x+y),
///   B(x,y+1)/B(x,y) = y/(x+y),
///   B(x+1,z-1)/B(x,z) = x/(z-1).
/// These are the only beta-function identities used anywhere; there is no
/// beta or gamma evaluation routine in the library.
struct BetaRatioIdentities {
    double bxp1;
    double byp1;
    double shift;
};

BetaRatioIdentities beta_ratio_identities(double x, double y, double z);

/// Row n of the symmetric beta-binomial pmf via the stable product recurrence
///   b_{n,0}   = prod_{m=0}^{n-1} (m+beta)/(m+2 beta),
///   b_{n,k+1} = b_{n,k} * (n-k)/(k+1) * (k+beta)/(n-k-1+beta).
std::vector<double> beta_binomial_row(Beta beta, int n);
std::vector<Rational> beta_binomial_row_exact(const Rational& beta, int n);

CoefficientTable beta_binomial_table(Beta beta, int n_max);

/// Closed form for beta = 2: b_{n,k} = 6(k+1)(n-k+1)/((n+1)(n+2)(n+3)).
double beta_binomial_closed_beta2(int n, int k);

/// Whether B(beta,beta) has a closed form here (integer or half-integer beta).
bool beta_constant_has_closed_form(double beta);

/// B(beta,beta). Integer beta: (m-1)!/prod_{j=m}^{2m-1} j as running products.
/// Half-integer beta = m+1/2: pi * prod_{j=1}^{m} (2j-1)/(8j). Anything else
/// falls back to adaptive Simpson on 2^{1-2 beta} * int_0^pi sin^{2 beta-1},
/// a quadrature oracle accurate to ~1e-10 relative.
double beta_constant(double beta);

/// Lemma-style row bound: max_k b_{n,k} <= 4^{1-beta}/(B(beta,beta)(n+1)).
double beta_binomial_row_bound(Beta beta, int n);

struct BetaLorentzSum {
    double direct;    ///< sum_k |b_{n,k} - b_{n,k+1}| by brute force
    double identity;  ///< 2 b_{n,floor(n/2)} - b_{n,0}
};

/// Both routes to the row's Lorentz sum; they agree to round-off and stay
/// below 2 * 4^{1-beta}/(B(beta,beta)(n+1)).
BetaLorentzSum beta_binomial_lorentz_sum(Beta beta, int n);

/// Coefficient rows of the polynomials q_n generated by the three-term
/// recursion (n+2 beta) q_{n+1} = (n+beta)(1+t) q_n - n t q_{n-1} from
/// q_0 = 1, q_1 = (1+t)/2. Row n equals beta_binomial_row(beta, n).
std::vector<std::vector<double>> q_polynomial_recursion(Beta beta, int n_max);

}  // namespace bnaccel

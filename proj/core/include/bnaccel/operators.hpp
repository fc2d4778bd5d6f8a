#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace bnaccel {

using Vector = std::vector<double>;

/// Thrown when an iteration or operator evaluation produces non-finite values.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Linear nonexpansive operator on R^d. Construction certifies the operator
/// norm: structured variants are exactly nonexpansive, dense matrices are
/// checked by power iteration on T'T, and convex combinations inherit the
/// certificate from their parts.
class OperatorModel {
public:
    struct Dense {
        std::vector<std::vector<double>> entries;  // row-major, square
    };
    struct RightShift {};
    /// Plane rotation on coordinates 0,1, identity on the rest; d >= 2.
    struct RotationIdentity {
        double angle;
    };
    struct Identity {};
    struct Composite {
        std::vector<double> weights;  // nonnegative, sum 1
        std::vector<OperatorModel> parts;
    };

    static OperatorModel dense(std::vector<std::vector<double>> entries);
    static OperatorModel right_shift(int dim);
    static OperatorModel rotation_identity(double angle, int dim);
    static OperatorModel identity(int dim);
    static OperatorModel composite(std::vector<double> weights,
                                   std::vector<OperatorModel> parts);

    int dim() const { return dim_; }

    /// Applies T to x. RightShift maps (x_1,...,x_d) to (0, x_1,...,x_{d-1})
    /// exactly.
    Vector apply(const Vector& x) const;

    /// Upper bound on the operator norm established at construction.
    double certified_norm_bound() const { return norm_bound_; }

    const auto& variant() const { return variant_; }

    /// Operator specification files: {"variant": "dense"|"right_shift"|
    /// "rotation_identity"|"identity"|"composite", "dim": d, ...}.
    static OperatorModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    /// Built-in names: "shift", "identity", "rotation:<angle>:<dim>".
    /// dim_hint supplies the dimension for the names that do not carry one.
    static OperatorModel from_name(const std::string& name, int dim_hint);

private:
    using VariantT = std::variant<Dense, RightShift, RotationIdentity, Identity, Composite>;
    OperatorModel(VariantT v, int dim, double norm_bound);

    VariantT variant_;
    int dim_ = 0;
    double norm_bound_ = 1.0;
};

/// Orthonormal basis of Fix T = ker(I - T); empty basis means Fix T = {0}.
struct FixedPointProjector {
    int dim = 0;
    std::vector<Vector> basis;
    /// Set when the kernel computation met pivots in [1e-10, 1e-6), i.e. the
    /// cut between "zero" and "nonzero" singular directions was not crisp.
    bool ill_conditioned = false;

    Vector project(const Vector& x) const;
};

/// Kernel of I - T: exact bases for the structured variants, rank-revealing
/// Gaussian elimination (pivot threshold 1e-10) plus twice-applied modified
/// Gram-Schmidt for dense/composite ones.
FixedPointProjector fixed_point_projector(const OperatorModel& op);

/// Haar-ish random orthogonal matrix (Gaussian columns + Gram-Schmidt),
/// deterministic in the seed. Returned row-major.
std::vector<std::vector<double>> random_orthogonal(int dim, std::uint64_t seed);

}  // namespace bnaccel

#include "bnaccel/operators.hpp"

#include "bnaccel/numerics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bnaccel {

namespace {

constexpr double kNonexpansiveSlack = 1e-10;
constexpr double kPivotZero = 1e-10;
constexpr double kPivotFuzzy = 1e-6;
constexpr int kPowerIterations = 200;
constexpr int kMaxDenseKernelDim = 1024;

std::vector<double> matvec(const std::vector<std::vector<double>>& m, const Vector& x)
{
    const std::size_t d = m.size();
    Vector y(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        const auto& row = m[i];
        for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<double> matvec_transposed(const std::vector<std::vector<double>>& m,
                                      const Vector& x)
{
    const std::size_t d = m.size();
    Vector y(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) y[j] += m[i][j] * x[i];
    return y;
}

/// Power iteration on T'T; returns an estimate of the operator norm of T.
double estimate_dense_norm(const std::vector<std::vector<double>>& m)
{
    const std::size_t d = m.size();
    Vector v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
    const double nv = norm(v);
    for (auto& x : v) x /= nv;
    for (int it = 0; it < kPowerIterations; ++it) {
        Vector w = matvec_transposed(m, matvec(m, v));
        const double nw = norm(w);
        if (nw == 0.0) return 0.0;
        for (auto& x : w) x /= nw;
        v = std::move(w);
    }
    return norm(matvec(m, v));
}

/// Orthonormalizes `vecs` in place with modified Gram-Schmidt, applied twice.
/// Vectors that collapse below the tolerance are dropped.
std::vector<Vector> orthonormalize(std::vector<Vector> vecs)
{
    std::vector<Vector> basis;
    for (auto& v : vecs) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : basis) {
                const double c = dot(v, u);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
            }
        const double nv = norm(v);
        if (nv < 1e-12) continue;
        for (auto& x : v) x /= nv;
        basis.push_back(std::move(v));
    }
    return basis;
}

struct KernelResult {
    std::vector<Vector> basis;
    bool fuzzy_pivots = false;
};

/// Null space of `a` (d x d) by Gauss-Jordan elimination with partial
/// pivoting. Pivots below kPivotZero count as zero; pivots inside
/// [kPivotZero, kPivotFuzzy) are used but flagged.
KernelResult kernel_basis(std::vector<std::vector<double>> a)
{
    const int d = static_cast<int>(a.size());
    std::vector<int> pivot_row_of_col(static_cast<std::size_t>(d), -1);
    bool fuzzy = false;
    int row = 0;
    for (int col = 0; col < d && row < d; ++col) {
        int best = row;
        for (int r = row + 1; r < d; ++r)
            if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(a[static_cast<std::size_t>(best)][static_cast<std::size_t>(col)]))
                best = r;
        const double pivot =
            a[static_cast<std::size_t>(best)][static_cast<std::size_t>(col)];
        if (std::abs(pivot) < kPivotZero) continue;
        if (std::abs(pivot) < kPivotFuzzy) fuzzy = true;
        std::swap(a[static_cast<std::size_t>(best)], a[static_cast<std::size_t>(row)]);
        auto& prow = a[static_cast<std::size_t>(row)];
        for (int j = 0; j < d; ++j) prow[static_cast<std::size_t>(j)] /= pivot;
        for (int r = 0; r < d; ++r) {
            if (r == row) continue;
            const double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (f == 0.0) continue;
            auto& arow = a[static_cast<std::size_t>(r)];
            for (int j = 0; j < d; ++j)
                arow[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
        }
        pivot_row_of_col[static_cast<std::size_t>(col)] = row;
        ++row;
    }
    std::vector<Vector> basis;
    for (int f = 0; f < d; ++f) {
        if (pivot_row_of_col[static_cast<std::size_t>(f)] != -1) continue;
        Vector v(static_cast<std::size_t>(d), 0.0);
        v[static_cast<std::size_t>(f)] = 1.0;
        for (int col = 0; col < d; ++col) {
            const int pr = pivot_row_of_col[static_cast<std::size_t>(col)];
            if (pr == -1) continue;
            v[static_cast<std::size_t>(col)] =
                -a[static_cast<std::size_t>(pr)][static_cast<std::size_t>(f)];
        }
        basis.push_back(std::move(v));
    }
    return KernelResult{orthonormalize(std::move(basis)), fuzzy};
}

std::vector<std::vector<double>> materialize(const OperatorModel& op)
{
    const int d = op.dim();
    std::vector<std::vector<double>> m(static_cast<std::size_t>(d),
                                       Vector(static_cast<std::size_t>(d), 0.0));
    Vector e(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        e[static_cast<std::size_t>(j)] = 1.0;
        const Vector col = op.apply(e);
        e[static_cast<std::size_t>(j)] = 0.0;
        for (int i = 0; i < d; ++i)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                col[static_cast<std::size_t>(i)];
    }
    return m;
}

}  // namespace

OperatorModel::OperatorModel(VariantT v, int dim, double norm_bound)
    : variant_(std::move(v)), dim_(dim), norm_bound_(norm_bound)
{
}

OperatorModel OperatorModel::dense(std::vector<std::vector<double>> entries)
{
    const int d = static_cast<int>(entries.size());
    if (d < 1) throw std::invalid_argument("dense operator needs dimension >= 1");
    for (const auto& row : entries) {
        if (static_cast<int>(row.size()) != d)
            throw std::invalid_argument("dense operator matrix must be square");
        if (!all_finite(row))
            throw std::invalid_argument("dense operator entries must be finite");
    }
    const double bound = estimate_dense_norm(entries);
    if (bound > 1.0 + kNonexpansiveSlack)
        throw std::invalid_argument("operator is not nonexpansive (norm estimate " +
                                    format_double(bound) + ")");
    return OperatorModel(Dense{std::move(entries)}, d, bound);
}

OperatorModel OperatorModel::right_shift(int dim)
{
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    return OperatorModel(RightShift{}, dim, 1.0);
}

OperatorModel OperatorModel::rotation_identity(double angle, int dim)
{
    if (dim < 2) throw std::invalid_argument("rotation block needs dimension >= 2");
    if (!std::isfinite(angle)) throw std::invalid_argument("angle must be finite");
    return OperatorModel(RotationIdentity{angle}, dim, 1.0);
}

OperatorModel OperatorModel::identity(int dim)
{
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    return OperatorModel(Identity{}, dim, 1.0);
}

OperatorModel OperatorModel::composite(std::vector<double> weights,
                                       std::vector<OperatorModel> parts)
{
    if (weights.size() != parts.size() || parts.empty())
        throw std::invalid_argument("composite needs matching weights and operators");
    const int d = parts.front().dim();
    double wsum = 0.0;
    double bound = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].dim() != d)
            throw std::invalid_argument("composite parts must share a dimension");
        if (!(weights[i] >= 0.0))
            throw std::invalid_argument("composite weights must be nonnegative");
        wsum += weights[i];
        bound += weights[i] * parts[i].certified_norm_bound();
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw std::invalid_argument("composite weights must sum to 1");
    return OperatorModel(Composite{std::move(weights), std::move(parts)}, d, bound);
}

Vector OperatorModel::apply(const Vector& x) const
{
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("apply: dimension mismatch");
    return std::visit(
        [&x, this](const auto& op) -> Vector {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, Dense>) {
                return matvec(op.entries, x);
            } else if constexpr (std::is_same_v<T, RightShift>) {
                Vector y(x.size(), 0.0);
                std::copy(x.begin(), x.end() - 1, y.begin() + 1);
                return y;
            } else if constexpr (std::is_same_v<T, RotationIdentity>) {
                Vector y = x;
                const double c = std::cos(op.angle), s = std::sin(op.angle);
                y[0] = c * x[0] - s * x[1];
                y[1] = s * x[0] + c * x[1];
                return y;
            } else if constexpr (std::is_same_v<T, Identity>) {
                return x;
            } else {
                Vector y(x.size(), 0.0);
                for (std::size_t i = 0; i < op.parts.size(); ++i) {
                    const Vector part = op.parts[i].apply(x);
                    for (std::size_t j = 0; j < y.size(); ++j)
                        y[j] += op.weights[i] * part[j];
                }
                return y;
            }
        },
        variant_);
}

Vector FixedPointProjector::project(const Vector& x) const
{
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("project: dimension mismatch");
    Vector y(x.size(), 0.0);
    for (const auto& v : basis) {
        const double c = dot(x, v);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * v[i];
    }
    return y;
}

FixedPointProjector fixed_point_projector(const OperatorModel& op)
{
    const int d = op.dim();
    FixedPointProjector proj;
    proj.dim = d;

    if (std::holds_alternative<OperatorModel::RightShift>(op.variant())) {
        return proj;  // the shift fixes only the origin
    }
    if (std::holds_alternative<OperatorModel::Identity>(op.variant())) {
        for (int i = 0; i < d; ++i) {
            Vector e(static_cast<std::size_t>(d), 0.0);
            e[static_cast<std::size_t>(i)] = 1.0;
            proj.basis.push_back(std::move(e));
        }
        return proj;
    }
    if (const auto* rot = std::get_if<OperatorModel::RotationIdentity>(&op.variant())) {
        const double c = std::cos(rot->angle), s = std::sin(rot->angle);
        const int first = (std::abs(1.0 - c) <= 1e-12 && std::abs(s) <= 1e-12) ? 0 : 2;
        for (int i = first; i < d; ++i) {
            Vector e(static_cast<std::size_t>(d), 0.0);
            e[static_cast<std::size_t>(i)] = 1.0;
            proj.basis.push_back(std::move(e));
        }
        return proj;
    }

    if (d > kMaxDenseKernelDim)
        throw std::invalid_argument("kernel computation supports dimension <= " +
                                    std::to_string(kMaxDenseKernelDim));
    auto m = materialize(op);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double t = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (i == j ? 1.0 : 0.0) - t;
        }
    KernelResult kr = kernel_basis(std::move(m));
    proj.basis = std::move(kr.basis);
    proj.ill_conditioned = kr.fuzzy_pivots;
    for (const auto& v : proj.basis) {
        const Vector tv = op.apply(v);
        if (std::sqrt(distance_sq(tv, v)) > 1e-10) proj.ill_conditioned = true;
    }
    return proj;
}

nlohmann::json OperatorModel::to_json() const
{
    nlohmann::json j;
    j["dim"] = dim_;
    std::visit(
        [&j](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, Dense>) {
                j["variant"] = "dense";
                j["entries"] = op.entries;
            } else if constexpr (std::is_same_v<T, RightShift>) {
                j["variant"] = "right_shift";
            } else if constexpr (std::is_same_v<T, RotationIdentity>) {
                j["variant"] = "rotation_identity";
                j["angle"] = op.angle;
            } else if constexpr (std::is_same_v<T, Identity>) {
                j["variant"] = "identity";
            } else {
                j["variant"] = "composite";
                j["weights"] = op.weights;
                nlohmann::json parts = nlohmann::json::array();
                for (const auto& p : op.parts) parts.push_back(p.to_json());
                j["operators"] = parts;
            }
        },
        variant_);
    return j;
}

OperatorModel OperatorModel::from_json(const nlohmann::json& j)
{
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "dense")
        return dense(j.at("entries").get<std::vector<std::vector<double>>>());
    const int d = j.at("dim").get<int>();
    if (variant == "right_shift") return right_shift(d);
    if (variant == "rotation_identity")
        return rotation_identity(j.at("angle").get<double>(), d);
    if (variant == "identity") return identity(d);
    if (variant == "composite") {
        std::vector<OperatorModel> parts;
        for (const auto& pj : j.at("operators")) parts.push_back(from_json(pj));
        return composite(j.at("weights").get<std::vector<double>>(), std::move(parts));
    }
    throw std::invalid_argument("unknown operator variant: '" + variant + "'");
}

OperatorModel OperatorModel::from_name(const std::string& name, int dim_hint)
{
    if (name == "shift") {
        if (dim_hint < 1) throw std::invalid_argument("shift needs a dimension");
        return right_shift(dim_hint);
    }
    if (name == "identity") {
        if (dim_hint < 1) throw std::invalid_argument("identity needs a dimension");
        return identity(dim_hint);
    }
    if (name.rfind("rotation:", 0) == 0) {
        const auto rest = name.substr(9);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("rotation spec is rotation:<angle>:<dim>");
        try {
            const double angle = std::stod(rest.substr(0, colon));
            const int d = std::stoi(rest.substr(colon + 1));
            return rotation_identity(angle, d);
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("rotation spec is rotation:<angle>:<dim>");
        }
    }
    throw std::invalid_argument("unknown operator name: '" + name + "'");
}

std::vector<std::vector<double>> random_orthogonal(int dim, std::uint64_t seed)
{
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vector> rows(static_cast<std::size_t>(dim),
                             Vector(static_cast<std::size_t>(dim)));
    while (true) {
        for (auto& r : rows)
            for (auto& x : r) x = gauss(rng);
        auto basis = orthonormalize(rows);
        if (static_cast<int>(basis.size()) == dim) return basis;
        // rank-deficient draw (essentially impossible); redraw
    }
}

}  // namespace bnaccel

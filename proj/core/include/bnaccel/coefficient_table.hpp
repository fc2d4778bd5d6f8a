#pragma once

#include "bnaccel/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace bnaccel {

enum class TableKind {
    bn,             ///< accelerated Krasnoselskii-Mann weights, parameter alpha
    beta_binomial,  ///< symmetric beta-binomial weights, parameter beta
    cesaro,         ///< equal weights 1/(n+1)
    generic,        ///< loaded from a bare CSV, no metadata
};

std::string table_kind_name(TableKind kind);
TableKind table_kind_from_name(const std::string& name);

/// Lower-triangular weight matrix: row n holds entries for k = 0..n.
/// Entries outside the triangle are 0 by convention, so `value` is total.
struct CoefficientTable {
    TableKind kind = TableKind::generic;
    double parameter = 0.0;
    std::vector<std::vector<double>> rows;

    int n_max() const { return static_cast<int>(rows.size()) - 1; }

    const std::vector<double>& row(int n) const;

    double value(int n, int k) const
    {
        if (n < 0 || n >= static_cast<int>(rows.size()) || k < 0 || k > n) return 0.0;
        return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }

    double row_sum(int n) const;
};

/// CSV with header `n,k,value`, one line per triangle entry, shortest
/// round-trip doubles.
void write_table_csv(const CoefficientTable& table, std::ostream& out);

/// Reads the `n,k,value` triangle format back; kind is `generic` unless the
/// caller knows better.
CoefficientTable read_table_csv(std::istream& in);

nlohmann::json table_to_json(const CoefficientTable& table);
CoefficientTable table_from_json(const nlohmann::json& j);

/// Exact-mode CSV: same `n,k,value` layout with values as reduced fractions.
void write_rational_table_csv(const std::vector<std::vector<Rational>>& rows,
                              std::ostream& out);

}  // namespace bnaccel

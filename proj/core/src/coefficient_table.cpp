#include "bnaccel/coefficient_table.hpp"

#include "bnaccel/numerics.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bnaccel {

std::string table_kind_name(TableKind kind)
{
    switch (kind) {
        case TableKind::bn: return "bn";
        case TableKind::beta_binomial: return "beta_binomial";
        case TableKind::cesaro: return "cesaro";
        case TableKind::generic: return "generic";
    }
    throw std::logic_error("unknown table kind");
}

TableKind table_kind_from_name(const std::string& name)
{
    if (name == "bn") return TableKind::bn;
    if (name == "beta_binomial") return TableKind::beta_binomial;
    if (name == "cesaro") return TableKind::cesaro;
    if (name == "generic") return TableKind::generic;
    throw std::invalid_argument("unknown table kind: '" + name + "'");
}

const std::vector<double>& CoefficientTable::row(int n) const
{
    if (n < 0 || n >= static_cast<int>(rows.size()))
        throw std::out_of_range("row index out of range");
    return rows[static_cast<std::size_t>(n)];
}

double CoefficientTable::row_sum(int n) const { return compensated_sum(row(n)); }

void write_table_csv(const CoefficientTable& table, std::ostream& out)
{
    out << "n,k,value\n";
    for (int n = 0; n <= table.n_max(); ++n) {
        const auto& r = table.rows[static_cast<std::size_t>(n)];
        for (int k = 0; k < static_cast<int>(r.size()); ++k)
            out << n << ',' << k << ',' << format_double(r[static_cast<std::size_t>(k)])
                << '\n';
    }
}

CoefficientTable read_table_csv(std::istream& in)
{
    CoefficientTable table;
    std::string line;
    if (!std::getline(in, line) || line.rfind("n,k,value", 0) != 0)
        throw std::invalid_argument("table CSV must start with header 'n,k,value'");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        int n = 0, k = 0;
        double value = 0.0;
        if (!std::getline(row, field, ',')) throw std::invalid_argument("bad CSV row");
        n = std::stoi(field);
        if (!std::getline(row, field, ',')) throw std::invalid_argument("bad CSV row");
        k = std::stoi(field);
        if (!std::getline(row, field, ',')) throw std::invalid_argument("bad CSV row");
        value = std::stod(field);
        if (n < 0 || k < 0 || k > n) throw std::invalid_argument("entry outside triangle");
        if (n >= static_cast<int>(table.rows.size()))
            table.rows.resize(static_cast<std::size_t>(n) + 1);
        auto& r = table.rows[static_cast<std::size_t>(n)];
        if (k >= static_cast<int>(r.size())) r.resize(static_cast<std::size_t>(k) + 1, 0.0);
        r[static_cast<std::size_t>(k)] = value;
    }
    for (int n = 0; n <= table.n_max(); ++n)
        if (static_cast<int>(table.rows[static_cast<std::size_t>(n)].size()) != n + 1)
            throw std::invalid_argument("row " + std::to_string(n) + " is not full");
    return table;
}

nlohmann::json table_to_json(const CoefficientTable& table)
{
    nlohmann::json j;
    j["kind"] = table_kind_name(table.kind);
    if (table.kind == TableKind::bn) j["alpha"] = table.parameter;
    if (table.kind == TableKind::beta_binomial) j["beta"] = table.parameter;
    j["n_max"] = table.n_max();
    j["rows"] = table.rows;
    return j;
}

CoefficientTable table_from_json(const nlohmann::json& j)
{
    CoefficientTable table;
    table.kind = table_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("alpha")) table.parameter = j["alpha"].get<double>();
    if (j.contains("beta")) table.parameter = j["beta"].get<double>();
    table.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    for (int n = 0; n <= table.n_max(); ++n)
        if (static_cast<int>(table.rows[static_cast<std::size_t>(n)].size()) != n + 1)
            throw std::invalid_argument("row " + std::to_string(n) + " is not full");
    return table;
}

void write_rational_table_csv(const std::vector<std::vector<Rational>>& rows,
                              std::ostream& out)
{
    out << "n,k,value\n";
    for (std::size_t n = 0; n < rows.size(); ++n)
        for (std::size_t k = 0; k < rows[n].size(); ++k)
            out << n << ',' << k << ',' << to_string(rows[n][k]) << '\n';
}

}  // namespace bnaccel

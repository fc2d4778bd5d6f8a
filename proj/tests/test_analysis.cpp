#include <doctest.h>

#include "bnaccel/analysis.hpp"
#include "bnaccel/numerics.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

using namespace bnaccel;

namespace {

double brute_lorentz(const std::vector<double>& row)
{
    double s = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k)
        s += std::abs(row[k] - (k + 1 < row.size() ? row[k + 1] : 0.0));
    return s;
}

double lorentz_closed_alpha4(int n)
{
    const double d = static_cast<double>(n + 2) * (n + 3) * (n + 4);
    return (n % 2 == 0 ? 3.0 * n * n + 6.0 * n + 8.0 : 3.0 * n * n + 6.0 * n + 7.0) / d;
}

}  // namespace

TEST_CASE("condition report on the accelerated-scheme table")
{
    const auto table = bn_row_recursive(Alpha(4.0), 2000);
    const auto report = check_conditions(table);

    CHECK(report.st1.status == ConditionStatus::verified_at_scale);
    CHECK(report.st2.status == ConditionStatus::verified_at_scale);
    CHECK(report.st3.status == ConditionStatus::verified_at_scale);
    CHECK(report.lorentz.status == ConditionStatus::verified_at_scale);
    CHECK(report.cohen.status == ConditionStatus::verified_at_scale);
    CHECK(report.brezis_browder.status == ConditionStatus::verified_at_scale);

    // Lorentz samples match the even/odd closed form.
    for (const auto& [n, value] : report.lorentz.samples) {
        if (n < 6) continue;
        CHECK(std::abs(value - lorentz_closed_alpha4(n)) <= 1e-12);
        CHECK(std::abs(value - brute_lorentz(table.row(n))) <= 1e-15);
    }
    // Positive parts never exceed the full difference sum.
    for (std::size_t i = 0; i < report.lorentz.samples.size(); ++i)
        CHECK(report.brezis_browder.samples[i].second <=
              report.lorentz.samples[i].second + 1e-15);
    // Cohen tail sups decrease along the sampled K.
    for (std::size_t i = 1; i < report.cohen.samples.size(); ++i)
        CHECK(report.cohen.samples[i].second < report.cohen.samples[i - 1].second);
}

TEST_CASE("condition report on the equal-weights table")
{
    const auto table = cesaro_table(1500);
    const auto report = check_conditions(table);
    CHECK(report.st1.status == ConditionStatus::verified_at_scale);
    CHECK(report.st2.status == ConditionStatus::verified_at_scale);
    CHECK(report.st3.status == ConditionStatus::verified_at_scale);
    CHECK(report.lorentz.status == ConditionStatus::verified_at_scale);
    CHECK(report.cohen.status == ConditionStatus::verified_at_scale);
    CHECK(report.brezis_browder.status == ConditionStatus::verified_at_scale);
    // The only nonzero adjacent difference is the tail drop |c_{n,n} - 0|.
    for (const auto& [n, value] : report.lorentz.samples)
        CHECK(value == 1.0 / (n + 1));
    for (const auto& [n, value] : report.brezis_browder.samples)
        CHECK(value == 0.0);
}

TEST_CASE("condition report on the beta-binomial table")
{
    const auto table = beta_binomial_table(Beta(2.0), 800);
    const auto report = check_conditions(table);
    CHECK(report.st2.status == ConditionStatus::verified_at_scale);
    CHECK(report.lorentz.status == ConditionStatus::verified_at_scale);
    for (const auto& [n, value] : report.lorentz.samples) {
        if (n < 1) continue;
        const auto l = beta_binomial_lorentz_sum(Beta(2.0), n);
        CHECK(value == doctest::Approx(l.identity).epsilon(1e-12));
    }
}

TEST_CASE("a constant column violates the dying-columns condition")
{
    CoefficientTable table;
    table.kind = TableKind::generic;
    for (int n = 0; n <= 400; ++n) {
        std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
        row[0] = 1.0;
        table.rows.push_back(std::move(row));
    }
    const auto report = check_conditions(table);
    CHECK(report.st2.status == ConditionStatus::violated);
    REQUIRE(report.st2.witness.has_value());
    CHECK(report.st2.witness->k == 0);
    CHECK(report.st2.witness->value == 1.0);
    // sums are fine, the Lorentz sum is stuck at 1
    CHECK(report.st3.status == ConditionStatus::verified_at_scale);
    CHECK(report.lorentz.status == ConditionStatus::violated);
    // the positive-part sums are identically zero, which does converge
    CHECK(report.brezis_browder.status == ConditionStatus::verified_at_scale);
}

TEST_CASE("condition report serializes")
{
    const auto report = check_conditions(bn_row_recursive(Alpha(4.0), 64));
    const auto j = condition_report_to_json(report);
    CHECK(j.at("ST1").at("status") == "verified-at-scale");
    CHECK(j.at("lorentz").contains("samples"));
    CHECK(j.at("n_max") == 64);
}

TEST_CASE("row comparison against the closed difference")
{
    SUBCASE("frozen values")
    {
        const auto c1 = bn_row_closed_alpha4(1);
        const std::vector<double> b1{0.5, 0.5};
        const auto cmp = compare_rows(c1, b1, 1);
        CHECK(cmp.delta[0] == doctest::Approx(0.1).epsilon(1e-13));
        CHECK(cmp.delta[1] == doctest::Approx(-0.1).epsilon(1e-13));
        CHECK(cmp.tv == doctest::Approx(0.2).epsilon(1e-13));
        CHECK(cmp.argmax_k == 0);

        CHECK(delta_closed_alpha4_beta2(4, 0) == doctest::Approx(1.0 / 14.0).epsilon(1e-14));
        CHECK(delta_closed_alpha4_beta2(6, 3) ==
              doctest::Approx(-23.0 / 1260.0).epsilon(1e-13));
        CHECK(delta_closed_alpha4_beta2(1, 1) == doctest::Approx(-0.1).epsilon(1e-14));
    }
    SUBCASE("cross-check of module outputs at n=6, k=3")
    {
        const auto c = bn_row_closed_alpha4(6);
        const auto b = beta_binomial_row(Beta(2.0), 6);
        CHECK(c[3] - b[3] == doctest::Approx(-23.0 / 1260.0).epsilon(1e-13));
    }
    SUBCASE("closed form and argmax across n")
    {
        BnRowStream<double> stream(4.0);
        for (int n = 0; n <= 800; ++n) {
            if (n > 0) stream.advance();
            const auto b = beta_binomial_row(Beta(2.0), n);
            const auto cmp = compare_rows(stream.row(), b, n);
            CHECK(cmp.argmax_k == 0);
            for (int k = 0; k <= n; ++k)
                CHECK(std::abs(cmp.delta[static_cast<std::size_t>(k)] -
                               delta_closed_alpha4_beta2(n, k)) <= 1e-12);
        }
    }
    SUBCASE("length mismatch is rejected")
    {
        const std::vector<double> a{1.0, 0.0};
        const std::vector<double> b{1.0};
        CHECK_THROWS_AS(compare_rows(a, b, 1), std::invalid_argument);
        CHECK_THROWS_AS(compare_rows(b, b, 1), std::invalid_argument);
    }
}

TEST_CASE("difference-sum triangle route stays under the algebraic envelope")
{
    BnRowStream<double> stream(4.0);
    for (int n = 0; n <= 1200; ++n) {
        if (n > 0) stream.advance();
        if (n == 0 || n % 97 != 0) continue;
        const auto& c = stream.row();
        const auto b = beta_binomial_row(Beta(2.0), n);
        const auto cmp = compare_rows(c, b, n);
        const double lc = brute_lorentz(c);
        const double lb = brute_lorentz(b);
        CHECK(lc <= 2.0 * cmp.tv + lb + 1e-15);
        const double dn = static_cast<double>(n + 2) * (n + 3) * (n + 4);
        CHECK(2.0 * cmp.tv + lb <=
              12.0 * n * (n + 1.0) / dn + 3.0 / (n + 1.0) + 1e-10);
    }
}

TEST_CASE("distance curve between the two distributions")
{
    const auto curve = tv_distance_curve(Alpha(4.0), Beta(2.0), 2000);
    CHECK(curve.matched);
    CHECK(curve.points[0].tv == 0.0);
    CHECK(curve.points[1].tv == doctest::Approx(0.2).epsilon(1e-13));

    // log-log slope over [100, 2000] sits near -1 (the Theta(1/n) behavior)
    std::vector<double> xs, ys;
    for (const auto& p : curve.points) {
        if (p.n < 100) continue;
        xs.push_back(std::log(static_cast<double>(p.n)));
        ys.push_back(std::log(p.tv));
    }
    const auto fit = fit_line(xs, ys);
    CHECK(fit.slope >= -1.1);
    CHECK(fit.slope <= -0.9);

    // scaled max deviation shrinks (conjecture probe, evidence only)
    CHECK(curve.points.back().n_times_max_abs < curve.points[100].n_times_max_abs);

    CHECK_FALSE(tv_distance_curve(Alpha(4.0), Beta(3.0), 4).matched);
}

TEST_CASE("power-law fits")
{
    SUBCASE("recovers an exact power law")
    {
        IterationTrace trace;
        for (int n = 10; n <= 10000; n = static_cast<int>(std::ceil(n * 1.3)))
            trace.points.push_back(
                TracePoint{n, 7.0 * std::pow(n, -2.5), 1.0, 1.0, -1.0});
        trace.n_max = trace.points.back().n;
        const auto fit = fit_rate(trace, Diagnostic::norm_sq, 10, trace.n_max);
        CHECK(fit.exponent == doctest::Approx(-2.5).epsilon(1e-12));
        CHECK(fit.constant == doctest::Approx(7.0).epsilon(1e-10));
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("rejects nonpositive diagnostics and short windows")
    {
        IterationTrace trace;
        for (int n = 1; n <= 20; ++n)
            trace.points.push_back(TracePoint{n, 1.0 / n, 0.0, 1.0, -1.0});
        trace.n_max = 20;
        CHECK_THROWS_AS(fit_rate(trace, Diagnostic::vel_sq, 1, 20), std::invalid_argument);
        CHECK_THROWS_AS(fit_rate(trace, Diagnostic::norm_sq, 15, 20), std::invalid_argument);
        CHECK_THROWS_AS(fit_rate(trace, Diagnostic::dist_sq, 1, 20), std::invalid_argument);
        CHECK_NOTHROW(fit_rate(trace, Diagnostic::norm_sq, 1, 20));
    }
    SUBCASE("default window widens to keep eight checkpoints")
    {
        IterationTrace trace;
        for (int n = 1; n <= 1000; n = static_cast<int>(std::ceil(n * 1.25)))
            trace.points.push_back(TracePoint{n, 2.0 / n, 1.0, 1.0, -1.0});
        trace.n_max = trace.points.back().n;
        const auto fit = fit_rate(trace, Diagnostic::norm_sq);
        CHECK(fit.exponent == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(fit.constant == doctest::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("heatmap export")
{
    std::stringstream buf;
    write_heatmap_csv(Alpha(4.0), Beta(2.0), 220, buf);
    std::string line;
    std::getline(buf, line);
    CHECK(line == "n,k,n2_times_delta");
    std::getline(buf, line);
    // first cell: n=1, k=0, 1^2 * delta_{1,0} = 0.1
    CHECK(line.rfind("1,0,0.10000000000000", 0) == 0);
    int count = 1;
    std::string last = line;
    while (std::getline(buf, line))
        if (!line.empty()) {
            last = line;
            ++count;
        }
    // full triangle for n = 1..220
    CHECK(count == (2 + 222) * 221 / 2);
    CHECK(last.rfind("220,220,", 0) == 0);
}

TEST_CASE("curve CSV layout")
{
    const std::vector<std::pair<int, double>> pts{{1, 0.5}, {2, 0.25}};
    std::stringstream buf;
    write_curve_csv(pts, buf);
    CHECK(buf.str() == "n,value\n1,0.5\n2,0.25\n");
}

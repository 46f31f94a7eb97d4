#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stagewise/monitor.hpp"
#include "stagewise/rng.hpp"

using namespace stagewise;

TEST_CASE("F quantiles match reference values") {
    // frozen from an independent statistics library
    CHECK(f_quantile(0.95, 1, 99999) == doctest::Approx(3.8415518147).epsilon(1e-8));
    CHECK(f_quantile(0.95, 3, 99997) == doctest::Approx(2.6049980643).epsilon(1e-8));
    CHECK(f_quantile(0.95, 5, 5890) == doctest::Approx(2.2156169537).epsilon(1e-8));
    CHECK(f_quantile(0.95, 2, 223) == doctest::Approx(3.0363391261).epsilon(1e-8));
    // F(d, d) has median exactly 1 by symmetry
    CHECK(f_quantile(0.5, 7, 7) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(f_quantile(0.0, 2, 10), DomainError);
    CHECK_THROWS_AS(f_quantile(0.95, -1, 10), DomainError);
}

namespace {

Eigen::MatrixXd anisotropic_gaussian(Rng& rng, int n, const Eigen::VectorXd& sigmas) {
    Eigen::MatrixXd x = rng.gaussian_matrix(n, sigmas.size());
    for (Eigen::Index j = 0; j < sigmas.size(); ++j) x.col(j) *= sigmas[j];
    return x;
}

} // namespace

TEST_CASE("component count follows the cumulative variance target") {
    Rng rng(11);
    Eigen::VectorXd sigmas(3);
    sigmas << 3.0, std::sqrt(3.5), std::sqrt(0.5);  // variances 9, 3.5, 0.5
    Eigen::MatrixXd train = anisotropic_gaussian(rng, 4000, sigmas);
    // 9/13 = 0.69 < 0.85 <= 12.5/13 -> two components
    MonitoringModel m85 = fit_monitor(train, 0.85, 0.05);
    CHECK(m85.n_components == 2);
    // a tiny target keeps a single component
    MonitoringModel m50 = fit_monitor(train, 0.50, 0.05);
    CHECK(m50.n_components == 1);
    // full target keeps all of them
    MonitoringModel m100 = fit_monitor(train, 1.0, 0.05);
    CHECK(m100.n_components == 3);
}

TEST_CASE("loading rows are orthonormal and full retention spans the space") {
    Rng rng(13);
    Eigen::VectorXd sigmas(4);
    sigmas << 2.0, 1.5, 1.0, 0.3;
    Eigen::MatrixXd train = anisotropic_gaussian(rng, 2000, sigmas);
    MonitoringModel m = fit_monitor(train, 0.9, 0.05);
    Eigen::MatrixXd prod = m.loadings * m.loadings.transpose();
    CHECK((prod - Eigen::MatrixXd::Identity(m.n_components, m.n_components))
              .cwiseAbs()
              .maxCoeff() < 1e-10);

    MonitoringModel full = fit_monitor(train, 1.0, 0.05);
    REQUIRE(full.n_components == 4);
    // with every component kept, projecting then lifting reproduces the data
    Eigen::RowVectorXd x = train.row(17);
    Eigen::VectorXd s = full.loadings * (x.transpose() - full.center);
    Eigen::VectorXd back = full.loadings.transpose() * s + full.center;
    CHECK((back - x.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("control limit value at R=1, N=10^4") {
    Rng rng(19);
    Eigen::MatrixXd train = rng.gaussian_matrix(10000, 1);
    MonitoringModel m = fit_monitor(train, 0.85, 0.05);
    REQUIRE(m.n_components == 1);
    // frozen: R(N-1)(N+1)/(N(N-R)) * F_{1, 9999, 0.95}
    CHECK(m.t2_limit == doctest::Approx(3.8427732328).epsilon(1e-8));
}

TEST_CASE("limit shrinks as alpha grows and approaches the chi-square far from it") {
    Rng rng(23);
    Eigen::MatrixXd train = rng.gaussian_matrix(600, 2);
    double l01 = fit_monitor(train, 1.0, 0.01).t2_limit;
    double l05 = fit_monitor(train, 1.0, 0.05).t2_limit;
    double l10 = fit_monitor(train, 1.0, 0.10).t2_limit;
    CHECK(l01 > l05);
    CHECK(l05 > l10);

    // frozen chi-square 95% quantiles for 1..3 dof
    Rng big(29);
    CHECK(fit_monitor(big.gaussian_matrix(100000, 1), 1.0, 0.05).t2_limit ==
          doctest::Approx(3.8414588207).epsilon(2e-4));
    CHECK(fit_monitor(big.gaussian_matrix(100000, 2), 1.0, 0.05).t2_limit ==
          doctest::Approx(5.9914645471).epsilon(2e-4));
    CHECK(fit_monitor(big.gaussian_matrix(100000, 3), 1.0, 0.05).t2_limit ==
          doctest::Approx(7.8147279033).epsilon(2e-4));
}

TEST_CASE("scoring wiring: statistic equals the quadratic form of the model pieces") {
    Rng rng(31);
    Eigen::VectorXd sigmas(3);
    sigmas << 1.7, 1.0, 0.6;
    Eigen::MatrixXd train = anisotropic_gaussian(rng, 1500, sigmas);
    MonitoringModel m = fit_monitor(train, 0.95, 0.05);
    Eigen::MatrixXd probe = anisotropic_gaussian(rng, 40, sigmas);
    CycleScore score = score_cycle(m, probe, 7);
    CHECK(score.cycle_index == 7);
    REQUIRE(score.t2.size() == 40);
    for (int k = 0; k < 40; ++k) {
        Eigen::VectorXd s = m.loadings * (probe.row(k).transpose() - m.center);
        double want = s.dot(m.score_cov_inv * s);
        CHECK(score.t2[k] == doctest::Approx(want).epsilon(1e-12));
        CHECK(score.t2[k] >= 0.0);
    }
    double manual_ar =
        double((score.t2.array() > m.t2_limit).count()) / double(score.t2.size());
    CHECK(score.abnormality_rate == doctest::Approx(manual_ar));
}

TEST_CASE("training data itself is abnormal at roughly the design rate") {
    Rng rng(37);
    Eigen::VectorXd sigmas(3);
    sigmas << 1.7, 1.0, 0.6;
    Eigen::MatrixXd train = anisotropic_gaussian(rng, 5000, sigmas);
    MonitoringModel m = fit_monitor(train, 0.85, 0.05);
    CycleScore score = score_cycle(m, train);
    CHECK(score.abnormality_rate > 0.02);
    CHECK(score.abnormality_rate < 0.09);
}

TEST_CASE("input validation") {
    Rng rng(41);
    Eigen::MatrixXd train = rng.gaussian_matrix(100, 3);
    CHECK_THROWS_AS(fit_monitor(train, 0.0, 0.05), UsageError);
    CHECK_THROWS_AS(fit_monitor(train, 1.2, 0.05), UsageError);
    CHECK_THROWS_AS(fit_monitor(train, 0.85, 0.0), DomainError);
    CHECK_THROWS_AS(fit_monitor(train, 0.85, 1.0), DomainError);
    CHECK_THROWS_AS(fit_monitor(rng.gaussian_matrix(4, 3), 0.85, 0.05), UsageError);

    MonitoringModel m = fit_monitor(train, 0.85, 0.05);
    CHECK_THROWS_AS(score_cycle(m, rng.gaussian_matrix(10, 2)), DimensionError);
}

#include <doctest.h>

#include <echograph/errors.hpp>
#include <echograph/statfit.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace echograph;

namespace {

std::vector<CcdfPoint> sample_curve(FitModel model, std::array<double, 2> params,
                                    double x0, double x1, int n) {
    std::vector<CcdfPoint> pts;
    for (int i = 0; i < n; ++i) {
        const double x = x0 + (x1 - x0) * i / (n - 1);
        pts.push_back({x, fit_predict(model, params, x)});
    }
    return pts;
}

// Largest gap between the two empirical CDFs, checked at every sample
// value from both sides.
double ks_d_oracle(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    auto cdf = [](const std::vector<double>& s, double x) {
        return static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) /
               static_cast<double>(s.size());
    };
    double d = 0.0;
    for (const double x : a) d = std::max(d, std::abs(cdf(a, x) - cdf(b, x)));
    for (const double x : b) d = std::max(d, std::abs(cdf(a, x) - cdf(b, x)));
    return d;
}

} // namespace

TEST_SUITE("statfit") {

TEST_CASE("model predictions") {
    CHECK(fit_predict(FitModel::exponential, {2.0, -0.5}, 0.0) == doctest::Approx(2.0));
    CHECK(fit_predict(FitModel::exponential, {2.0, -0.5}, 2.0) ==
          doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(fit_predict(FitModel::power_law, {3.0, -2.0}, 2.0) == doctest::Approx(0.75));
    // the log-normal curve is the complementary CDF of lognormal(mu, sigma)
    const double at_median = fit_predict(FitModel::log_normal, {1.0, 0.5}, std::exp(1.0));
    CHECK(at_median == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("model names round-trip") {
    for (const auto m : {FitModel::exponential, FitModel::power_law, FitModel::log_normal})
        CHECK(parse_fit_model(to_string(m)) == m);
    CHECK_THROWS_AS(parse_fit_model("weibull"), ParameterError);
}

TEST_CASE("exponential parameters are recovered from exact data") {
    const std::array<double, 2> truth{1.5, -0.002};
    const auto pts = sample_curve(FitModel::exponential, truth, 1.0, 600.0, 40);
    const auto fit = fit_model(pts, FitModel::exponential);
    CHECK(fit.converged);
    CHECK(std::abs(fit.params[0] - truth[0]) < 1e-6);
    CHECK(std::abs(fit.params[1] - truth[1]) < 1e-6);
    CHECK(fit.residual_sse < 1e-12);
}

TEST_CASE("power-law parameters are recovered from exact data") {
    const std::array<double, 2> truth{1.18, -0.03};
    const auto pts = sample_curve(FitModel::power_law, truth, 1.0, 100.0, 50);
    const auto fit = fit_model(pts, FitModel::power_law);
    CHECK(fit.converged);
    CHECK(std::abs(fit.params[0] - truth[0]) < 1e-6);
    CHECK(std::abs(fit.params[1] - truth[1]) < 1e-6);
}

TEST_CASE("log-normal parameters are recovered from exact data") {
    const std::array<double, 2> truth{3.4, 0.45};
    const auto pts = sample_curve(FitModel::log_normal, truth, 1.0, 200.0, 60);
    const auto fit = fit_model(pts, FitModel::log_normal);
    CHECK(fit.converged);
    CHECK(std::abs(fit.params[0] - truth[0]) < 1e-5);
    CHECK(std::abs(fit.params[1] - truth[1]) < 1e-5);
}

TEST_CASE("noisy data still converges near the truth") {
    std::mt19937_64 gen(4242);
    std::normal_distribution<double> noise(0.0, 0.01);
    const std::array<double, 2> truth{2.0, -0.05};
    auto pts = sample_curve(FitModel::exponential, truth, 1.0, 80.0, 60);
    for (auto& p : pts) p.probability = std::max(1e-6, p.probability + noise(gen));
    const auto fit = fit_model(pts, FitModel::exponential);
    CHECK(fit.converged);
    CHECK(std::abs(fit.params[0] - truth[0]) < 0.1);
    CHECK(std::abs(fit.params[1] - truth[1]) < 0.01);
}

TEST_CASE("two points are fitted by exact interpolation") {
    const std::vector<CcdfPoint> pts{{1.0, 0.9}, {10.0, 0.2}};
    const auto fit = fit_model(pts, FitModel::exponential);
    CHECK(fit.converged);
    CHECK(fit.residual_sse < 1e-20);
    CHECK(fit_predict(FitModel::exponential, fit.params, 1.0) == doctest::Approx(0.9));
    CHECK(fit_predict(FitModel::exponential, fit.params, 10.0) == doctest::Approx(0.2));
}

TEST_CASE("fit input validation") {
    CHECK_THROWS_AS(fit_model({{1.0, 0.5}}, FitModel::exponential), ParameterError);
    CHECK_THROWS_AS(fit_model({{0.0, 0.5}, {1.0, 0.2}}, FitModel::power_law), ParameterError);
    CHECK_THROWS_AS(fit_model({{-1.0, 0.5}, {1.0, 0.2}}, FitModel::log_normal), ParameterError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(fit_model({{1.0, nan}, {2.0, 0.5}}, FitModel::exponential), ParameterError);
}

TEST_CASE("explicit starting values are honored") {
    const std::array<double, 2> truth{1.5, -0.1};
    const auto pts = sample_curve(FitModel::exponential, truth, 1.0, 50.0, 30);
    const auto fit = fit_model(pts, FitModel::exponential, {{1.4, -0.09}});
    CHECK(fit.converged);
    CHECK(std::abs(fit.params[0] - truth[0]) < 1e-6);
    CHECK_THROWS_AS(fit_model(pts, FitModel::log_normal, {{1.0, -2.0}}), FitError);
}

TEST_CASE("each generating model wins selection on its own data") {
    const std::array<double, 2> exp_p{1.5, -0.02};
    const std::array<double, 2> pow_p{1.18, -0.03};
    const std::array<double, 2> logn_p{3.4, 0.45};
    struct Case { FitModel model; std::array<double, 2> params; };
    for (const auto& c : {Case{FitModel::exponential, exp_p}, Case{FitModel::power_law, pow_p},
                          Case{FitModel::log_normal, logn_p}}) {
        const auto pts = sample_curve(c.model, c.params, 1.0, 120.0, 50);
        const auto fits = fit_all_models(pts);
        REQUIRE(fits.size() == 3);
        CHECK(fits[0].model == FitModel::exponential);
        CHECK(fits[1].model == FitModel::power_law);
        CHECK(fits[2].model == FitModel::log_normal);
        const auto best = select_best(fits);
        CHECK(best.model == c.model);
    }
}

TEST_CASE("selection skips non-converged fits and breaks ties stably") {
    FitResult a, b, c;
    a.model = FitModel::exponential;
    a.converged = false;
    a.log_likelihood = 100.0;
    b.model = FitModel::power_law;
    b.converged = true;
    b.log_likelihood = 10.0;
    b.iterations = 7;
    c.model = FitModel::log_normal;
    c.converged = true;
    c.log_likelihood = 10.0;
    c.iterations = 3;
    CHECK(select_best({a, b, c}).model == FitModel::log_normal); // fewer iterations wins the tie
    c.iterations = 7;
    CHECK(select_best({a, b, c}).model == FitModel::power_law); // enum order settles exact ties
    CHECK(select_best({b, c}).model == FitModel::power_law);
    a.converged = false;
    CHECK_THROWS_AS(select_best({a}), FitError);
    CHECK_THROWS_AS(select_best({}), FitError);
}

TEST_CASE("identical samples give zero distance and unit p-value") {
    const std::vector<double> s{1.0, 2.0, 3.0, 4.0, 5.0};
    const auto r = ks_two_sample(s, s);
    CHECK(r.d_statistic == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK(r.n1 == 5);
    CHECK(r.n2 == 5);
}

TEST_CASE("disjoint supports give maximal distance") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> b{10.0, 11.0, 12.0};
    const auto r = ks_two_sample(a, b);
    CHECK(r.d_statistic == 1.0);
    CHECK(r.p_value < 0.1);
}

TEST_CASE("d statistic matches the brute-force scan") {
    std::mt19937_64 gen(777);
    std::normal_distribution<double> n01(0.0, 1.0), n11(0.5, 1.5);
    std::uniform_int_distribution<int> len(1, 60);
    for (int round = 0; round < 30; ++round) {
        std::vector<double> a, b;
        const int na = len(gen), nb = len(gen);
        for (int i = 0; i < na; ++i) a.push_back(std::round(n01(gen) * 4.0) / 4.0); // force ties
        for (int i = 0; i < nb; ++i) b.push_back(std::round(n11(gen) * 4.0) / 4.0);
        const auto r = ks_two_sample(a, b);
        CHECK(r.d_statistic == doctest::Approx(ks_d_oracle(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("critical value uses the effective sample size") {
    const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8};
    const std::vector<double> b{2, 3, 4, 5};
    const auto r = ks_two_sample(a, b);
    const double n_eff = 8.0 * 4.0 / 12.0;
    CHECK(r.critical_value_05 == doctest::Approx(1.3581 / std::sqrt(n_eff)).epsilon(1e-12));
}

TEST_CASE("p-values stay within [0, 1] and fall with distance") {
    std::vector<double> a, b_near, b_far;
    std::mt19937_64 gen(31337);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        a.push_back(n01(gen));
        b_near.push_back(n01(gen));
        b_far.push_back(n01(gen) + 3.0);
    }
    const auto near = ks_two_sample(a, b_near);
    const auto far = ks_two_sample(a, b_far);
    CHECK(near.p_value >= 0.0);
    CHECK(near.p_value <= 1.0);
    CHECK(far.p_value <= near.p_value);
    CHECK(far.p_value < 0.001);
}

TEST_CASE("empty samples are rejected") {
    CHECK_THROWS_AS(ks_two_sample({}, {1.0}), ParameterError);
    CHECK_THROWS_AS(ks_two_sample({1.0}, {}), ParameterError);
}

} // TEST_SUITE

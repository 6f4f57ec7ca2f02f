#pragma once

#include "echograph/polarization.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace echograph {

enum class FitModel { exponential, power_law, log_normal };

const char* to_string(FitModel m);
FitModel parse_fit_model(const std::string& text);

/// Outcome of a damped least-squares fit of a two-parameter curve to
/// (x, y) points. For the exponential and power law, params are (a, b) in
/// a*exp(b*x) and a*x^b; for the log-normal, (mu, sigma) of the
/// distribution whose complementary CDF is fitted. converged means the
/// relative SSE change dropped below 1e-10 or the gradient infinity-norm
/// below 1e-8 within the iteration budget.
struct FitResult {
    FitModel model = FitModel::exponential;
    std::array<double, 2> params{0.0, 0.0};
    double residual_sse = 0.0;
    double log_likelihood = 0.0;   // Gaussian-residual: -(n/2)(ln(2*pi*SSE/n) + 1)
    bool converged = false;
    int iterations = 0;
};

/// Model prediction at x for the given parameters.
double fit_predict(FitModel model, const std::array<double, 2>& params, double x);

inline constexpr int kFitMaxIterations = 500;
inline constexpr double kFitSseTolerance = 1e-10;     // relative SSE change
inline constexpr double kFitGradientTolerance = 1e-8; // infinity norm

/// Fits one model to the points by Levenberg-Marquardt. Needs at least as
/// many points as parameters (2); the power law and log-normal require
/// x > 0. When init is absent, starting values come from a log-space
/// linear regression (exponential, power law) or method of moments on the
/// implied distribution (log-normal). Throws FitError when the normal
/// equations stay singular.
FitResult fit_model(const std::vector<CcdfPoint>& points, FitModel model,
                    std::optional<std::array<double, 2>> init = std::nullopt);

/// Fits all three models; order follows the model enum.
std::vector<FitResult> fit_all_models(const std::vector<CcdfPoint>& points);

/// Picks the converged fit with the highest log-likelihood; ties fall to
/// fewer iterations, then model enum order. Throws FitError when nothing
/// converged.
FitResult select_best(const std::vector<FitResult>& fits);

struct KsResult {
    double d_statistic = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double critical_value_05 = 0.0;   // 1.3581 / sqrt(effective n) at alpha = 0.05
};

/// Two-sample Kolmogorov-Smirnov test. D is the largest gap between the
/// two empirical CDFs; the p-value uses the asymptotic Kolmogorov series
/// Q(lambda) = 2 * sum_k (-1)^(k-1) exp(-2 k^2 lambda^2) at
/// lambda = D * sqrt(n1*n2/(n1+n2)), truncated below 1e-12.
KsResult ks_two_sample(const std::vector<double>& s1, const std::vector<double>& s2);

} // namespace echograph

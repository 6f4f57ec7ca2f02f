#include "echograph/statfit.hpp"

#include "echograph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace echograph {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double standard_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

// Complementary CDF of LogNormal(mu, sigma) at x > 0.
double lognormal_ccdf(double x, double mu, double sigma) {
    double z = (std::log(x) - mu) / sigma;
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

void model_jacobian(FitModel model, const std::array<double, 2>& p, double x, double out[2]) {
    switch (model) {
    case FitModel::exponential: {
        double e = std::exp(p[1] * x);
        out[0] = e;
        out[1] = p[0] * x * e;
        return;
    }
    case FitModel::power_law: {
        double xb = std::pow(x, p[1]);
        out[0] = xb;
        out[1] = p[0] * xb * std::log(x);
        return;
    }
    case FitModel::log_normal: {
        double z = (std::log(x) - p[0]) / p[1];
        double phi = standard_normal_pdf(z);
        out[0] = phi / p[1];
        out[1] = phi * z / p[1];
        return;
    }
    }
    out[0] = out[1] = 0.0;
}

double sse_of(FitModel model, const std::array<double, 2>& p,
              const std::vector<CcdfPoint>& points) {
    double sse = 0.0;
    for (const CcdfPoint& pt : points) {
        double r = pt.probability - fit_predict(model, p, pt.value);
        sse += r * r;
    }
    return sse;
}

// Least-squares line y = c0 + c1 * x over the given pairs.
bool linear_regression(const std::vector<std::pair<double, double>>& xy, double& c0, double& c1) {
    if (xy.size() < 2) return false;
    double n = static_cast<double>(xy.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-30) return false;
    c1 = (n * sxy - sx * sy) / det;
    c0 = (sy - c1 * sx) / n;
    return true;
}

std::array<double, 2> initial_guess(FitModel model, const std::vector<CcdfPoint>& points) {
    switch (model) {
    case FitModel::exponential: {
        std::vector<std::pair<double, double>> xy;
        for (const CcdfPoint& pt : points)
            if (pt.probability > 0.0) xy.emplace_back(pt.value, std::log(pt.probability));
        double c0 = 0.0, c1 = 0.0;
        if (linear_regression(xy, c0, c1)) return {std::exp(c0), c1};
        double mean = 0.0;
        for (const CcdfPoint& pt : points) mean += pt.probability;
        return {mean / static_cast<double>(points.size()), 0.0};
    }
    case FitModel::power_law: {
        std::vector<std::pair<double, double>> xy;
        for (const CcdfPoint& pt : points)
            if (pt.probability > 0.0) xy.emplace_back(std::log(pt.value), std::log(pt.probability));
        double c0 = 0.0, c1 = 0.0;
        if (linear_regression(xy, c0, c1)) return {std::exp(c0), c1};
        double mean = 0.0;
        for (const CcdfPoint& pt : points) mean += pt.probability;
        return {mean / static_cast<double>(points.size()), 0.0};
    }
    case FitModel::log_normal: {
        // Treat consecutive CCDF drops as probability mass at each x and
        // take moments of ln x under that mass.
        double wsum = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double w = (i + 1 < points.size())
                           ? points[i].probability - points[i + 1].probability
                           : points[i].probability;
            if (w <= 0.0) continue;
            double lx = std::log(points[i].value);
            wsum += w;
            m1 += w * lx;
            m2 += w * lx * lx;
        }
        if (wsum > 0.0) {
            double mu = m1 / wsum;
            double var = m2 / wsum - mu * mu;
            return {mu, std::sqrt(std::max(var, 1e-4))};
        }
        double mu = 0.0;
        for (const CcdfPoint& pt : points) mu += std::log(pt.value);
        mu /= static_cast<double>(points.size());
        return {mu, 1.0};
    }
    }
    return {0.0, 0.0};
}

bool params_valid(FitModel model, const std::array<double, 2>& p) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) return false;
    if (model == FitModel::log_normal && p[1] <= 0.0) return false;
    return true;
}

double gaussian_log_likelihood(double sse, std::size_t n) {
    double floored = std::max(sse, 1e-300);
    double dn = static_cast<double>(n);
    return -0.5 * dn * (std::log(2.0 * kPi * floored / dn) + 1.0);
}

} // namespace

const char* to_string(FitModel m) {
    switch (m) {
    case FitModel::exponential: return "exponential";
    case FitModel::power_law: return "power_law";
    case FitModel::log_normal: return "log_normal";
    }
    return "exponential";
}

FitModel parse_fit_model(const std::string& text) {
    if (text == "exponential" || text == "exp") return FitModel::exponential;
    if (text == "power_law" || text == "power" || text == "pl") return FitModel::power_law;
    if (text == "log_normal" || text == "lognormal" || text == "ln") return FitModel::log_normal;
    throw ParameterError("unknown fit model '" + text + "'");
}

double fit_predict(FitModel model, const std::array<double, 2>& params, double x) {
    switch (model) {
    case FitModel::exponential: return params[0] * std::exp(params[1] * x);
    case FitModel::power_law: return params[0] * std::pow(x, params[1]);
    case FitModel::log_normal: return lognormal_ccdf(x, params[0], params[1]);
    }
    return 0.0;
}

FitResult fit_model(const std::vector<CcdfPoint>& points, FitModel model,
                    std::optional<std::array<double, 2>> init) {
    if (points.size() < 2)
        throw ParameterError("fitting a two-parameter model needs at least 2 points");
    if (model == FitModel::power_law || model == FitModel::log_normal) {
        for (const CcdfPoint& pt : points)
            if (pt.value <= 0.0)
                throw ParameterError("power-law and log-normal fits need x > 0");
    }
    for (const CcdfPoint& pt : points)
        if (!std::isfinite(pt.value) || !std::isfinite(pt.probability))
            throw ParameterError("fit points must be finite");

    std::array<double, 2> theta = init ? *init : initial_guess(model, points);
    if (!params_valid(model, theta))
        throw FitError("invalid starting parameters for " + std::string(to_string(model)));

    double sse = sse_of(model, theta, points);
    double lambda = 1e-3;
    bool converged = false;
    int used = 0;

    for (int iter = 1; iter <= kFitMaxIterations; ++iter) {
        used = iter;
        // Normal equations A*delta = g from the Jacobian at theta.
        double a00 = 0.0, a01 = 0.0, a11 = 0.0, g0 = 0.0, g1 = 0.0;
        for (const CcdfPoint& pt : points) {
            double j[2];
            model_jacobian(model, theta, pt.value, j);
            double r = pt.probability - fit_predict(model, theta, pt.value);
            a00 += j[0] * j[0];
            a01 += j[0] * j[1];
            a11 += j[1] * j[1];
            g0 += j[0] * r;
            g1 += j[1] * r;
        }
        if (std::max(std::abs(g0), std::abs(g1)) < kFitGradientTolerance) {
            converged = true;
            used = iter - 1;
            break;
        }

        bool stepped = false;
        while (lambda <= 1e12) {
            double b00 = a00 * (1.0 + lambda);
            double b11 = a11 * (1.0 + lambda);
            double det = b00 * b11 - a01 * a01;
            if (std::abs(det) < 1e-300) {
                if (a00 == 0.0 && a11 == 0.0)
                    throw FitError("singular normal equations for " +
                                   std::string(to_string(model)));
                lambda *= 10.0;
                continue;
            }
            std::array<double, 2> trial = {theta[0] + (b11 * g0 - a01 * g1) / det,
                                           theta[1] + (b00 * g1 - a01 * g0) / det};
            if (params_valid(model, trial)) {
                double trial_sse = sse_of(model, trial, points);
                if (std::isfinite(trial_sse) && trial_sse <= sse) {
                    double rel = (sse - trial_sse) / std::max(sse, 1e-300);
                    theta = trial;
                    sse = trial_sse;
                    lambda = std::max(lambda * 0.1, 1e-12);
                    stepped = true;
                    if (rel < kFitSseTolerance) converged = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!stepped || converged) break;
    }

    FitResult out;
    out.model = model;
    out.params = theta;
    out.residual_sse = sse;
    out.log_likelihood = gaussian_log_likelihood(sse, points.size());
    out.converged = converged;
    out.iterations = used;
    return out;
}

std::vector<FitResult> fit_all_models(const std::vector<CcdfPoint>& points) {
    return {fit_model(points, FitModel::exponential), fit_model(points, FitModel::power_law),
            fit_model(points, FitModel::log_normal)};
}

FitResult select_best(const std::vector<FitResult>& fits) {
    const FitResult* best = nullptr;
    for (const FitResult& f : fits) {
        if (!f.converged) continue;
        if (!best || f.log_likelihood > best->log_likelihood ||
            (f.log_likelihood == best->log_likelihood &&
             (f.iterations < best->iterations ||
              (f.iterations == best->iterations &&
               static_cast<int>(f.model) < static_cast<int>(best->model)))))
            best = &f;
    }
    if (!best) throw FitError("no converged fit to select from");
    return *best;
}

KsResult ks_two_sample(const std::vector<double>& s1, const std::vector<double>& s2) {
    if (s1.empty() || s2.empty())
        throw ParameterError("both samples must be nonempty for the KS test");
    std::vector<double> a = s1, b = s2;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    double n1 = static_cast<double>(a.size());
    double n2 = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double v = (i < a.size() && (j == b.size() || a[i] <= b[j])) ? a[i] : b[j];
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
    }

    double n_eff = n1 * n2 / (n1 + n2);
    double lambda = d * std::sqrt(n_eff);
    double p = 1.0;
    if (lambda > 0.0) {
        double sum = 0.0;
        double sign = 1.0;
        for (int k = 1; k <= 100000; ++k) {
            double term = std::exp(-2.0 * lambda * lambda * static_cast<double>(k) *
                                   static_cast<double>(k));
            if (term < 1e-12) break;
            sum += sign * term;
            sign = -sign;
        }
        p = std::clamp(2.0 * sum, 0.0, 1.0);
    }

    KsResult out;
    out.d_statistic = d;
    out.p_value = p;
    out.n1 = a.size();
    out.n2 = b.size();
    out.critical_value_05 = 1.3581 / std::sqrt(n_eff);
    return out;
}

} // namespace echograph

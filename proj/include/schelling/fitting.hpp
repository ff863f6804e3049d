// fitting.hpp: the regression harness: six standard model forms fitted by
// least squares, plus three scaling-exponent estimators (log-log regression,
// damped Gauss-Newton nonlinear least squares, median local exponent).
// RMSE and R^2 are always computed in the original scale.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace schelling {

using Series = std::vector<std::pair<double, double>>;  // (size, mean runtime)

struct ModelFit {
    std::string name;
    std::vector<double> coeffs;  // Power: {a, b}; one-parameter forms: {a}
    double rmse = std::numeric_limits<double>::quiet_NaN();
    double r_squared = -std::numeric_limits<double>::infinity();
    bool ok = false;
    std::string diagnostic;
};

struct FitReport {
    std::vector<ModelFit> models;
    std::string best_model;
};

struct ExponentReport {
    double polyfit_loglog = std::numeric_limits<double>::quiet_NaN();
    double nonlinear_ls = std::numeric_limits<double>::quiet_NaN();
    double local_exponent = std::numeric_limits<double>::quiet_NaN();
    bool nls_converged = false;
    std::string nls_diagnostic;
};

namespace detail {

inline void fill_errors(ModelFit& m, const Series& s,
                        const std::function<double(double)>& predict) {
    double ss_res = 0, ss_tot = 0, mean = 0;
    for (auto& [n, y] : s) mean += y;
    mean /= double(s.size());
    for (auto& [n, y] : s) {
        const double r = y - predict(n);
        ss_res += r * r;
        ss_tot += (y - mean) * (y - mean);
    }
    m.rmse = std::sqrt(ss_res / double(s.size()));
    // Degenerate flat series: define R^2 = 1 only for an exact fit, matching
    // the convention that the constant model scores 0 against its own mean.
    m.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);
    m.ok = true;
}

// One-parameter least squares y ~ a * basis(n).
inline ModelFit fit_single(const std::string& name, const Series& s,
                           const std::function<double(double)>& basis) {
    ModelFit m;
    m.name = name;
    double num = 0, den = 0;
    for (auto& [n, y] : s) {
        const double x = basis(n);
        num += x * y;
        den += x * x;
    }
    const double a = den > 0 ? num / den : 0.0;
    m.coeffs = {a};
    fill_errors(m, s, [&, a](double n) { return a * basis(n); });
    return m;
}

inline double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Log-log ordinary least squares; returns {a, b} of y = a * n^b.
inline std::pair<double, double> loglog_fit(const Series& s) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [n, y] : s) {
        const double lx = std::log(n), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double m = double(s.size());
    const double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double a = std::exp((sy - b * sx) / m);
    return {a, b};
}

}  // namespace detail

// Least-squares fits of the six standard forms. Requires >= 4 distinct
// positive sizes. Models that cannot be fitted on a series (e.g. Power with
// non-positive runtimes) come back with ok=false and a diagnostic.
inline FitReport fit_models(const Series& series) {
    if (series.size() < 4) throw std::invalid_argument("fit_models: need >= 4 points");
    {
        std::vector<double> sizes;
        for (auto& [n, y] : series) {
            if (n <= 0) throw std::invalid_argument("fit_models: sizes must be positive");
            sizes.push_back(n);
        }
        std::sort(sizes.begin(), sizes.end());
        if (std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end())
            throw std::invalid_argument("fit_models: sizes must be distinct");
    }

    FitReport report;
    const bool y_positive =
        std::all_of(series.begin(), series.end(), [](auto& p) { return p.second > 0; });

    {
        ModelFit power;
        power.name = "Power";
        if (y_positive) {
            auto [a, b] = detail::loglog_fit(series);
            power.coeffs = {a, b};
            detail::fill_errors(power, series,
                                [a, b](double n) { return a * std::pow(n, b); });
        } else {
            power.diagnostic = "non-positive runtime values; log-log fit undefined";
        }
        report.models.push_back(std::move(power));
    }
    report.models.push_back(
        detail::fit_single("Quadratic", series, [](double n) { return n * n; }));
    report.models.push_back(detail::fit_single("Linearithmic", series,
                                               [](double n) { return n * std::log(n); }));
    report.models.push_back(detail::fit_single("Linear", series, [](double n) { return n; }));
    report.models.push_back(
        detail::fit_single("Logarithmic", series, [](double n) { return std::log(n); }));
    {
        ModelFit constant;
        constant.name = "Constant";
        double mean = 0;
        for (auto& [n, y] : series) mean += y;
        mean /= double(series.size());
        constant.coeffs = {mean};
        detail::fill_errors(constant, series, [mean](double) { return mean; });
        // R^2 of the mean against itself is 0 by construction.
        report.models.push_back(std::move(constant));
    }

    // Best by R^2; near-exact ties go to the less flexible form, so that a
    // noiseless quadratic reports Quadratic rather than Power with b = 2.
    const std::vector<std::string> simplicity{"Constant",     "Logarithmic", "Linear",
                                              "Linearithmic", "Quadratic",   "Power"};
    double best_r2 = -std::numeric_limits<double>::infinity();
    for (const auto& m : report.models)
        if (m.ok) best_r2 = std::max(best_r2, m.r_squared);
    for (const auto& name : simplicity)
        for (const auto& m : report.models)
            if (m.ok && m.name == name && m.r_squared >= best_r2 - 1e-12) {
                if (report.best_model.empty()) report.best_model = m.name;
            }
    return report;
}

// The three scaling-exponent estimators over the same series. Two points are
// enough for methods 1 and 3; the nonlinear fit needs at least three.
inline ExponentReport estimate_exponents(const Series& series) {
    if (series.size() < 2)
        throw std::invalid_argument("estimate_exponents: need >= 2 points");
    for (size_t i = 0; i < series.size(); ++i) {
        if (series[i].first <= 0 || series[i].second <= 0)
            throw std::invalid_argument("estimate_exponents: positive sizes and runtimes");
        if (i > 0 && series[i].first <= series[i - 1].first)
            throw std::invalid_argument("estimate_exponents: sizes must be increasing");
    }
    ExponentReport rep;

    auto [a0, b0] = detail::loglog_fit(series);
    rep.polyfit_loglog = b0;

    {
        std::vector<double> slopes;
        for (size_t i = 1; i < series.size(); ++i)
            slopes.push_back(std::log(series[i].second / series[i - 1].second) /
                             std::log(series[i].first / series[i - 1].first));
        rep.local_exponent = detail::median(std::move(slopes));
    }

    if (series.size() < 3) {
        rep.nls_diagnostic = "under-determined: nonlinear fit needs >= 3 points";
        return rep;
    }
    // Damped Gauss-Newton on (a, b) for y = a * n^b in the original scale,
    // initialized from the log-log fit. Converges when the relative step
    // drops below 1e-9, capped at 200 iterations.
    double a = a0, b = b0;
    auto sse = [&series](double pa, double pb) {
        double s = 0;
        for (auto& [n, y] : series) {
            const double r = pa * std::pow(n, pb) - y;
            s += r * r;
        }
        return s;
    };
    double damping = 1e-3;
    double current = sse(a, b);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        double j11 = 0, j12 = 0, j22 = 0, g1 = 0, g2 = 0;
        for (auto& [n, y] : series) {
            const double f = a * std::pow(n, b);
            const double r = f - y;
            const double da = std::pow(n, b);
            const double db = f * std::log(n);
            j11 += da * da;
            j12 += da * db;
            j22 += db * db;
            g1 += da * r;
            g2 += db * r;
        }
        const double m11 = j11 * (1 + damping), m22 = j22 * (1 + damping);
        const double det = m11 * m22 - j12 * j12;
        if (det == 0 || !std::isfinite(det)) break;
        const double step_a = (-g1 * m22 + g2 * j12) / det;
        const double step_b = (-g2 * m11 + g1 * j12) / det;
        const double trial = sse(a + step_a, b + step_b);
        if (trial <= current) {
            a += step_a;
            b += step_b;
            current = trial;
            damping = std::max(damping / 3, 1e-12);
            const double rel = std::abs(step_a) / std::max(std::abs(a), 1e-300) +
                               std::abs(step_b) / std::max(std::abs(b), 1e-300);
            if (rel < 1e-9) {
                converged = true;
                break;
            }
        } else {
            damping *= 10;
            if (damping > 1e12) break;
        }
    }
    rep.nonlinear_ls = b;
    rep.nls_converged = converged;
    if (!converged) rep.nls_diagnostic = "did not reach the 1e-9 relative-step criterion";
    return rep;
}

inline nlohmann::json fit_to_json(const Series& series, const FitReport& fit,
                                  const ExponentReport& exponents) {
    nlohmann::json j;
    auto ser = nlohmann::json::array();
    for (auto& [n, y] : series) ser.push_back({n, y});
    j["series"] = std::move(ser);
    auto models = nlohmann::json::array();
    for (const auto& m : fit.models) {
        nlohmann::json jm;
        jm["name"] = m.name;
        jm["coeffs"] = m.coeffs;
        jm["ok"] = m.ok;
        if (m.ok) {
            jm["rmse"] = m.rmse;
            jm["r2"] = m.r_squared;
        } else {
            jm["diagnostic"] = m.diagnostic;
        }
        models.push_back(std::move(jm));
    }
    j["models"] = std::move(models);
    j["best"] = fit.best_model;
    j["exponents"] = {{"polyfit", exponents.polyfit_loglog},
                      {"nls", exponents.nonlinear_ls},
                      {"local", exponents.local_exponent},
                      {"nls_converged", exponents.nls_converged}};
    return j;
}

}  // namespace schelling

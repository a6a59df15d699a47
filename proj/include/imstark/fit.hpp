#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace imstark {

enum class FitModel { PowerLaw, Constant, ExpDecay, Gaussian };

// Parameters by model:
//   PowerLaw  a * x^b          -> {a, b}
//   Constant  c                -> {c}
//   ExpDecay  a * exp(-beta t) -> {a, beta}
//   Gaussian  a0 * exp(-((n - m)/sigma)^2) -> {a0, m, sigma}
struct FitResult {
    FitModel model = FitModel::Constant;
    std::vector<double> parameters;
    double residual = 0.0;  // RMS error in the fitted space
    int n_points = 0;
};

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rmse = 0.0;
    double r_squared = 1.0;
};

inline LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw ComputationError("linear fit needs >= 2 matched points");
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw ComputationError("linear fit abscissa is degenerate");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rmse = std::sqrt(ss / static_cast<double>(n));
    f.r_squared = (syy > 0.0) ? 1.0 - ss / syy : 1.0;
    return f;
}

// a * x^b through least squares on (ln x, ln y).
inline FitResult powerlaw_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ComputationError("power-law fit needs >= 2 matched points");
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(y.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw NonPositiveData("power-law fit requires positive data");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const LineFit lf = linear_fit(lx, ly);
    FitResult r;
    r.model = FitModel::PowerLaw;
    r.parameters = {std::exp(lf.intercept), lf.slope};
    r.residual = lf.rmse;
    r.n_points = static_cast<int>(x.size());
    return r;
}

inline FitResult constant_fit(const std::vector<double>& y) {
    if (y.empty()) throw ComputationError("constant fit needs data");
    double s = 0;
    for (double v : y) s += v;
    const double c = s / static_cast<double>(y.size());
    double ss = 0;
    for (double v : y) ss += (v - c) * (v - c);
    FitResult r;
    r.model = FitModel::Constant;
    r.parameters = {c};
    r.residual = std::sqrt(ss / static_cast<double>(y.size()));
    r.n_points = static_cast<int>(y.size());
    return r;
}

// a * exp(-beta t) through least squares on (t, ln y).
inline FitResult expdecay_fit(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2) throw ComputationError("exp-decay fit needs >= 2 matched points");
    std::vector<double> ly;
    ly.reserve(y.size());
    for (double v : y) {
        if (!(v > 0.0)) throw NonPositiveData("exp-decay fit requires positive data");
        ly.push_back(std::log(v));
    }
    const LineFit lf = linear_fit(t, ly);
    FitResult r;
    r.model = FitModel::ExpDecay;
    r.parameters = {std::exp(lf.intercept), -lf.slope};
    r.residual = lf.rmse;
    r.n_points = static_cast<int>(t.size());
    return r;
}

// Centered moving average; the window is truncated (and renormalized) at
// the edges.
inline std::vector<double> moving_average(const std::vector<double>& v, int window) {
    if (window < 1) throw ComputationError("moving average window must be >= 1");
    const int n = static_cast<int>(v.size());
    const int half = window / 2;
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int a = std::max(0, i - half);
        const int b = std::min(n - 1, i + half);
        double s = 0;
        for (int k = a; k <= b; ++k) s += v[static_cast<size_t>(k)];
        out[static_cast<size_t>(i)] = s / static_cast<double>(b - a + 1);
    }
    return out;
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw ComputationError("median of empty data");
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid) - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
}

}  // namespace imstark

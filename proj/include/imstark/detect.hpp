#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "fit.hpp"

namespace imstark {

// Dominant oscillation frequency of a uniformly sampled real signal.
// The signal is mean-removed and Hann-windowed; a peak counts only if it is
// an interior local maximum of the magnitude spectrum (k >= 2), which
// rejects the DC shoulder a monotone decay produces. The returned frequency
// is refined by quadratic interpolation around the peak bin; prominence is
// peak over median bin.
struct SpectralPeak {
    bool found = false;
    double omega = 0.0;
    double prominence = 0.0;
};

inline SpectralPeak dominant_frequency(const std::vector<double>& signal, double dt, int k_min = 2) {
    const int n = static_cast<int>(signal.size());
    if (n < 8) throw WindowTooShort("need at least 8 samples for a frequency estimate");
    if (!(dt > 0.0)) throw ConfigError("sample spacing must be positive");
    double mean = 0.0;
    for (double v : signal) mean += v;
    mean /= n;
    std::vector<double> w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
        w[static_cast<size_t>(i)] = (signal[static_cast<size_t>(i)] - mean) * hann;
    }
    const int nbins = n / 2 + 1;
    std::vector<double> sp(static_cast<size_t>(nbins));
    for (int k = 0; k < nbins; ++k) {
        double re = 0.0, im = 0.0;
        const double wk = 2.0 * std::numbers::pi * k / n;
        for (int i = 0; i < n; ++i) {
            re += w[static_cast<size_t>(i)] * std::cos(wk * i);
            im -= w[static_cast<size_t>(i)] * std::sin(wk * i);
        }
        sp[static_cast<size_t>(k)] = std::hypot(re, im);
    }
    const double med = median(std::vector<double>(sp.begin() + 1, sp.end()));
    int best_k = -1;
    double best_v = 0.0;
    for (int k = k_min; k + 1 < nbins; ++k) {
        if (sp[static_cast<size_t>(k)] > sp[static_cast<size_t>(k - 1)] &&
            sp[static_cast<size_t>(k)] > sp[static_cast<size_t>(k + 1)] && sp[static_cast<size_t>(k)] > best_v) {
            best_k = k;
            best_v = sp[static_cast<size_t>(k)];
        }
    }
    SpectralPeak out;
    if (best_k < 0) return out;
    const double y0 = sp[static_cast<size_t>(best_k - 1)];
    const double y1 = sp[static_cast<size_t>(best_k)];
    const double y2 = sp[static_cast<size_t>(best_k + 1)];
    const double denom = y0 - 2.0 * y1 + y2;
    const double d = (denom != 0.0) ? 0.5 * (y0 - y2) / denom : 0.0;
    const double bin_width = 2.0 * std::numbers::pi / (n * dt);
    out.found = true;
    out.omega = (best_k + d) * bin_width;
    out.prominence = (med > 0.0) ? best_v / med : std::numeric_limits<double>::infinity();
    return out;
}

// Periodic-revival detector: first interior local maximum of the normalized
// autocorrelation. A drifting but non-oscillating signal has none above
// threshold; spectral prominence alone cannot make that distinction.
struct RevivalCheck {
    bool found = false;
    int lag = 0;
    double strength = 0.0;
};

inline RevivalCheck autocorr_revival(const std::vector<double>& signal, double threshold = 0.2) {
    const int n = static_cast<int>(signal.size());
    if (n < 8) throw WindowTooShort("need at least 8 samples for an autocorrelation");
    double mean = 0.0;
    for (double v : signal) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : signal) var += (v - mean) * (v - mean);
    RevivalCheck out;
    if (!(var > 0.0)) return out;
    const int max_lag = n / 2;
    std::vector<double> ac(static_cast<size_t>(max_lag + 1));
    for (int lag = 0; lag <= max_lag; ++lag) {
        double s = 0.0;
        for (int i = 0; i + lag < n; ++i)
            s += (signal[static_cast<size_t>(i)] - mean) * (signal[static_cast<size_t>(i + lag)] - mean);
        ac[static_cast<size_t>(lag)] = s / var;
    }
    for (int lag = 2; lag < max_lag; ++lag) {
        if (ac[static_cast<size_t>(lag)] > ac[static_cast<size_t>(lag - 1)] &&
            ac[static_cast<size_t>(lag)] > ac[static_cast<size_t>(lag + 1)] &&
            ac[static_cast<size_t>(lag)] >= threshold) {
            out.found = true;
            out.lag = lag;
            out.strength = ac[static_cast<size_t>(lag)];
            return out;
        }
    }
    return out;
}

}  // namespace imstark

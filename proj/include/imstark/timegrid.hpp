#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"

namespace imstark {

inline std::vector<double> linear_times(double t_end, int samples) {
    if (samples < 2 || !(t_end > 0.0)) throw ConfigError("time grid needs t_end > 0 and >= 2 samples");
    std::vector<double> t(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) t[static_cast<size_t>(i)] = t_end * i / (samples - 1);
    return t;
}

// Default evolution grid: t = 0, then a geometric ramp through the early
// transient (1e-4 .. 0.1 of the window), then linear coverage to the end.
// 400 samples over [0, 10 / max(F, 0.01)].
inline std::vector<double> default_times(double F) {
    const double t_end = 10.0 / (F > 0.01 ? F : 0.01);
    std::vector<double> t;
    t.reserve(400);
    t.push_back(0.0);
    const double g0 = 1e-4 * t_end, g1 = 0.1 * t_end;
    const int ngeo = 99, nlin = 300;
    for (int i = 0; i < ngeo; ++i)
        t.push_back(g0 * std::pow(g1 / g0, static_cast<double>(i) / (ngeo - 1)));
    for (int i = 1; i <= nlin; ++i)
        t.push_back(g1 + (t_end - g1) * i / nlin);
    return t;
}

}  // namespace imstark

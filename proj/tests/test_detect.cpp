#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <imstark/imstark.hpp>

using namespace imstark;

namespace {

std::vector<double> sampled(int n, double dt, double (*f)(double)) {
    std::vector<double> s(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = f(i * dt);
    return s;
}

}  // namespace

TEST(Detect, DampedToneFrequencyRecovered) {
    // e^{-0.1 t} (1 + 0.3 cos(1.3 t)): decaying baseline plus a weak tone
    const int n = 1200;
    const double dt = 60.0 / n;
    const auto s = sampled(n, dt, +[](double t) { return std::exp(-0.1 * t) * (1.0 + 0.3 * std::cos(1.3 * t)); });
    const SpectralPeak p = dominant_frequency(s, dt);
    ASSERT_TRUE(p.found);
    EXPECT_NEAR(p.omega, 1.3, 0.01);
    EXPECT_GT(p.prominence, 5.0);
}

TEST(Detect, PureCosineFrequencyInterpolatedBetweenBins) {
    // omega = 2.0 falls between DFT bins; quadratic refinement must land close
    const int n = 1000;
    const double dt = 50.0 / n;
    const auto s = sampled(n, dt, +[](double t) { return std::cos(2.0 * t); });
    const SpectralPeak p = dominant_frequency(s, dt);
    ASSERT_TRUE(p.found);
    EXPECT_NEAR(p.omega, 2.0, 0.01);
}

TEST(Detect, MonotoneDecayYieldsNoPeak) {
    const int n = 400;
    const double dt = 10.0 / n;
    const auto s = sampled(n, dt, +[](double t) { return std::exp(-t); });
    const SpectralPeak p = dominant_frequency(s, dt);
    EXPECT_FALSE(p.found);
    EXPECT_EQ(p.omega, 0.0);
}

TEST(Detect, FrequencyEstimateRejectsBadInput) {
    std::vector<double> tiny{1.0, 2.0, 1.0, 0.0};
    EXPECT_THROW(dominant_frequency(tiny, 0.1), WindowTooShort);
    std::vector<double> ok(64, 0.0);
    EXPECT_THROW(dominant_frequency(ok, 0.0), ConfigError);
    EXPECT_THROW(dominant_frequency(ok, -1.0), ConfigError);
}

TEST(Detect, RevivalLagMatchesSignalPeriod) {
    // period 10 sampled at dt = 0.25 -> first autocorrelation peak at lag 40
    const int n = 400;
    const double dt = 0.25;
    std::vector<double> s(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = std::cos(2.0 * std::numbers::pi * i * dt / 10.0);
    const RevivalCheck r = autocorr_revival(s);
    ASSERT_TRUE(r.found);
    EXPECT_NEAR(r.lag, 40, 2);
    EXPECT_GT(r.strength, 0.89);
    // overlap of a full-strength revival at lag 40 out of 400 samples is 0.9
    EXPECT_NEAR(r.strength, 0.9, 1e-9);
}

TEST(Detect, RevivalThresholdGatesWeakPeaks) {
    const int n = 400;
    const double dt = 0.25;
    std::vector<double> s(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = std::cos(2.0 * std::numbers::pi * i * dt / 10.0);
    const RevivalCheck r = autocorr_revival(s, 0.95);
    EXPECT_FALSE(r.found);
}

TEST(Detect, DriftingSignalHasNoRevival) {
    std::vector<double> decay(300), ramp(300);
    for (int i = 0; i < 300; ++i) {
        decay[static_cast<size_t>(i)] = std::exp(-0.005 * i);
        ramp[static_cast<size_t>(i)] = 0.01 * i;
    }
    EXPECT_FALSE(autocorr_revival(decay).found);
    EXPECT_FALSE(autocorr_revival(ramp).found);
}

TEST(Detect, ConstantSignalHasNoRevival) {
    std::vector<double> flat(64, 3.5);
    const RevivalCheck r = autocorr_revival(flat);
    EXPECT_FALSE(r.found);
}

TEST(Detect, RevivalRejectsShortWindow) {
    std::vector<double> tiny{1.0, 0.0, -1.0, 0.0};
    EXPECT_THROW(autocorr_revival(tiny), WindowTooShort);
}

TEST(Fit, LinearFitExactLine) {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(0.3 * i);
        y.push_back(2.5 - 0.7 * (0.3 * i));
    }
    const LineFit lf = linear_fit(x, y);
    EXPECT_NEAR(lf.intercept, 2.5, 1e-12);
    EXPECT_NEAR(lf.slope, -0.7, 1e-12);
    EXPECT_LT(lf.rmse, 1e-12);
    EXPECT_NEAR(lf.r_squared, 1.0, 1e-12);
}

TEST(Fit, PowerLawFitExactRecovery) {
    std::vector<double> x, y;
    for (int i = 1; i <= 12; ++i) {
        x.push_back(0.5 * i);
        y.push_back(2.0 * std::pow(0.5 * i, 1.5));
    }
    const FitResult r = powerlaw_fit(x, y);
    ASSERT_EQ(r.model, FitModel::PowerLaw);
    EXPECT_NEAR(r.parameters[0], 2.0, 1e-10);
    EXPECT_NEAR(r.parameters[1], 1.5, 1e-12);
    std::vector<double> bad{1.0, -1.0};
    EXPECT_THROW(powerlaw_fit(bad, bad), NonPositiveData);
}

TEST(Fit, ExpDecayFitExactRecovery) {
    std::vector<double> t, y;
    for (int i = 0; i < 15; ++i) {
        t.push_back(0.4 * i);
        y.push_back(3.0 * std::exp(-0.25 * 0.4 * i));
    }
    const FitResult r = expdecay_fit(t, y);
    ASSERT_EQ(r.model, FitModel::ExpDecay);
    EXPECT_NEAR(r.parameters[0], 3.0, 1e-10);
    EXPECT_NEAR(r.parameters[1], 0.25, 1e-12);
}

TEST(Fit, ConstantFitMeanAndScatter) {
    std::vector<double> y{1.0, 2.0, 3.0};
    const FitResult r = constant_fit(y);
    ASSERT_EQ(r.model, FitModel::Constant);
    EXPECT_NEAR(r.parameters[0], 2.0, 1e-15);
    EXPECT_NEAR(r.residual, std::sqrt(2.0 / 3.0), 1e-12);
    EXPECT_THROW(constant_fit(std::vector<double>{}), ComputationError);
}

TEST(Fit, MovingAverageWindowBehaviour) {
    std::vector<double> ramp(10);
    for (int i = 0; i < 10; ++i) ramp[static_cast<size_t>(i)] = static_cast<double>(i);
    const auto same = moving_average(ramp, 1);
    EXPECT_EQ(same, ramp);
    const auto sm = moving_average(ramp, 3);
    // interior points of a linear ramp are fixed points; edges renormalize
    EXPECT_NEAR(sm[0], 0.5, 1e-15);
    for (int i = 1; i < 9; ++i) EXPECT_NEAR(sm[static_cast<size_t>(i)], static_cast<double>(i), 1e-13);
    EXPECT_NEAR(sm[9], 8.5, 1e-15);
    EXPECT_THROW(moving_average(ramp, 0), ComputationError);
}

TEST(Fit, MedianOddAndEvenLengths) {
    EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_DOUBLE_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
    EXPECT_DOUBLE_EQ(median({7.0}), 7.0);
    EXPECT_THROW(median({}), ComputationError);
}

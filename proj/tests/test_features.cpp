#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "physio/features.hpp"
#include "physio/rng.hpp"

using namespace physio;

namespace {

Epoch epoch_with(const std::vector<double>& values) {
    Epoch e;
    e.window_s = 3.0;
    e.sample_rate_hz = static_cast<double>(values.size()) / 3.0;
    for (auto& ch : e.channels) ch = values;
    return e;
}

}  // namespace

TEST_CASE("peak_count follows the strict local-maximum rule") {
    CHECK(peak_count(std::vector<double>{0, 1, 0, 2, 0}) == 2);  // mean 0.6; 1 and 2 exceed it
    CHECK(peak_count(std::vector<double>{1, 1, 1, 1, 1}) == 0);
    CHECK(peak_count(std::vector<double>{0, 3, 3, 0, 5, 0}) == 2);  // plateau counts once
}

TEST_CASE("peak_count edge behavior") {
    // maxima below the mean don't count
    CHECK(peak_count(std::vector<double>{0, 1, 0, 100, 0}) == 1);
    // endpoints are never peaks
    CHECK(peak_count(std::vector<double>{5, 0, 0, 0, 5}) == 0);
    // plateau running into the end is not a peak
    CHECK(peak_count(std::vector<double>{0, 2, 2}) == 0);
    // falling plateau at the start is not a peak
    CHECK(peak_count(std::vector<double>{2, 2, 0}) == 0);
    try {
        peak_count(std::vector<double>{1, 2});
        FAIL("expected SignalTooShort");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SignalTooShort);
    }
}

TEST_CASE("constant channel gives the degenerate 5-tuple") {
    const auto e = epoch_with(std::vector<double>(300, 2.5));
    const auto vec = extract_features(e, {ChannelKind::Eda});
    REQUIRE(vec.values.size() == 5);
    CHECK(vec.values[0] == 2.5);  // mean
    CHECK(vec.values[1] == 0.0);  // std
    CHECK(vec.values[2] == 2.5);  // min
    CHECK(vec.values[3] == 2.5);  // max
    CHECK(vec.values[4] == 0.0);  // peak count
}

TEST_CASE("hand-computed 5-tuple for [0,1,0,2,0]") {
    const auto feats = channel_features(std::vector<double>{0, 1, 0, 2, 0});
    CHECK(feats[0] == doctest::Approx(0.6));
    CHECK(feats[1] == doctest::Approx(0.8));  // population std: sqrt(0.64)
    CHECK(feats[2] == 0.0);
    CHECK(feats[3] == 2.0);
    CHECK(feats[4] == 2.0);
}

TEST_CASE("all four modalities give a 20-element vector in fixed order") {
    const auto e = epoch_with({0, 1, 0, 2, 0, 1});
    const auto vec = extract_features(e);
    REQUIRE(vec.values.size() == 20);
    REQUIRE(vec.layout.size() == 20);
    int idx = 0;
    for (ChannelKind kind : kAllChannels) {
        for (int f = 0; f < kFeaturesPerChannel; ++f, ++idx) {
            CHECK(vec.layout[idx].channel == kind);
            CHECK(vec.layout[idx].feature == static_cast<FeatureId>(f));
        }
    }
    // request order does not matter
    const auto swapped = extract_features(
        e, {ChannelKind::Resp, ChannelKind::Ecg, ChannelKind::Ppg, ChannelKind::Eda});
    CHECK(swapped == vec);
}

TEST_CASE("requesting a modality with no samples fails") {
    Epoch e = epoch_with({1, 2, 3});
    e.channels[static_cast<int>(ChannelKind::Ppg)].clear();
    try {
        extract_features(e, {ChannelKind::Ppg});
        FAIL("expected MissingModality");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::MissingModality);
    }
}

// Property: adding a constant shifts mean/min/max, fixes std and peak count.
TEST_CASE("shift covariance") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(64);
        for (auto& v : x) v = rng.gauss();
        const double k = rng.uniform(-10.0, 10.0);
        std::vector<double> shifted = x;
        for (auto& v : shifted) v += k;

        const auto a = channel_features(x);
        const auto b = channel_features(shifted);
        CHECK(b[0] == doctest::Approx(a[0] + k));
        CHECK(b[1] == doctest::Approx(a[1]).epsilon(1e-9));
        CHECK(b[2] == doctest::Approx(a[2] + k));
        CHECK(b[3] == doctest::Approx(a[3] + k));
        CHECK(b[4] == a[4]);
    }
}

// Property: positive scaling scales mean/std/min/max and fixes peak count.
TEST_CASE("positive scale covariance") {
    Rng rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(64);
        for (auto& v : x) v = rng.gauss();
        const double s = rng.uniform(0.1, 10.0);
        std::vector<double> scaled = x;
        for (auto& v : scaled) v *= s;

        const auto a = channel_features(x);
        const auto b = channel_features(scaled);
        CHECK(b[0] == doctest::Approx(s * a[0]).epsilon(1e-9));
        CHECK(b[1] == doctest::Approx(s * a[1]).epsilon(1e-9));
        CHECK(b[2] == doctest::Approx(s * a[2]).epsilon(1e-9));
        CHECK(b[3] == doctest::Approx(s * a[3]).epsilon(1e-9));
        CHECK(b[4] == a[4]);
    }
}

// Property: min <= mean <= max, std >= 0, peak_count <= floor((n-1)/2).
TEST_CASE("feature bounds") {
    Rng rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng.below(200);
        std::vector<double> x(n);
        for (auto& v : x) v = rng.gauss() * 5.0;
        if (trial % 7 == 0) {
            // quantized signals produce plateaus
            for (auto& v : x) v = std::round(v);
        }
        const auto f = channel_features(x);
        CHECK(f[2] <= f[0]);
        CHECK(f[0] <= f[3]);
        CHECK(f[1] >= 0.0);
        CHECK(f[4] <= static_cast<double>((n - 1) / 2));
    }
}

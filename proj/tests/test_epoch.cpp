#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "physio/epoch.hpp"

using namespace physio;

namespace {

// Recording whose ECG channel holds the global sample index, so window
// placement can be read straight off the values.
RawRecording indexed_recording(double duration_s, double fs, const std::string& id = "p0") {
    RawRecording rec;
    rec.sample_rate_hz = fs;
    rec.participant_id = id;
    const auto n = static_cast<std::size_t>(std::floor(duration_s * fs + 0.5));
    for (auto& ch : rec.channels) ch.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) rec.channel(ChannelKind::Ecg)[i] = static_cast<double>(i);
    return rec;
}

}  // namespace

TEST_CASE("event epoch spans [onset, onset + window)") {
    const auto rec = indexed_recording(420.0, 1000.0);
    const EventAnnotation ann{300.0, ClassLabel::Startle};

    EpochingConfig cfg;
    cfg.window_s = 10.0;
    const Epoch e10 = extract_event_epoch(rec, ann, cfg);
    CHECK(e10.channel(ChannelKind::Ecg).size() == 10000);
    CHECK(e10.channel(ChannelKind::Ecg).front() == 300000.0);
    CHECK(e10.channel(ChannelKind::Ecg).back() == 309999.0);
    CHECK(e10.label == ClassLabel::Startle);

    cfg.window_s = 3.0;
    CHECK(extract_event_epoch(rec, ann, cfg).channel(ChannelKind::Eda).size() == 3000);
}

TEST_CASE("event window past the end of the recording is rejected") {
    const auto rec = indexed_recording(420.0, 1000.0);
    EpochingConfig cfg;
    cfg.window_s = 3.0;
    try {
        extract_event_epoch(rec, {419.0, ClassLabel::Surprise}, cfg);
        FAIL("expected WindowExceedsRecording");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WindowExceedsRecording);
    }
    // exactly flush with the end is fine
    CHECK_NOTHROW(extract_event_epoch(rec, {417.0, ClassLabel::Surprise}, cfg));
}

TEST_CASE("baseline epoch sits guard seconds before the onset") {
    const auto rec = indexed_recording(420.0, 1000.0);
    const EventAnnotation ann{300.0, ClassLabel::Startle};

    EpochingConfig cfg;
    cfg.window_s = 10.0;
    cfg.baseline_guard_s = 60.0;
    const Epoch b = extract_baseline_epoch(rec, ann, cfg);
    // [230, 240) s
    CHECK(b.channel(ChannelKind::Ecg).front() == 230000.0);
    CHECK(b.channel(ChannelKind::Ecg).back() == 239999.0);
    CHECK(b.label == ClassLabel::Baseline);

    cfg.window_s = 3.0;
    cfg.baseline_guard_s = 0.0;
    const Epoch b0 = extract_baseline_epoch(rec, ann, cfg);
    // guard-zero limit: [297, 300)
    CHECK(b0.channel(ChannelKind::Ecg).front() == 297000.0);
    CHECK(b0.channel(ChannelKind::Ecg).back() == 299999.0);
}

TEST_CASE("insufficient pre-onset data is rejected") {
    const auto rec = indexed_recording(420.0, 1000.0);
    EpochingConfig cfg;
    cfg.window_s = 10.0;
    cfg.baseline_guard_s = 60.0;
    try {
        extract_baseline_epoch(rec, {50.0, ClassLabel::Startle}, cfg);
        FAIL("expected InsufficientPreOnsetData");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientPreOnsetData);
    }
}

TEST_CASE("baseline and event windows never overlap") {
    const auto rec = indexed_recording(420.0, 500.0);
    for (double guard : {0.0, 5.0, 60.0}) {
        for (double window : {3.0, 5.0, 7.0, 10.0}) {
            EpochingConfig cfg;
            cfg.window_s = window;
            cfg.baseline_guard_s = guard;
            const EventAnnotation ann{200.0, ClassLabel::Surprise};
            const Epoch event = extract_event_epoch(rec, ann, cfg);
            const Epoch base = extract_baseline_epoch(rec, ann, cfg);
            // last baseline sample index + guard in samples < first event index
            const double last_base = base.channel(ChannelKind::Ecg).back();
            const double first_event = event.channel(ChannelKind::Ecg).front();
            CHECK(last_base + guard * 500.0 < first_event);
            CHECK(event.channel(ChannelKind::Ecg).size() ==
                  window_sample_count(window, 500.0));
            CHECK(base.channel(ChannelKind::Ecg).size() == window_sample_count(window, 500.0));
        }
    }
}

TEST_CASE("build_dataset yields one event and one baseline per recording") {
    std::vector<RawRecording> recordings;
    for (int i = 0; i < 3; ++i) {
        auto rec = indexed_recording(420.0, 250.0, "p" + std::to_string(9 - i * 3));
        rec.annotations = {{300.0, i % 2 == 0 ? ClassLabel::Startle : ClassLabel::Surprise}};
        recordings.push_back(std::move(rec));
    }
    EpochingConfig cfg;
    cfg.window_s = 3.0;

    const auto dataset = build_dataset(recordings, cfg);
    REQUIRE(dataset.size() == 6);
    // ordered by participant id: p3, p6, p9
    CHECK(dataset[0].participant_id == "p3");
    CHECK(dataset[2].participant_id == "p6");
    CHECK(dataset[4].participant_id == "p9");
    for (std::size_t i = 0; i < dataset.size(); i += 2) {
        CHECK(dataset[i].label != ClassLabel::Baseline);
        CHECK(dataset[i + 1].label == ClassLabel::Baseline);
    }

    // determinism
    const auto again = build_dataset(recordings, cfg);
    REQUIRE(again.size() == dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        CHECK(again[i].epoch == dataset[i].epoch);
        CHECK(again[i].label == dataset[i].label);
    }
}

TEST_CASE("build_dataset on empty input is empty") {
    CHECK(build_dataset({}, EpochingConfig{}).empty());
}

TEST_CASE("single annotated recording gives one event plus one baseline") {
    auto rec = indexed_recording(420.0, 250.0, "solo");
    rec.annotations = {{300.0, ClassLabel::Startle}};
    const auto dataset = build_dataset({rec}, EpochingConfig{});
    REQUIRE(dataset.size() == 2);
    CHECK(dataset[0].label == ClassLabel::Startle);
    CHECK(dataset[1].label == ClassLabel::Baseline);
}

TEST_CASE("build_dataset requires exactly one annotation per recording") {
    auto rec = indexed_recording(420.0, 250.0, "multi");
    rec.annotations = {{100.0, ClassLabel::Startle}, {300.0, ClassLabel::Surprise}};
    CHECK_THROWS_AS(build_dataset({rec}, EpochingConfig{}), Error);
}

TEST_CASE("extraction errors carry the participant id") {
    auto rec = indexed_recording(100.0, 250.0, "shorty");
    rec.annotations = {{50.0, ClassLabel::Startle}};  // 60 s guard cannot fit
    try {
        build_dataset({rec}, EpochingConfig{});
        FAIL("expected InsufficientPreOnsetData");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientPreOnsetData);
        CHECK(std::string(e.what()).find("shorty") != std::string::npos);
    }
}

TEST_CASE("window lengths outside {3,5,7,10} are rejected") {
    EpochingConfig cfg;
    cfg.window_s = 4.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.window_s = 7.0;
    cfg.baseline_guard_s = -1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

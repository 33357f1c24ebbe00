#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "physio/ingest.hpp"
#include "physio/rng.hpp"

using namespace physio;

namespace {

RawRecording small_recording(double duration_s = 420.0, double fs = 100.0) {
    RawRecording rec;
    rec.sample_rate_hz = fs;
    const auto n = static_cast<std::size_t>(duration_s * fs);
    for (auto& ch : rec.channels) ch.assign(n, 0.0);
    return rec;
}

}  // namespace

TEST_CASE("two-row file infers fs = 1/dt") {
    const auto rec = parse_recording("t_s,ecg,eda,ppg,resp\n0.0,0,0,0,0\n0.001,1,1,1,1");
    CHECK(rec.sample_rate_hz == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(rec.n_samples() == 2);
    CHECK(rec.channel(ChannelKind::Resp)[1] == 1.0);
}

TEST_CASE("missing column is reported by name") {
    try {
        parse_recording("t_s,ecg,eda,ppg\n0,0,0,0\n0.01,0,0,0");
        FAIL("expected MissingColumn");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingColumn);
        CHECK(std::string(e.what()).find("resp") != std::string::npos);
    }
}

TEST_CASE("non-monotonic time reports the offending line") {
    try {
        parse_recording("t_s,ecg,eda,ppg,resp\n0.0,0,0,0,0\n0.002,0,0,0,0\n0.001,0,0,0,0");
        FAIL("expected NonMonotonicTime");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonMonotonicTime);
        CHECK(e.line() == 4);
    }
}

TEST_CASE("non-uniform sampling beyond 1% is rejected") {
    // dt = 10 ms, 10 ms, 12 ms: the last one is 20% off the median
    const char* text = "t_s,ecg,eda,ppg,resp\n0,0,0,0,0\n0.01,0,0,0,0\n0.02,0,0,0,0\n0.032,0,0,0,0";
    CHECK_THROWS_AS(parse_recording(text), Error);
    try {
        parse_recording(text);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonUniformSampling);
        CHECK(e.line() == 5);
    }
    // within 1% passes
    CHECK_NOTHROW(
        parse_recording("t_s,ecg,eda,ppg,resp\n0,0,0,0,0\n0.01,0,0,0,0\n0.02005,0,0,0,0"));
}

TEST_CASE("non-finite and malformed samples are typed errors") {
    try {
        parse_recording("t_s,ecg,eda,ppg,resp\n0,0,inf,0,0\n0.01,0,0,0,0");
        FAIL("expected NonFiniteSample");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFiniteSample);
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_recording("t_s,ecg,eda,ppg,resp\n0,0,zero,0,0\n0.01,0,0,0,0"), Error);
    CHECK_THROWS_AS(parse_recording("t_s,ecg,eda,ppg,resp\n0,0,0,0\n0.01,0,0,0,0"), Error);
}

TEST_CASE("scientific notation and CRLF are accepted") {
    const auto rec =
        parse_recording("t_s,ecg,eda,ppg,resp\r\n0.0,1e-3,2E2,-3.5e1,0\r\n1e-2,0,0,0,4e0\r\n");
    CHECK(rec.sample_rate_hz == doctest::Approx(100.0));
    CHECK(rec.channel(ChannelKind::Ecg)[0] == 1e-3);
    CHECK(rec.channel(ChannelKind::Eda)[0] == 2e2);
    CHECK(rec.channel(ChannelKind::Resp)[1] == 4.0);
}

TEST_CASE("fs override wins over inference") {
    const auto rec = parse_recording("t_s,ecg,eda,ppg,resp\n0.0,0,0,0,0\n0.001,1,1,1,1", 500.0);
    CHECK(rec.sample_rate_hz == 500.0);
}

TEST_CASE("inferred fs stays within 1% of 1/median(dt)") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const double fs = 50.0 + 950.0 * rng.uniform();
        std::string text = "t_s,ecg,eda,ppg,resp\n";
        for (int i = 0; i < 50; ++i) {
            // per-sample timestamp jitter inside the 1% tolerance
            const double t = i / fs + 0.001 / fs * rng.gauss();
            text += format_double(t) + ",0,0,0,0\n";
        }
        const auto rec = parse_recording(text);
        CHECK(std::abs(rec.sample_rate_hz / fs - 1.0) < 0.01);
    }
}

TEST_CASE("annotation parsing: onset at 5:00 on a 7-minute recording") {
    const auto rec = small_recording(420.0);
    const auto anns = parse_annotations("onset_s,label\n300.0,startle", rec);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].onset_s == 300.0);
    CHECK(anns[0].label == ClassLabel::Startle);
}

TEST_CASE("annotation labels are case-insensitive and restricted") {
    const auto rec = small_recording();
    CHECK(parse_annotations("onset_s,label\n10.0,Surprise", rec)[0].label ==
          ClassLabel::Surprise);
    try {
        parse_annotations("onset_s,label\n300.0,baseline", rec);
        FAIL("expected UnknownLabel");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownLabel);
    }
    try {
        parse_annotations("onset_s,label\n9999.0,surprise", rec);
        FAIL("expected OnsetOutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OnsetOutOfRange);
    }
}

TEST_CASE("annotations come back sorted by onset") {
    const auto rec = small_recording();
    const auto anns =
        parse_annotations("onset_s,label\n300.0,startle\n100.0,surprise", rec);
    REQUIRE(anns.size() == 2);
    CHECK(anns[0].onset_s == 100.0);
    CHECK(anns[1].onset_s == 300.0);
}

TEST_CASE("feature table: empty dataset writes a header-only file") {
    CHECK(write_feature_table({}) == "label\n");
}

TEST_CASE("feature table: one 20-feature vector gives 21 columns and 2 rows") {
    FeatureVector vec;
    for (ChannelKind kind : kAllChannels) {
        for (int f = 0; f < kFeaturesPerChannel; ++f) {
            vec.values.push_back(0.5 * f + static_cast<int>(kind));
            vec.layout.push_back({kind, static_cast<FeatureId>(f)});
        }
    }
    const std::string text = write_feature_table({{vec, ClassLabel::Surprise}});
    const auto lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == 2);
    const std::string header = text.substr(0, text.find('\n'));
    CHECK(std::count(header.begin(), header.end(), ',') == 20);  // 21 columns
    CHECK(header.substr(header.rfind(',') + 1) == "label");
}

TEST_CASE("feature table rejects mixed layouts") {
    FeatureVector a, b;
    a.values = {1.0};
    a.layout = {{ChannelKind::Ecg, FeatureId::Mean}};
    b.values = {1.0};
    b.layout = {{ChannelKind::Eda, FeatureId::Mean}};
    CHECK_THROWS_AS(write_feature_table({{a, ClassLabel::Startle}, {b, ClassLabel::Startle}}),
                    Error);
}

// write -> parse -> write is byte-identical (the round-trip oracle for the
// 17-significant-digit requirement)
TEST_CASE("feature table round-trips byte-identically") {
    Rng rng(21);
    std::vector<std::pair<FeatureVector, ClassLabel>> dataset;
    for (int row = 0; row < 10; ++row) {
        FeatureVector vec;
        for (ChannelKind kind : kAllChannels) {
            for (int f = 0; f < kFeaturesPerChannel; ++f) {
                vec.values.push_back(rng.gauss() * std::pow(10.0, rng.uniform(-6.0, 6.0)));
                vec.layout.push_back({kind, static_cast<FeatureId>(f)});
            }
        }
        dataset.emplace_back(vec, kAllLabels[row % 3]);
    }
    const std::string once = write_feature_table(dataset);
    const auto parsed = parse_feature_table(once);
    REQUIRE(parsed.size() == dataset.size());
    CHECK(parsed == dataset);
    CHECK(write_feature_table(parsed) == once);
}

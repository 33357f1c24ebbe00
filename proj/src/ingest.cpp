#include "physio/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace physio {

namespace {

// Splits into lines, tolerating CRLF and a missing final newline.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    // drop a trailing empty line from a final newline
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t end = line.find(',', start);
        if (end == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, end - start));
        start = end + 1;
    }
    return fields;
}

double parse_number(std::string_view field, std::size_t line_no) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value, std::chars_format::general);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::MalformedRow,
                    "cannot parse number '" + std::string(field) + "'", line_no);
    }
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::NonFiniteSample, "non-finite value '" + std::string(field) + "'",
                    line_no);
    }
    return value;
}

// Rounds to 12 significant digits; used only for the inferred sample rate.
double round_sig(double v, int digits) {
    if (v == 0.0) return 0.0;
    const double mag = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
    return std::round(v * mag) / mag;
}

const char* kRecordingHeader = "t_s,ecg,eda,ppg,resp";
const char* kAnnotationHeader = "onset_s,label";

void check_header(std::string_view got, std::string_view expected) {
    if (got == expected) return;
    const auto got_fields = split_fields(got);
    for (std::string_view want : split_fields(expected)) {
        if (std::find(got_fields.begin(), got_fields.end(), want) == got_fields.end()) {
            throw Error(ErrorCode::MissingColumn, "missing column '" + std::string(want) + "'", 1);
        }
    }
    throw Error(ErrorCode::MalformedRow,
                "header must be exactly '" + std::string(expected) + "'", 1);
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

RawRecording parse_recording(std::string_view text, std::optional<double> fs_override,
                             std::string participant_id) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        throw Error(ErrorCode::MissingColumn, "empty recording file", 1);
    }
    check_header(lines[0], kRecordingHeader);
    if (lines.size() < 3) {
        throw Error(ErrorCode::MalformedRow, "recording needs at least 2 sample rows",
                    lines.size());
    }

    RawRecording rec;
    rec.participant_id = std::move(participant_id);
    std::vector<double> t;
    t.reserve(lines.size() - 1);
    for (auto& ch : rec.channels) ch.reserve(lines.size() - 1);

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto fields = split_fields(lines[i]);
        if (fields.size() != 5) {
            throw Error(ErrorCode::MalformedRow,
                        "expected 5 fields, got " + std::to_string(fields.size()), line_no);
        }
        const double ts = parse_number(fields[0], line_no);
        if (!t.empty() && ts <= t.back()) {
            throw Error(ErrorCode::NonMonotonicTime, "time not strictly increasing", line_no);
        }
        t.push_back(ts);
        for (int c = 0; c < kNumChannels; ++c) {
            rec.channels[c].push_back(parse_number(fields[c + 1], line_no));
        }
    }

    // Sampling uniformity: every dt must sit within 1% of the median dt.
    std::vector<double> dts(t.size() - 1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) dts[i] = t[i + 1] - t[i];
    std::vector<double> sorted = dts;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.size() % 2 == 1
                              ? sorted[sorted.size() / 2]
                              : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    for (std::size_t i = 0; i < dts.size(); ++i) {
        if (std::abs(dts[i] - median) > 0.01 * median) {
            throw Error(ErrorCode::NonUniformSampling,
                        "sample spacing deviates more than 1% from the median", i + 3);
        }
    }

    rec.sample_rate_hz = fs_override ? *fs_override : round_sig(1.0 / median, 12);
    rec.validate();
    return rec;
}

std::string write_recording(const RawRecording& rec) {
    std::string out = kRecordingHeader;
    out += '\n';
    const std::size_t n = rec.n_samples();
    for (std::size_t i = 0; i < n; ++i) {
        out += format_double(static_cast<double>(i) / rec.sample_rate_hz);
        for (int c = 0; c < kNumChannels; ++c) {
            out += ',';
            out += format_double(rec.channels[c][i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<EventAnnotation> parse_annotations(std::string_view text, const RawRecording& rec) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        throw Error(ErrorCode::MissingColumn, "empty annotation file", 1);
    }
    check_header(lines[0], kAnnotationHeader);

    std::vector<EventAnnotation> anns;
    const double duration = rec.duration_s();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto fields = split_fields(lines[i]);
        if (fields.size() != 2) {
            throw Error(ErrorCode::MalformedRow,
                        "expected 2 fields, got " + std::to_string(fields.size()), line_no);
        }
        EventAnnotation ann;
        ann.onset_s = parse_number(fields[0], line_no);
        ann.label = label_from_name(std::string(fields[1]), line_no);
        if (ann.label == ClassLabel::Baseline) {
            throw Error(ErrorCode::UnknownLabel, "baseline is derived, never annotated", line_no);
        }
        if (ann.onset_s < 0.0 || ann.onset_s >= duration) {
            throw Error(ErrorCode::OnsetOutOfRange,
                        "onset " + format_double(ann.onset_s) + " s outside recording of " +
                            format_double(duration) + " s",
                        line_no);
        }
        anns.push_back(ann);
    }
    std::sort(anns.begin(), anns.end(),
              [](const EventAnnotation& a, const EventAnnotation& b) {
                  return a.onset_s < b.onset_s;
              });
    return anns;
}

std::string write_annotations(const std::vector<EventAnnotation>& annotations) {
    std::string out = kAnnotationHeader;
    out += '\n';
    for (const auto& ann : annotations) {
        out += format_double(ann.onset_s);
        out += ',';
        out += label_name(ann.label);
        out += '\n';
    }
    return out;
}

std::string write_feature_table(
    const std::vector<std::pair<FeatureVector, ClassLabel>>& dataset) {
    std::string out;
    if (dataset.empty()) {
        return "label\n";
    }
    const auto& layout = dataset.front().first.layout;
    for (const auto& [vec, label] : dataset) {
        (void)label;
        if (vec.layout != layout) {
            throw Error(ErrorCode::MixedLayout, "feature vectors do not share one layout");
        }
    }
    for (const auto& desc : layout) {
        out += feature_column_name(desc);
        out += ',';
    }
    out += "label\n";
    for (const auto& [vec, label] : dataset) {
        for (double v : vec.values) {
            out += format_double(v);
            out += ',';
        }
        out += label_name(label);
        out += '\n';
    }
    return out;
}

std::vector<std::pair<FeatureVector, ClassLabel>> parse_feature_table(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        throw Error(ErrorCode::MissingColumn, "empty feature table", 1);
    }
    const auto header = split_fields(lines[0]);
    if (header.empty() || header.back() != "label") {
        throw Error(ErrorCode::MissingColumn, "missing column 'label'", 1);
    }
    std::vector<FeatureDesc> layout;
    for (std::size_t i = 0; i + 1 < header.size(); ++i) {
        layout.push_back(feature_desc_from_column(std::string(header[i]), 1));
    }

    std::vector<std::pair<FeatureVector, ClassLabel>> dataset;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto fields = split_fields(lines[i]);
        if (fields.size() != layout.size() + 1) {
            throw Error(ErrorCode::MalformedRow,
                        "expected " + std::to_string(layout.size() + 1) + " fields, got " +
                            std::to_string(fields.size()),
                        line_no);
        }
        FeatureVector vec;
        vec.layout = layout;
        vec.values.reserve(layout.size());
        for (std::size_t f = 0; f + 1 < fields.size(); ++f) {
            vec.values.push_back(parse_number(fields[f], line_no));
        }
        const ClassLabel label = label_from_name(std::string(fields.back()), line_no);
        dataset.emplace_back(std::move(vec), label);
    }
    return dataset;
}

RawRecording load_recording(const std::filesystem::path& path,
                            std::optional<double> fs_override) {
    std::string stem = path.stem().string();
    const auto suffix = stem.rfind("_recording");
    if (suffix != std::string::npos) stem.resize(suffix);
    return parse_recording(load_text(path), fs_override, stem);
}

std::vector<EventAnnotation> load_annotations(const std::filesystem::path& path,
                                              const RawRecording& rec) {
    return parse_annotations(load_text(path), rec);
}

void save_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
    }
}

std::string load_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string recording_file_name(const std::string& participant_id) {
    return participant_id + "_recording.csv";
}

std::string annotation_file_name(const std::string& participant_id) {
    return participant_id + "_annotations.csv";
}

std::vector<std::string> list_participants(const std::filesystem::path& dir) {
    std::vector<std::string> ids;
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "not a directory: '" + dir.string() + "'");
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string stem = entry.path().stem().string();
        const auto suffix = stem.rfind("_recording");
        if (entry.path().extension() == ".csv" && suffix != std::string::npos &&
            suffix + 10 == stem.size()) {
            ids.push_back(stem.substr(0, suffix));
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace physio

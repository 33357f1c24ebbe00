#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "physio/core.hpp"

namespace physio {

// Recording files: header "t_s,ecg,eda,ppg,resp", one row per sample, decimal
// reals (scientific notation accepted), LF or CRLF. t_s must be strictly
// increasing with uniform spacing within 1% relative tolerance. The sample
// rate is inferred as 1/median(dt) unless overridden; the inferred value is
// rounded to 12 significant digits to absorb timestamp quantization, so
// write -> parse recovers the original rate exactly for any realistic fs.
RawRecording parse_recording(std::string_view text,
                             std::optional<double> fs_override = std::nullopt,
                             std::string participant_id = {});

std::string write_recording(const RawRecording& rec);

// Annotation files: header "onset_s,label", label in {startle, surprise}
// (case-insensitive). Baseline never appears; it is derived from the signal
// before the event. Result is sorted by onset.
std::vector<EventAnnotation> parse_annotations(std::string_view text, const RawRecording& rec);

std::string write_annotations(const std::vector<EventAnnotation>& annotations);

// Feature tables: one column per (channel, feature) plus "label". Values are
// written in shortest round-trip form (never more than 17 significant digits),
// so write -> parse -> write is byte-identical.
std::string write_feature_table(const std::vector<std::pair<FeatureVector, ClassLabel>>& dataset);

std::vector<std::pair<FeatureVector, ClassLabel>> parse_feature_table(std::string_view text);

// File-level helpers. Recording loaders take the participant id from the file
// stem ("p003_recording.csv" -> "p003").
RawRecording load_recording(const std::filesystem::path& path,
                            std::optional<double> fs_override = std::nullopt);
std::vector<EventAnnotation> load_annotations(const std::filesystem::path& path,
                                              const RawRecording& rec);
void save_text(const std::filesystem::path& path, std::string_view text);
std::string load_text(const std::filesystem::path& path);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

// Names under which a recording and its annotations are stored in a data dir.
std::string recording_file_name(const std::string& participant_id);
std::string annotation_file_name(const std::string& participant_id);

// All participant ids that have a recording file in `dir`, sorted.
std::vector<std::string> list_participants(const std::filesystem::path& dir);

}  // namespace physio

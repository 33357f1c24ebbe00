// Command-line front end for the startle/surprise classification pipeline.
//
//   physio synth       generate a labeled synthetic benchmark dataset
//   physio preprocess  filter raw recordings (per-modality cascades)
//   physio featurize   cut epochs and write per-window feature tables
//   physio sweep       run the full evaluation grid and write reports
//   physio report      render a report into tables and plot-ready CSVs
//
// Every flag has a config-file equivalent (see --config / --set); flags
// override the file. The effective configuration is echoed into the output
// directory so a run can be reproduced from its artifacts alone.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "physio/cli_config.hpp"
#include "physio/dsp.hpp"
#include "physio/eval.hpp"
#include "physio/ingest.hpp"
#include "physio/synth.hpp"

namespace fs = std::filesystem;
using namespace physio;

namespace {

// Key=value pairs collected from flags, applied on top of the config file.
struct ConfigBuilder {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    void set(const std::string& key, const std::string& value) {
        overrides.emplace_back(key, value);
    }

    RunConfig build() const {
        RunConfig config;
        if (!config_path.empty()) {
            config = parse_run_config(load_text(config_path));
        }
        for (const auto& [key, value] : overrides) {
            apply_config_entry(config, key, value);
        }
        config.validate();
        return config;
    }
};

void add_common_flags(CLI::App* cmd, ConfigBuilder& builder) {
    cmd->add_option("--config", builder.config_path, "key=value run configuration file");
    cmd->add_option_function<std::vector<std::string>>(
        "--set",
        [&builder](const std::vector<std::string>& entries) {
            for (const auto& entry : entries) {
                const auto eq = entry.find('=');
                if (eq == std::string::npos) {
                    throw CLI::ValidationError("--set expects key=value");
                }
                builder.set(entry.substr(0, eq), entry.substr(eq + 1));
            }
        },
        "override any config key (key=value, repeatable)");
}

// Binds a flag directly to one config key so the two stay interchangeable.
void bind_option(CLI::App* cmd, ConfigBuilder& builder, const std::string& flag,
                 const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&builder, key](const std::string& value) { builder.set(key, value); }, help);
}

fs::path ensure_output_dir(const RunConfig& config) {
    const fs::path dir = config.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "cannot create output dir '" + dir.string() + "'");
    }
    return dir;
}

void echo_config(const RunConfig& config, const fs::path& dir) {
    save_text(dir / "effective.cfg", render_run_config(config));
}

std::vector<RawRecording> load_data_dir(const RunConfig& config) {
    if (config.data_dir.empty()) {
        throw Error(ErrorCode::ConfigError, "data_dir is required");
    }
    const fs::path dir = config.data_dir;
    std::vector<RawRecording> recordings;
    for (const auto& id : list_participants(dir)) {
        RawRecording rec = load_recording(dir / recording_file_name(id), config.fs_override);
        rec.annotations = load_annotations(dir / annotation_file_name(id), rec);
        recordings.push_back(std::move(rec));
    }
    if (recordings.empty()) {
        throw Error(ErrorCode::IoError, "no '*_recording.csv' files in '" + dir.string() + "'");
    }
    return recordings;
}

PreprocessOptions preprocess_options(const RunConfig& config) {
    PreprocessOptions opts;
    opts.notch_q = config.notch_q;
    opts.ppg_extra_hp = config.ppg_extra_hp;
    return opts;
}

int cmd_synth(const RunConfig& config) {
    const fs::path dir = ensure_output_dir(config);
    SynthConfig synth;
    synth.duration_s = config.synth_duration_s;
    synth.onset_s = config.synth_onset_s;
    synth.fs_hz = config.synth_fs;
    synth.params.separability = config.synth_separability;
    const auto recordings =
        synth_benchmark(static_cast<std::size_t>(config.synth_n), config.synth_seed, synth);
    for (const auto& rec : recordings) {
        save_text(dir / recording_file_name(rec.participant_id), write_recording(rec));
        save_text(dir / annotation_file_name(rec.participant_id),
                  write_annotations(rec.annotations));
    }
    echo_config(config, dir);
    std::cout << "wrote " << recordings.size() << " recordings to " << dir.string() << "\n";
    return 0;
}

int cmd_preprocess(const RunConfig& config) {
    const fs::path dir = ensure_output_dir(config);
    const auto recordings = load_data_dir(config);
    const auto opts = preprocess_options(config);
    for (const auto& rec : recordings) {
        const RawRecording filtered = preprocess_recording(rec, opts);
        save_text(dir / recording_file_name(rec.participant_id), write_recording(filtered));
        save_text(dir / annotation_file_name(rec.participant_id),
                  write_annotations(rec.annotations));
    }
    echo_config(config, dir);
    std::cout << "filtered " << recordings.size() << " recordings into " << dir.string() << "\n";
    return 0;
}

std::map<int, FeatureDataset> datasets_from_config(const RunConfig& config) {
    std::vector<RawRecording> recordings = load_data_dir(config);
    if (!config.assume_preprocessed) {
        const auto opts = preprocess_options(config);
        for (auto& rec : recordings) rec = preprocess_recording(rec, opts);
    }
    return build_window_datasets(recordings, config.windows, config.baseline_guard_s);
}

int cmd_featurize(const RunConfig& config) {
    const fs::path dir = ensure_output_dir(config);
    const auto datasets = datasets_from_config(config);
    for (const auto& [window, dataset] : datasets) {
        std::vector<std::pair<FeatureVector, ClassLabel>> table;
        table.reserve(dataset.size());
        for (const auto& sample : dataset) table.emplace_back(sample.fused, sample.label);
        save_text(dir / ("features_w" + std::to_string(window) + ".csv"),
                  write_feature_table(table));
    }
    echo_config(config, dir);
    std::cout << "wrote " << datasets.size() << " feature tables to " << dir.string() << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& config) {
    const fs::path dir = ensure_output_dir(config);
    const auto datasets = datasets_from_config(config);
    ExperimentReport report = run_experiment(datasets, config.sweep_config());
    report.metadata["baseline_guard_s"] = format_double(config.baseline_guard_s);
    report.metadata["notch_q"] = format_double(config.notch_q);
    report.metadata["ppg_extra_hp"] = config.ppg_extra_hp ? "true" : "false";
    save_text(dir / "report.csv", report_to_csv(report));
    save_text(dir / "report.json", report_to_json(report));
    echo_config(config, dir);
    std::cout << "wrote " << report.cells.size() << " report cells to " << dir.string() << "\n";
    return 0;
}

int cmd_report(const std::string& report_path, const RunConfig& config) {
    const fs::path dir = ensure_output_dir(config);
    const ExperimentReport report = report_from_json(load_text(report_path));

    // One plot-ready CSV per (task, window) panel: bar values plus CI bounds.
    std::map<ComparisonTask, std::map<int, std::vector<const CellResult*>>> panels;
    for (const auto& cell : report.cells) {
        panels[cell.key.task][cell.key.window_s].push_back(&cell);
    }
    std::size_t files = 0;
    for (const auto& [task, windows] : panels) {
        std::string table;
        table += std::string("task: ") + task_name(task) + "\n";
        table += "window_s  source         model  mean_acc  ci_low  ci_high\n";
        for (const auto& [window, cells] : windows) {
            std::string csv = "source,model,mean_acc,ci_low,ci_high\n";
            for (const CellResult* cell : cells) {
                csv += std::string(source_name(cell->key.source)) + "," +
                       model_kind_name(cell->key.model) + "," +
                       format_double(cell->mean_accuracy) + "," + format_double(cell->ci_low) +
                       "," + format_double(cell->ci_high) + "\n";
                char line[160];
                std::snprintf(line, sizeof(line), "%8d  %-13s  %-5s  %8.3f  %6.3f  %7.3f\n",
                              window, source_name(cell->key.source),
                              model_kind_name(cell->key.model), cell->mean_accuracy,
                              cell->ci_low, cell->ci_high);
                table += line;
            }
            save_text(dir / ("panel_" + std::string(task_name(task)) + "_w" +
                             std::to_string(window) + ".csv"),
                      csv);
            ++files;
        }
        save_text(dir / ("table_" + std::string(task_name(task)) + ".txt"), table);
        ++files;
    }
    echo_config(config, dir);
    std::cout << "wrote " << files << " report files to " << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"startle/surprise physiological classification pipeline"};
    app.require_subcommand(1);

    ConfigBuilder builder;
    std::string report_path;

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic benchmark dataset");
    add_common_flags(synth, builder);
    bind_option(synth, builder, "--out", "output_dir", "directory for the generated files");
    bind_option(synth, builder, "--n", "synth_n", "recordings per class");
    bind_option(synth, builder, "--seed", "synth_seed", "generator seed");
    bind_option(synth, builder, "--fs", "synth_fs", "sample rate in Hz (>= 250)");
    bind_option(synth, builder, "--duration", "synth_duration_s", "recording length in seconds");
    bind_option(synth, builder, "--onset", "synth_onset_s", "event onset in seconds");
    bind_option(synth, builder, "--separability", "synth_separability",
                "scale on every class-effect delta");

    CLI::App* preprocess = app.add_subcommand("preprocess", "filter raw recordings");
    add_common_flags(preprocess, builder);
    bind_option(preprocess, builder, "--data-dir", "data_dir", "directory of raw recordings");
    bind_option(preprocess, builder, "--out", "output_dir", "directory for filtered recordings");
    bind_option(preprocess, builder, "--fs-override", "fs_override",
                "trust this rate instead of the time column");
    bind_option(preprocess, builder, "--notch-q", "notch_q", "ECG notch quality factor");
    bind_option(preprocess, builder, "--ppg-extra-hp", "ppg_extra_hp",
                "apply the literal extra 0.5 Hz high-pass to PPG");

    CLI::App* featurize = app.add_subcommand("featurize", "epoch and extract feature tables");
    add_common_flags(featurize, builder);
    bind_option(featurize, builder, "--data-dir", "data_dir", "directory of recordings");
    bind_option(featurize, builder, "--out", "output_dir", "directory for feature tables");
    bind_option(featurize, builder, "--windows", "windows", "window lengths, e.g. 3,5,7,10");
    bind_option(featurize, builder, "--baseline-guard", "baseline_guard_s",
                "gap between baseline window end and onset");
    bind_option(featurize, builder, "--assume-preprocessed", "assume_preprocessed",
                "input files are already filtered");

    CLI::App* sweep = app.add_subcommand("sweep", "run the full evaluation grid");
    add_common_flags(sweep, builder);
    bind_option(sweep, builder, "--data-dir", "data_dir", "directory of recordings");
    bind_option(sweep, builder, "--out", "output_dir", "directory for reports");
    bind_option(sweep, builder, "--windows", "windows", "window lengths, e.g. 3,5,7,10");
    bind_option(sweep, builder, "--tasks", "tasks", "comparison tasks to run");
    bind_option(sweep, builder, "--models", "models", "svm,gnb,gbt");
    bind_option(sweep, builder, "--seeds", "seeds", "split seeds, e.g. 0,1,2");
    bind_option(sweep, builder, "--workers", "workers", "worker threads (0 = all cores)");
    bind_option(sweep, builder, "--assume-preprocessed", "assume_preprocessed",
                "input files are already filtered");

    CLI::App* report = app.add_subcommand("report", "render tables and plot CSVs from a report");
    add_common_flags(report, builder);
    report->add_option("--report", report_path, "report.json produced by sweep")->required();
    bind_option(report, builder, "--out", "output_dir", "directory for rendered files");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig config = builder.build();
        if (synth->parsed()) return cmd_synth(config);
        if (preprocess->parsed()) return cmd_preprocess(config);
        if (featurize->parsed()) return cmd_featurize(config);
        if (sweep->parsed()) return cmd_sweep(config);
        if (report->parsed()) return cmd_report(report_path, config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: IoError: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

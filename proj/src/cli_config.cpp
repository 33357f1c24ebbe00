#include "physio/cli_config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "physio/ingest.hpp"

namespace physio {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out, std::chars_format::general);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::ConfigError, key + ": not a number: '" + value + "'");
    }
    return out;
}

long long parse_int(const std::string& key, const std::string& value) {
    long long out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::ConfigError, key + ": not an integer: '" + value + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw Error(ErrorCode::ConfigError, key + ": not a boolean: '" + value + "'");
}

template <typename T, typename F>
std::vector<T> parse_items(const std::string& key, const std::string& value, F&& one) {
    std::vector<T> out;
    for (const auto& item : split_list(value)) out.push_back(one(key, item));
    if (out.empty()) {
        throw Error(ErrorCode::ConfigError, key + ": empty list");
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ',';
        out += item;
    }
    return out;
}

}  // namespace

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "data_dir") {
        config.data_dir = value;
    } else if (key == "output_dir") {
        config.output_dir = value;
    } else if (key == "fs_override") {
        if (value == "none" || value.empty()) {
            config.fs_override.reset();
        } else {
            config.fs_override = parse_double(key, value);
        }
    } else if (key == "windows") {
        config.windows = parse_items<int>(key, value, [](const std::string& k,
                                                         const std::string& v) {
            return static_cast<int>(parse_int(k, v));
        });
    } else if (key == "tasks") {
        config.tasks = parse_items<ComparisonTask>(
            key, value, [](const std::string&, const std::string& v) { return task_from_name(v); });
    } else if (key == "models") {
        config.models = parse_items<ModelKind>(key, value, [](const std::string&,
                                                              const std::string& v) {
            return model_kind_from_name(v);
        });
    } else if (key == "seeds") {
        config.seeds = parse_items<std::uint64_t>(
            key, value, [](const std::string& k, const std::string& v) {
                const long long s = parse_int(k, v);
                if (s < 0) throw Error(ErrorCode::ConfigError, k + ": seeds must be >= 0");
                return static_cast<std::uint64_t>(s);
            });
    } else if (key == "master_seed") {
        config.master_seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "baseline_guard_s") {
        config.baseline_guard_s = parse_double(key, value);
    } else if (key == "notch_q") {
        config.notch_q = parse_double(key, value);
    } else if (key == "ppg_extra_hp") {
        config.ppg_extra_hp = parse_bool(key, value);
    } else if (key == "assume_preprocessed") {
        config.assume_preprocessed = parse_bool(key, value);
    } else if (key == "workers") {
        config.workers = static_cast<int>(parse_int(key, value));
    } else if (key == "n_boot") {
        config.n_boot = static_cast<int>(parse_int(key, value));
    } else if (key == "svm_c") {
        config.svm_c = parse_items<double>(key, value, parse_double);
    } else if (key == "svm_kernels") {
        config.svm_kernels = split_list(value);
    } else if (key == "svm_gamma") {
        config.svm_gamma = parse_items<double>(key, value, parse_double);
    } else if (key == "gbt_rounds") {
        config.gbt_rounds = parse_items<int>(key, value, [](const std::string& k,
                                                            const std::string& v) {
            return static_cast<int>(parse_int(k, v));
        });
    } else if (key == "gbt_eta") {
        config.gbt_eta = parse_items<double>(key, value, parse_double);
    } else if (key == "gbt_depth") {
        config.gbt_depth = parse_items<int>(key, value, [](const std::string& k,
                                                           const std::string& v) {
            return static_cast<int>(parse_int(k, v));
        });
    } else if (key == "gbt_lambda") {
        config.gbt_lambda = parse_items<double>(key, value, parse_double);
    } else if (key == "synth_n") {
        config.synth_n = static_cast<int>(parse_int(key, value));
    } else if (key == "synth_seed") {
        config.synth_seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "synth_fs") {
        config.synth_fs = parse_double(key, value);
    } else if (key == "synth_duration_s") {
        config.synth_duration_s = parse_double(key, value);
    } else if (key == "synth_onset_s") {
        config.synth_onset_s = parse_double(key, value);
    } else if (key == "synth_separability") {
        config.synth_separability = parse_double(key, value);
    } else {
        throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
    }
}

RunConfig parse_run_config(const std::string& text) {
    RunConfig config;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.resize(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigError,
                        "expected key=value at line " + std::to_string(line_no));
        }
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    config.validate();
    return config;
}

void RunConfig::validate() const {
    if (windows.empty()) throw Error(ErrorCode::ConfigError, "windows: empty");
    for (int w : windows) {
        if (w != 3 && w != 5 && w != 7 && w != 10) {
            throw Error(ErrorCode::ConfigError,
                        "windows: " + std::to_string(w) + " not in {3,5,7,10}");
        }
    }
    if (tasks.empty()) throw Error(ErrorCode::ConfigError, "tasks: empty");
    if (models.empty()) throw Error(ErrorCode::ConfigError, "models: empty");
    if (seeds.empty()) throw Error(ErrorCode::ConfigError, "seeds: empty");
    if (fs_override && !(*fs_override > 0.0)) {
        throw Error(ErrorCode::ConfigError, "fs_override must be > 0");
    }
    if (baseline_guard_s < 0.0) {
        throw Error(ErrorCode::ConfigError, "baseline_guard_s must be >= 0");
    }
    if (!(notch_q > 0.0)) throw Error(ErrorCode::ConfigError, "notch_q must be > 0");
    if (workers < 0) throw Error(ErrorCode::ConfigError, "workers must be >= 0");
    if (n_boot < 1) throw Error(ErrorCode::ConfigError, "n_boot must be >= 1");
    for (const auto& k : svm_kernels) {
        if (k != "linear" && k != "rbf") {
            throw Error(ErrorCode::ConfigError, "svm_kernels: unknown kernel '" + k + "'");
        }
    }
    for (double c : svm_c) {
        if (!(c > 0.0)) throw Error(ErrorCode::ConfigError, "svm_c entries must be > 0");
    }
    for (double g : svm_gamma) {
        if (!(g > 0.0)) throw Error(ErrorCode::ConfigError, "svm_gamma entries must be > 0");
    }
    for (int r : gbt_rounds) {
        if (r < 1) throw Error(ErrorCode::ConfigError, "gbt_rounds entries must be >= 1");
    }
    for (double e : gbt_eta) {
        if (!(e > 0.0) || e > 1.0) {
            throw Error(ErrorCode::ConfigError, "gbt_eta entries must be in (0, 1]");
        }
    }
    for (int d : gbt_depth) {
        if (d < 1) throw Error(ErrorCode::ConfigError, "gbt_depth entries must be >= 1");
    }
    for (double l : gbt_lambda) {
        if (l < 0.0) throw Error(ErrorCode::ConfigError, "gbt_lambda entries must be >= 0");
    }
    if (synth_n < 5) throw Error(ErrorCode::ConfigError, "synth_n must be >= 5");
    if (synth_fs < 250.0) throw Error(ErrorCode::ConfigError, "synth_fs must be >= 250");
    if (!(synth_duration_s > synth_onset_s + 15.0)) {
        throw Error(ErrorCode::ConfigError, "synth_duration_s must exceed synth_onset_s + 15");
    }
    if (synth_separability < 0.0) {
        throw Error(ErrorCode::ConfigError, "synth_separability must be >= 0");
    }
}

ParamGrids RunConfig::grids() const {
    const ParamGrids defaults = ParamGrids::defaults();
    ParamGrids out;
    out.gnb = defaults.gnb;

    const std::vector<double> cs = svm_c.empty() ? std::vector<double>{0.1, 1.0, 10.0, 100.0}
                                                 : svm_c;
    const std::vector<std::string> kernels =
        svm_kernels.empty() ? std::vector<std::string>{"linear", "rbf"} : svm_kernels;
    const std::vector<double> gammas =
        svm_gamma.empty() ? std::vector<double>{0.01, 0.1, 1.0} : svm_gamma;
    for (const auto& kname : kernels) {
        const auto kernel_gammas =
            kname == "linear" ? std::vector<double>{0.0} : gammas;
        for (double gamma : kernel_gammas) {
            for (double c : cs) {
                ModelParams p;
                p.kind = ModelKind::Svm;
                p.svm_c = c;
                p.kernel.type =
                    kname == "linear" ? KernelSpec::Type::Linear : KernelSpec::Type::Rbf;
                p.kernel.gamma = gamma;
                out.svm.push_back(p);
            }
        }
    }

    const std::vector<int> rounds = gbt_rounds.empty() ? std::vector<int>{25, 50, 100}
                                                       : gbt_rounds;
    const std::vector<double> etas = gbt_eta.empty() ? std::vector<double>{0.1, 0.3} : gbt_eta;
    const std::vector<int> depths = gbt_depth.empty() ? std::vector<int>{2, 3} : gbt_depth;
    const std::vector<double> lambdas =
        gbt_lambda.empty() ? std::vector<double>{1.0} : gbt_lambda;
    for (int r : rounds) {
        for (double e : etas) {
            for (int d : depths) {
                for (double l : lambdas) {
                    ModelParams p;
                    p.kind = ModelKind::Gbt;
                    p.gbt.n_rounds = r;
                    p.gbt.learning_rate = e;
                    p.gbt.max_depth = d;
                    p.gbt.lambda = l;
                    out.gbt.push_back(p);
                }
            }
        }
    }
    return out;
}

SweepConfig RunConfig::sweep_config() const {
    SweepConfig sweep;
    sweep.windows = windows;
    sweep.tasks = tasks;
    sweep.models = models;
    sweep.seeds = seeds;
    sweep.master_seed = master_seed;
    sweep.n_boot = n_boot;
    sweep.grids = grids();
    sweep.workers = workers;
    return sweep;
}

std::string render_run_config(const RunConfig& config) {
    std::ostringstream out;
    out << "data_dir=" << config.data_dir << '\n';
    out << "output_dir=" << config.output_dir << '\n';
    out << "fs_override=" << (config.fs_override ? format_double(*config.fs_override) : "none")
        << '\n';
    {
        std::vector<std::string> items;
        for (int w : config.windows) items.push_back(std::to_string(w));
        out << "windows=" << join(items) << '\n';
    }
    {
        std::vector<std::string> items;
        for (ComparisonTask t : config.tasks) items.push_back(task_name(t));
        out << "tasks=" << join(items) << '\n';
    }
    {
        std::vector<std::string> items;
        for (ModelKind m : config.models) items.push_back(model_kind_name(m));
        out << "models=" << join(items) << '\n';
    }
    {
        std::vector<std::string> items;
        for (std::uint64_t s : config.seeds) items.push_back(std::to_string(s));
        out << "seeds=" << join(items) << '\n';
    }
    out << "master_seed=" << config.master_seed << '\n';
    out << "baseline_guard_s=" << format_double(config.baseline_guard_s) << '\n';
    out << "notch_q=" << format_double(config.notch_q) << '\n';
    out << "ppg_extra_hp=" << (config.ppg_extra_hp ? "true" : "false") << '\n';
    out << "assume_preprocessed=" << (config.assume_preprocessed ? "true" : "false") << '\n';
    out << "workers=" << config.workers << '\n';
    out << "n_boot=" << config.n_boot << '\n';
    auto list_line = [&](const char* key, const auto& items, auto&& fmt) {
        if (items.empty()) return;
        std::vector<std::string> strings;
        for (const auto& item : items) strings.push_back(fmt(item));
        out << key << '=' << join(strings) << '\n';
    };
    list_line("svm_c", config.svm_c, [](double v) { return format_double(v); });
    list_line("svm_kernels", config.svm_kernels, [](const std::string& v) { return v; });
    list_line("svm_gamma", config.svm_gamma, [](double v) { return format_double(v); });
    list_line("gbt_rounds", config.gbt_rounds, [](int v) { return std::to_string(v); });
    list_line("gbt_eta", config.gbt_eta, [](double v) { return format_double(v); });
    list_line("gbt_depth", config.gbt_depth, [](int v) { return std::to_string(v); });
    list_line("gbt_lambda", config.gbt_lambda, [](double v) { return format_double(v); });
    out << "synth_n=" << config.synth_n << '\n';
    out << "synth_seed=" << config.synth_seed << '\n';
    out << "synth_fs=" << format_double(config.synth_fs) << '\n';
    out << "synth_duration_s=" << format_double(config.synth_duration_s) << '\n';
    out << "synth_onset_s=" << format_double(config.synth_onset_s) << '\n';
    out << "synth_separability=" << format_double(config.synth_separability) << '\n';
    return out.str();
}

}  // namespace physio

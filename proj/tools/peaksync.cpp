// peaksync command-line front end.
//
// Settings resolve as defaults < JSON config (--config) < flags. Every run
// writes a JSON sidecar next to its output with the resolved settings, the
// tool version and the random generator identifier.
//
// Exit codes: 0 ok, 2 usage, 3 parse or validation error, 4 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "peaksync/peaksync.hpp"

namespace {

using namespace peaksync;
using json = nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::string config;
    std::string input;
    std::string out;
    std::string meta;
    double fs = 256.0;
    std::string channels;
    unsigned threads = 0;

    std::string band = "25:100";
    std::string notch = "49:51";
    bool no_filter = false;
    bool no_notch = false;
    int order = 4;
    int notch_order = 2;

    std::size_t window = 0;  // 0: one second of samples
    double mult = 2.0;
    std::string polarity = "positive";
    bool trains = false;
    bool as_train = false;

    double a0 = 0.5;
    double tau = 1e-3;
    std::string density = "gaussian";
    double sigma = 1.0;
    bool pairwise = false;

    std::string intervals;
    std::string interval;
    std::string groups;
    std::string grid = "0.1:0.05:0.9";

    std::size_t surrogates = 100;
    double percentile = 95.0;
    std::uint64_t seed = 0;
    std::size_t pool_window = 0;  // 0: one second of samples
    std::string pooled;

    std::size_t m = 0;    // 0: four seconds of samples
    std::size_t hop = 0;  // 0: one second of samples

    std::size_t r = 3;
    std::size_t n = 100'000;
    double rate = 0.01;
    double coupling = 0.0;
    double jitter = 0.0;
    std::string segment;
    std::string emit = "raw";
};

static_assert(std::is_same_v<std::size_t, std::uint64_t>, "seed and size fields share one variant slot");
using FieldPtr = std::variant<double*, int*, unsigned*, std::size_t*, bool*, std::string*>;

/// Binds options to Settings fields and remembers which keys each
/// subcommand owns, for config loading and the sidecar.
class Registry {
public:
    template <class T>
    CLI::Option* option(CLI::App* sub, const std::string& key, T& field, const std::string& help) {
        remember(sub, key, &field);
        return sub->add_option("--" + flag_name(key), field, help)->capture_default_str();
    }

    CLI::Option* flag(CLI::App* sub, const std::string& key, bool& field, const std::string& help) {
        remember(sub, key, &field);
        return sub->add_flag("--" + flag_name(key), field, help);
    }

    /// Applies a JSON object of key -> value to the bound fields.
    void apply(const json& config) const {
        if (!config.is_object()) throw UsageError("config file must hold a JSON object");
        for (const auto& [key, value] : config.items()) {
            const auto it = fields_.find(key);
            if (it == fields_.end()) throw UsageError("unknown config key '" + key + "'");
            std::visit([&](auto* p) { assign(p, value, key); }, it->second);
        }
    }

    json snapshot(const CLI::App* sub) const {
        json out = json::object();
        for (const auto& key : keys_.at(sub)) {
            if (key == "config" || key == "meta") continue;
            std::visit([&](auto* p) { out[key] = *p; }, fields_.at(key));
        }
        return out;
    }

private:
    static std::string flag_name(std::string key) {
        std::replace(key.begin(), key.end(), '_', '-');
        return key;
    }

    void remember(const CLI::App* sub, const std::string& key, FieldPtr p) {
        fields_.emplace(key, p);
        keys_[sub].push_back(key);
    }

    template <class T>
    static void assign(T* p, const json& value, const std::string& key) {
        try {
            if constexpr (std::is_same_v<T, std::string>) {
                *p = value.get<std::string>();
            } else if constexpr (std::is_same_v<T, bool>) {
                *p = value.get<bool>();
            } else if constexpr (std::is_floating_point_v<T>) {
                *p = value.get<double>();
            } else {
                if (!value.is_number_integer() || (value.is_number_integer() && value.get<long long>() < 0))
                    throw UsageError("config key '" + key + "' needs a non-negative integer");
                *p = value.get<T>();
            }
        } catch (const nlohmann::json::exception&) {
            throw UsageError("config key '" + key + "' has the wrong type");
        }
    }

    std::map<std::string, FieldPtr> fields_;
    std::map<const CLI::App*, std::vector<std::string>> keys_;
};

// ---- value parsing ----------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("malformed number '" + s + "' in " + what);
}

std::size_t to_index(const std::string& s, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError("malformed index '" + s + "' in " + what);
    return std::stoull(s);
}

std::pair<double, double> parse_band(const std::string& s, const std::string& what) {
    const auto parts = split(s, ':');
    if (parts.size() != 2) throw UsageError(what + " must look like LO:HI");
    return {to_double(parts[0], what), to_double(parts[1], what)};
}

/// "a:b" -> 0-based half-open [a, b).
Interval parse_interval(const std::string& s, const std::string& what) {
    const auto parts = split(s, ':');
    if (parts.size() != 2) throw UsageError(what + " must look like START:END");
    const std::size_t a = to_index(parts[0], what), b = to_index(parts[1], what);
    if (b <= a) throw UsageError(what + " needs START < END");
    return {a, b - a};
}

std::vector<Interval> parse_intervals(const std::string& s, const std::string& what) {
    std::vector<Interval> out;
    for (const auto& part : split(s, ';')) out.push_back(parse_interval(part, what));
    return out;
}

std::vector<std::string> parse_labels(const std::string& s, const std::string& what) {
    auto labels = split(s, ',');
    for (const auto& l : labels)
        if (l.empty()) throw UsageError("empty channel name in " + what);
    return labels;
}

std::size_t one_second(double fs) { return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(fs))); }

// ---- output -----------------------------------------------------------------

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string interval_name(const Interval& iv) {
    return std::to_string(iv.t0) + ":" + std::to_string(iv.t0 + iv.span);
}

// ---- pipeline assembly ------------------------------------------------------

Density make_density(const Settings& s) {
    if (s.density == "gaussian") return Density::gaussian(s.sigma);
    if (s.density == "uniform") return Density::uniform(s.sigma);
    throw UsageError("unknown density '" + s.density + "'");
}

PipelineConfig make_pipeline(const Settings& s, double fs) {
    PipelineConfig cfg;
    if (s.no_filter) {
        cfg.filter = std::nullopt;
    } else {
        FilterSpec f;
        std::tie(f.low_hz, f.high_hz) = parse_band(s.band, "--band");
        if (s.no_notch) {
            f.notch_low_hz = f.notch_high_hz = 0.0;
        } else {
            std::tie(f.notch_low_hz, f.notch_high_hz) = parse_band(s.notch, "--notch");
        }
        f.order = s.order;
        f.notch_order = s.notch_order;
        f.validate(fs);
        cfg.filter = f;
    }
    cfg.detector.window_len = s.window ? s.window : one_second(fs);
    cfg.detector.multiplier = s.mult;
    cfg.detector.polarity = parse_polarity(s.polarity);
    cfg.detector.validate();
    cfg.weights = build_weights(s.a0, s.tau, make_density(s));
    cfg.inputs_are_trains = s.trains;
    cfg.pairwise = s.pairwise;
    return cfg;
}

MultiChannelRecord load(const Settings& s) {
    if (s.input.empty()) throw UsageError("--input is required");
    auto record = read_record(s.input, s.fs);
    if (s.channels.empty()) return record;
    const auto wanted = parse_labels(s.channels, "--channels");
    return record.select(wanted);
}

std::vector<std::string> group_of(const Settings& s, const MultiChannelRecord& record) {
    return s.channels.empty() ? record.labels() : parse_labels(s.channels, "--channels");
}

unsigned threads_of(const Settings& s) { return resolve_threads(s.threads, std::getenv("PEAKSYNC_THREADS")); }

// ---- subcommands ------------------------------------------------------------

/// Returns extra sidecar fields.
using Runner = std::function<json(const Settings&)>;

json run_peaks(const Settings& s) {
    const auto record = load(s);
    auto cfg = make_pipeline(s, record.sample_rate_hz());
    cfg.inputs_are_trains = false;
    const auto trains = trains_for(record, cfg, threads_of(s));
    json extra{{"window_len", cfg.detector.window_len}};
    if (s.as_train) {
        const auto as_record = trains_to_record(trains, record.sample_rate_hz());
        if (s.out.empty()) {
            std::ostringstream text;
            for (std::size_t k = 0; k < as_record.channel_count(); ++k) text << (k ? "," : "") << as_record.labels()[k];
            text << '\n';
            for (std::size_t t = 0; t < as_record.sample_count(); ++t) {
                for (std::size_t k = 0; k < trains.size(); ++k) text << (k ? "," : "") << int(trains[k].indicators[t]);
                text << '\n';
            }
            std::cout << text.str();
        } else {
            write_record(s.out, as_record);
        }
        return extra;
    }
    if (s.out.empty()) throw UsageError("peaks without --as-train needs --out DIRECTORY");
    std::error_code ec;
    std::filesystem::create_directories(s.out, ec);
    if (ec) throw IoError("cannot create directory '" + s.out + "'");
    json counts = json::object();
    for (const auto& tr : trains) {
        std::string text = "t\n";
        for (auto t : tr.indices()) text += std::to_string(t) + "\n";
        write_text((std::filesystem::path(s.out) / (tr.label + ".csv")).string(), text);
        counts[tr.label] = tr.count();
    }
    extra["peak_counts"] = counts;
    return extra;
}

json run_weights(const Settings& s) {
    const auto w = build_weights(s.a0, s.tau, make_density(s));
    std::string text = "j,a_j\n";
    const auto n = static_cast<std::ptrdiff_t>(w.n);
    for (std::ptrdiff_t j = -n; j <= n; ++j) text += std::to_string(j) + "," + detail::format_double(w.at(j)) + "\n";
    write_text(s.out, text);
    return {{"n", w.n}, {"strip_half_width", w.strip_half_width}};
}

json run_sync(const Settings& s) {
    const auto record = load(s);
    const auto cfg = make_pipeline(s, record.sample_rate_hz());
    const auto series = run_pipeline(record, cfg, threads_of(s));
    std::string text = "t,value\n";
    for (std::size_t t = 0; t < series.size(); ++t)
        text += std::to_string(t) + "," + detail::format_double(series.values[t]) + "\n";
    write_text(s.out, text);
    return {{"n", cfg.weights.n}, {"valid_begin", series.valid_begin}, {"valid_end", series.valid_end}};
}

json run_compound(const Settings& s) {
    const auto record = load(s);
    const auto cfg = make_pipeline(s, record.sample_rate_hz());
    const auto series = run_pipeline(record, cfg, threads_of(s));
    const auto intervals =
        s.intervals.empty() ? std::vector<Interval>{{0, series.size()}} : parse_intervals(s.intervals, "--intervals");
    std::string text = "t0,span,phi_bar\n";
    for (const auto& iv : intervals)
        text += std::to_string(iv.t0) + "," + std::to_string(iv.span) + "," +
                detail::format_double(compound(series, iv.t0, iv.span)) + "\n";
    write_text(s.out, text);
    return {{"n", cfg.weights.n}};
}

json run_significance(const Settings& s) {
    const auto record = load(s);
    const auto pipeline = make_pipeline(s, record.sample_rate_hz());
    SurrogateConfig cfg;
    cfg.count = s.surrogates;
    cfg.percentile = s.percentile;
    cfg.seed = s.seed;
    if (s.pool_window) cfg.pool_window = s.pool_window;
    const auto result = significance_threshold(record, group_of(s, record), pipeline, cfg, threads_of(s));
    write_text(s.out, detail::format_double(result.threshold) + "\n");
    if (!s.pooled.empty()) {
        std::string text = "i,value\n";
        for (std::size_t i = 0; i < result.pooled.size(); ++i)
            text += std::to_string(i) + "," + detail::format_double(result.pooled[i]) + "\n";
        write_text(s.pooled, text);
    }
    return {{"threshold", result.threshold}, {"pool_window", result.pool_window}, {"pooled_count", result.pooled.size()}};
}

json run_eigcorr(const Settings& s) {
    const auto record = load(s);
    const std::size_t sec = one_second(record.sample_rate_hz());
    const std::size_t m = s.m ? s.m : 4 * sec;
    const std::size_t hop = s.hop ? s.hop : sec;
    const auto group = group_of(s, record);
    const auto track = eigen_track(record, group, m, hop, threads_of(s));
    std::string text = "center";
    for (std::size_t i = 1; i <= group.size(); ++i) text += ",l" + std::to_string(i);
    text += "\n";
    for (std::size_t w = 0; w < track.window_centers.size(); ++w) {
        text += std::to_string(track.window_centers[w]);
        for (double v : track.eigenvalues[w]) text += "," + detail::format_double(v);
        text += "\n";
    }
    write_text(s.out, text);
    return {{"m", m}, {"hop", hop}};
}

json run_rank(const Settings& s) {
    if (s.groups.empty()) throw UsageError("rank needs --groups \"a,b,c;d,e,f\"");
    const auto record = load(s);
    const auto cfg = make_pipeline(s, record.sample_rate_hz());
    const auto trains = trains_for(record, cfg, threads_of(s));
    std::vector<std::vector<std::string>> groups;
    for (const auto& g : split(s.groups, ';')) groups.push_back(parse_labels(g, "--groups"));
    std::optional<Interval> iv;
    if (!s.interval.empty()) iv = parse_interval(s.interval, "--interval");
    const auto ranked = rank_groups(trains, groups, cfg.weights, iv, threads_of(s));
    json out = json::array();
    for (const auto& g : ranked) out.push_back({{"members", g.members}, {"phi_bar", g.phi_bar}});
    write_text(s.out, out.dump(2) + "\n");
    return {{"n", cfg.weights.n}};
}

json run_simulate(const Settings& s) {
    SynthSpec spec;
    spec.channels = s.r;
    spec.length = s.n;
    spec.base_rate = s.rate;
    spec.coupling = s.coupling;
    spec.jitter_std = s.jitter;
    spec.seed = s.seed;
    spec.sample_rate_hz = s.fs;
    if (!s.segment.empty()) {
        const auto iv = parse_interval(s.segment, "--segment");
        spec.segment = {{iv.t0, iv.t0 + iv.span}};
    }
    if (s.emit != "raw" && s.emit != "trains") throw UsageError("--emit must be raw or trains");
    const auto record = s.emit == "raw" ? generate_record(spec) : trains_to_record(generate_trains(spec), s.fs);
    if (s.out.empty()) throw UsageError("simulate needs --out FILE (.csv or .bin)");
    write_record(s.out, record);
    return json::object();
}

json run_sweep(const Settings& s) {
    if (s.intervals.empty()) throw UsageError("sweep-a0 needs --intervals \"a:b;c:d\"");
    const auto record = load(s);
    const auto cfg = make_pipeline(s, record.sample_rate_hz());
    const auto trains = trains_for(record, cfg, threads_of(s));
    const auto g = split(s.grid, ':');
    if (g.size() != 3) throw UsageError("--grid must look like FIRST:STEP:LAST");
    const auto grid = coefficient_grid(to_double(g[0], "--grid"), to_double(g[1], "--grid"), to_double(g[2], "--grid"));
    const auto intervals = parse_intervals(s.intervals, "--intervals");
    const auto rows = sweep_central_coefficient(trains, grid, s.tau, make_density(s), intervals, threads_of(s));
    std::string text = "a0";
    for (const auto& iv : intervals) text += "," + interval_name(iv);
    text += "\n";
    for (const auto& row : rows) {
        text += detail::format_double(row.a0);
        for (double v : row.phi_bar) text += "," + detail::format_double(v);
        text += "\n";
    }
    write_text(s.out, text);
    return json::object();
}

// ---- wiring -----------------------------------------------------------------

void add_io(Registry& reg, CLI::App* sub, Settings& s, bool needs_input) {
    if (needs_input) {
        reg.option(sub, "input", s.input, "record file (.csv, or .bin for binary)");
        reg.option(sub, "fs", s.fs, "sample rate in Hz");
    }
    reg.option(sub, "out", s.out, "output path (stdout when omitted)");
    reg.option(sub, "meta", s.meta, "metadata sidecar path (default OUT.meta.json)");
    reg.option(sub, "config", s.config, "JSON file of settings; flags override it");
    reg.option(sub, "threads", s.threads, "worker threads (0: PEAKSYNC_THREADS or 1)");
}

void add_weights(Registry& reg, CLI::App* sub, Settings& s) {
    reg.option(sub, "a0", s.a0, "central coefficient in (0, 1)");
    reg.option(sub, "tau", s.tau, "neglected tail mass");
    reg.option(sub, "density", s.density, "gaussian | uniform")->check(CLI::IsMember({"gaussian", "uniform"}));
    reg.option(sub, "sigma", s.sigma, "density scale (std for gaussian, half-width for uniform)");
}

void add_detection(Registry& reg, CLI::App* sub, Settings& s, bool allow_trains) {
    reg.option(sub, "band", s.band, "band-pass edges LO:HI in Hz");
    reg.option(sub, "notch", s.notch, "band-stop edges LO:HI in Hz");
    reg.flag(sub, "no_filter", s.no_filter, "skip band-pass and notch");
    reg.flag(sub, "no_notch", s.no_notch, "skip the notch only");
    reg.option(sub, "order", s.order, "band-pass sections");
    reg.option(sub, "notch_order", s.notch_order, "band-stop sections");
    reg.option(sub, "window", s.window, "threshold window in samples (0: one second)");
    reg.option(sub, "mult", s.mult, "threshold = median + mult * std");
    reg.option(sub, "polarity", s.polarity, "positive | negative | both")
        ->check(CLI::IsMember({"positive", "negative", "both"}));
    if (allow_trains) reg.flag(sub, "trains", s.trains, "input channels already hold 0/1 peak trains");
}

std::string sidecar_path(const Settings& s, const std::string& name) {
    if (!s.meta.empty()) return s.meta;
    if (!s.out.empty() && s.out != "-") return s.out + ".meta.json";
    return "peaksync-" + name + ".meta.json";
}

std::string find_config(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return {};
}

int run(int argc, char** argv) {
    Settings s;
    Registry reg;
    CLI::App app{"Peak-train synchronization analysis for multichannel recordings", "peaksync"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::map<const CLI::App*, std::pair<std::string, Runner>> runners;
    auto add = [&](const std::string& name, const std::string& help, Runner fn) {
        auto* sub = app.add_subcommand(name, help);
        runners[sub] = {name, std::move(fn)};
        return sub;
    };

    auto* peaks = add("peaks", "detect peaks; one index CSV per channel or a 0/1 matrix", run_peaks);
    add_io(reg, peaks, s, true);
    reg.option(peaks, "channels", s.channels, "comma-separated channel subset");
    add_detection(reg, peaks, s, false);
    reg.flag(peaks, "as_train", s.as_train, "write a 0/1 matrix CSV instead of index files");

    auto* weights = add("weights", "print the weight vector as CSV j,a_j", run_weights);
    add_io(reg, weights, s, false);
    add_weights(reg, weights, s);

    auto* sync = add("sync", "synchronization series t,value for a channel group", run_sync);
    add_io(reg, sync, s, true);
    reg.option(sync, "channels", s.channels, "comma-separated group (default: all)");
    add_detection(reg, sync, s, true);
    add_weights(reg, sync, s);
    reg.flag(sync, "pairwise", s.pairwise, "evaluate via the average over channel pairs");

    auto* comp = add("compound", "compound measure over intervals", run_compound);
    add_io(reg, comp, s, true);
    reg.option(comp, "channels", s.channels, "comma-separated group (default: all)");
    add_detection(reg, comp, s, true);
    add_weights(reg, comp, s);
    reg.option(comp, "intervals", s.intervals, "0-based half-open START:END;... (default: whole record)");

    auto* sig = add("significance", "surrogate significance threshold", run_significance);
    add_io(reg, sig, s, true);
    reg.option(sig, "channels", s.channels, "comma-separated group (default: all)");
    add_detection(reg, sig, s, false);
    add_weights(reg, sig, s);
    reg.option(sig, "surrogates", s.surrogates, "surrogate count");
    reg.option(sig, "percentile", s.percentile, "nearest-rank percentile in (0, 100)");
    reg.option(sig, "seed", s.seed, "surrogate i uses seed + i");
    reg.option(sig, "pool_window", s.pool_window, "samples averaged per pooled value (0: one second)");
    reg.option(sig, "pooled", s.pooled, "also write the pooled values to this CSV");

    auto* eig = add("eigcorr", "sliding-window correlation eigenvalues", run_eigcorr);
    add_io(reg, eig, s, true);
    reg.option(eig, "channels", s.channels, "comma-separated group (default: all)");
    reg.option(eig, "m", s.m, "window length in samples (0: four seconds)");
    reg.option(eig, "hop", s.hop, "window hop in samples (0: one second)");

    auto* rank = add("rank", "rank channel groups by compound measure (JSON)", run_rank);
    add_io(reg, rank, s, true);
    add_detection(reg, rank, s, true);
    add_weights(reg, rank, s);
    reg.option(rank, "groups", s.groups, "groups as \"a,b,c;d,e,f\"");
    reg.option(rank, "interval", s.interval, "0-based half-open START:END (default: whole record)");

    auto* sim = add("simulate", "generate a coupled synthetic record", run_simulate);
    add_io(reg, sim, s, false);
    reg.option(sim, "fs", s.fs, "sample rate in Hz");
    reg.option(sim, "r", s.r, "channel count");
    reg.option(sim, "n", s.n, "samples per channel");
    reg.option(sim, "rate", s.rate, "peak probability per sample");
    reg.option(sim, "coupling", s.coupling, "probability a master peak is copied to each follower");
    reg.option(sim, "jitter", s.jitter, "std of the copy lag in samples");
    reg.option(sim, "segment", s.segment, "coupled region START:END, 0-based half-open (default: all)");
    reg.option(sim, "seed", s.seed, "generator seed");
    reg.option(sim, "emit", s.emit, "raw | trains")->check(CLI::IsMember({"raw", "trains"}));

    auto* sweep = add("sweep-a0", "compound measure over a grid of central coefficients", run_sweep);
    add_io(reg, sweep, s, true);
    reg.option(sweep, "channels", s.channels, "comma-separated group (default: all)");
    add_detection(reg, sweep, s, true);
    add_weights(reg, sweep, s);
    reg.option(sweep, "grid", s.grid, "FIRST:STEP:LAST");
    reg.option(sweep, "intervals", s.intervals, "0-based half-open START:END;...");

    const std::string config_path = find_config(argc, argv);
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw IoError("cannot open config '" + config_path + "'");
        json config;
        try {
            config = json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("config '" + config_path + "': " + e.what());
        }
        reg.apply(config);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    for (const auto& [sub, entry] : runners) {
        if (!sub->parsed()) continue;
        const auto& [name, fn] = entry;
        const json extra = fn(s);
        json meta{{"tool", "peaksync"},
                  {"version", kVersion},
                  {"subcommand", name},
                  {"config", reg.snapshot(sub)},
                  {"seed", s.seed},
                  {"rng", kRngAlgorithm},
                  {"derived", extra}};
        write_text(sidecar_path(s, name), meta.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "peaksync: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "peaksync: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << "peaksync: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ValidationError& e) {
        std::cerr << "peaksync: " << e.what() << "\n";
        return kExitInvalid;
    }
}

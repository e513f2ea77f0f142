// report.hpp
//
// Plumbing behind the paclab tool: the key=value config format, CSV tables,
// the JSON run manifest, and atomic file writes.
//
//   distributions.csv  m,source,slot_index,slot_lo,slot_hi,mass
//   curve.csv          m,mean_p,std_p,mean_q,std_q,kl
//
// Reals are printed with 17 significant digits so they read back to the
// same double.
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "paclab/experiment.hpp"

namespace paclab {

inline constexpr std::string_view kToolVersion = "paclab 1.0.0";

/// Bad configuration or malformed input; the tool exits with status 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure; the tool exits with status 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_real(std::string_view s, std::string_view what) {
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    }
    return v;
}

inline std::uint64_t parse_uint(std::string_view s, std::string_view what) {
    s = trim(s);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    }
    return v;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to "<path>.tmp" and renames over path.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string());
    }
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

/// Flat "key = value" lines; '#' starts a comment. Keys are normalized so
/// that "m-start" and "m_start" are the same key.
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::size_t lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key(trim(line.substr(0, eq)));
        for (auto& ch : key) {
            if (ch == '-') ch = '_';
        }
        kv[key] = std::string(trim(line.substr(eq + 1)));
    }
    return kv;
}

inline Task parse_task(std::string_view name, std::size_t n) {
    if (name == "conjunction") return ConjunctionTask{n};
    if (name == "threshold") return ThresholdTask{};
    throw ConfigError("unknown task '" + std::string(name) + "' (expected conjunction or threshold)");
}

inline GroundTruthMode parse_gt_mode(std::string_view s) {
    if (s == "per-trial" || s == "per_trial") return GroundTruthMode::PerTrial;
    if (s == "fixed") return GroundTruthMode::Fixed;
    throw ConfigError("unknown gt-mode '" + std::string(s) + "' (expected per-trial or fixed)");
}

inline std::string gt_mode_name(GroundTruthMode mode) {
    return mode == GroundTruthMode::Fixed ? "fixed" : "per-trial";
}

/// Builds a config from key/value pairs. The task key picks the task's
/// defaults first; other keys then override them.
inline ExperimentConfig config_from_key_values(const std::map<std::string, std::string>& kv) {
    static const std::vector<std::string> known = {"task",   "n",      "vc_dim", "slots", "trials",
                                                   "m_start", "m_step", "m_max", "seed",  "gt_mode"};
    for (const auto& [key, value] : kv) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    ExperimentConfig c;
    if (auto it = kv.find("task"); it != kv.end()) {
        c = parse_task(it->second, 10).index() == 0 ? ExperimentConfig::conjunction_defaults()
                                                    : ExperimentConfig::threshold_defaults();
    }
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto* v = get("n")) {
        const auto n = parse_uint(*v, "n");
        if (auto* t = std::get_if<ConjunctionTask>(&c.task)) t->n = n;
    }
    if (auto* v = get("vc_dim")) c.vc_dim = parse_uint(*v, "vc_dim");
    if (auto* v = get("slots")) c.slots = parse_uint(*v, "slots");
    if (auto* v = get("trials")) c.trials = parse_uint(*v, "trials");
    if (auto* v = get("m_start")) c.schedule.start = parse_uint(*v, "m_start");
    if (auto* v = get("m_step")) c.schedule.step = parse_uint(*v, "m_step");
    if (auto* v = get("m_max")) c.schedule.max = parse_uint(*v, "m_max");
    if (auto* v = get("seed")) c.seed = parse_uint(*v, "seed");
    if (auto* v = get("gt_mode")) c.gt_mode = parse_gt_mode(*v);
    return c;
}

inline std::map<std::string, std::string> config_to_key_values(const ExperimentConfig& c) {
    std::map<std::string, std::string> kv;
    kv["task"] = task_name(c.task);
    if (auto* t = std::get_if<ConjunctionTask>(&c.task)) kv["n"] = std::to_string(t->n);
    kv["vc_dim"] = std::to_string(c.vc_dim);
    kv["slots"] = std::to_string(c.slots);
    kv["trials"] = std::to_string(c.trials);
    kv["m_start"] = std::to_string(c.schedule.start);
    kv["m_step"] = std::to_string(c.schedule.step);
    kv["m_max"] = std::to_string(c.schedule.max);
    kv["seed"] = std::to_string(c.seed);
    kv["gt_mode"] = gt_mode_name(c.gt_mode);
    return kv;
}

/// Config file contents: either the key=value format or a manifest.json
/// written by a previous run (its "config" object is used).
inline std::map<std::string, std::string> parse_config_text(std::string_view text) {
    const auto body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("invalid manifest JSON: ") + e.what());
        }
        if (!j.contains("config") || !j["config"].is_object()) {
            throw ConfigError("manifest has no config object");
        }
        std::map<std::string, std::string> kv;
        for (const auto& [key, value] : j["config"].items()) {
            kv[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
        return kv;
    }
    return parse_key_values(text);
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

inline void append_distribution_rows(std::string& out, std::uint64_t m, std::string_view source,
                                     const DiscreteDistribution& d) {
    for (std::size_t i = 0; i < d.num_slots(); ++i) {
        out += std::to_string(m);
        out += ',';
        out += source;
        out += ',';
        out += std::to_string(i);
        out += ',';
        out += format_real(d.slot_lo(i));
        out += ',';
        out += format_real(d.slot_hi(i));
        out += ',';
        out += format_real(d[i]);
        out += '\n';
    }
}

inline constexpr std::string_view kDistributionsHeader = "m,source,slot_index,slot_lo,slot_hi,mass\n";
inline constexpr std::string_view kCurveHeader = "m,mean_p,std_p,mean_q,std_q,kl\n";

inline std::string distributions_csv(std::span<const CurveRecord> records) {
    std::string out(kDistributionsHeader);
    for (const auto& r : records) {
        append_distribution_rows(out, r.m, "P", r.p);
        append_distribution_rows(out, r.m, "Q", r.q);
    }
    return out;
}

inline std::string curve_csv(std::span<const CurvePoint> curve) {
    std::string out(kCurveHeader);
    for (const auto& c : curve) {
        out += std::to_string(c.m);
        for (double v : {c.mean_p, c.std_p, c.mean_q, c.std_q, c.kl}) {
            out += ',';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

struct DistributionSelector {
    std::optional<std::uint64_t> m;
    std::optional<std::string> source;
};

namespace detail {
inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> cells;
    while (true) {
        const auto comma = line.find(',');
        cells.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line = line.substr(comma + 1);
    }
    return cells;
}
}  // namespace detail

/// Reads one distribution from CSV text. The header must name slot_index and
/// mass; if the file also carries m/source columns (distributions.csv) and
/// holds more than one group, the selector must narrow it to one.
inline DiscreteDistribution parse_distribution_csv(std::string_view text,
                                                   const DistributionSelector& select = {}) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        if (!line.empty()) lines.push_back(line);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    }
    if (lines.empty()) throw ConfigError("distribution CSV is empty");
    const auto header = detail::split_csv_line(lines.front());
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };
    const auto slot_col = column("slot_index");
    const auto mass_col = column("mass");
    if (!slot_col || !mass_col) throw ConfigError("distribution CSV needs slot_index and mass columns");
    const auto m_col = column("m");
    const auto src_col = column("source");
    if (select.m && !m_col) throw ConfigError("distribution CSV has no m column to select on");
    if (select.source && !src_col) throw ConfigError("distribution CSV has no source column to select on");

    std::map<std::size_t, double> slots;
    std::optional<std::pair<std::string, std::string>> group;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto cells = detail::split_csv_line(lines[li]);
        if (cells.size() != header.size()) {
            throw ConfigError("distribution CSV line " + std::to_string(li + 1) + ": wrong cell count");
        }
        if (select.m && parse_uint(cells[*m_col], "m") != *select.m) continue;
        if (select.source && cells[*src_col] != *select.source) continue;
        const std::pair<std::string, std::string> key{m_col ? std::string(cells[*m_col]) : "",
                                                      src_col ? std::string(cells[*src_col]) : ""};
        if (!group) group = key;
        else if (*group != key) {
            throw ConfigError("distribution CSV holds several distributions; select with --m/--source");
        }
        const auto slot = parse_uint(cells[*slot_col], "slot_index");
        if (!slots.emplace(slot, parse_real(cells[*mass_col], "mass")).second) {
            throw ConfigError("distribution CSV repeats slot " + std::to_string(slot));
        }
    }
    if (slots.empty()) throw ConfigError("no distribution rows matched");
    std::vector<double> masses;
    for (const auto& [slot, mass] : slots) {
        if (slot != masses.size()) throw ConfigError("distribution CSV skips slot " + std::to_string(masses.size()));
        masses.push_back(mass);
    }
    try {
        return DiscreteDistribution(std::move(masses));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

inline nlohmann::json experiment_manifest(const ExperimentConfig& c,
                                          const std::vector<std::string>& outputs) {
    nlohmann::json config;
    config["task"] = task_name(c.task);
    if (auto* t = std::get_if<ConjunctionTask>(&c.task)) config["n"] = t->n;
    config["vc_dim"] = c.vc_dim;
    config["slots"] = c.slots;
    config["trials"] = c.trials;
    config["m_start"] = c.schedule.start;
    config["m_step"] = c.schedule.step;
    config["m_max"] = c.schedule.max;
    config["seed"] = c.seed;
    config["gt_mode"] = gt_mode_name(c.gt_mode);

    nlohmann::json j;
    j["command"] = "experiment";
    j["tool_version"] = kToolVersion;
    j["config"] = std::move(config);
    j["outputs"] = outputs;
    return j;
}

/// Runs the experiment and writes distributions.csv, curve.csv and
/// manifest.json into out_dir. Returns the result for callers that want it.
inline ExperimentResult write_experiment(const ExperimentConfig& config,
                                         const std::filesystem::path& out_dir, unsigned threads = 1) {
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    ExperimentResult result = run_experiment(config, threads);
    write_file_atomic(out_dir / "distributions.csv", distributions_csv(result.records));
    write_file_atomic(out_dir / "curve.csv", curve_csv(result.curve));
    const auto manifest = experiment_manifest(config, {"distributions.csv", "curve.csv"});
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

// ---------------------------------------------------------------------------
// Bound tables
// ---------------------------------------------------------------------------

struct BoundRequest {
    BoundKind kind = BoundKind::FiniteH;
    double log_h_size = std::log(1e9);
    std::uint64_t vc_dim = 1;
    std::vector<std::uint64_t> ms{22, 35, 100};
    std::size_t slots = 100;
    std::size_t grid_points = 1000;
    double grid_lo = -0.1;
    double grid_hi = 1.1;

    BoundSpec spec(std::uint64_t m) const {
        return kind == BoundKind::FiniteH ? BoundSpec::finite_h_log(log_h_size, m)
                                          : BoundSpec::vc(vc_dim, m);
    }
};

struct BoundTables {
    std::string summary;        // m,cutoff,point_mass
    std::string curve;          // m,eps,cdf,density
    std::string distributions;  // distributions.csv layout, source Q
};

/// CDF and density on an evenly spaced grid over [grid_lo, grid_hi], plus
/// the per-m cutoff/atom summary and Q_m. The density cell is left empty at
/// eps = 1 where only the atom lives.
inline BoundTables bound_tables(const BoundRequest& req) {
    if (req.ms.empty()) throw ConfigError("bound: empty m list");
    if (req.grid_points < 2) throw ConfigError("bound: need at least 2 grid points");
    if (req.slots < 2) throw ConfigError("bound: slots must be >= 2");
    BoundTables t;
    t.summary = "m,log_capacity,cutoff,point_mass\n";
    t.curve = "m,eps,cdf,density\n";
    t.distributions = std::string(kDistributionsHeader);
    for (std::uint64_t m : req.ms) {
        BoundSpec spec = [&] {
            try {
                return req.spec(m);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }();
        t.summary += std::to_string(m) + ',' + format_real(spec.log_capacity()) + ',' +
                     format_real(cutoff(spec)) + ',' + format_real(bound_point_mass(spec)) + '\n';
        for (std::size_t j = 0; j < req.grid_points; ++j) {
            const double eps = req.grid_lo + (req.grid_hi - req.grid_lo) * static_cast<double>(j) /
                                                 static_cast<double>(req.grid_points - 1);
            t.curve += std::to_string(m) + ',' + format_real(eps) + ',' + format_real(bound_cdf(spec, eps)) + ',';
            if (eps != 1.0) t.curve += format_real(bound_density(spec, eps));
            t.curve += '\n';
        }
        append_distribution_rows(t.distributions, m, "Q", discretize_bound(spec, req.slots));
    }
    return t;
}

inline nlohmann::json bound_manifest(const BoundRequest& req, const std::vector<std::string>& outputs) {
    nlohmann::json config;
    config["kind"] = req.kind == BoundKind::FiniteH ? "finite-h" : "vc";
    if (req.kind == BoundKind::FiniteH) config["log_h_size"] = format_real(req.log_h_size);
    else config["vc_dim"] = req.vc_dim;
    config["m_list"] = req.ms;
    config["slots"] = req.slots;
    config["grid_points"] = req.grid_points;
    nlohmann::json j;
    j["command"] = "bound";
    j["tool_version"] = kToolVersion;
    j["config"] = std::move(config);
    j["outputs"] = outputs;
    return j;
}

inline void write_bound(const BoundRequest& req, const std::filesystem::path& out_dir) {
    const BoundTables t = bound_tables(req);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());
    write_file_atomic(out_dir / "bound_summary.csv", t.summary);
    write_file_atomic(out_dir / "bound_curve.csv", t.curve);
    write_file_atomic(out_dir / "bound_distributions.csv", t.distributions);
    write_file_atomic(out_dir / "manifest.json",
                      bound_manifest(req, {"bound_summary.csv", "bound_curve.csv", "bound_distributions.csv"})
                              .dump(2) +
                          "\n");
}

}  // namespace paclab

// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "qelm/pipeline.hpp"

namespace qelm::pipeline {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
    v = trim(v);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
        throw ConfigError(std::string(key) + ": expected a nonnegative integer, got '" + std::string(v) + "'");
    return out;
}

double parse_num(std::string_view key, std::string_view v) {
    try {
        return parse_double(v);
    } catch (const ConfigError&) {
        throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(trim(v)) + "'");
    }
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
    v = trim(v);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') throw ConfigError(std::string(key) + ": unterminated list");
        v = v.substr(1, v.size() - 2);
    }
    std::vector<double> out;
    while (!trim(v).empty()) {
        const auto comma = v.find(',');
        out.push_back(parse_num(key, v.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

// Every config key with its setter and getter, in one table.
struct Field {
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field u64_field(T RunConfig::*m) {
    return {[m](RunConfig& c, std::string_view v) { c.*m = static_cast<T>(parse_u64("", v)); },
            [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

Field num_field(double RunConfig::*m) {
    return {[m](RunConfig& c, std::string_view v) { c.*m = parse_num("", v); },
            [m](const RunConfig& c) { return format_double(c.*m); }};
}

Field inst_field(double noise::InstrumentModel::*m) {
    return {[m](RunConfig& c, std::string_view v) { c.instrument.*m = parse_num("", v); },
            [m](const RunConfig& c) { return format_double(c.instrument.*m); }};
}

const std::map<std::string, Field, std::less<>>& fields() {
    static const std::map<std::string, Field, std::less<>> table = {
        {"mode",
         {[](RunConfig& c, std::string_view v) { c.mode = preprocess::parse_mode(trim(v)); },
          [](const RunConfig& c) { return std::string(preprocess::mode_name(c.mode)); }}},
        {"dataset.path",
         {[](RunConfig& c, std::string_view v) { c.dataset_path = std::string(trim(v)); },
          [](const RunConfig& c) { return c.dataset_path; }}},
        {"dataset.n", u64_field(&RunConfig::dataset_n)},
        {"dataset.seed", u64_field(&RunConfig::dataset_seed)},
        {"patches",
         {[](RunConfig& c, std::string_view v) { c.patches = std::string(trim(v)); },
          [](const RunConfig& c) {
              if (c.patches.empty() || c.patches == "jwst" || c.patches == "taurex") return c.patches;
              return join(c.layout().edges);
          }}},
        {"pca.components", u64_field(&RunConfig::components)},
        {"filter.components", u64_field(&RunConfig::filter_components)},
        {"reservoir.seed", u64_field(&RunConfig::reservoir_seed)},
        {"shots",
         {[](RunConfig& c, std::string_view v) { c.shots = quantum::Shots::parse(v); },
          [](const RunConfig& c) { return c.shots.to_string(); }}},
        {"sampling.seed", u64_field(&RunConfig::sampling_seed)},
        {"noise.seed", u64_field(&RunConfig::noise_seed)},
        {"split.train_fraction", num_field(&RunConfig::train_fraction)},
        {"split.seed", u64_field(&RunConfig::split_seed)},
        {"split.train_size", u64_field(&RunConfig::train_size)},
        {"threshold", num_field(&RunConfig::threshold)},
        {"tolerance.thresholds",
         {[](RunConfig& c, std::string_view v) { c.tolerance_thresholds = parse_list("tolerance.thresholds", v); },
          [](const RunConfig& c) { return join(c.tolerance_thresholds); }}},
        {"bootstrap.seed", u64_field(&RunConfig::bootstrap_seed)},
        {"bootstrap.resamples", u64_field(&RunConfig::bootstrap_resamples)},
        {"bootstrap.level", num_field(&RunConfig::bootstrap_level)},
        {"readout.cutoff", num_field(&RunConfig::cutoff)},
        {"instrument.star_radius", inst_field(&noise::InstrumentModel::star_radius)},
        {"instrument.star_temp", inst_field(&noise::InstrumentModel::star_temp)},
        {"instrument.distance", inst_field(&noise::InstrumentModel::distance)},
        {"instrument.aperture", inst_field(&noise::InstrumentModel::aperture)},
        {"instrument.throughput", inst_field(&noise::InstrumentModel::throughput)},
        {"instrument.exposure", inst_field(&noise::InstrumentModel::exposure)},
        {"instrument.floor_ppm", inst_field(&noise::InstrumentModel::floor_ppm)},
    };
    return table;
}

} // namespace

KeyValues parse_ini(std::string_view text) {
    KeyValues kv;
    std::string section;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[' && line.find('=') == std::string_view::npos) {
            if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        if (!kv.emplace(key, std::string(trim(line.substr(eq + 1)))).second)
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    return kv;
}

std::vector<double> RunConfig::default_thresholds() {
    std::vector<double> t;
    for (int i = 0; i <= 20; ++i) t.push_back(i);
    return t;
}

preprocess::PatchLayout RunConfig::layout() const {
    if (patches.empty())
        return mode == preprocess::Mode::taurex ? preprocess::PatchLayout::taurex() : preprocess::PatchLayout::jwst();
    if (patches == "jwst") return preprocess::PatchLayout::jwst();
    if (patches == "taurex") return preprocess::PatchLayout::taurex();
    preprocess::PatchLayout l{parse_list("patches", patches)};
    l.validate();
    return l;
}

void RunConfig::set(std::string_view key, std::string_view value) {
    const auto& f = fields();
    const auto it = f.find(key);
    if (it == f.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
    try {
        it->second.set(*this, value);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

void RunConfig::validate() const {
    if (!dataset_path.empty() && !std::filesystem::exists(dataset_path))
        throw ConfigError("dataset.path '" + dataset_path + "' does not exist");
    if (dataset_path.empty() && dataset_n == 0) throw ConfigError("dataset.n must be at least 1");
    if (components == 0) throw ConfigError("pca.components must be at least 1");
    if (filter_components == 0) throw ConfigError("filter.components must be at least 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("split.train_fraction must lie in (0, 1)");
    if (train_size != 0 && train_size < forward::kNumParams)
        throw ConfigError("split.train_size below the number of targets (" + std::to_string(forward::kNumParams) + ")");
    if (!(threshold >= 0.0)) throw ConfigError("threshold must be nonnegative");
    for (std::size_t i = 0; i < tolerance_thresholds.size(); ++i)
        if (!(tolerance_thresholds[i] >= 0.0) || (i && tolerance_thresholds[i] < tolerance_thresholds[i - 1]))
            throw ConfigError("tolerance.thresholds must be nonnegative and ascending");
    if (bootstrap_resamples < 100) throw ConfigError("bootstrap.resamples must be at least 100");
    if (!(bootstrap_level > 0.0 && bootstrap_level < 1.0)) throw ConfigError("bootstrap.level must lie in (0, 1)");
    if (!(cutoff >= 0.0 && cutoff < 1.0)) throw ConfigError("readout.cutoff must lie in [0, 1)");
    instrument.validate();
    layout().validate();
    if (mode == preprocess::Mode::taurex && !(patches.empty() || patches == "taurex")) {
        const auto l = layout();
        if (l.edges.front() < forward::kMinWavelength || l.edges.back() > forward::kMaxWavelength)
            throw ConfigError("patch edges outside the dataset range");
    }
}

KeyValues RunConfig::to_map() const {
    KeyValues kv;
    for (const auto& [k, f] : fields()) kv[k] = f.get(*this);
    return kv;
}

RunConfig RunConfig::from_map(const KeyValues& kv) {
    RunConfig c;
    for (const auto& [k, v] : kv) c.set(k, v);
    return c;
}

std::string RunConfig::canonical() const {
    std::string s;
    for (const auto& [k, v] : to_map()) s += k + "=" + v + "\n";
    return s;
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

std::uint64_t RunConfig::fingerprint(std::string_view excluded_key) const {
    std::string s;
    for (const auto& [k, v] : to_map())
        if (k != excluded_key) s += k + "=" + v + "\n";
    return fnv1a(s);
}

RunConfig parse_config(std::string_view text) { return RunConfig::from_map(parse_ini(text)); }

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig c = parse_config(ss.str());
    // A relative dataset path is taken relative to the config file.
    if (!c.dataset_path.empty() && std::filesystem::path(c.dataset_path).is_relative())
        c.dataset_path = (path.parent_path() / c.dataset_path).lexically_normal().string();
    return c;
}

} // namespace qelm::pipeline

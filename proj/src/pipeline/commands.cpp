// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qelm/cli.hpp"

namespace qelm::cli {

namespace fs = std::filesystem;
using forward::kNumParams;
using forward::kParamNames;

int exit_code(const Error& e) noexcept { return static_cast<int>(e.kind()); }

namespace {

void apply_overrides(pipeline::RunConfig& cfg, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
        cfg.set(o.substr(0, eq), o.substr(eq + 1));
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", 100.0 * fraction);
    return buf;
}

std::string safe_name(std::string s) {
    for (auto& c : s)
        if (c == '/' || c == ' ') c = '_';
    return s;
}

} // namespace

std::string accuracy_table(const std::array<double, kNumParams>& accuracy, const std::string& title) {
    std::string s = title + "\n";
    s += "Parameter  Accuracy (%)\n";
    for (std::size_t p = 0; p < kNumParams; ++p) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-9s  %12s\n", std::string(kParamNames[p]).c_str(), percent(accuracy[p]).c_str());
        s += buf;
    }
    return s;
}

void cmd_generate(const GenerateArgs& args, std::ostream& log) {
    if (args.n == 0) throw ConfigError("--n must be at least 1");
    if (args.out.empty()) throw ConfigError("--out is required");
    const auto ds = forward::generate_dataset(args.n, args.seed);
    if (args.out.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(args.out.parent_path(), ec);
    }
    forward::write_dataset(ds, args.out);
    log << "seed=" << args.seed << " n=" << args.n << " path=" << args.out.string() << '\n';
}

fs::path cmd_run(const RunArgs& args, std::ostream& log) {
    if (args.config && args.manifest) throw ConfigError("give either --config or --manifest, not both");
    pipeline::RunConfig cfg;
    std::optional<pipeline::Manifest> manifest;
    if (args.manifest) {
        manifest = pipeline::read_manifest(*args.manifest);
        cfg = manifest->config;
        if (!args.overrides.empty()) throw ConfigError("--set cannot be combined with --manifest");
    } else if (args.config) {
        cfg = pipeline::load_config(*args.config);
    }
    apply_overrides(cfg, args.overrides);
    cfg.validate();

    const fs::path dir = args.out ? *args.out : pipeline::default_output_root() / ("run-" + hex64(cfg.hash()).substr(0, 12));
    pipeline::prepare_output_dir(dir, args.force);

    const auto ds = pipeline::load_dataset(cfg);
    const auto result = pipeline::run_pipeline(cfg, ds);
    pipeline::write_run_dir(result, dir, true);

    log << accuracy_table(result.metrics.accuracy,
                          "mode=" + std::string(preprocess::mode_name(cfg.mode)) + " shots=" + cfg.shots.to_string() +
                              " train=" + std::to_string(result.split.train.size()) +
                              " test=" + std::to_string(result.split.test.size()));
    log << "run directory: " << dir.string() << '\n';

    if (manifest) {
        if (manifest->dataset_checksum != result.dataset_checksum)
            throw NumericalError("replay: dataset checksum differs from the manifest");
        if (manifest->p_train_checksum != result.p_train_checksum || manifest->p_test_checksum != result.p_test_checksum) {
            const std::string isa(simd::isa_name(simd::active_kernels().isa));
            throw NumericalError("replay: probability matrix checksums differ from the manifest (recorded with " +
                                 manifest->simd + ", replayed with " + isa + ")");
        }
        log << "replay: probability matrix checksums match the manifest\n";
    }
    return dir;
}

fs::path cmd_sweep(const SweepArgs& args, std::ostream& log) {
    pipeline::RunConfig cfg;
    if (args.config) cfg = pipeline::load_config(*args.config);
    apply_overrides(cfg, args.overrides);
    cfg.validate();
    const std::string key = eval::sweep_key(args.variable);
    const auto values = eval::expand_values(args.values);

    const fs::path dir = args.out ? *args.out
                                  : pipeline::default_output_root() /
                                        ("sweep-" + args.variable + "-" + hex64(cfg.fingerprint(key)).substr(0, 12));
    pipeline::prepare_output_dir(dir, args.force);
    const auto ds = pipeline::load_dataset(cfg);

    eval::SweepResult res;
    if (args.variable == "threshold") {
        // one run, evaluated at every threshold
        std::vector<double> thresholds;
        for (const auto& v : values) thresholds.push_back(parse_double(v));
        if (!std::is_sorted(thresholds.begin(), thresholds.end())) throw ConfigError("thresholds must be ascending");
        const auto run = pipeline::run_pipeline(cfg, ds);
        pipeline::write_run_dir(run, dir / "run", args.force);
        res = eval::tolerance_sweep(run.metrics, thresholds);
        for (auto& pt : res.points) {
            pt.fingerprint = cfg.fingerprint(key);
            pt.config_hash = cfg.hash();
        }
    } else {
        res = eval::run_sweep(cfg, ds, args.variable, values, [&](const std::string& v, const pipeline::RunResult& r) {
            pipeline::write_run_dir(r, dir / safe_name(args.variable + "-" + v), args.force);
            log << args.variable << '=' << v << " done\n";
        });
    }
    if (!res.consistent()) throw NumericalError("sweep points differ in more than the swept variable");

    std::string csv = "value,parameter,accuracy\n";
    std::string plot = args.variable;
    for (auto n : kParamNames) plot += "," + std::string(n);
    plot += "\n";
    for (const auto& pt : res.points) {
        plot += pt.value;
        for (std::size_t p = 0; p < kNumParams; ++p) {
            csv += pt.value + "," + std::string(kParamNames[p]) + "," + format_double(pt.accuracy[p]) + "\n";
            plot += "," + percent(pt.accuracy[p]);
        }
        plot += "\n";
    }
    write_text(dir / "sweep.csv", csv);
    write_text(dir / "plot.csv", plot);

    nlohmann::json fp;
    fp["variable"] = args.variable;
    fp["key"] = key;
    fp["fingerprint"] = hex64(res.points.front().fingerprint);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& pt : res.points)
        pts.push_back({{"value", pt.value}, {"config_hash", hex64(pt.config_hash)}, {"fingerprint", hex64(pt.fingerprint)}});
    fp["points"] = std::move(pts);
    fp["base_config"] = cfg.to_map();
    write_text(dir / "fingerprint.json", fp.dump(2) + "\n");

    log << "variable " << args.variable << ", " << res.points.size() << " points\n" << plot;
    log << "sweep directory: " << dir.string() << '\n';
    return dir;
}

readout::MetricsReport read_predictions(const fs::path& path, double threshold) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "sample_id,parameter,true,predicted")
        throw IoError(path.string() + ": unexpected header");
    std::map<std::size_t, std::array<std::array<double, 2>, kNumParams>> rows;
    std::map<std::size_t, std::size_t> seen;
    std::vector<std::size_t> order;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string id, name, t, p;
        if (!std::getline(ss, id, ',') || !std::getline(ss, name, ',') || !std::getline(ss, t, ',') ||
            !std::getline(ss, p))
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 4 columns");
        std::size_t idx = kNumParams;
        for (std::size_t k = 0; k < kNumParams; ++k)
            if (kParamNames[k] == name) idx = k;
        if (idx == kNumParams) throw IoError(path.string() + ":" + std::to_string(line_no) + ": unknown parameter");
        std::size_t sid = 0;
        try {
            sid = std::stoull(id);
            rows[sid][idx] = {parse_double(t), parse_double(p)};
        } catch (const std::exception&) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number");
        }
        if (seen[sid]++ == 0) order.push_back(sid);
    }
    if (order.empty()) throw IoError(path.string() + ": no predictions");
    Eigen::MatrixXd truth(static_cast<Eigen::Index>(kNumParams), static_cast<Eigen::Index>(order.size()));
    Eigen::MatrixXd pred(truth.rows(), truth.cols());
    for (std::size_t j = 0; j < order.size(); ++j) {
        if (seen[order[j]] != kNumParams) throw IoError(path.string() + ": incomplete sample " + std::to_string(order[j]));
        for (std::size_t p = 0; p < kNumParams; ++p) {
            truth(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j)) = rows[order[j]][p][0];
            pred(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j)) = rows[order[j]][p][1];
        }
    }
    return readout::evaluate(truth, pred, order, threshold);
}

void cmd_report(const ReportArgs& args, std::ostream& log) {
    const fs::path& dir = args.run_dir;
    for (const char* f : {"manifest.json", "predictions.csv", "metrics.json"})
        if (!fs::exists(dir / f)) throw IoError("incomplete run directory " + dir.string() + ": missing " + f);
    const auto manifest = pipeline::read_manifest(dir / "manifest.json");
    const auto& cfg = manifest.config;
    const auto report = read_predictions(dir / "predictions.csv", cfg.threshold);

    log << accuracy_table(report.accuracy, "mode=" + std::string(preprocess::mode_name(cfg.mode)) +
                                               " shots=" + cfg.shots.to_string() + " threshold=" +
                                               format_double(cfg.threshold) + "%");

    const fs::path out = dir / "report";
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create " + out.string());

    std::string table = "parameter,accuracy_percent\n";
    for (std::size_t p = 0; p < kNumParams; ++p)
        table += std::string(kParamNames[p]) + "," + percent(report.accuracy[p]) + "\n";
    write_text(out / "accuracy_table.csv", table);

    const auto grid = forward::build_grid(forward::reference_bounds());
    const auto boot = eval::bootstrap_predictions(report, grid, cfg.bootstrap_resamples, cfg.bootstrap_level,
                                                  cfg.bootstrap_seed);
    std::string bcsv = "parameter,true_value,count,median,lower,upper\n";
    for (std::size_t p = 0; p < kNumParams; ++p)
        for (const auto& iv : boot.intervals[p])
            bcsv += std::string(kParamNames[p]) + "," + format_double(iv.true_value) + "," + std::to_string(iv.count) +
                    "," + format_double(iv.median) + "," + format_double(iv.lower) + "," + format_double(iv.upper) + "\n";
    write_text(out / "bootstrap.csv", bcsv);

    const auto tol = eval::tolerance_sweep(report, cfg.tolerance_thresholds);
    std::string tcsv = "threshold,parameter,accuracy\n";
    std::string tplot = "threshold";
    for (auto n : kParamNames) tplot += "," + std::string(n);
    tplot += "\n";
    for (const auto& pt : tol.points) {
        tplot += pt.value;
        for (std::size_t p = 0; p < kNumParams; ++p) {
            tcsv += pt.value + "," + std::string(kParamNames[p]) + "," + format_double(pt.accuracy[p]) + "\n";
            tplot += "," + percent(pt.accuracy[p]);
        }
        tplot += "\n";
    }
    write_text(out / "tolerance.csv", tcsv);
    write_text(out / "tolerance_plot.csv", tplot);
    log << "report files: " << out.string() << '\n';
}

} // namespace qelm::cli

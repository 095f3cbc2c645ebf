#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qelm/cli.hpp"

using namespace qelm;
using namespace qelm::pipeline;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string l; std::getline(in, l);) ++n;
    return n;
}

RunConfig small_config() {
    RunConfig c;
    c.dataset_n = 240;
    return c;
}

} // namespace

TEST_CASE("parse_ini: sections, comments, duplicates") {
    const auto kv = parse_ini("# top\nmode = fjwst\n\n[pca]\ncomponents = 4 \n; other\n[instrument]\nexposure=100\n");
    CHECK(kv.at("mode") == "fjwst");
    CHECK(kv.at("pca.components") == "4");
    CHECK(kv.at("instrument.exposure") == "100");
    CHECK(kv.size() == 3);
    CHECK_THROWS_AS(parse_ini("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_ini("[pca\n"), ConfigError);
    CHECK_THROWS_AS(parse_ini("novalue\n"), ConfigError);
    CHECK(parse_ini("pca.components = 3").at("pca.components") == "3");
}

TEST_CASE("parse_config: values, unknown keys, bad values") {
    const auto c = parse_config("mode = njwst\nshots = inf\n[split]\ntrain_fraction = 0.8\n");
    CHECK(c.mode == preprocess::Mode::njwst);
    CHECK(c.shots.is_infinite());
    CHECK(c.train_fraction == 0.8);
    CHECK(c.components == 5);
    CHECK_THROWS_AS(parse_config("pca.component = 5"), ConfigError);
    CHECK_THROWS_AS(parse_config("mode = hubble"), ConfigError);
    CHECK_THROWS_AS(parse_config("shots = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config("pca.components = five"), ConfigError);
    RunConfig bad;
    bad.train_fraction = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = RunConfig{};
    bad.dataset_path = "/nonexistent/ds.csv";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("config hash and sweep fingerprint") {
    RunConfig a, b;
    CHECK(a.hash() == b.hash());
    CHECK(RunConfig::from_map(a.to_map()).hash() == a.hash());
    b.set("pca.components", "6");
    CHECK(a.hash() != b.hash());
    CHECK(a.fingerprint("pca.components") == b.fingerprint("pca.components"));
    CHECK(a.fingerprint("shots") != b.fingerprint("shots"));
    b.set("pca.components", " 5 ");
    CHECK(a.hash() == b.hash());
    CHECK_THROWS_AS(b.set("nope", "1"), ConfigError);
}

TEST_CASE("load_config resolves a relative dataset path") {
    TempDir t("qelm_cfg_test");
    fs::create_directories(t.path / "data");
    std::ofstream(t.path / "data" / "ds.csv") << "x";
    std::ofstream(t.path / "run.ini") << "[dataset]\npath = data/ds.csv\n";
    const auto c = load_config(t.path / "run.ini");
    CHECK(fs::path(c.dataset_path) == (t.path / "data" / "ds.csv").lexically_normal());
    CHECK_THROWS_AS(load_config(t.path / "missing.ini"), IoError);
}

TEST_CASE("run_pipeline: shapes and determinism") {
    const auto cfg = small_config();
    const auto ds = load_dataset(cfg);
    CHECK(ds.size() == 240);
    const auto a = run_pipeline(cfg, ds, {true});
    CHECK(a.split.train.size() == 180);
    CHECK(a.split.test.size() == 60);
    CHECK(a.output_dim == 288);
    CHECK(a.p_train->rows() == 288);
    CHECK(a.p_train->cols() == 180);
    CHECK(a.metrics.errors.cols() == 60);
    for (Eigen::Index j = 0; j < a.p_train->cols(); ++j)
        for (Eigen::Index b = 0; b < 9; ++b) CHECK(std::abs(a.p_train->col(j).segment(32 * b, 32).sum() - 1) < 1e-10);
    const auto b = run_pipeline(cfg, ds);
    CHECK(metrics_json(a) == metrics_json(b));
    CHECK(a.p_test_checksum == b.p_test_checksum);

    auto other = cfg;
    other.sampling_seed = 99;
    CHECK(run_pipeline(other, ds).p_train_checksum != a.p_train_checksum);

    auto bad = cfg;
    bad.components = 40; // more than a patch has bins
    try {
        run_pipeline(bad, ds);
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("preprocess") != std::string::npos);
    }
}

TEST_CASE("every mode runs") {
    const auto ds = load_dataset(small_config());
    for (const char* m : {"taurex", "jwst", "njwst", "fjwst"}) {
        auto cfg = small_config();
        cfg.set("mode", m);
        cfg.set("shots", "inf");
        const auto r = run_pipeline(cfg, ds);
        CAPTURE(m);
        CHECK(r.output_dim == (std::string(m) == "taurex" ? 15 * 32 : 9 * 32));
    }
}

TEST_CASE("run directory, manifest replay and report") {
    TempDir t("qelm_cli_test");
    std::ostringstream log;

    cli::GenerateArgs g;
    g.n = 240;
    g.seed = 7;
    g.out = t.path / "ds.csv";
    cli::cmd_generate(g, log);
    CHECK(log.str().find("seed=7 n=240") != std::string::npos);

    cli::RunArgs r;
    r.overrides = {"dataset.path=" + g.out.string(), "shots=1000"};
    r.out = t.path / "run";
    const auto dir = cli::cmd_run(r, log);
    for (const char* f : {"bank.json", "weights.json", "metrics.csv", "predictions.csv", "metrics.json", "config.ini",
                          "manifest.json"})
        CHECK(fs::exists(dir / f));
    CHECK(count_lines(dir / "metrics.csv") == 1 + 7 * 60);
    CHECK_THROWS_AS(cli::cmd_run(r, log), IoError);

    cli::RunArgs replay;
    replay.manifest = dir / "manifest.json";
    replay.out = t.path / "replay";
    const auto dir2 = cli::cmd_run(replay, log);
    CHECK(log.str().find("checksums match") != std::string::npos);
    CHECK(slurp(dir / "metrics.json") == slurp(dir2 / "metrics.json"));
    CHECK(parse_config(slurp(dir / "config.ini")).hash() == read_manifest(dir / "manifest.json").config_hash);

    cli::cmd_report({dir}, log);
    CHECK(count_lines(dir / "report" / "bootstrap.csv") == 1 + 70);
    CHECK(count_lines(dir / "report" / "accuracy_table.csv") == 1 + 7);
    CHECK(fs::exists(dir / "report" / "tolerance.csv"));
    const auto back = cli::read_predictions(dir / "predictions.csv", 5.0);
    const auto run = read_manifest(dir / "manifest.json");
    CHECK(back.sample_ids.size() == 60);
    CHECK(run.config.shots.count == 1000);

    fs::create_directories(t.path / "empty");
    CHECK_THROWS_AS(cli::cmd_report({t.path / "empty"}, log), IoError);

    std::ofstream(dir / "manifest.json", std::ios::app) << " ";
    auto text = slurp(dir / "manifest.json");
    text.replace(text.find("\"shots\": \"1000\""), 15, "\"shots\": \"2000\"");
    std::ofstream(dir / "manifest.json") << text;
    CHECK_THROWS_AS(read_manifest(dir / "manifest.json"), IoError);
}

TEST_CASE("sweep command writes one row per value") {
    TempDir t("qelm_sweep_test");
    std::ostringstream log;
    cli::SweepArgs s;
    s.overrides = {"dataset.n=240"};
    s.variable = "shots";
    s.values = "1000,20000,inf";
    s.out = t.path / "sweep";
    const auto dir = cli::cmd_sweep(s, log);
    CHECK(count_lines(dir / "sweep.csv") == 1 + 3 * 7);
    CHECK(count_lines(dir / "plot.csv") == 1 + 3);
    CHECK(fs::exists(dir / "fingerprint.json"));
    CHECK(fs::exists(dir / "shots-inf" / "manifest.json"));

    s.variable = "threshold";
    s.values = "0..20";
    s.out = t.path / "tol";
    const auto tol = cli::cmd_sweep(s, log);
    CHECK(count_lines(tol / "sweep.csv") == 1 + 21 * 7);
    CHECK(fs::exists(tol / "run" / "manifest.json"));

    s.variable = "alpha";
    CHECK_THROWS_AS(cli::cmd_sweep(s, log), ConfigError);
}

TEST_CASE("exit codes") {
    CHECK(cli::exit_code(ConfigError("x")) == 2);
    CHECK(cli::exit_code(IoError("x")) == 3);
    CHECK(cli::exit_code(NumericalError("x")) == 4);
    std::ostringstream log;
    cli::GenerateArgs g;
    g.n = 0;
    g.out = "x.csv";
    CHECK_THROWS_AS(cli::cmd_generate(g, log), ConfigError);
}

TEST_CASE("accuracy_table layout") {
    const std::array<double, 7> acc{0.9, 0.8, 0.5, 0.95, 0.6, 1.0, 0.999};
    const auto t = cli::accuracy_table(acc, "demo");
    CHECK(t.find("demo") != std::string::npos);
    CHECK(t.find("CH4") != std::string::npos);
    CHECK(t.find("90.0") != std::string::npos);
    CHECK(t.find("99.9") != std::string::npos);
}

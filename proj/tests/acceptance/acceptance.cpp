// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/oracles.hpp"
#include "qelm/cli.hpp"

using namespace qelm;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string pct(const std::array<double, 7>& acc) {
    std::string s;
    for (std::size_t p = 0; p < 7; ++p)
        s += (p ? " " : "") + std::string(forward::kParamNames[p]) + "=" + fmt("%.1f", 100 * acc[p]);
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double rel_fro(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / b.norm(); }

// Shared runs on the default desk-scale setup (D = 4080, 75/25, M = 5).
struct Shared {
    pipeline::RunConfig base;
    forward::SpectralDataset ds;
    pipeline::RunResult finite;   // 20000 shots, matrices kept
    pipeline::RunResult infinite; // exact probabilities
    double finite_seconds = 0;
};

Shared& shared() {
    static Shared s = [] {
        Shared out;
        out.ds = pipeline::load_dataset(out.base);
        const auto t0 = Clock::now();
        out.finite = pipeline::run_pipeline(out.base, out.ds, {true});
        out.finite_seconds = seconds_since(t0);
        auto inf = out.base;
        inf.shots = quantum::Shots::infinite();
        out.infinite = pipeline::run_pipeline(inf, out.ds);
        return out;
    }();
    return s;
}

Outcome criterion1() {
    using namespace quantum;
    double worst = 0;
    const auto t0 = Clock::now();
    for (std::size_t Q = 1; Q <= 3; ++Q)
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto res = ReservoirConfig::random(Q, derive_seed(1, Q, seed));
            Rng rng(derive_seed(2, Q, seed));
            std::uniform_real_distribution<double> u(0, 1);
            std::vector<double> x(Q), angles(Q);
            AngleEncoder enc;
            enc.lo.assign(Q, 0.0);
            enc.hi.assign(Q, 1.0);
            for (std::size_t k = 0; k < Q; ++k) x[k] = u(rng), angles[k] = enc.angle(k, x[k]);
            for (const auto* kernels : {&simd::scalar_kernels(), &simd::active_kernels()}) {
                StateVector s(Q);
                encode(s, x, enc, *kernels);
                evolve_reservoir(s, res, *kernels);
                const oracle::Vec v = oracle::reservoir(res.alpha, res.beta) * oracle::encoder(angles, Q) *
                                      oracle::zero_state(Q);
                for (std::size_t i = 0; i < s.size(); ++i)
                    worst = std::max(worst, std::abs(s[i] - v(static_cast<Eigen::Index>(i))));
            }
        }
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && secs < 1.0,
            "max amplitude error " + fmt("%.2e", worst) + " (<= 1e-12) over Q = 1..3, 120 circuits in " +
                fmt("%.3f", secs) + " s (< 1 s)"};
}

Outcome criterion2() {
    pipeline::RunConfig cfg;
    cfg.dataset_n = 1000;
    cfg.shots = quantum::Shots::infinite();
    const auto ds = pipeline::load_dataset(cfg);
    const auto r = pipeline::run_pipeline(cfg, ds, {true});
    double worst = 0;
    std::size_t cols = 0, blocks = 0;
    for (const auto* P : {&*r.p_train, &*r.p_test})
        for (Eigen::Index j = 0; j < P->cols(); ++j, ++cols) {
            Eigen::Index row = 0;
            for (const auto& res : r.bank.reservoirs) {
                const auto n = Eigen::Index{1} << res.qubits;
                worst = std::max(worst, std::abs(P->col(j).segment(row, n).sum() - 1.0));
                row += n;
                ++blocks;
            }
        }
    return {cols == 1000 && worst <= 1e-10, std::to_string(blocks) + " blocks over " + std::to_string(cols) +
                                               " spectra, max |sum - 1| = " + fmt("%.2e", worst) + " (<= 1e-10)"};
}

Outcome criterion3() {
    const auto& s = shared();
    const Eigen::MatrixXd& P = *s.finite.p_train;
    const Eigen::MatrixXd& Y = *s.finite.y_train;
    const auto Pp = readout::pseudoinverse(P, s.base.cutoff);
    const double e1 = rel_fro(P * Pp * P, P);
    const double e2 = rel_fro(Pp * P * Pp, Pp);

    const Eigen::MatrixXd& W = s.finite.weights.W;
    const double trained = (W * P - Y).norm();
    Rng rng(derive_seed(3, 0));
    std::normal_distribution<double> z;
    const double scale = W.norm() / std::sqrt(static_cast<double>(W.size()));
    double best_random = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
        Eigen::MatrixXd R(W.rows(), W.cols());
        for (Eigen::Index i = 0; i < R.size(); ++i) R.data()[i] = scale * z(rng);
        best_random = std::min(best_random, (R * P - Y).norm());
    }
    const bool shape = P.rows() == 288 && P.cols() == 3060;
    return {shape && e1 <= 1e-8 && e2 <= 1e-8 && trained < best_random,
            std::to_string(P.rows()) + "x" + std::to_string(P.cols()) + " P: |PP+P-P|/|P| = " + fmt("%.2e", e1) +
                ", |P+PP+-P+|/|P+| = " + fmt("%.2e", e2) + " (<= 1e-8); residual " + fmt("%.4g", trained) +
                " vs best of 100 random maps " + fmt("%.4g", best_random)};
}

Outcome criterion4() {
    const auto& s = shared();
    const auto& w = s.finite.weights;
    const Eigen::MatrixXd& P = *s.finite.p_train;
    // The trained predictor acts on probability columns; compare against the
    // floating-point scale |W| |p| of each product.
    double worst = 0;
    Rng rng(derive_seed(4, 0));
    std::uniform_int_distribution<Eigen::Index> pick(0, P.cols() - 1);
    std::uniform_real_distribution<double> coef(-3, 3);
    const Eigen::MatrixXd absW = w.W.cwiseAbs();
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd a = P.col(pick(rng)), b = P.col(pick(rng));
        const double c = coef(rng);
        Eigen::MatrixXd ab(P.rows(), 3);
        ab << a + b, c * a, a;
        Eigen::MatrixXd parts(P.rows(), 1);
        parts << b;
        const auto out = readout::predict(w, ab);
        const auto pb = readout::predict(w, parts);
        const double scale = (absW * (a.cwiseAbs() + b.cwiseAbs())).maxCoeff() * (1 + std::abs(c));
        worst = std::max(worst, (out.col(0) - (out.col(2) + pb.col(0))).cwiseAbs().maxCoeff() / scale);
        worst = std::max(worst, (out.col(1) - c * out.col(2)).cwiseAbs().maxCoeff() / scale);
    }

    // Single-qubit channel on mixtures against the density-matrix oracle.
    using namespace quantum;
    double dm_worst = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto res = ReservoirConfig::random(1, derive_seed(5, seed));
        Rng r(derive_seed(6, seed));
        std::uniform_real_distribution<double> u(0, kTwoPi), wgt(0, 1);
        const double t1 = u(r), t2 = u(r), mix = wgt(r);
        auto lib = [&](double theta) {
            StateVector st(1);
            apply_rx(st, 0, theta);
            evolve_reservoir(st, res);
            return exact_probabilities(st);
        };
        const auto p1 = lib(t1), p2 = lib(t2);
        const oracle::Vec v1 = oracle::rx(t1) * oracle::zero_state(1);
        const oracle::Vec v2 = oracle::rx(t2) * oracle::zero_state(1);
        const oracle::Mat rho = mix * v1 * v1.adjoint() + (1 - mix) * v2 * v2.adjoint();
        const auto out = oracle::povm_after(oracle::reservoir(res.alpha, res.beta), rho);
        for (int m = 0; m < 2; ++m) dm_worst = std::max(dm_worst, std::abs(out(m) - (mix * p1[m] + (1 - mix) * p2[m])));
    }
    return {worst <= 1e-12 && dm_worst <= 1e-10,
            "readout additivity/homogeneity error " + fmt("%.2e", worst) + " (<= 1e-12, relative to |W||p|); " +
                "mixture vs density-matrix oracle " + fmt("%.2e", dm_worst) + " (<= 1e-10)"};
}

Outcome criterion5() {
    using namespace quantum;
    const auto& s = shared();
    const auto& r = s.finite;
    const std::vector<std::size_t> idx(r.split.test.begin(), r.split.test.begin() + 12);
    const auto X = r.features.transform(preprocess::to_working_rows(s.ds, idx, r.grid));
    double total = 0, bound = 0;
    int evals = 0;
    for (std::size_t j = 0; j < idx.size() && evals < 100; ++j) {
        const auto x = X.sample(j);
        for (std::size_t b = 0; b < r.bank.size() && evals < 100; ++b, ++evals) {
            StateVector st(r.bank.reservoirs[b].qubits);
            encode(st, x[b], r.bank.encoders[b]);
            evolve_reservoir(st, r.bank.reservoirs[b]);
            const auto p = exact_probabilities(st);
            Rng rng(sampling_stream(s.base.sampling_seed, idx[j], b));
            const auto f = sample_probabilities(p, 20000, rng);
            for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(f[i] - p[i]);
            bound = 2.0 * std::sqrt(static_cast<double>(p.size()) / 20000.0);
        }
    }
    const double mean_l1 = total / evals;

    bool in_range = true;
    std::string deg;
    for (std::size_t p = 0; p < 7; ++p) {
        const double d = 100 * (s.infinite.metrics.accuracy[p] - r.metrics.accuracy[p]);
        in_range = in_range && d >= 0 && d <= 20;
        deg += (p ? " " : "") + std::string(forward::kParamNames[p]) + "=" + fmt("%.1f", d);
    }
    return {mean_l1 <= bound && in_range, "mean L1 " + fmt("%.4f", mean_l1) + " over " + std::to_string(evals) +
                                               " evaluations (<= " + fmt("%.4f", bound) +
                                               "); degradation inf - 20000 shots, points: " + deg + " (in [0, 20])"};
}

Outcome criterion6() {
    const auto& s = shared();
    const auto& acc = s.infinite.metrics.accuracy;
    const double R = acc[5], H2O = acc[3], CH4 = acc[0];

    // M sweep on the larger feature-test setup.
    pipeline::RunConfig sweep = s.base;
    sweep.dataset_n = 10000;
    sweep.train_fraction = 0.8;
    const auto big = pipeline::load_dataset(sweep);
    std::vector<std::size_t> Ms{1, 2, 3, 4, 5, 6, 7, 8};
    double lo = 1, hi = 0;
    std::string rs;
    const auto res = eval::feature_sweep(Ms, sweep, big);
    for (const auto& pt : res.points) {
        lo = std::min(lo, pt.accuracy[5]);
        hi = std::max(hi, pt.accuracy[5]);
        rs += (rs.empty() ? "" : " ") + pt.value + ":" + fmt("%.1f", 100 * pt.accuracy[5]);
    }
    const double spread = 100 * (hi - lo);
    const bool ok = R >= 0.95 && H2O >= 0.80 && CH4 >= 0.80 && spread <= 5 && s.finite_seconds <= 600;
    return {ok, "infinite statistics R=" + fmt("%.1f", 100 * R) + " (>= 95) H2O=" + fmt("%.1f", 100 * H2O) +
                    " CH4=" + fmt("%.1f", 100 * CH4) + " (>= 80); R over M [" + rs + "] spread " + fmt("%.1f", spread) +
                    " (<= 5); 20000-shot run " + fmt("%.1f", s.finite_seconds) + " s (<= 600)"};
}

Outcome criterion7() {
    const auto& s = shared();
    auto run = [&](const char* mode) {
        auto c = s.base;
        c.set("mode", mode);
        c.shots = quantum::Shots::infinite();
        return pipeline::run_pipeline(c, s.ds).metrics.accuracy;
    };
    const auto n = run("njwst"), f = run("fjwst");
    int wins = 0;
    for (std::size_t p = 0; p < 7; ++p) wins += f[p] >= n[p];
    return {wins >= 4, "FJWST >= NJWST for " + std::to_string(wins) + "/7 (>= 4); NJWST " + pct(n) + "; FJWST " + pct(f)};
}

Outcome criterion8() {
    const auto& m = shared().finite.metrics;
    std::vector<double> t;
    for (int i = 0; i <= 400; ++i) t.push_back(0.05 * i);
    bool ok = true;
    double worst_excess = -1;
    for (std::size_t p = 0; p < 7; ++p) {
        const auto e = m.parameter_errors(p);
        const auto c = eval::tolerance_curve(e, t);
        const double n = static_cast<double>(e.size());
        if (c[0] < static_cast<double>(std::count(e.begin(), e.end(), 0.0)) / n) ok = false;
        for (std::size_t i = 1; i < t.size(); ++i) {
            const double step = c[i] - c[i - 1];
            const double mass =
                static_cast<double>(std::count_if(e.begin(), e.end(), [&](double x) { return x > t[i - 1] && x <= t[i]; })) / n;
            if (step < 0) ok = false;
            worst_excess = std::max(worst_excess, step - mass);
        }
    }
    ok = ok && worst_excess <= 1e-12;
    return {ok, "7 curves over 401 thresholds in [0, 20]: nondecreasing, max(step - eps mass in step) = " +
                    fmt("%.1e", worst_excess)};
}

Outcome criterion9() {
    const noise::InstrumentModel inst;
    const double lib = noise::photon_count(1.0, 1.1, inst);
    const double ref = oracle::photon_count_trapezoid(1.0, 1.1);
    const double rel = std::abs(lib - ref) / ref;
    std::vector<double> centres = preprocess::jwst_grid();
    const double min_jwst = *std::min_element(centres.begin(), centres.end());
    const double max_jwst = *std::max_element(centres.begin(), centres.end());
    std::vector<double> dense;
    for (int i = 0; i < 5000; ++i) dense.push_back(min_jwst + (max_jwst - min_jwst) * i / 4999.0);
    dense.back() = max_jwst;
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto* grid : {&centres, &dense})
        for (double sgm : noise::noise_sigmas(*grid, inst)) lowest = std::min(lowest, sgm);
    return {rel <= 1e-6 && lowest >= 30e-6, "N_ph[1.0, 1.1] = " + fmt("%.6e", lib) + ", trapezoid " + fmt("%.6e", ref) +
                                                 ", relative " + fmt("%.1e", rel) + " (<= 1e-6); min sigma " +
                                                 fmt("%.3f", lowest * 1e6) + " ppm (>= 30)"};
}

Outcome criterion10() {
    const fs::path root = fs::temp_directory_path() / "qelm_acceptance_replay";
    fs::remove_all(root);
    std::ostringstream log;
    std::string detail;
    bool ok = true;
    for (const char* shots : {"inf", "20000"}) {
        cli::RunArgs first;
        first.overrides = {std::string("shots=") + shots};
        first.out = root / (std::string("first-") + shots);
        const auto dir = cli::cmd_run(first, log);
        std::vector<std::string> metrics;
        std::vector<pipeline::Manifest> manifests;
        for (int k = 0; k < 2; ++k) {
            cli::RunArgs replay;
            replay.manifest = dir / "manifest.json";
            replay.out = root / (std::string("replay-") + shots + "-" + std::to_string(k));
            const auto d = cli::cmd_run(replay, log);
            metrics.push_back(slurp(d / "metrics.json"));
            manifests.push_back(pipeline::read_manifest(d / "manifest.json"));
        }
        const bool same_json = metrics[0] == metrics[1] && metrics[0] == slurp(dir / "metrics.json");
        const bool same_sums = manifests[0].p_train_checksum == manifests[1].p_train_checksum &&
                               manifests[0].p_test_checksum == manifests[1].p_test_checksum;
        ok = ok && same_json && same_sums;
        detail += std::string(detail.empty() ? "" : "; ") + "shots=" + shots + ": metrics JSON " +
                  (same_json ? "identical" : "DIFFERS") + ", P checksums " + (same_sums ? "identical" : "DIFFER") +
                  " (" + hex64(manifests[0].p_train_checksum).substr(0, 12) + ")";
    }
    fs::remove_all(root);
    return {ok, detail};
}

} // namespace

int main() {
    set_quiet(true);
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10},
    };
    int failed = 0;
    for (const auto& [n, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}

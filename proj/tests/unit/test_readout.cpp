#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "oracle/oracles.hpp"
#include "qelm/readout.hpp"

using namespace qelm;
using namespace qelm::readout;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> z;
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = z(rng);
    return m;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

} // namespace

TEST_CASE("train: identity and diagonal design") {
    const Eigen::MatrixXd Y = gaussian(7, 7, 1);
    const auto w = train(Eigen::MatrixXd::Identity(7, 7), Y);
    CHECK(rel(w.W, Y) < 1e-14);
    CHECK(w.rank == 7);

    Eigen::MatrixXd P(2, 2);
    P << 2, 0, 0, 4;
    Eigen::MatrixXd y(1, 2);
    y << 2, 8;
    const auto d = train(P, y);
    CHECK(d.W(0, 0) == doctest::Approx(1.0));
    CHECK(d.W(0, 1) == doctest::Approx(2.0));
    CHECK(d.sigma_max == doctest::Approx(4.0));
}

TEST_CASE("train: agrees with normal equations") {
    // tall P (more features than samples): interpolates Y exactly
    const Eigen::MatrixXd P = gaussian(288, 50, 2);
    const Eigen::MatrixXd Y = gaussian(7, 50, 3);
    const auto w = train(P, Y);
    CHECK(rel(w.W * P, Y) < 1e-10);
    CHECK(rel(w.W, oracle::normal_equations_cols(P, Y)) < 1e-8);

    // wide P (more samples than features): least squares
    const Eigen::MatrixXd Pw = gaussian(20, 300, 4);
    const Eigen::MatrixXd Yw = gaussian(7, 300, 5);
    const auto ww = train(Pw, Yw);
    CHECK(rel(ww.W, oracle::normal_equations_rows(Pw, Yw)) < 1e-10);
    CHECK(ww.rank == 20);
}

TEST_CASE("pseudoinverse: Penrose identities and rank cutoff") {
    Eigen::MatrixXd P = gaussian(30, 12, 6);
    P.col(11) = P.col(0) + P.col(1); // rank 11
    std::size_t rank = 0;
    double smax = 0;
    const auto Pp = pseudoinverse(P, 1e-10, &rank, &smax);
    CHECK(rank == 11);
    CHECK(smax > 0);
    CHECK(rel(P * Pp * P, P) < 1e-10);
    CHECK(rel(Pp * P * Pp, Pp) < 1e-10);
    CHECK(rel((P * Pp).transpose(), P * Pp) < 1e-10);
    CHECK(rel((Pp * P).transpose(), Pp * P) < 1e-10);

    CHECK_THROWS_AS(pseudoinverse(Eigen::MatrixXd::Zero(4, 3)), NumericalError);
    CHECK_THROWS_AS(train(Eigen::MatrixXd::Zero(4, 3), gaussian(7, 3, 1)), NumericalError);
    CHECK_THROWS_AS(train(gaussian(4, 3, 1), gaussian(7, 5, 1)), ConfigError);
}

TEST_CASE("trained readout beats random linear maps") {
    const Eigen::MatrixXd P = gaussian(40, 200, 7).cwiseAbs();
    const Eigen::MatrixXd Y = gaussian(7, 200, 8);
    const auto w = train(P, Y);
    const double best = (w.W * P - Y).norm();
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Eigen::MatrixXd R = gaussian(7, 40, 100 + s) * 0.1;
        CHECK(best <= (R * P - Y).norm());
        CHECK(best <= ((w.W + 1e-3 * R) * P - Y).norm());
    }
}

TEST_CASE("predict: linear, zero, dimension checks") {
    const auto w = train(gaussian(10, 30, 9), gaussian(7, 30, 10));
    const Eigen::MatrixXd a = gaussian(10, 4, 11), b = gaussian(10, 4, 12);
    CHECK(rel(predict(w, 2.0 * a + 3.0 * b), 2.0 * predict(w, a) + 3.0 * predict(w, b)) < 1e-12);
    CHECK(predict(w, Eigen::MatrixXd::Zero(10, 3)).isZero());
    CHECK_THROWS_AS(predict(w, Eigen::MatrixXd::Zero(9, 3)), ConfigError);
}

TEST_CASE("relative_error and accuracy") {
    CHECK(relative_error(2.0, 2.0) == 0.0);
    CHECK(relative_error(2.0, 1.0) == doctest::Approx(25.0));
    CHECK(relative_error(-4.0, -3.0) == doctest::Approx(6.25));
    CHECK(relative_error(10.0, 10.0 + std::sqrt(0.05) * 10.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(relative_error(0.0, 1.0), NumericalError);

    const std::vector<double> e{3, 6, 4, 5};
    CHECK(accuracy(e, 5.0) == 0.75);
    CHECK(accuracy(e, 4.999) == 0.5);
    CHECK(accuracy(e, 0.0) == 0.0);
    CHECK_THROWS_AS(accuracy(std::vector<double>{}, 5.0), ConfigError);

    double prev = 0;
    const Eigen::MatrixXd rnd = gaussian(1, 500, 13).cwiseAbs() * 5;
    const std::vector<double> errs(rnd.data(), rnd.data() + rnd.size());
    for (double t = 0; t <= 20; t += 0.5) {
        const double a = accuracy(errs, t);
        CHECK(a >= prev);
        prev = a;
    }
}

TEST_CASE("split: sizes, partition, reproducibility") {
    const auto s = split(4080, 0.75, 1);
    CHECK(s.train.size() == 3060);
    CHECK(s.test.size() == 1020);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 4080);
    CHECK(*all.rbegin() == 4079);
    const auto again = split(4080, 0.75, 1);
    CHECK(again.train == s.train);
    CHECK(again.test == s.test);
    CHECK(split(4080, 0.75, 2).test != s.test);
    CHECK(split(10000, 0.8, 1).test.size() == 2000);
    CHECK_THROWS_AS(split(3, 0.1, 1), ConfigError);
    CHECK_THROWS_AS(split(10, 1.0, 1), ConfigError);
}

TEST_CASE("evaluate and CSV outputs") {
    Eigen::MatrixXd truth = Eigen::MatrixXd::Constant(7, 3, 2.0);
    Eigen::MatrixXd pred = truth;
    pred(0, 1) = 1.0;
    const auto r = evaluate(truth, pred, {4, 9, 11});
    CHECK(r.accuracy[0] == doctest::Approx(2.0 / 3));
    CHECK(r.accuracy[6] == 1.0);
    CHECK(r.parameter_errors(0)[1] == doctest::Approx(25.0));
    CHECK_THROWS_AS(evaluate(truth, pred, {1, 2}), ConfigError);

    const auto dir = std::filesystem::temp_directory_path() / "qelm_readout_csv";
    std::filesystem::create_directories(dir);
    write_metrics_csv(r, dir / "m.csv");
    write_predictions_csv(r, dir / "p.csv");
    std::ifstream m(dir / "m.csv"), p(dir / "p.csv");
    std::string line;
    std::getline(m, line);
    CHECK(line == "parameter,sample_id,epsilon");
    std::getline(m, line);
    CHECK(line == "CH4,4,0");
    std::getline(m, line);
    CHECK(line == "CH4,9,25");
    std::getline(p, line);
    CHECK(line == "sample_id,parameter,true,predicted");
    std::size_t rows = 0;
    while (std::getline(p, line)) ++rows;
    CHECK(rows == 21);
    std::filesystem::remove_all(dir);
}

TEST_CASE("weights JSON round trip") {
    const auto w = train(gaussian(12, 40, 14), gaussian(7, 40, 15));
    const auto back = weights_from_json(weights_to_json(w));
    CHECK(back.W == w.W);
    CHECK(back.rank == w.rank);
    CHECK(back.cutoff == w.cutoff);
    CHECK(back.sigma_max == w.sigma_max);
    CHECK_THROWS_AS(weights_from_json("[]"), IoError);
}

TEST_CASE("target_matrix follows parameter order") {
    forward::SpectralDataset ds;
    ds.wavelengths = {1.0};
    ds.records.push_back({forward::AtmosphericParams{-1, -2, -3, -4, 1.1, 1.2, 1300}, {0.01}});
    ds.records.push_back({forward::AtmosphericParams{-5, -6, -7, -8, 1.5, 1.4, 1900}, {0.01}});
    const std::vector<std::size_t> idx{1, 0};
    const auto Y = target_matrix(ds, idx);
    CHECK(Y(0, 0) == -5);
    CHECK(Y(6, 0) == 1900);
    CHECK(Y(3, 1) == -4);
    CHECK(Y(5, 1) == 1.2);
}

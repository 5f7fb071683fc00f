#include <doctest.h>

#include <cmath>

#include "gbs/sampler.hpp"
#include "test_util.hpp"

using gbstest::random_instance;
using gbstest::squeezed_pair_probability;
using gbstest::tmss_instance;
using gbstest::total_variation;

namespace {

gbs::GaussianState single_mode_squeezed_state(double r) {
  gbs::GbsInstance inst;
  inst.squeezing = Eigen::VectorXd::Constant(1, r);
  inst.unitary = Eigen::MatrixXcd::Identity(1, 1);
  return gbs::build_state(inst);
}

}  // namespace

TEST_SUITE_BEGIN("sampler");

TEST_CASE("vacuum shots are all zero") {
  gbs::GbsInstance inst;
  inst.squeezing = Eigen::Vector2d::Zero();
  inst.unitary = gbs::haar_unitary(2, 15);
  const gbs::GaussianState state = gbs::build_state(inst);
  gbs::SampleConfig cfg;
  cfg.seed = 9;
  cfg.n_max = 4;
  cfg.per_mode_max = 4;
  for (const gbs::SampleResult& result :
       {gbs::sample_enumerate(state, cfg, 50),
        gbs::sample_chain(state, cfg, 50)}) {
    REQUIRE(result.samples.size() == 50);
    CHECK(result.aborted == 0);
    for (const gbs::PhotonPattern& s : result.samples) {
      CHECK(s == gbs::PhotonPattern{0, 0});
    }
  }
}

TEST_CASE("samplers are reproducible bit for bit") {
  const gbs::GaussianState state =
      gbs::build_state(random_instance(2, 16, 0.6));
  gbs::SampleConfig cfg;
  cfg.seed = 1234;
  cfg.n_max = 6;
  cfg.per_mode_max = 6;
  const auto a = gbs::sample_enumerate(state, cfg, 200);
  const auto b = gbs::sample_enumerate(state, cfg, 200);
  CHECK(a.samples == b.samples);
  const auto c = gbs::sample_chain(state, cfg, 200);
  const auto d = gbs::sample_chain(state, cfg, 200);
  CHECK(c.samples == d.samples);

  gbs::SampleConfig other = cfg;
  other.seed = 1235;
  CHECK(gbs::sample_enumerate(state, other, 200).samples != a.samples);
}

TEST_CASE("empirical pair frequency sits inside the binomial band") {
  const double r = 0.5;
  const gbs::GaussianState state = single_mode_squeezed_state(r);
  gbs::SampleConfig cfg;
  cfg.seed = 77;
  cfg.n_max = 12;
  cfg.per_mode_max = 12;
  const int shots = 100000;
  const auto result = gbs::sample_enumerate(state, cfg, shots);
  int pairs = 0;
  for (const gbs::PhotonPattern& s : result.samples) {
    if (s[0] == 2) ++pairs;
  }
  const double expected = squeezed_pair_probability(r);
  const double sigma = std::sqrt(expected * (1 - expected) / shots);
  CHECK(std::abs(static_cast<double>(pairs) / shots - expected) <=
        3.0 * sigma);
}

TEST_CASE("chain sampling reproduces the enumerated distribution") {
  const gbs::GaussianState state = gbs::build_state(tmss_instance(0.55));
  gbs::SampleConfig cfg;
  cfg.seed = 31;
  cfg.n_max = 10;
  cfg.per_mode_max = 10;
  const auto result = gbs::sample_chain(state, cfg, 100000);
  // pair correlation makes prefixes above n_max/2 dead ends; those shots are
  // dropped and counted rather than silently retried
  CHECK(result.aborted <= 100);
  CHECK(result.samples.size() + result.aborted == 100000);
  const gbs::ProbabilityTable table =
      gbs::enumerate_table(state, cfg.n_max, cfg.per_mode_max);
  CHECK(total_variation(result.samples, table) <= 0.01);
}

TEST_CASE("chain sampling handles displaced states") {
  gbs::GbsInstance inst = random_instance(2, 18, 0.5, true);
  const gbs::GaussianState state = gbs::build_state(inst);
  gbs::SampleConfig cfg;
  cfg.seed = 5;
  cfg.n_max = 8;
  cfg.per_mode_max = 8;
  const auto result = gbs::sample_chain(state, cfg, 20000);
  CHECK(result.aborted == 0);
  const gbs::ProbabilityTable table =
      gbs::enumerate_table(state, cfg.n_max, cfg.per_mode_max);
  CHECK(total_variation(result.samples, table) <= 0.03);
}

TEST_CASE("independent squeezers sample independently") {
  gbs::GbsInstance inst;
  inst.squeezing = Eigen::Vector2d(0.5, 0.5);
  inst.unitary = Eigen::MatrixXcd::Identity(2, 2);
  const gbs::GaussianState state = gbs::build_state(inst);
  gbs::SampleConfig cfg;
  cfg.seed = 91;
  cfg.n_max = 10;
  cfg.per_mode_max = 10;
  const int shots = 50000;
  const auto result = gbs::sample_chain(state, cfg, shots);
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (const auto& s : result.samples) {
    mean_a += s[0];
    mean_b += s[1];
  }
  mean_a /= shots;
  mean_b /= shots;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (const auto& s : result.samples) {
    cov += (s[0] - mean_a) * (s[1] - mean_b);
    var_a += (s[0] - mean_a) * (s[0] - mean_a);
    var_b += (s[1] - mean_b) * (s[1] - mean_b);
  }
  const double correlation = cov / std::sqrt(var_a * var_b);
  CHECK(std::abs(correlation) <= 3.0 / std::sqrt(static_cast<double>(shots)));
}

TEST_CASE("zero shots give an empty sample list") {
  const gbs::GaussianState state = single_mode_squeezed_state(0.4);
  gbs::SampleConfig cfg;
  cfg.n_max = 6;
  cfg.per_mode_max = 6;
  CHECK(gbs::sample_enumerate(state, cfg, 0).samples.empty());
  CHECK(gbs::sample_chain(state, cfg, 0).samples.empty());
}

TEST_CASE("a too-aggressive truncation is refused") {
  // sech(1.5) < 0.5, so the zero-photon table keeps too little mass
  const gbs::GaussianState state = single_mode_squeezed_state(1.5);
  gbs::SampleConfig cfg;
  cfg.seed = 1;
  cfg.n_max = 0;
  cfg.per_mode_max = 1;
  CHECK_THROWS_AS(gbs::sample_enumerate(state, cfg, 10), std::runtime_error);
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>
#include <random>

#include "msid/error.hpp"
#include "msid/infodyn.hpp"
#include "support/oracles.hpp"

using msid::FilterKind;
using msid::IssParams;
using msid::Mat;
using msid::ScaleSpec;
using msid::ScenarioConfig;
using msid::SourcePair;
using msid::TeDecomposition;
using msid::VarParams;

namespace {

constexpr SourcePair kSources{1, 2};  // Y2, Y3
constexpr int kTarget = 3;            // Y4

VarParams scenario(char name) { return msid::build_scenario(ScenarioConfig::preset(name)); }

IssParams unfiltered(const VarParams& var) { return msid::rescale(var, {1, 0, FilterKind::kIdentity}); }

ScaleSpec hamming(int tau) { return {tau, 12, FilterKind::kHamming}; }

void check_identities(const TeDecomposition& d) {
  CHECK(std::abs(d.te_joint - (d.unique_first + d.unique_second + d.redundancy + d.synergy)) < 1e-10);
  CHECK(std::abs(d.te_first - (d.unique_first + d.redundancy)) < 1e-10);
  CHECK(std::abs(d.te_second - (d.unique_second + d.redundancy)) < 1e-10);
  CHECK(std::abs(d.interaction - (d.synergy - d.redundancy)) < 1e-10);
  CHECK(std::abs(d.interaction - (d.te_joint - d.te_first - d.te_second)) < 1e-10);
  for (double v : {d.te_first, d.te_second, d.te_joint, d.unique_first, d.unique_second,
                   d.redundancy, d.synergy}) {
    CHECK(v >= -1e-10);
  }
}

struct Frozen {
  char scenario;
  int tau;
  double te_first, te_second, te_joint, interaction, redundancy, synergy;
};

// Hamming q=12 references from an independent Riccati solver (Schur method
// on the symplectic pencil).
constexpr Frozen kFrozen[] = {
    {'b', 1, 3.813796728996e-01, 1.217634848383e+00, 1.217634848383e+00, -3.813796728996e-01,
     3.813796728996e-01, 0.0},
    {'b', 2, 4.965029013449e-01, 1.288088955919e+00, 1.313599879888e+00, -4.709919773754e-01,
     4.965029013449e-01, 2.551092396952e-02},
    {'b', 12, 1.058060414536e-02, 1.522495590475e-01, 1.523727963085e-01, -1.045736688437e-02,
     1.058060414536e-02, 1.232372609927e-04},
    {'c', 5, 3.136318793091e-02, 3.136318793092e-02, 4.624689482941e-01, 3.997425724322e-01,
     3.136318793091e-02, 4.311057603631e-01},
    {'d', 1, 6.251101445019e-01, 6.251101445019e-01, 1.187519433233e+00, -6.270085577041e-02,
     6.251101445019e-01, 5.624092887315e-01},
    {'d', 2, 7.355337963140e-01, 7.355337963140e-01, 1.304342139769e+00, -1.667254528594e-01,
     7.355337963140e-01, 5.688083434546e-01},
    {'d', 12, 4.183255052605e-02, 4.183255052605e-02, 1.490153505598e-01, 6.535024950766e-02,
     4.183255052605e-02, 1.071828000337e-01},
};

}  // namespace

TEST_CASE("partial variance with the full set is the innovation variance") {
  const IssParams iss = msid::rescale(scenario('d'), hamming(3));
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(msid::partial_variance(iss, j, {0, 1, 2, 3}) - iss.V(j, j)) < 1e-10);
  }
}

TEST_CASE("independent channels gain nothing from conditioning") {
  std::mt19937_64 rng(13);
  VarParams var;
  var.sigma = Mat::Zero(3, 3);
  var.sigma.diagonal() << 1.0, 2.0, 0.5;
  for (int k = 0; k < 2; ++k) {
    Mat a = Mat::Zero(3, 3);
    a.diagonal() << 0.4 / (k + 1), -0.3 / (k + 1), 0.2;
    var.coeffs.push_back(a);
  }
  for (const ScaleSpec& spec : {ScaleSpec{1, 0, FilterKind::kIdentity}, hamming(3)}) {
    const IssParams iss = msid::rescale(var, spec);
    for (int j = 0; j < 3; ++j) {
      const double own = msid::partial_variance(iss, j, {j});
      for (const msid::IndexSet& a : {msid::IndexSet{0, 1, 2}, {j, (j + 1) % 3}, {j, (j + 2) % 3}}) {
        CHECK(std::abs(msid::partial_variance(iss, j, a) - own) < 1e-10 * own);
      }
    }
  }
}

TEST_CASE("own-past partial variance matches a 100-lag regression") {
  const VarParams var = scenario('a');
  const auto gamma = msid::oracle::var_autocovariances(var, 101);
  const double expected = msid::oracle::truncated_partial_variance(gamma, kTarget, {kTarget}, 100);
  const double actual = msid::partial_variance(unfiltered(var), kTarget, {kTarget});
  CHECK(std::abs(actual / expected - 1.0) < 1e-6);
}

TEST_CASE("partial variances match truncated regression on rescaled processes") {
  for (char name : {'b', 'd'}) {
    const VarParams var = scenario(name);
    for (int tau : {2, 3}) {
      const auto taps = msid::design_fir(tau - 1, 0.5 / tau, FilterKind::kMovingAverage).coeffs;
      const auto gamma = msid::oracle::rescaled_autocovariances(var, taps, tau, 101);
      const IssParams iss = msid::rescale(var, ScaleSpec::averaging(tau));
      for (const msid::IndexSet& a : {msid::IndexSet{3}, {1, 3}, {2, 3}, {1, 2, 3}}) {
        const double expected = msid::oracle::truncated_partial_variance(gamma, kTarget, a, 100);
        CHECK(std::abs(msid::partial_variance(iss, kTarget, a) / expected - 1.0) < 1e-6);
      }
    }
  }
}

TEST_CASE("partial variance argument checks") {
  const IssParams iss = unfiltered(scenario('a'));
  try {
    msid::partial_variance(iss, 4, {4});
    FAIL("expected IndexOutOfRange");
  } catch (const msid::Error& e) {
    CHECK(e.code() == msid::ErrorCode::kIndexOutOfRange);
  }
  CHECK_THROWS_AS(msid::partial_variance(iss, 0, {1, 2}), msid::Error);
  CHECK(msid::partial_variance(iss, 0, {2, 0, 2}) == msid::partial_variance(iss, 0, {0, 2}));
}

TEST_CASE("monotonicity of stored partial variances") {
  const IssParams iss = msid::rescale(scenario('c'), hamming(4));
  const auto set = msid::partial_variances(iss, kTarget, {{3}, {1, 3}, {2, 3}, {1, 2, 3}, {0, 1, 2, 3}});
  CHECK(set.entries.size() == 5);
  CHECK(set.monotonicity_violation() <= 1e-10);
  for (const auto& [cond, value] : set.entries) CHECK(value > 0.0);
}

TEST_CASE("transfer entropy examples") {
  SUBCASE("independent white noise") {
    const IssParams iss = unfiltered({{}, Mat::Identity(2, 2)});
    CHECK(std::abs(msid::transfer_entropy(iss, 0, 1)) < 1e-10);
  }
  SUBCASE("lagged drive in a bivariate VAR(1)") {
    Mat a = Mat::Zero(2, 2);
    a(1, 0) = 0.5;
    const IssParams iss = unfiltered({{a}, Mat::Identity(2, 2)});
    CHECK(msid::transfer_entropy(iss, 0, 1) == doctest::Approx(0.5 * std::log(1.25)).epsilon(1e-12));
    CHECK(std::abs(msid::transfer_entropy(iss, 1, 0)) < 1e-10);
  }
  SUBCASE("scenario a has no transfer from Y2") {
    for (int tau = 1; tau <= 12; ++tau) {
      const IssParams iss = msid::rescale(scenario('a'), hamming(tau));
      CHECK(std::abs(msid::transfer_entropy(iss, 1, kTarget)) < 1e-8);
      CHECK(std::abs(msid::joint_transfer_entropy(iss, kSources, kTarget) -
                     msid::transfer_entropy(iss, 2, kTarget)) < 1e-8);
    }
  }
  SUBCASE("source equal to target") {
    CHECK_THROWS_AS(msid::transfer_entropy(unfiltered(scenario('a')), 2, 2), msid::Error);
  }
}

TEST_CASE("joint transfer entropy examples") {
  CHECK(std::abs(msid::joint_transfer_entropy(unfiltered({{}, Mat::Identity(3, 3)}), {0, 1}, 2)) < 1e-10);
  const IssParams iss = unfiltered(scenario('c'));
  const double joint = msid::joint_transfer_entropy(iss, kSources, kTarget);
  CHECK(joint >= std::max(msid::transfer_entropy(iss, 1, kTarget), msid::transfer_entropy(iss, 2, kTarget)) - 1e-10);
  CHECK_THROWS_AS(msid::joint_transfer_entropy(iss, {1, 1}, kTarget), msid::Error);
}

TEST_CASE("decomposition reproduces frozen references") {
  for (const Frozen& f : kFrozen) {
    CAPTURE(f.scenario);
    CAPTURE(f.tau);
    const auto d = msid::decompose(msid::rescale(scenario(f.scenario), hamming(f.tau)), kSources, kTarget, f.tau);
    CHECK(d.scale == f.tau);
    CHECK(std::abs(d.te_first - f.te_first) < 1e-8);
    CHECK(std::abs(d.te_second - f.te_second) < 1e-8);
    CHECK(std::abs(d.te_joint - f.te_joint) < 1e-8);
    CHECK(std::abs(d.interaction - f.interaction) < 1e-8);
    CHECK(std::abs(d.redundancy - f.redundancy) < 1e-8);
    CHECK(std::abs(d.synergy - f.synergy) < 1e-8);
  }
}

TEST_CASE("scenario b is fully redundant without rescaling") {
  const auto d = msid::decompose(msid::rescale(scenario('b'), hamming(1)), kSources, kTarget);
  CHECK(std::abs(d.te_first + d.interaction) < 1e-8);
  CHECK(std::abs(d.unique_first) < 1e-8);
  CHECK(std::abs(d.synergy) < 1e-8);
}

TEST_CASE("scenario c has no unique transfer") {
  for (int tau = 1; tau <= 12; ++tau) {
    const auto d = msid::decompose(msid::rescale(scenario('c'), hamming(tau)), kSources, kTarget, tau);
    CHECK(std::abs(d.unique_first) < 1e-8);
    CHECK(std::abs(d.unique_second) < 1e-8);
    CHECK(std::abs(d.redundancy - d.te_first) < 1e-10);
    CHECK(std::abs(d.synergy - (d.te_joint - d.redundancy)) < 1e-10);
    CHECK(d.interaction > 0.0);
  }
}

TEST_CASE("scenario d turns from redundant to synergistic") {
  const std::vector<ScaleSpec> specs = msid::scale_sweep(1, 12, 12, FilterKind::kHamming);
  const auto sweep = msid::multiscale_decompose(scenario('d'), kSources, kTarget, specs);
  REQUIRE(sweep.size() == 12);
  for (const auto& s : sweep) REQUIRE(s.ok());
  const auto& first = *sweep.front().result;
  const auto& last = *sweep.back().result;
  CHECK(first.interaction < 0.0);
  CHECK(first.redundancy > first.synergy);
  CHECK(last.interaction > 0.0);
  CHECK(last.synergy > last.redundancy);
  int changes = 0;
  for (std::size_t t = 1; t < sweep.size(); ++t) {
    changes += (sweep[t].result->interaction > 0.0) != (sweep[t - 1].result->interaction > 0.0);
  }
  CHECK(changes == 1);
}

TEST_CASE("multiscale sweep of scenario a") {
  const auto specs = msid::scale_sweep(1, 12, 12, FilterKind::kHamming);
  for (const auto& s : msid::multiscale_decompose(scenario('a'), kSources, kTarget, specs)) {
    REQUIRE(s.ok());
    CHECK(std::abs(s.result->interaction) < 1e-8);
    CHECK(std::abs(s.result->synergy) < 1e-8);
    CHECK(std::abs(s.result->redundancy) < 1e-8);
    CHECK(std::abs(s.result->unique_first) < 1e-8);
  }
}

TEST_CASE("multiscale output is ordered and matches single-scale calls") {
  const VarParams var = scenario('c');
  const std::vector<ScaleSpec> specs{hamming(3), {1, 0, FilterKind::kIdentity}, hamming(2)};
  const auto sweep = msid::multiscale_decompose(var, kSources, kTarget, specs);
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].scale == 1);
  CHECK(sweep[1].scale == 2);
  CHECK(sweep[2].scale == 3);
  const auto direct = msid::decompose(unfiltered(var), kSources, kTarget);
  CHECK(sweep[0].result->te_joint == direct.te_joint);
  CHECK(sweep[0].result->synergy == direct.synergy);
}

TEST_CASE("a failing scale does not stop the sweep") {
  const std::vector<ScaleSpec> specs{{1, 0, FilterKind::kIdentity}, {0, 12, FilterKind::kHamming}, hamming(2)};
  const auto sweep = msid::multiscale_decompose(scenario('d'), kSources, kTarget, specs);
  REQUIRE(sweep.size() == 3);
  CHECK_FALSE(sweep[0].ok());
  CHECK(sweep[0].scale == 0);
  CHECK(sweep[0].error == msid::ErrorCode::kInvalidArgument);
  CHECK(sweep[1].ok());
  CHECK(sweep[2].ok());
}

TEST_CASE("random models satisfy the decomposition identities") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 30; ++trial) {
    const VarParams var = msid::oracle::random_var(rng, 4, trial % 4);
    for (int tau : {1, 2, 3}) {
      const IssParams iss = msid::rescale(var, hamming(tau));
      const auto d = msid::decompose(iss, {0, 1}, 3, tau);
      check_identities(d);

      const auto swapped = msid::decompose(iss, {1, 0}, 3, tau);
      CHECK(std::abs(swapped.te_joint - d.te_joint) < 1e-12);
      CHECK(std::abs(swapped.interaction - d.interaction) < 1e-12);
      CHECK(std::abs(swapped.redundancy - d.redundancy) < 1e-12);
      CHECK(std::abs(swapped.synergy - d.synergy) < 1e-12);
      CHECK(std::abs(swapped.unique_first - d.unique_second) < 1e-12);
      CHECK(std::abs(swapped.unique_second - d.unique_first) < 1e-12);

      // Redundancy is a function of the two individual transfers only.
      const double te0 = msid::transfer_entropy(iss, 0, 3);
      const double te1 = msid::transfer_entropy(iss, 1, 3);
      CHECK(std::abs(d.redundancy - std::min(te0, te1)) < 1e-12);
    }
  }
}

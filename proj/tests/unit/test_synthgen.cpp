#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "fixtures.hpp"
#include "softsensor/error.hpp"
#include "softsensor/evaluation.hpp"
#include "softsensor/pca.hpp"
#include "softsensor/preprocess.hpp"
#include "softsensor/stats.hpp"
#include "softsensor/synthgen.hpp"

using namespace softsensor;
using synth::GeneratorConfig;

namespace {

Eigen::MatrixXd all_measurements(const std::vector<Coil>& coils) {
  std::size_t n = 0;
  for (const auto& c : coils) n += c.measurements.size();
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), 20);
  Eigen::Index r = 0;
  for (const auto& c : coils) {
    const auto M = c.matrix();
    X.middleRows(r, M.rows()) = M;
    r += M.rows();
  }
  return X;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

GeneratorConfig small(std::uint64_t seed) {
  GeneratorConfig c;
  c.seed = seed;
  c.n_coils = 8;
  c.n_elevated_coils = 2;
  c.min_measurements = 600;
  c.max_measurements = 900;
  c.testcoil_length = 3000;
  return c;
}

}  // namespace

TEST(Synthgen, ZeroNoiseIsExactlyRankOne) {
  auto c = small(3);
  c.sensor_noise.fill(0.0);
  c.sensor_resolution = 0.0;
  c.target_noise = 0.0;
  const auto g = synth::generate(c);
  const auto pca = pca_fit(all_measurements(g.coils), 2);
  EXPECT_GT(pca.explained_variance_ratio[0], 1.0 - 1e-9);
  const auto b = build_labeled_dataset(g.coils, AggregationPolicy::infer(g.coils));
  const auto cv = leave_one_coil_out_cv(b.data, 1);
  EXPECT_LT(cv.overall_rmse(), 1e-6);
}

TEST(Synthgen, DefaultNoisePattern) {
  const auto g = synth::generate(GeneratorConfig{});
  EXPECT_EQ(g.coils.size(), 41u);
  const auto pca = pca_fit(all_measurements(g.coils), 1);
  EXPECT_GE(pca.explained_variance_ratio[0], 0.8);

  const auto tc = std::find_if(g.coils.begin(), g.coils.end(), [](const Coil& c) { return c.coil_id == "TESTCOIL"; });
  ASSERT_NE(tc, g.coils.end());
  const auto order = noise_ranking(*tc).order();
  std::vector<std::size_t> top(order.begin(), order.begin() + 5);
  for (std::size_t v : {2u, 3u, 10u}) EXPECT_NE(std::find(top.begin(), top.end(), v), top.end()) << v;
  std::vector<std::size_t> bottom(order.end() - 5, order.end());
  for (std::size_t v : {9u, 16u}) EXPECT_NE(std::find(bottom.begin(), bottom.end(), v), bottom.end()) << v;
}

TEST(Synthgen, PrincipalScoreTracksHardness) {
  const auto g = synth::generate(small(4));
  const auto X = all_measurements(g.coils);
  const Eigen::VectorXd s = pca_project(pca_fit(X, 1), X).col(0);
  std::vector<double> h, sv(s.data(), s.data() + s.size());
  for (const auto& t : g.truth.coils) h.insert(h.end(), t.hardness.begin(), t.hardness.end());
  ASSERT_EQ(h.size(), sv.size());
  EXPECT_GT(std::abs(pearson_correlation(h, sv)), 0.9);
}

TEST(Synthgen, FaultsOnlyAboveLimit) {
  const auto g = synth::generate(GeneratorConfig{});
  std::size_t faults = 0;
  for (const auto& t : g.truth.coils) {
    for (auto p : t.fault_positions) EXPECT_GT(t.t1[p], g.truth.limits.usl_t1);
    faults += t.fault_positions.size();
  }
  EXPECT_GT(faults, 0u);
  EXPECT_FALSE(g.faults.empty());

  auto c = small(5);
  c.hazard_max = 0.0;
  EXPECT_TRUE(synth::generate(c).faults.empty());
}

TEST(Synthgen, LabelsAvoidTheMarginBand) {
  const GeneratorConfig c;
  const auto g = synth::generate(c);
  for (const auto& s : g.tensile) {
    if (s.coil_id == "TESTCOIL") continue;
    EXPECT_FALSE(s.t2 > c.usl_t2 && s.t2 <= c.usl_t2 + c.usl_margin) << s.coil_id << ' ' << s.t2;
  }
}

TEST(Synthgen, TestcoilLayout) {
  const GeneratorConfig c;
  const auto g = synth::generate(c);
  const auto& t = *std::find_if(g.truth.coils.begin(), g.truth.coils.end(),
                                [](const auto& x) { return x.kind == synth::CoilKind::Testcoil; });
  EXPECT_EQ(t.hardness.size(), c.testcoil_length);
  EXPECT_NEAR(static_cast<double>(t.transition_position), 0.55 * 8000, 1.0);
  EXPECT_TRUE(t.fault_positions.empty());
  EXPECT_EQ(std::count_if(g.tensile.begin(), g.tensile.end(), [](const auto& s) { return s.coil_id == "TESTCOIL"; }),
            9);
}

TEST(Synthgen, TimestampsIncreaseAcrossCoils) {
  const auto g = synth::generate(small(6));
  double last = -1.0;
  for (const auto& c : g.coils)
    for (const auto& m : c.measurements) {
      EXPECT_GT(m.timestamp, last);
      last = m.timestamp;
    }
}

TEST(Synthgen, WrittenFilesAreDeterministic) {
  fixture::TempDir a("synth-a"), b("synth-b"), d("synth-d");
  const auto pa = synth::write_generated(synth::generate(small(7)), a.path);
  const auto pb = synth::write_generated(synth::generate(small(7)), b.path);
  const auto pd = synth::write_generated(synth::generate(small(8)), d.path);
  ASSERT_EQ(pa.size(), 4u);
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(slurp(pa[i]), slurp(pb[i])) << pa[i];
  EXPECT_NE(slurp(pa[0]), slurp(pd[0]));
}

TEST(Synthgen, ConfigJsonRoundTrip) {
  auto c = small(9);
  c.second_factor_sd = 0.3;
  c.sensor_noise[4] = 0.5;
  const auto text = synth::config_to_json(c);
  EXPECT_EQ(synth::config_to_json(synth::config_from_json(text)), text);
  const auto partial = synth::config_from_json(R"({"seed": 42})");
  EXPECT_EQ(partial.seed, 42u);
  EXPECT_EQ(partial.n_coils, GeneratorConfig{}.n_coils);
  EXPECT_THROW(synth::config_from_json(R"({"sensor_noise": [1, 2]})"), InvalidArgument);
}

TEST(Synthgen, InvalidConfigIsRejected) {
  auto c = small(1);
  c.min_measurements = 1000;
  c.max_measurements = 900;
  EXPECT_THROW(synth::generate(c), InvalidArgument);
  c = small(1);
  c.target_noise = -0.1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = small(1);
  c.sensor_gain[0] = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(ModifiedGroups, GroupsSeparateAndFailedStripStaysAtReference) {
  synth::ModifiedGroupsConfig mg;
  const auto g = synth::generate_modified_groups(GeneratorConfig{}, mg);
  EXPECT_EQ(g.hard.rows(), 1800);
  EXPECT_EQ(g.soft.rows(), 1800);
  EXPECT_EQ(g.reference.rows(), 1800);
  EXPECT_TRUE(g.failed_rows.empty());
  const auto norm = fit_reference_normalization(g.hard, g.soft, g.reference);
  EXPECT_LT(norm.apply_rows(g.hard).colwise().mean().maxCoeff(), 0.0);
  EXPECT_GT(norm.apply_rows(g.soft).colwise().mean().minCoeff(), 0.0);

  mg.failed_modification = true;
  const auto f = synth::generate_modified_groups(GeneratorConfig{}, mg);
  ASSERT_EQ(f.failed_rows.size(), 600u);
  const auto fn = fit_reference_normalization(f.hard, f.soft, f.reference);
  const auto H = fn.apply_rows(f.hard);
  Eigen::MatrixXd failed(600, 20);
  for (std::size_t i = 0; i < 600; ++i) failed.row(static_cast<Eigen::Index>(i)) = H.row(static_cast<Eigen::Index>(f.failed_rows[i]));
  const Eigen::RowVectorXd ref_mean = fn.apply_rows(f.reference).colwise().mean();
  const Eigen::RowVectorXd soft_mean = fn.apply_rows(f.soft).colwise().mean();
  EXPECT_LT((failed.colwise().mean() - ref_mean).norm(), 0.2 * (soft_mean - ref_mean).norm());
}

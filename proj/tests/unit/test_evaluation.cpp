#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "softsensor/error.hpp"
#include "softsensor/evaluation.hpp"
#include "softsensor/io.hpp"
#include "softsensor/metrics.hpp"
#include "softsensor/synthgen.hpp"

using namespace softsensor;

namespace {

LabeledDataset linear_dataset(int coils, int rows_per_coil, double noise, std::uint64_t seed) {
  LabeledDataset d;
  const int n = coils * rows_per_coil;
  const Eigen::VectorXd h = fixture::gaussian(n, 1, seed + 1).col(0);
  d.X = noise * fixture::gaussian(n, 20, seed);
  for (int j = 0; j < 20; ++j) d.X.col(j).array() += (1.0 + 0.05 * j) * h.array() + j;
  d.Y.resize(n, 2);
  d.Y.col(0) = 0.5 * h;
  d.Y.col(1) = -h;
  d.Y += noise * fixture::gaussian(n, 2, seed + 2);
  for (int c = 0; c < coils; ++c)
    for (int r = 0; r < rows_per_coil; ++r) d.row_coil.push_back("C" + std::to_string(c));
  return d;
}

}  // namespace

TEST(Rmse, Examples) {
  const std::vector<double> t{1, 2, 3};
  EXPECT_EQ(rmse(t, t), 0.0);
  EXPECT_NEAR(rmse(std::vector<double>{3.5, 4.5, 5.5}, t), 2.5, 1e-15);
  EXPECT_NEAR(rmse(std::vector<double>{3, 4}, std::vector<double>{0, 0}), std::sqrt(12.5), 1e-15);
  EXPECT_THROW(rmse(t, std::vector<double>{1, 2}), InvalidArgument);
  EXPECT_THROW(rmse(std::vector<double>{}, std::vector<double>{}), InvalidArgument);
}

TEST(Cv, TwoCoilsExactLinear) {
  const auto d = linear_dataset(2, 10, 0.0, 1);
  const auto cv = leave_one_coil_out_cv(d, 1);
  ASSERT_EQ(cv.folds.size(), 2u);
  for (const auto& f : cv.folds) EXPECT_LT(f.rmse.maxCoeff(), 1e-6);
}

TEST(Cv, FoldsPartitionRowsByCoil) {
  auto d = linear_dataset(5, 3, 0.1, 2);
  d.row_coil[0] = "C4";  // uneven fold sizes
  const auto cv = leave_one_coil_out_cv(d, 1);
  EXPECT_EQ(cv.folds.size(), 5u);
  std::vector<int> seen(d.rows(), 0);
  for (const auto& f : cv.folds)
    for (auto r : f.rows) ++seen[r];
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_TRUE(cv.predictions.allFinite());
}

TEST(Cv, OutlierCoilHasLargestFoldRmse) {
  auto d = linear_dataset(6, 4, 0.05, 3);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (d.row_coil[i] == "C2") d.Y.row(static_cast<Eigen::Index>(i)).array() += 5.0;
  }
  const auto cv = leave_one_coil_out_cv(d, 1);
  const auto worst = std::max_element(cv.folds.begin(), cv.folds.end(),
                                      [](const auto& a, const auto& b) { return a.rmse.mean() < b.rmse.mean(); });
  EXPECT_EQ(worst->coil_id, "C2");
}

TEST(Cv, IndependentOfRowOrder) {
  const auto d = linear_dataset(6, 3, 0.2, 4);
  std::vector<std::size_t> perm(d.rows());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = perm.size() - 1 - i;
  const auto shuffled = d.select(perm);
  const auto a = leave_one_coil_out_cv(d, 2), b = leave_one_coil_out_cv(shuffled, 2);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    EXPECT_NEAR((a.predictions.row(static_cast<Eigen::Index>(perm[i])) -
                 b.predictions.row(static_cast<Eigen::Index>(i))).cwiseAbs().maxCoeff(), 0.0, 1e-10);
  }
}

TEST(Cv, FoldLosingVarianceIsSkipped) {
  auto d = linear_dataset(3, 4, 0.1, 5);
  // Only coil C0 varies in column 5; without it the column is constant.
  for (std::size_t i = 0; i < d.rows(); ++i) {
    d.X(static_cast<Eigen::Index>(i), 5) = d.row_coil[i] == "C0" ? static_cast<double>(i) : 1.0;
  }
  const auto cv = leave_one_coil_out_cv(d, 1);
  ASSERT_EQ(cv.skipped_coils.size(), 1u);
  EXPECT_EQ(cv.skipped_coils[0], "C0");
  EXPECT_EQ(cv.folds.size(), 2u);
  EXPECT_FALSE(cv.warnings.empty());
  EXPECT_TRUE(std::isnan(cv.predictions(0, 0)));
}

TEST(Cv, NeedsTwoCoils) {
  const auto d = linear_dataset(1, 5, 0.1, 6);
  EXPECT_THROW(leave_one_coil_out_cv(d, 1), InvalidArgument);
}

TEST(SelectK, RankOneGeneratorPicksOne) {
  synth::GeneratorConfig c;
  c.seed = 21;
  const auto g = synth::generate(c);
  const auto b = build_labeled_dataset(g.coils, AggregationPolicy::infer(g.coils));
  const auto sel = select_k(b.data, 4);
  ASSERT_EQ(sel.rows.size(), 4u);
  EXPECT_EQ(sel.selected_k, 1);
  for (const auto& r : sel.rows) EXPECT_LT(r.overall, sel.rows[0].overall * 1.1);
}

TEST(SelectK, TwoFactorGeneratorNeedsTwo) {
  synth::GeneratorConfig c;
  c.seed = 22;
  c.second_factor_sd = 0.5;
  const auto g = synth::generate(c);
  const auto b = build_labeled_dataset(g.coils, AggregationPolicy::infer(g.coils));
  const auto sel = select_k(b.data, 3);
  EXPECT_LT(sel.rows[1].overall, 0.8 * sel.rows[0].overall);
  EXPECT_GE(sel.selected_k, 2);
}

TEST(SelectK, SingleRowAndRangeCheck) {
  const auto d = linear_dataset(4, 3, 0.1, 7);
  EXPECT_EQ(select_k(d, 1).rows.size(), 1u);
  EXPECT_THROW(select_k(d, 9), InvalidArgument);
  EXPECT_THROW(select_k(d, 0), InvalidArgument);
}

TEST(Scatter, ParsesBackWithTheIngestionReader) {
  const auto d = linear_dataset(3, 2, 0.1, 8);
  const auto cv = leave_one_coil_out_cv(d, 1);
  std::ostringstream out;
  write_cv_scatter(out, cv, d);
  std::istringstream in(out.str());
  const auto table = io::read_csv(in);
  EXPECT_EQ(table.header, (std::vector<std::string>{"property", "target", "prediction", "coil_id", "fold"}));
  EXPECT_EQ(table.rows.size(), 2 * d.rows());
  for (const auto& r : table.rows) EXPECT_TRUE(io::parse_double(r[2]).has_value());
}

TEST(Confusion, Examples) {
  EXPECT_EQ(confusion({true, true, true}, {true, true, true}), (ConfusionCounts{3, 0, 0, 0}));
  EXPECT_EQ(confusion({true, true}, {false, false}), (ConfusionCounts{0, 0, 2, 0}));
  EXPECT_THROW(confusion({true}, {true, false}), InvalidArgument);

  std::vector<bool> p, t;
  auto add = [&](int n, bool pv, bool tv) {
    for (int i = 0; i < n; ++i) {
      p.push_back(pv);
      t.push_back(tv);
    }
  };
  add(9, true, true);
  add(5, true, false);
  add(46, false, false);
  EXPECT_EQ(confusion(p, t), (ConfusionCounts{9, 0, 5, 46}));
}

TEST(Fbeta, KnownCountRows) {
  const auto a = precision_recall_fbeta({9, 0, 5, 46}, 3.0);
  EXPECT_EQ(format_metric(a.precision), "0.64");
  EXPECT_EQ(format_metric(a.recall), "1.00");
  EXPECT_EQ(format_metric(a.f_beta), "0.95");
  EXPECT_EQ(format_metric(precision_recall_fbeta({9, 0, 5, 46}, 1.0).f_beta), "0.78");

  const auto b = precision_recall_fbeta({10, 7, 13, 30}, 1.0);
  EXPECT_EQ(format_metric(b.precision), "0.43");
  EXPECT_EQ(format_metric(b.recall), "0.59");
  EXPECT_EQ(format_metric(b.f_beta), "0.50");
  EXPECT_EQ(format_metric(precision_recall_fbeta({10, 7, 13, 30}, 3.0).f_beta), "0.57");
}

TEST(Fbeta, EqualPrecisionAndRecall) {
  for (double beta : {0.5, 1.0, 3.0}) {
    const auto s = precision_recall_fbeta({4, 2, 2, 10}, beta);
    EXPECT_NEAR(*s.f_beta, *s.precision, 1e-15);
  }
}

TEST(Fbeta, UndefinedMarkers) {
  const auto s = precision_recall_fbeta({0, 0, 0, 10}, 1.0);
  EXPECT_FALSE(s.precision);
  EXPECT_FALSE(s.recall);
  EXPECT_FALSE(s.f_beta);
  EXPECT_EQ(format_metric(s.precision), "undefined");
  const auto r = precision_recall_fbeta({0, 3, 0, 10}, 1.0);
  EXPECT_FALSE(r.precision);
  EXPECT_EQ(*r.recall, 0.0);
}

TEST(Fbeta, Monotone) {
  const double base = *precision_recall_fbeta({5, 3, 4, 10}, 2.0).f_beta;
  EXPECT_GT(*precision_recall_fbeta({6, 3, 4, 10}, 2.0).f_beta, base);
  EXPECT_LT(*precision_recall_fbeta({5, 4, 4, 10}, 2.0).f_beta, base);
  EXPECT_LT(*precision_recall_fbeta({5, 3, 5, 10}, 2.0).f_beta, base);
}

TEST(Auc, Examples) {
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, {false, false, true, true}), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.3, 0.3, 0.3}, {false, true, true}), 0.5);
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const std::vector<bool> y{false, false, true, true};
  EXPECT_EQ(roc_auc(s, y), oracle::auc_pairs(s, y));
  EXPECT_EQ(roc_auc(s, y), 0.75);
  EXPECT_THROW(roc_auc(std::vector<double>{0.1, 0.2}, {true, true}), InvalidArgument);
}

TEST(Auc, MatchesPairCountingWithTiesAndIsMonotoneInvariant) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> level(0, 5);
  std::bernoulli_distribution coin(0.4);
  std::vector<double> s(60), e(60);
  std::vector<bool> y(60);
  for (int i = 0; i < 60; ++i) {
    s[i] = level(rng);
    e[i] = std::exp(3.0 * s[i]) - 7.0;
    y[i] = coin(rng);
  }
  y[0] = true;
  y[1] = false;
  EXPECT_NEAR(roc_auc(s, y), oracle::auc_pairs(s, y), 1e-15);
  EXPECT_NEAR(roc_auc(e, y), roc_auc(s, y), 1e-15);
}

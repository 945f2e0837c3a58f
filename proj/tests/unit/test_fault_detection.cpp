#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "softsensor/error.hpp"
#include "softsensor/fault_detection.hpp"
#include "softsensor/io.hpp"

using namespace softsensor;

namespace {

const SpecificationLimits kLimits{0.5, 1.0};

// 20 identical sensor columns carrying h; model predicts t1 = h, t2 = 1.5 h.
PlsModel identity_model() {
  const Eigen::VectorXd h = Eigen::VectorXd::LinSpaced(50, -2, 2);
  Eigen::MatrixXd X(50, 20), Y(50, 2);
  for (int j = 0; j < 20; ++j) X.col(j) = (1.0 + 0.01 * j) * h;
  Y.col(0) = h;
  Y.col(1) = 1.5 * h;
  return pls_fit(X, Y, 1);
}

Coil coil_with(const std::string& id, const std::vector<double>& h) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(h.size()), 20);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (int j = 0; j < 20; ++j) X(static_cast<Eigen::Index>(i), j) = (1.0 + 0.01 * j) * h[i];
  return fixture::coil_from(id, X);
}

}  // namespace

TEST(Classify, StrictAtLimits) {
  const Eigen::Vector2d at(0.5, 1.0);
  for (auto r : {FaultRule::T1Only, FaultRule::T2Only, FaultRule::T1OrT2}) EXPECT_FALSE(classify_fault(at, kLimits, r));
  EXPECT_TRUE(classify_fault(Eigen::Vector2d(0.5 + 1e-9, 1.0 - 1e-9), kLimits, FaultRule::T1OrT2));
  EXPECT_FALSE(classify_fault(Eigen::Vector2d(0.5 + 1e-9, 1.0 - 1e-9), kLimits, FaultRule::T2Only));
}

TEST(Classify, DisjunctionConsistency) {
  const auto X = fixture::gaussian(200, 2, 3);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Eigen::Vector2d y = X.row(i).transpose();
    EXPECT_EQ(classify_fault(y, kLimits, FaultRule::T1OrT2),
              classify_fault(y, kLimits, FaultRule::T1Only) || classify_fault(y, kLimits, FaultRule::T2Only));
  }
}

TEST(Classify, T2ImpliesT1GivesEqualCounts) {
  int either = 0, t1 = 0;
  for (double h = -1; h <= 2; h += 0.01) {
    const Eigen::Vector2d y(h, h + 0.2);  // t2 > 1 implies t1 > 0.8 > 0.5
    either += classify_fault(y, kLimits, FaultRule::T1OrT2);
    t1 += classify_fault(y, kLimits, FaultRule::T1Only);
  }
  EXPECT_EQ(either, t1);
}

TEST(Classify, RuleNames) {
  for (auto r : {FaultRule::T1Only, FaultRule::T2Only, FaultRule::T1OrT2}) EXPECT_EQ(parse_fault_rule(to_string(r)), r);
  EXPECT_FALSE(parse_fault_rule("t3"));
}

TEST(Fraction, CountsAndExclusion) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(4, 2);
  const auto none = fraction_out_of_spec(e, kLimits, 2);
  ASSERT_TRUE(none);
  EXPECT_EQ(none->t1, 0.0);
  EXPECT_EQ(none->t2, 0.0);
  e(0, 0) = e(1, 0) = 0.9;
  const auto half = fraction_out_of_spec(e, kLimits, 2);
  EXPECT_EQ(half->t1, 0.5);
  EXPECT_EQ(half->t2, 0.0);
  EXPECT_FALSE(fraction_out_of_spec(e, kLimits, 5));

  Eigen::MatrixXd rev = e.colwise().reverse();
  EXPECT_EQ(fraction_out_of_spec(rev, kLimits, 2)->t1, half->t1);
  const auto raised = fraction_out_of_spec(e, {0.95, 1.0}, 2);
  EXPECT_LE(raised->t1, half->t1);
}

TEST(Stream, InSpecCoilRaisesNoAlert) {
  const auto m = identity_model();
  const auto s = stream_score(m, coil_with("A", std::vector<double>(300, -0.5)), {kLimits});
  EXPECT_TRUE(s.alerts.empty());
  EXPECT_EQ(s.estimates.rows(), 300);
}

TEST(Stream, StepOpensOneAlertWithHysteresis) {
  const auto m = identity_model();
  std::vector<double> h(400, 0.0);
  for (std::size_t i = 200; i < 400; ++i) h[i] = i % 2 ? 0.75 : 0.45;  // hovers around usl_t1
  StreamConfig cfg{kLimits};
  const auto s = stream_score(m, coil_with("A", h), cfg);
  ASSERT_EQ(s.alerts.size(), 1u);
  EXPECT_EQ(s.alerts[0].property, "t1");
  EXPECT_EQ(s.alerts[0].coil_id, "A");
  EXPECT_GT(s.alerts[0].smoothed, 0.5);
  EXPECT_GE(s.alerts[0].position, 200u);
  EXPECT_LT(s.alerts[0].position, 250u);
  for (Eigen::Index i = 0; i < s.smoothed.rows(); ++i)
    EXPECT_NEAR(s.smoothed(i, 0), s.smoothed(i, 1) / 1.5, 1e-9);
}

TEST(Stream, DropBelowHysteresisReopens) {
  const auto m = identity_model();
  std::vector<double> h;
  for (int rep = 0; rep < 2; ++rep) {
    h.insert(h.end(), 200, 0.0);
    h.insert(h.end(), 200, 1.0);
  }
  StreamConfig cfg{kLimits};
  cfg.rule = FaultRule::T1Only;
  EXPECT_EQ(stream_score(m, coil_with("A", h), cfg).alerts.size(), 2u);
}

TEST(Stream, T2RuleWatchesOnlyT2) {
  const auto m = identity_model();
  StreamConfig cfg{kLimits};
  cfg.rule = FaultRule::T2Only;
  // t1 = 0.6 > usl_t1 but t2 = 0.9 < usl_t2
  EXPECT_TRUE(stream_score(m, coil_with("A", std::vector<double>(200, 0.6)), cfg).alerts.empty());
  const auto s = stream_score(m, coil_with("A", std::vector<double>(200, 0.8)), cfg);
  ASSERT_EQ(s.alerts.size(), 1u);
  EXPECT_EQ(s.alerts[0].property, "t2");
}

TEST(Stream, AppendingDoesNotMoveAlert) {
  const auto m = identity_model();
  std::vector<double> h(300, 0.0);
  for (std::size_t i = 150; i < 300; ++i) h[i] = 1.0;
  const auto a = stream_score(m, coil_with("A", h), {kLimits});
  h.insert(h.end(), 500, 2.0);
  const auto b = stream_score(m, coil_with("A", h), {kLimits});
  ASSERT_EQ(a.alerts.size(), 1u);
  ASSERT_EQ(b.alerts.size(), 1u);
  EXPECT_EQ(a.alerts[0].position, b.alerts[0].position);
  EXPECT_EQ(alert_json(a.alerts[0]), alert_json(b.alerts[0]));
}

TEST(Stream, RejectsWrongModelShape) {
  const auto X = fixture::gaussian(20, 3, 1);
  const auto m = pls_fit(X, fixture::gaussian(20, 2, 2), 1);
  EXPECT_THROW(StreamScorer(m, "A", {kLimits}), InvalidArgument);
}

TEST(Stream, AlertJsonFields) {
  const auto j = alert_json({"C7", 12, "t1", 0.75, 0.5});
  EXPECT_EQ(j, R"({"coil_id":"C7","position":12,"property":"t1","smoothed":0.75,"usl":0.5})");
}

TEST(Risk, MinCountExcludesShortCoils) {
  const auto m = identity_model();
  std::vector<Coil> coils{coil_with("A", std::vector<double>(100, 1.0)), coil_with("B", std::vector<double>(30, 1.0))};
  coils[0].fault_events.push_back({"A", FaultRefKind::Measurement, 3});
  const auto r = build_risk_report(m, coils, {kLimits}, 50);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].coil_id, "A");
  EXPECT_NEAR(r.rows[0].fraction_t1, 1.0, 0);
  EXPECT_EQ(r.rows[0].reported_fault_count, 1u);
  EXPECT_EQ(r.rows[0].alert_state, AlertState::Alerted);
  ASSERT_EQ(r.excluded_coils, std::vector<std::string>{"B"});
  std::ostringstream out;
  write_risk_csv(out, r);
  std::istringstream in(out.str());
  EXPECT_EQ(io::read_csv(in).rows.size(), 1u);
}

TEST(Link, Categories) {
  Coil c = coil_with("A", std::vector<double>(400, 0.0));
  for (std::size_t i = 0; i < 400; ++i) c.measurements[i].timestamp = 3550.0 + 0.5 * static_cast<double>(i);
  Eigen::MatrixXd est = Eigen::MatrixXd::Zero(400, 2);
  est.row(10) << 1.0, 2.0;   // both
  est.row(11) << 1.0, 0.0;   // t1 only
  est.row(12) << 0.0, 0.0;   // within
  for (int i = 100; i < 400; ++i) est.row(i) << 1.0, 2.0;
  c.fault_events = {{"A", FaultRefKind::Measurement, 10}, {"A", FaultRefKind::Measurement, 11},
                    {"A", FaultRefKind::Measurement, 12}, {"A", FaultRefKind::Hour, 1},
                    {"A", FaultRefKind::Measurement, 9999}};
  const auto l = link_faults({c}, {est}, kLimits);
  ASSERT_EQ(l.links.size(), 5u);
  EXPECT_EQ(l.links[0].category, FaultCategory::BothViolated);
  EXPECT_EQ(l.links[1].category, FaultCategory::T1Only);
  EXPECT_EQ(l.links[2].category, FaultCategory::Within);
  EXPECT_EQ(l.links[3].positions.size(), 300u);
  EXPECT_EQ(l.links[3].category, FaultCategory::BothViolated);
  EXPECT_EQ(l.links[4].category, FaultCategory::Unlinked);
  EXPECT_EQ(l.both, 2u);
  EXPECT_EQ(l.unlinked, 1u);
}

TEST(Link, HourWithHundredMeasurements) {
  Coil c = coil_with("A", std::vector<double>(150, 0.0));
  for (std::size_t i = 0; i < 150; ++i) c.measurements[i].timestamp = 3599.0 - 99.0 + static_cast<double>(i) * 1.0;
  // timestamps 3500..3649: hour 0 holds positions 0..99
  Eigen::MatrixXd est = Eigen::MatrixXd::Zero(150, 2);
  for (int i = 0; i < 60; ++i) est(i, 0) = 1.0;
  c.fault_events = {{"A", FaultRefKind::Hour, 0}};
  const auto l = link_faults({c}, {est}, kLimits);
  EXPECT_EQ(l.links[0].positions.size(), 100u);
  EXPECT_EQ(l.links[0].t1_only, 60u);
  EXPECT_EQ(l.links[0].within, 40u);
  EXPECT_EQ(l.links[0].category, FaultCategory::T1Only);
}

TEST(Link, AllFaultsOutOfSpec) {
  Coil c = coil_with("A", std::vector<double>(50, 0.0));
  for (long long p = 0; p < 50; p += 5) c.fault_events.push_back({"A", FaultRefKind::Measurement, p});
  const Eigen::MatrixXd est = Eigen::MatrixXd::Constant(50, 2, 3.0);
  const auto l = link_faults({c}, {est}, kLimits);
  EXPECT_EQ(l.both, l.links.size());
}

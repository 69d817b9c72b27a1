#include "gopac/io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "gopac/experiment.h"

namespace gopac {
namespace {

ProblemInstance Sample() {
  SynthConfig cfg;
  cfg.num_points = 9;
  cfg.omega_2d = 0.25;
  cfg.theta = 0.7 * kPi / 180.0;
  cfg.seed = 17;
  return Generate(cfg).first;
}

std::string FieldOf(const Json& j) {
  try {
    InstanceFromJson(j);
  } catch (const FormatError& e) {
    return e.field();
  }
  return "";
}

TEST(InstanceJson, RoundTripsThroughText) {
  const ProblemInstance inst = Sample();
  const ProblemInstance back =
      InstanceFromJson(Json::parse(InstanceToJson(inst).dump()));
  EXPECT_EQ(back.bearings, inst.bearings);
  EXPECT_EQ(back.points, inst.points);
  EXPECT_EQ(back.theta, inst.theta);
  ASSERT_EQ(back.translation_domain.cuboids.size(),
            inst.translation_domain.cuboids.size());
  for (std::size_t k = 0; k < inst.translation_domain.cuboids.size(); ++k) {
    EXPECT_EQ(back.translation_domain.cuboids[k].center,
              inst.translation_domain.cuboids[k].center);
    EXPECT_EQ(back.translation_domain.cuboids[k].half_widths,
              inst.translation_domain.cuboids[k].half_widths);
  }
  EXPECT_EQ(back.translation_domain.zeta, inst.translation_domain.zeta);
}

TEST(InstanceJson, NormalisesBearingsWithWarning) {
  Json j = InstanceToJson(Sample());
  j["bearings"][2] = {0.0, 0.0, 2.0};
  j["bearings"][3] = {0.0, 1.0 + 1e-9, 0.0};
  std::vector<std::string> warnings;
  const ProblemInstance inst = InstanceFromJson(j, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("bearings[2]"), std::string::npos);
  EXPECT_EQ(inst.bearings[2], Vec3::UnitZ());
}

TEST(InstanceJson, ErrorsNameTheField) {
  const Json good = InstanceToJson(Sample());
  Json j = good;
  j.erase("points");
  EXPECT_EQ(FieldOf(j), "instance.points");
  j = good;
  j["bearings"][1] = {1.0, 2.0};
  EXPECT_EQ(FieldOf(j), "bearings[1]");
  j = good;
  j["bearings"][0] = {0.0, 0.0, 0.0};
  EXPECT_EQ(FieldOf(j), "bearings[0]");
  j = good;
  j["theta_deg"] = "one";
  EXPECT_EQ(FieldOf(j), "theta_deg");
  j = good;
  j["theta_deg"] = 0.0;
  EXPECT_EQ(FieldOf(j), "theta_deg");
  j = good;
  j["translation_domain"]["cuboids"] = Json::array();
  EXPECT_EQ(FieldOf(j), "translation_domain.cuboids");
  j = good;
  j["translation_domain"]["cuboids"][0]["half_widths"] = {1.0, -1.0, 1.0};
  EXPECT_EQ(FieldOf(j), "translation_domain.cuboids[0].half_widths");
  j = good;
  j["translation_domain"]["zeta"] = 0.0;
  EXPECT_EQ(FieldOf(j), "translation_domain.zeta");
}

TEST(GroundTruthJson, RoundTrips) {
  SynthConfig cfg;
  cfg.num_points = 10;
  cfg.omega_3d = 0.2;
  cfg.omega_2d = 0.3;
  cfg.seed = 4;
  const GroundTruth gt = Generate(cfg).second;
  const GroundTruth back =
      GroundTruthFromJson(Json::parse(GroundTruthToJson(gt).dump()));
  EXPECT_EQ(back.pose.r, gt.pose.r);
  EXPECT_EQ(back.pose.t, gt.pose.t);
  EXPECT_EQ(back.inlier_matching, gt.inlier_matching);
  EXPECT_EQ(back.point_occluded, gt.point_occluded);
  EXPECT_EQ(back.bearing_outlier, gt.bearing_outlier);
}

TEST(SynthConfigJson, DefaultsAndRoundTrip) {
  const SynthConfig defaults = SynthConfigFromJson(Json::object());
  EXPECT_EQ(defaults.num_points, 20);
  EXPECT_EQ(defaults.sigma_px, 2.0);

  SynthConfig cfg;
  cfg.num_points = 11;
  cfg.scene = SceneKind::kLattice;
  cfg.omega_2d = 0.4;
  cfg.omega_3d = 0.1;
  cfg.sigma_px = 0.5;
  cfg.prior.cube_half_width = 0.9;
  cfg.theta = 2.0 * kPi / 180.0;
  cfg.seed = 123456789012345ULL;
  TranslationDomain d;
  d.cuboids.push_back({Vec3(1, 2, 3), Vec3(0.1, 0.2, 0.3)});
  cfg.domain = d;
  const Json j = SynthConfigToJson(cfg);
  const SynthConfig back = SynthConfigFromJson(Json::parse(j.dump()));
  EXPECT_EQ(SynthConfigToJson(back), j);
  EXPECT_EQ(back.theta, cfg.theta);
  EXPECT_EQ(back.seed, cfg.seed);

  EXPECT_THROW(SynthConfigFromJson(Json{{"omega_2d", 1.5}}), FormatError);
  EXPECT_THROW(SynthConfigFromJson(Json{{"scene", "cad"}}), FormatError);
}

TEST(ReportJson, RoundTrips) {
  RunReport r;
  r.instance_id = "inst-3";
  r.solver = "gopac";
  r.nu_star = 7;
  r.pose = {Vec3(0.1, -0.2, 0.3), Vec3(5.5, 0.25, -0.125)};
  r.optimal = true;
  r.wall_time = 0.123456789;
  r.succ_inliers = true;
  r.succ_pose = false;
  r.reference_pose = Pose{Vec3(0.11, -0.2, 0.3), Vec3(5.4, 0.2, -0.1)};
  r.reference_inliers = 7;
  r.correspondences = {{0, 3}, {2, 1}};
  EXPECT_EQ(ReportFromJson(Json::parse(ReportToJson(r).dump())), r);

  RunReport bare;
  bare.solver = "ransac";
  EXPECT_EQ(ReportFromJson(ReportToJson(bare)), bare);
  Json broken = ReportToJson(r);
  broken["nu_star"] = 1.5;
  EXPECT_THROW(ReportFromJson(broken), FormatError);
}

TEST(TraceCsv, RoundTripsAndRejectsGarbage) {
  const std::vector<TraceSample> trace{{0.0, 0, 12, 1.0, 1},
                                       {0.25, 5, 9, 0.5, 37},
                                       {1.0 / 3.0, 8, 8, 0.0, 0}};
  const std::string csv = TraceToCsv(trace);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t_s,lower,upper,volume_frac,queue_size");
  const std::vector<TraceSample> back = TraceFromCsv(csv);
  ASSERT_EQ(back.size(), trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    EXPECT_EQ(back[k].wall_time, trace[k].wall_time);
    EXPECT_EQ(back[k].lower, trace[k].lower);
    EXPECT_EQ(back[k].upper, trace[k].upper);
    EXPECT_EQ(back[k].remaining_volume, trace[k].remaining_volume);
    EXPECT_EQ(back[k].queue_size, trace[k].queue_size);
  }
  EXPECT_THROW(TraceFromCsv("a,b\n"), FormatError);
  EXPECT_THROW(TraceFromCsv(csv + "1,2\n"), FormatError);
}

TEST(Files, ReadBackAndReportBadJson) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path();
  const std::string good = (dir / "gopac_io_test_good.json").string();
  const std::string bad = (dir / "gopac_io_test_bad.json").string();
  WriteTextFile(good, InstanceToJson(Sample()).dump(2));
  WriteTextFile(bad, "{\"bearings\": [");
  EXPECT_EQ(ReadJsonFile(good), InstanceToJson(Sample()));
  EXPECT_THROW(ReadJsonFile(bad), FormatError);
  EXPECT_THROW(ReadJsonFile((dir / "gopac_no_such_file.json").string()),
               std::runtime_error);
  std::remove(good.c_str());
  std::remove(bad.c_str());
}

TEST(Sweep, ConfigParsingAndCsv) {
  const Json j = {{"param", "omega_2d"},
                  {"values", {0.0, 0.25}},
                  {"trials", 2},
                  {"base", {{"num_points", 8}}}};
  const SweepConfig cfg = SweepConfigFromJson(j);
  EXPECT_EQ(cfg.param, "omega_2d");
  EXPECT_EQ(cfg.values.size(), 2u);
  EXPECT_EQ(cfg.trials, 2);
  EXPECT_EQ(cfg.base.num_points, 8);
  EXPECT_THROW(SweepConfigFromJson(Json{{"param", "colour"}, {"values", {1}}}),
               FormatError);
  EXPECT_EQ(SweepCsvHeader(),
            "param,value,trials,succ_inliers,succ_pose,median_runtime_s\n");
  EXPECT_EQ(Median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(Median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

}  // namespace
}  // namespace gopac

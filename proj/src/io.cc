#include "gopac/io.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace gopac {
namespace {

const Json& Require(const Json& j, const std::string& key,
                    const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(path + "." + key, "missing field");
  return *it;
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double Number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw FormatError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError(field, "not finite");
  return v;
}

Vec3 Vec3From(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) {
    throw FormatError(field, "expected an array of 3 numbers");
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    v[i] = Number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

Json Vec3To(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

std::vector<Vec3> Vec3ListFrom(const Json& j, const std::string& field) {
  if (!j.is_array()) throw FormatError(field, "expected an array");
  std::vector<Vec3> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(Vec3From(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// Degrees that map back to exactly `radians`.
double ExactDegrees(double radians) {
  double deg = radians * 180.0 / kPi;
  for (int k = 0; k < 8 && deg * kPi / 180.0 != radians; ++k) {
    deg = std::nextafter(deg, deg * kPi / 180.0 < radians ? 1e300 : -1e300);
  }
  return deg;
}

template <typename T>
T Optional(const Json& j, const std::string& key, const std::string& path,
           T fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) throw FormatError(Join(path, key), "expected a boolean");
    return it->template get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) {
      throw FormatError(Join(path, key), "expected an integer");
    }
    return it->template get<T>();
  } else {
    return Number(*it, Join(path, key));
  }
}

TranslationDomain DomainFromJson(const Json& j, const std::string& path) {
  TranslationDomain d;
  const Json& cuboids = Require(j, "cuboids", path);
  if (!cuboids.is_array() || cuboids.empty()) {
    throw FormatError(path + ".cuboids", "expected a non-empty array");
  }
  for (std::size_t k = 0; k < cuboids.size(); ++k) {
    const std::string at = path + ".cuboids[" + std::to_string(k) + "]";
    Cuboid c;
    c.center = Vec3From(Require(cuboids[k], "center", at), at + ".center");
    c.half_widths =
        Vec3From(Require(cuboids[k], "half_widths", at), at + ".half_widths");
    if ((c.half_widths.array() < 0.0).any()) {
      throw FormatError(at + ".half_widths", "must be non-negative");
    }
    d.cuboids.push_back(c);
  }
  d.zeta = Optional<double>(j, "zeta", path, d.zeta);
  if (!(d.zeta > 0.0)) throw FormatError(path + ".zeta", "must be positive");
  return d;
}

Json DomainToJson(const TranslationDomain& d) {
  Json cuboids = Json::array();
  for (const Cuboid& c : d.cuboids) {
    cuboids.push_back(
        {{"center", Vec3To(c.center)}, {"half_widths", Vec3To(c.half_widths)}});
  }
  return {{"cuboids", cuboids}, {"zeta", d.zeta}};
}

Json CorrespondencesToJson(const std::vector<Correspondence>& corrs) {
  Json out = Json::array();
  for (const Correspondence& c : corrs) {
    out.push_back(Json::array({c.bearing_index, c.point_index}));
  }
  return out;
}

std::vector<Correspondence> CorrespondencesFromJson(const Json& j,
                                                    const std::string& field) {
  if (!j.is_array()) throw FormatError(field, "expected an array");
  std::vector<Correspondence> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Json& pair = j[k];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
        !pair[1].is_number_integer()) {
      throw FormatError(field + "[" + std::to_string(k) + "]",
                        "expected [bearing_index, point_index]");
    }
    out.push_back({pair[0].get<int>(), pair[1].get<int>()});
  }
  return out;
}

std::vector<bool> BoolsFromJson(const Json& j, const std::string& field) {
  if (!j.is_array()) throw FormatError(field, "expected an array");
  std::vector<bool> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_boolean()) {
      throw FormatError(field + "[" + std::to_string(k) + "]",
                        "expected a boolean");
    }
    out.push_back(j[k].get<bool>());
  }
  return out;
}

}  // namespace

FormatError::FormatError(const std::string& field, const std::string& what)
    : std::runtime_error(field + ": " + what), field_(field) {}

ProblemInstance InstanceFromJson(const Json& j,
                                 std::vector<std::string>* warnings) {
  ProblemInstance inst;
  inst.bearings = Vec3ListFrom(Require(j, "bearings", "instance"), "bearings");
  for (std::size_t i = 0; i < inst.bearings.size(); ++i) {
    Vec3& f = inst.bearings[i];
    const double n = f.norm();
    if (!(n > 0.0)) {
      throw FormatError("bearings[" + std::to_string(i) + "]", "zero vector");
    }
    if (std::abs(n - 1.0) > 1e-6 && warnings) {
      warnings->push_back("bearings[" + std::to_string(i) +
                          "] has norm " + std::to_string(n) + "; normalised");
    }
    // Vectors already unit up to rounding stay bit-identical, so files
    // round-trip exactly.
    if (std::abs(n - 1.0) > 8 * std::numeric_limits<double>::epsilon()) f /= n;
  }
  inst.points = Vec3ListFrom(Require(j, "points", "instance"), "points");
  const double deg = Number(Require(j, "theta_deg", "instance"), "theta_deg");
  if (!(deg > 0.0 && deg < 180.0)) {
    throw FormatError("theta_deg", "must lie in (0, 180)");
  }
  inst.theta = deg * kPi / 180.0;
  inst.translation_domain = DomainFromJson(
      Require(j, "translation_domain", "instance"), "translation_domain");
  return inst;
}

Json InstanceToJson(const ProblemInstance& inst) {
  Json bearings = Json::array();
  for (const Vec3& f : inst.bearings) bearings.push_back(Vec3To(f));
  Json points = Json::array();
  for (const Vec3& p : inst.points) points.push_back(Vec3To(p));
  return {{"bearings", bearings},
          {"points", points},
          {"theta_deg", ExactDegrees(inst.theta)},
          {"translation_domain", DomainToJson(inst.translation_domain)}};
}

Json PoseToJson(const Pose& pose) {
  return {{"r", Vec3To(pose.r)}, {"t", Vec3To(pose.t)}};
}

Pose PoseFromJson(const Json& j, const std::string& field) {
  return {Vec3From(Require(j, "r", field), field + ".r"),
          Vec3From(Require(j, "t", field), field + ".t")};
}

Json GroundTruthToJson(const GroundTruth& gt) {
  return {{"pose", PoseToJson(gt.pose)},
          {"inlier_matching", CorrespondencesToJson(gt.inlier_matching)},
          {"point_occluded", gt.point_occluded},
          {"bearing_outlier", gt.bearing_outlier}};
}

GroundTruth GroundTruthFromJson(const Json& j) {
  GroundTruth gt;
  gt.pose = PoseFromJson(Require(j, "pose", "ground_truth"), "pose");
  gt.inlier_matching = CorrespondencesFromJson(
      Require(j, "inlier_matching", "ground_truth"), "inlier_matching");
  gt.point_occluded = BoolsFromJson(Require(j, "point_occluded", "ground_truth"),
                                    "point_occluded");
  gt.bearing_outlier = BoolsFromJson(
      Require(j, "bearing_outlier", "ground_truth"), "bearing_outlier");
  return gt;
}

SynthConfig SynthConfigFromJson(const Json& j) {
  if (!j.is_object()) throw FormatError("synth", "expected an object");
  SynthConfig cfg;
  cfg.num_points = Optional<int>(j, "num_points", "", cfg.num_points);
  if (const auto it = j.find("scene"); it != j.end()) {
    if (*it == "uniform") {
      cfg.scene = SceneKind::kUniform;
    } else if (*it == "lattice") {
      cfg.scene = SceneKind::kLattice;
    } else {
      throw FormatError("scene", "expected \"uniform\" or \"lattice\"");
    }
  }
  cfg.omega_3d = Optional<double>(j, "omega_3d", "", cfg.omega_3d);
  cfg.omega_2d = Optional<double>(j, "omega_2d", "", cfg.omega_2d);
  cfg.sigma_px = Optional<double>(j, "sigma_px", "", cfg.sigma_px);
  if (const auto it = j.find("intrinsics"); it != j.end()) {
    cfg.intrinsics.fx = Number(Require(*it, "fx", "intrinsics"), "intrinsics.fx");
    cfg.intrinsics.fy = Number(Require(*it, "fy", "intrinsics"), "intrinsics.fy");
    cfg.intrinsics.cx = Number(Require(*it, "cx", "intrinsics"), "intrinsics.cx");
    cfg.intrinsics.cy = Number(Require(*it, "cy", "intrinsics"), "intrinsics.cy");
  }
  if (const auto it = j.find("image_size"); it != j.end()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() ||
        !(*it)[1].is_number_integer()) {
      throw FormatError("image_size", "expected [width, height]");
    }
    cfg.image_width = (*it)[0].get<int>();
    cfg.image_height = (*it)[1].get<int>();
  }
  if (const auto it = j.find("torus"); it != j.end()) {
    TorusPrior& t = cfg.prior;
    t.major_radius = Optional<double>(*it, "major_radius", "torus", t.major_radius);
    t.minor_radius = Optional<double>(*it, "minor_radius", "torus", t.minor_radius);
    t.cube_count = Optional<int>(*it, "cube_count", "torus", t.cube_count);
    if (it->contains("cube_half_width")) {
      t.cube_half_width = Number((*it)["cube_half_width"], "torus.cube_half_width");
    }
  }
  if (const auto it = j.find("translation_domain"); it != j.end()) {
    cfg.domain = DomainFromJson(*it, "translation_domain");
  }
  if (j.contains("theta_deg")) {
    cfg.theta = Number(j["theta_deg"], "theta_deg") * kPi / 180.0;
  }
  cfg.zeta = Optional<double>(j, "zeta", "", cfg.zeta);
  cfg.seed = Optional<std::uint64_t>(j, "seed", "", cfg.seed);
  try {
    cfg.Validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError("synth", e.what());
  }
  return cfg;
}

Json SynthConfigToJson(const SynthConfig& cfg) {
  Json torus = {{"major_radius", cfg.prior.major_radius},
                {"minor_radius", cfg.prior.minor_radius},
                {"cube_count", cfg.prior.cube_count}};
  if (cfg.prior.cube_half_width) {
    torus["cube_half_width"] = *cfg.prior.cube_half_width;
  }
  Json j = {{"num_points", cfg.num_points},
            {"scene", cfg.scene == SceneKind::kLattice ? "lattice" : "uniform"},
            {"omega_3d", cfg.omega_3d},
            {"omega_2d", cfg.omega_2d},
            {"sigma_px", cfg.sigma_px},
            {"intrinsics",
             {{"fx", cfg.intrinsics.fx},
              {"fy", cfg.intrinsics.fy},
              {"cx", cfg.intrinsics.cx},
              {"cy", cfg.intrinsics.cy}}},
            {"image_size", {cfg.image_width, cfg.image_height}},
            {"torus", torus},
            {"theta_deg", ExactDegrees(cfg.theta)},
            {"zeta", cfg.zeta},
            {"seed", cfg.seed}};
  if (cfg.domain) j["translation_domain"] = DomainToJson(*cfg.domain);
  return j;
}

bool RunReport::operator==(const RunReport& o) const {
  auto same_pose = [](const std::optional<Pose>& a, const std::optional<Pose>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || (a->r == b->r && a->t == b->t);
  };
  return instance_id == o.instance_id && solver == o.solver &&
         nu_star == o.nu_star && pose.r == o.pose.r && pose.t == o.pose.t &&
         optimal == o.optimal && wall_time == o.wall_time &&
         succ_inliers == o.succ_inliers && succ_pose == o.succ_pose &&
         same_pose(reference_pose, o.reference_pose) &&
         reference_inliers == o.reference_inliers &&
         correspondences == o.correspondences;
}

Json ReportToJson(const RunReport& r) {
  Json j = {{"instance_id", r.instance_id},
            {"solver", r.solver},
            {"nu_star", r.nu_star},
            {"pose", PoseToJson(r.pose)},
            {"optimal", r.optimal},
            {"wall_time_s", r.wall_time},
            {"correspondences", CorrespondencesToJson(r.correspondences)}};
  if (r.succ_inliers) j["succ_inliers"] = *r.succ_inliers;
  if (r.succ_pose) j["succ_pose"] = *r.succ_pose;
  if (r.reference_pose) j["reference_pose"] = PoseToJson(*r.reference_pose);
  if (r.reference_inliers) j["reference_inliers"] = *r.reference_inliers;
  return j;
}

RunReport ReportFromJson(const Json& j) {
  RunReport r;
  const Json& id = Require(j, "instance_id", "report");
  const Json& solver = Require(j, "solver", "report");
  if (!id.is_string()) throw FormatError("instance_id", "expected a string");
  if (!solver.is_string()) throw FormatError("solver", "expected a string");
  r.instance_id = id.get<std::string>();
  r.solver = solver.get<std::string>();
  const Json& nu = Require(j, "nu_star", "report");
  if (!nu.is_number_integer()) throw FormatError("nu_star", "expected an integer");
  r.nu_star = nu.get<int>();
  r.pose = PoseFromJson(Require(j, "pose", "report"), "pose");
  const Json& optimal = Require(j, "optimal", "report");
  if (!optimal.is_boolean()) throw FormatError("optimal", "expected a boolean");
  r.optimal = optimal.get<bool>();
  r.wall_time = Number(Require(j, "wall_time_s", "report"), "wall_time_s");
  r.correspondences = CorrespondencesFromJson(
      Require(j, "correspondences", "report"), "correspondences");
  if (j.contains("succ_inliers")) r.succ_inliers = j["succ_inliers"].get<bool>();
  if (j.contains("succ_pose")) r.succ_pose = j["succ_pose"].get<bool>();
  if (j.contains("reference_pose")) {
    r.reference_pose = PoseFromJson(j["reference_pose"], "reference_pose");
  }
  if (j.contains("reference_inliers")) {
    r.reference_inliers = j["reference_inliers"].get<int>();
  }
  return r;
}

std::string TraceToCsv(const std::vector<TraceSample>& trace) {
  std::ostringstream out;
  out << "t_s,lower,upper,volume_frac,queue_size\n";
  out << std::setprecision(17);
  for (const TraceSample& s : trace) {
    out << s.wall_time << ',' << s.lower << ',' << s.upper << ','
        << s.remaining_volume << ',' << s.queue_size << '\n';
  }
  return out.str();
}

std::vector<TraceSample> TraceFromCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t_s,lower,upper,volume_frac,queue_size") {
    throw FormatError("trace", "missing header");
  }
  std::vector<TraceSample> out;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream fields(line);
    TraceSample s;
    char c1, c2, c3, c4;
    if (!(fields >> s.wall_time >> c1 >> s.lower >> c2 >> s.upper >> c3 >>
          s.remaining_volume >> c4 >> s.queue_size) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',') {
      throw FormatError("trace row " + std::to_string(row), "malformed");
    }
    out.push_back(s);
  }
  return out;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path, std::string("invalid JSON: ") + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace gopac

#ifndef GOPAC_IO_H_
#define GOPAC_IO_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gopac/bounds.h"
#include "gopac/solution.h"
#include "gopac/synth.h"

namespace gopac {

using Json = nlohmann::json;

// Malformed input. The message starts with the offending field path.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& field, const std::string& what);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Bearings are normalised; one warning per bearing whose norm is off by more
// than 1e-6.
ProblemInstance InstanceFromJson(const Json& j,
                                 std::vector<std::string>* warnings = nullptr);
Json InstanceToJson(const ProblemInstance& inst);

Json PoseToJson(const Pose& pose);
Pose PoseFromJson(const Json& j, const std::string& field = "pose");

Json GroundTruthToJson(const GroundTruth& gt);
GroundTruth GroundTruthFromJson(const Json& j);

// Missing keys keep their defaults.
SynthConfig SynthConfigFromJson(const Json& j);
Json SynthConfigToJson(const SynthConfig& cfg);

struct RunReport {
  std::string instance_id;
  std::string solver;
  int nu_star = 0;
  Pose pose;
  bool optimal = false;
  double wall_time = 0.0;
  std::optional<bool> succ_inliers;
  std::optional<bool> succ_pose;
  std::optional<Pose> reference_pose;
  std::optional<int> reference_inliers;
  std::vector<Correspondence> correspondences;

  bool operator==(const RunReport&) const;
};

Json ReportToJson(const RunReport& report);
RunReport ReportFromJson(const Json& j);

// Header t_s,lower,upper,volume_frac,queue_size.
std::string TraceToCsv(const std::vector<TraceSample>& trace);
std::vector<TraceSample> TraceFromCsv(const std::string& text);

// Whole-file helpers. Throw std::runtime_error on I/O failure and FormatError
// on bad JSON.
Json ReadJsonFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace gopac

#endif  // GOPAC_IO_H_

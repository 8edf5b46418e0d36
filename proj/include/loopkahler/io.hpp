#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "loopkahler/experiments.hpp"

namespace loopkahler {

using json = nlohmann::json;

// Points are serialized as {"chart_id": k, "coords": [[re, im], ...]}.
json point_to_json(const ChartPoint& p);
ChartPoint point_from_json(const json& j);

// Loop files: {model, n, M, measure, offset, chart_ids[], coords[][]}.
json loop_to_json(const KahlerModel& m, const Loop& g);

struct LoadedLoop {
  ModelPtr model;
  Loop loop;
};
LoadedLoop loop_from_json(const json& j);

// Tangent files mirror loop files with an extra vectors[][] array.
json tangent_to_json(const KahlerModel& m, const Loop& g, const LoopTangent& xi);

struct LoadedTangent {
  ModelPtr model;
  Loop loop;
  LoopTangent tangent;
};
LoadedTangent tangent_from_json(const json& j);

// Path files: {model, n, times[], loops[]}.
json path_to_json(const KahlerModel& m, const LoopPath& path);

struct LoadedPath {
  ModelPtr model;
  LoopPath path;
};
LoadedPath path_from_json(const json& j);

json report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const json& j);

void write_csv(std::ostream& os, const CsvTable& table);
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

/// Writes report.json plus one CSV per table under outdir (created if needed).
void write_run_outputs(const std::string& outdir, const std::vector<ExperimentResult>& results);

/// One human-readable pass/fail line per report.
std::string summary_line(const ExperimentReport& r);

}  // namespace loopkahler

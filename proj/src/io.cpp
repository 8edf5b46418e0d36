#include "loopkahler/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace loopkahler {

namespace {

json complex_vector_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(json::array({v[i].real(), v[i].imag()}));
  }
  return out;
}

Vec complex_vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of [re, im] pairs");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const json& pair = j[i];
    if (!pair.is_array() || pair.size() != 2) {
      throw std::invalid_argument("coordinate entries must be [re, im] pairs");
    }
    v[i] = cplx(pair[0].get<double>(), pair[1].get<double>());
  }
  return v;
}

Measure measure_from_string(const std::string& s) {
  if (s == "normalized") return Measure::normalized;
  if (s == "raw") return Measure::raw;
  throw std::invalid_argument("unknown measure '" + s + "'");
}

LoopGrid grid_from_json(const json& j) {
  return LoopGrid(j.at("M").get<int>(),
                  measure_from_string(j.value("measure", std::string("normalized"))),
                  j.value("offset", 0.0));
}

void loop_body_to_json(json& out, const Loop& g) {
  out["M"] = g.grid.size();
  out["measure"] = g.grid.measure() == Measure::normalized ? "normalized" : "raw";
  out["offset"] = g.grid.offset();
  json charts = json::array();
  json coords = json::array();
  for (const ChartPoint& p : g.points) {
    charts.push_back(p.chart_id);
    coords.push_back(complex_vector_to_json(p.coords));
  }
  out["chart_ids"] = std::move(charts);
  out["coords"] = std::move(coords);
}

Loop loop_body_from_json(const json& j, const KahlerModel& m) {
  Loop g;
  g.grid = grid_from_json(j);
  const json& charts = j.at("chart_ids");
  const json& coords = j.at("coords");
  if (charts.size() != static_cast<size_t>(g.grid.size()) || coords.size() != charts.size()) {
    throw std::invalid_argument("loop file node count mismatch");
  }
  g.points.resize(g.grid.size());
  for (int k = 0; k < g.grid.size(); ++k) {
    g.points[k].chart_id = charts[k].get<int>();
    g.points[k].coords = complex_vector_from_json(coords[k]);
  }
  require_valid_loop(m, g);
  return g;
}

}  // namespace

json point_to_json(const ChartPoint& p) {
  return json{{"chart_id", p.chart_id}, {"coords", complex_vector_to_json(p.coords)}};
}

ChartPoint point_from_json(const json& j) {
  return ChartPoint{j.at("chart_id").get<int>(), complex_vector_from_json(j.at("coords"))};
}

json loop_to_json(const KahlerModel& m, const Loop& g) {
  json out;
  out["model"] = m.name();
  out["n"] = m.dim();
  loop_body_to_json(out, g);
  return out;
}

LoadedLoop loop_from_json(const json& j) {
  LoadedLoop out;
  out.model = make_model(j.at("model").get<std::string>(), j.value("n", 1));
  out.loop = loop_body_from_json(j, *out.model);
  return out;
}

json tangent_to_json(const KahlerModel& m, const Loop& g, const LoopTangent& xi) {
  require_aligned(g, xi);
  json out = loop_to_json(m, g);
  json vectors = json::array();
  for (const TangentVec& v : xi.vectors) vectors.push_back(complex_vector_to_json(v.components));
  out["vectors"] = std::move(vectors);
  return out;
}

LoadedTangent tangent_from_json(const json& j) {
  LoadedTangent out;
  LoadedLoop base = loop_from_json(j);
  out.model = base.model;
  out.loop = std::move(base.loop);
  const json& vectors = j.at("vectors");
  if (vectors.size() != static_cast<size_t>(out.loop.size())) {
    throw std::invalid_argument("tangent file node count mismatch");
  }
  std::vector<Vec> comp(out.loop.size());
  for (int k = 0; k < out.loop.size(); ++k) comp[k] = complex_vector_from_json(vectors[k]);
  out.tangent = make_tangent(out.loop, comp);
  return out;
}

json path_to_json(const KahlerModel& m, const LoopPath& path) {
  json out;
  out["model"] = m.name();
  out["n"] = m.dim();
  out["times"] = path.times;
  json loops = json::array();
  for (const Loop& g : path.loops) {
    json entry;
    loop_body_to_json(entry, g);
    loops.push_back(std::move(entry));
  }
  out["loops"] = std::move(loops);
  return out;
}

LoadedPath path_from_json(const json& j) {
  LoadedPath out;
  out.model = make_model(j.at("model").get<std::string>(), j.value("n", 1));
  out.path.times = j.at("times").get<std::vector<double>>();
  for (const json& entry : j.at("loops")) {
    out.path.loops.push_back(loop_body_from_json(entry, *out.model));
  }
  validate_path(*out.model, out.path);
  return out;
}

json report_to_json(const ExperimentReport& r) {
  json out;
  out["name"] = r.name;
  out["params"] = r.params;
  out["seed"] = r.seed;
  out["measure"] = r.measure;
  out["scalars"] = r.scalars;
  out["flags"] = r.flags;
  out["runtime_seconds"] = r.runtime_seconds;
  out["version"] = r.version;
  return out;
}

ExperimentReport report_from_json(const json& j) {
  ExperimentReport r;
  r.name = j.at("name").get<std::string>();
  r.params = j.at("params").get<std::map<std::string, double>>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.measure = j.at("measure").get<std::string>();
  r.scalars = j.at("scalars").get<std::map<std::string, double>>();
  r.flags = j.at("flags").get<std::map<std::string, bool>>();
  r.runtime_seconds = j.at("runtime_seconds").get<double>();
  r.version = j.at("version").get<std::string>();
  return r;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (size_t i = 0; i < table.header.size(); ++i) {
    os << (i ? "," : "") << table.header[i];
  }
  os << '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      os << (i ? "," : "") << buf;
    }
    os << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << contents;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_run_outputs(const std::string& outdir, const std::vector<ExperimentResult>& results) {
  std::filesystem::create_directories(outdir);
  json reports = json::array();
  for (const ExperimentResult& r : results) reports.push_back(report_to_json(r.report));
  write_text_file((std::filesystem::path(outdir) / "report.json").string(),
                  reports.dump(2) + "\n");
  for (const ExperimentResult& r : results) {
    for (const CsvTable& t : r.tables) {
      std::ostringstream os;
      write_csv(os, t);
      write_text_file((std::filesystem::path(outdir) / (t.name + ".csv")).string(), os.str());
    }
  }
}

std::string summary_line(const ExperimentReport& r) {
  std::ostringstream os;
  os << (r.passed() ? "PASS" : "FAIL") << "  " << r.name;
  for (const auto& [key, ok] : r.flags) {
    if (!ok) os << "  [" << key << " failed]";
  }
  return os.str();
}

}  // namespace loopkahler

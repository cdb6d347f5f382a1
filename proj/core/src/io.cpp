#include "valfit/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "valfit/errors.hpp"

#include "json.hpp"

namespace valfit {

namespace {

using nlohmann::json;

const char* form_name(MarginalForm f) {
  switch (f) {
    case MarginalForm::PiecewiseLinear: return "PiecewiseLinear";
    case MarginalForm::Polynomial: return "Polynomial";
    case MarginalForm::Spline: return "Spline";
  }
  return "?";
}

MarginalForm form_from_name(const std::string& s) {
  if (s == "PiecewiseLinear") return MarginalForm::PiecewiseLinear;
  if (s == "Polynomial") return MarginalForm::Polynomial;
  if (s == "Spline") return MarginalForm::Spline;
  throw IoError("unknown marginal form '" + s + "'");
}

json criteria_to_json(const std::vector<CriterionScale>& criteria) {
  json arr = json::array();
  for (const auto& c : criteria) arr.push_back({{"id", c.id}, {"lower", c.lower}, {"upper", c.upper}});
  return arr;
}

std::vector<CriterionScale> criteria_from_json(const json& arr) {
  std::vector<CriterionScale> out;
  for (const auto& c : arr)
    out.push_back({c.at("id").get<std::string>(), c.at("lower").get<double>(), c.at("upper").get<double>()});
  return out;
}

json model_to_json_value(const AdditiveModel& model) {
  json marginals = json::array();
  for (const auto& m : model.marginals()) {
    json pieces = json::array();
    for (const auto& p : m.pieces()) pieces.push_back(p.coeffs());
    marginals.push_back({{"form", form_name(m.form())}, {"breakpoints", m.breakpoints()}, {"pieces", pieces}});
  }
  json j{{"criteria", criteria_to_json(model.criteria())}, {"marginals", marginals}};
  if (model.has_thresholds()) j["thresholds"] = model.thresholds();
  return j;
}

AdditiveModel model_from_json_value(const json& j) {
  std::vector<CriterionScale> criteria = criteria_from_json(j.at("criteria"));
  std::vector<Marginal> marginals;
  for (const auto& m : j.at("marginals")) {
    std::vector<Polynomial> pieces;
    for (const auto& p : m.at("pieces")) pieces.emplace_back(p.get<std::vector<double>>());
    marginals.emplace_back(form_from_name(m.at("form").get<std::string>()),
                           m.at("breakpoints").get<std::vector<double>>(), std::move(pieces));
  }
  std::vector<double> thresholds;
  if (j.contains("thresholds")) thresholds = j.at("thresholds").get<std::vector<double>>();
  return AdditiveModel(std::move(criteria), std::move(marginals), std::move(thresholds));
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
}

// Calls fn inside a translator that turns schema errors (missing fields,
// wrong types) into IoError and lets domain validation errors pass through.
template <typename F>
auto with_schema_errors(F fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed document: ") + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const char* what) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw IoError(std::string("bad number for ") + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur))
    if (!cur.empty() && cur != "\r") lines.push_back(cur);
  if (lines.empty()) throw IoError("empty CSV document");
  return lines;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string model_to_json(const AdditiveModel& model) { return model_to_json_value(model).dump(2) + "\n"; }

AdditiveModel model_from_json(const std::string& text) {
  return with_schema_errors([&] { return model_from_json_value(parse_json(text)); });
}

std::string learning_set_to_json(const LearningSet& ls) {
  json j;
  j["criteria"] = criteria_to_json(ls.criteria);
  json alts = json::array();
  for (const auto& a : ls.alternatives) alts.push_back({{"id", a.id}, {"performances", a.performances}});
  j["alternatives"] = alts;
  if (!ls.strict.empty()) {
    json arr = json::array();
    for (const auto& [a, b] : ls.strict) arr.push_back({a, b});
    j["prefer"] = arr;
  }
  if (!ls.indiff.empty()) {
    json arr = json::array();
    for (const auto& [a, b] : ls.indiff) arr.push_back({a, b});
    j["indiff"] = arr;
  }
  if (!ls.assignments.empty()) {
    json obj = json::object();
    for (const auto& [id, cat] : ls.assignments) obj[id] = cat;
    j["assign"] = obj;
  }
  return j.dump(2) + "\n";
}

LearningSet learning_set_from_json(const std::string& text) {
  return with_schema_errors([&] {
    const json j = parse_json(text);
    LearningSet ls;
    if (j.contains("criteria")) ls.criteria = criteria_from_json(j.at("criteria"));
    if (j.contains("alternatives"))
      for (const auto& a : j.at("alternatives"))
        ls.alternatives.push_back({a.at("id").get<std::string>(), a.at("performances").get<std::vector<double>>()});
    auto readPairs = [&](const char* key, std::vector<std::pair<std::string, std::string>>& dst) {
      if (!j.contains(key)) return;
      for (const auto& p : j.at(key)) {
        if (!p.is_array() || p.size() != 2) throw IoError(std::string(key) + " entries must be [a, b] pairs");
        dst.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
      }
    };
    readPairs("prefer", ls.strict);
    readPairs("indiff", ls.indiff);
    if (j.contains("assign"))
      for (const auto& [id, cat] : j.at("assign").items()) ls.assignments[id] = cat.get<int>();
    return ls;
  });
}

std::string alternatives_to_csv(const std::vector<Alternative>& alts,
                                const std::vector<CriterionScale>& criteria) {
  std::string out = "id";
  for (const auto& c : criteria) {
    if (c.id.find(',') != std::string::npos) throw IoError("criterion id contains a comma: " + c.id);
    out += "," + c.id;
  }
  out += "\n";
  for (const auto& a : alts) {
    if (a.id.find(',') != std::string::npos) throw IoError("alternative id contains a comma: " + a.id);
    if (a.performances.size() != criteria.size())
      throw IoError("alternative " + a.id + " has " + std::to_string(a.performances.size()) +
                    " performances for " + std::to_string(criteria.size()) + " criteria");
    out += a.id;
    for (double v : a.performances) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::vector<Alternative> alternatives_from_csv(const std::string& text,
                                               const std::vector<CriterionScale>& criteria) {
  const std::vector<std::string> lines = csv_lines(text);
  const std::vector<std::string> header = split_csv_line(lines[0]);
  if (header.empty() || header[0] != "id") throw IoError("CSV header must start with 'id'");
  if (header.size() != criteria.size() + 1)
    throw IoError("CSV has " + std::to_string(header.size() - 1) + " criterion columns, expected " +
                  std::to_string(criteria.size()));
  for (std::size_t j = 0; j < criteria.size(); ++j)
    if (header[j + 1] != criteria[j].id)
      throw IoError("CSV column '" + header[j + 1] + "' does not match criterion '" + criteria[j].id + "'");
  std::vector<Alternative> alts;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> fields = split_csv_line(lines[i]);
    if (fields.size() != header.size())
      throw IoError("CSV row " + std::to_string(i + 1) + " has " + std::to_string(fields.size()) +
                    " fields, expected " + std::to_string(header.size()));
    Alternative a;
    a.id = fields[0];
    for (std::size_t j = 1; j < fields.size(); ++j)
      a.performances.push_back(parse_double(fields[j], header[j].c_str()));
    alts.push_back(std::move(a));
  }
  return alts;
}

std::vector<CriterionScale> csv_header_criteria(const std::string& text) {
  const std::vector<std::string> header = split_csv_line(csv_lines(text)[0]);
  if (header.empty() || header[0] != "id") throw IoError("CSV header must start with 'id'");
  std::vector<CriterionScale> out;
  for (std::size_t j = 1; j < header.size(); ++j) out.push_back({header[j], 0.0, 1.0});
  return out;
}

std::string fit_result_to_json(const FitResult& result) {
  json j;
  j["status"] = conic::to_string(result.report.status);
  j["model"] = result.model ? model_to_json_value(*result.model) : json(nullptr);
  j["totalSlack"] = result.totalSlack;
  j["perStatementSlack"] = result.perStatementSlack;
  j["sizes"] = {{"constraints", result.sizes.constraints}, {"variables", result.sizes.variables}};
  j["iterations"] = result.report.iterations;
  j["primalResidual"] = result.report.primalResidual;
  j["dualResidual"] = result.report.dualResidual;
  j["gap"] = result.report.gap;
  j["domainScaled"] = result.domainScaled;
  return j.dump(2) + "\n";
}

std::string experiments_to_csv(const std::vector<ExperimentResult>& rows, bool includeSeconds) {
  std::string out = "modelId,seed,D,k,Dc,mstar,spearman,kendall,slack,constraints,variables";
  if (includeSeconds) out += ",seconds";
  out += "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.modelId) + "," + std::to_string(r.seed) + "," + std::to_string(r.degree) + "," +
           std::to_string(r.pieces) + "," + std::to_string(r.continuity) + "," + std::to_string(r.learningSize) +
           "," + format_double(r.spearman) + "," + format_double(r.kendall) + "," + format_double(r.totalSlack) +
           "," + std::to_string(r.sizes.constraints) + "," + std::to_string(r.sizes.variables);
    if (includeSeconds) out += "," + format_double(r.seconds);
    out += "\n";
  }
  return out;
}

std::string aggregates_to_csv(const std::vector<AggregateRow>& rows) {
  std::string out = "modelId,D,k,Dc,mstar,cells,meanKendall,sdKendall,meanSpearman,sdSpearman\n";
  for (const auto& r : rows)
    out += std::to_string(r.modelId) + "," + std::to_string(r.degree) + "," + std::to_string(r.pieces) + "," +
           std::to_string(r.continuity) + "," + std::to_string(r.learningSize) + "," + std::to_string(r.cells) +
           "," + format_double(r.meanKendall) + "," + format_double(r.sdKendall) + "," +
           format_double(r.meanSpearman) + "," + format_double(r.sdSpearman) + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("failed reading " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out.good()) throw IoError("failed writing " + path);
}

}  // namespace valfit

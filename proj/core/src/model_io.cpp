#include "ifp/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ifp/error.hpp"

namespace ifp {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ModelValidation("unknown field '" + key + "' in " + where);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ModelValidation(what + " must be a number");
  return j.get<double>();
}

std::pair<std::size_t, std::size_t> parse_pair_key(const std::string& key, std::size_t n) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) throw ModelValidation("atom key '" + key + "' must be \"z,zhat\"");
  try {
    std::size_t used1 = 0, used2 = 0;
    const std::string a = key.substr(0, comma), b = key.substr(comma + 1);
    const unsigned long z = std::stoul(a, &used1);
    const unsigned long zh = std::stoul(b, &used2);
    if (used1 != a.size() || used2 != b.size() || z >= n || zh >= n) throw std::out_of_range(key);
    return {z, zh};
  } catch (const std::logic_error&) {
    throw ModelValidation("atom key '" + key + "' is not a valid state pair");
  }
}

}  // namespace

ModelFile parse_model_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelValidation(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelValidation("model file must be a JSON object");
  reject_unknown(doc, {"states", "P", "atoms", "gamma", "g", "metadata"}, "model file");
  for (const char* req : {"states", "P", "atoms", "gamma"})
    if (!doc.contains(req)) throw ModelValidation(std::string("model file is missing '") + req + "'");

  const json& states = doc["states"];
  if (!states.is_array() || states.empty()) throw ModelValidation("'states' must be a non-empty array");
  std::vector<std::string> labels;
  for (const auto& s : states) {
    if (!s.is_string()) throw ModelValidation("state labels must be strings");
    labels.push_back(s.get<std::string>());
  }
  const std::size_t n = labels.size();

  const json& pj = doc["P"];
  if (!pj.is_array() || pj.size() != n) throw ModelValidation("'P' must have one row per state");
  ExtendedMatrix P(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!pj[i].is_array() || pj[i].size() != n) throw ModelValidation("'P' must be square");
    for (std::size_t j = 0; j < n; ++j) P(i, j) = number(pj[i][j], "P entry");
  }

  const json& aj = doc["atoms"];
  if (!aj.is_object()) throw ModelValidation("'atoms' must be an object keyed by \"z,zhat\"");
  ShockModel::AtomTable table(n * n);
  for (const auto& [key, list] : aj.items()) {
    const auto [z, zh] = parse_pair_key(key, n);
    if (!list.is_array()) throw ModelValidation("atoms for '" + key + "' must be an array");
    for (const auto& a : list) {
      if (!a.is_object()) throw ModelValidation("each atom must be an object");
      reject_unknown(a, {"p", "beta", "R", "Y"}, "atom '" + key + "'");
      for (const char* req : {"p", "beta", "R", "Y"})
        if (!a.contains(req)) throw ModelValidation("atom in '" + key + "' is missing '" + req + "'");
      table[z * n + zh].push_back(
          {number(a["p"], "p"), number(a["beta"], "beta"), number(a["R"], "R"), number(a["Y"], "Y")});
    }
  }

  const double gamma = number(doc["gamma"], "gamma");
  make_preferences(gamma);
  std::optional<double> g;
  if (doc.contains("g")) g = number(doc["g"], "g");
  std::string metadata = "{}";
  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) throw ModelValidation("'metadata' must be an object");
    metadata = doc["metadata"].dump();
  }

  ShockModel raw(std::move(P), std::move(table), std::move(labels));
  ShockModel model = g ? detrend(raw, *g, gamma) : raw;
  return ModelFile{std::move(model), std::move(raw), gamma, g, std::move(metadata)};
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelValidation("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model_json(ss.str());
}

std::string dump_model_json(const ShockModel& model, double gamma, std::optional<double> g,
                            const std::string& metadata_json) {
  const std::size_t n = model.num_states();
  json doc;
  doc["states"] = model.labels();
  json P = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = model.transition().row(i);
    P.push_back(std::vector<double>(r.begin(), r.end()));
  }
  doc["P"] = std::move(P);
  json atoms = json::object();
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t zh = 0; zh < n; ++zh) {
      const auto list = model.atoms(z, zh);
      if (list.empty()) continue;
      json arr = json::array();
      for (const auto& a : list)
        arr.push_back({{"p", a.probability}, {"beta", a.beta}, {"R", a.ret}, {"Y", a.income}});
      atoms[std::to_string(z) + "," + std::to_string(zh)] = std::move(arr);
    }
  doc["atoms"] = std::move(atoms);
  doc["gamma"] = gamma;
  if (g) doc["g"] = *g;
  const json meta = json::parse(metadata_json);
  if (!meta.is_object()) throw ModelValidation("metadata must be a JSON object");
  if (!meta.empty()) doc["metadata"] = meta;
  return doc.dump(2);
}

}  // namespace ifp

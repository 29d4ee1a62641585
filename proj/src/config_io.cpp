#include "anosov/config_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

namespace anosov::io {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config, msg); }

Scalar parse_entry(const json& e) {
  if (e.is_number()) return Scalar(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return Scalar(e[0].get<double>(), e[1].get<double>());
  }
  config_error("matrix entry must be a number or [re, im], got " + e.dump());
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) config_error("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) config_error("matrix must be an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) {
      config_error("matrix rows have different lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_entry(j[r][c]);
  }
  return m;
}

template <class J>
J matrix_to_json(const Matrix& m, bool complex) {
  J rows = J::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    J row = J::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (complex) {
        row.push_back(J::array({m(r, c).real(), m(r, c).imag()}));
      } else {
        row.push_back(m(r, c).real());
      }
    }
    rows.push_back(row);
  }
  return rows;
}

json config_json(const certifier::JobConfig& c) {
  json j;
  j["field"] = to_string(c.field);
  j["dim"] = c.dim;
  j["generators"] = json::array();
  for (const auto& g : c.generators) {
    j["generators"].push_back(
        {{"name", std::string(1, g.name)}, {"matrix", matrix_to_json<json>(g.matrix, c.field == Field::complex)}});
  }
  j["half_length"] = c.half_length;
  j["dedup_grid"] = c.dedup_grid;
  j["tolerance"] = c.tolerance;
  j["aux_grid"] = c.aux_grid;
  j["word_list"] = c.word_list ? json(*c.word_list) : json(nullptr);
  if (c.t) j["t"] = *c.t;
  if (!c.relators.empty()) j["relators"] = c.relators;
  return j;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    config_error(std::string("field '") + key + "' has the wrong type");
  }
}

ojson check_json(const criteria::AssumptionCheck& c, int id) {
  ojson j;
  j["id"] = id;
  j["pass"] = c.pass;
  j["value"] = c.value;
  j["threshold"] = c.threshold;
  j["margin"] = c.margin;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

ojson witness_json(const certifier::WitnessWord& w) {
  return ojson{{"word", w.word}, {"value", w.value}};
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::io, "write to '" + path + "' failed");
}

certifier::JobConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  certifier::JobConfig c;
  c.field = field_from_string(get_or<std::string>(j, "field", "real"));
  if (!j.contains("dim")) config_error("missing field 'dim'");
  c.dim = get_or<int>(j, "dim", 0);
  if (!j.contains("generators") || !j["generators"].is_array()) {
    config_error("missing generator list");
  }
  for (const auto& g : j["generators"]) {
    if (!g.is_object() || !g.contains("name") || !g.contains("matrix")) {
      config_error("each generator needs 'name' and 'matrix'");
    }
    const auto name = g["name"].get<std::string>();
    if (name.size() != 1) config_error("generator name must be a single letter, got '" + name + "'");
    c.generators.push_back({name[0], matrix_from_json(g["matrix"])});
  }
  c.half_length = get_or<int>(j, "half_length", c.half_length);
  c.dedup_grid = get_or<double>(j, "dedup_grid", c.dedup_grid);
  c.tolerance = get_or<double>(j, "tolerance", c.tolerance);
  c.aux_grid = get_or<int>(j, "aux_grid", c.aux_grid);
  if (j.contains("word_list") && !j["word_list"].is_null()) c.word_list = get_or<std::string>(j, "word_list", "");
  if (j.contains("t") && !j["t"].is_null()) c.t = get_or<double>(j, "t", 0.0);
  c.relators = get_or<std::vector<std::string>>(j, "relators", {});
  c.validate();
  return c;
}

certifier::JobConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string dump_config(const certifier::JobConfig& config) { return config_json(config).dump(2) + "\n"; }

std::string canonical_config(const certifier::JobConfig& config) {
  json j = config_json(config);
  j.erase("relators");  // documentation only
  return j.dump();
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::io, "SHA-256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string dump_certificate(const certifier::Certificate& cert) {
  ojson j;
  j["schema"] = cert.schema;
  j["tool_version"] = cert.tool_version;
  j["config_digest"] = cert.config_digest;
  j["verdict"] = certifier::to_string(cert.verdict);
  j["diagnostic"] = cert.diagnostic;
  j["units"] = {{"angles", "radians"}, {"distances", "metric length"}};
  j["dim"] = cert.dim;
  j["half_length"] = cert.half_length;
  j["eps_max"] = cert.eps_max;
  if (cert.survey) {
    const auto& s = *cert.survey;
    ojson sj;
    sj["source"] = s.source;
    sj["sphere_sizes"] = s.sphere_sizes;
    sj["pair_count"] = s.pair_count;
    sj["S"] = s.spacing;
    sj["eps"] = s.eps;
    sj["max_eps_plus"] = s.max_eps_plus;
    sj["max_eps_minus"] = s.max_eps_minus;
    sj["min_cos_eps_plus"] = std::cos(s.max_eps_plus);
    sj["min_cos_eps_minus"] = std::cos(s.max_eps_minus);
    sj["witnesses"] = {{"min_s", witness_json(s.min_s)},
                       {"max_eps_plus", witness_json(s.worst_plus)},
                       {"max_eps_minus", witness_json(s.worst_minus)}};
    sj["flagged_count"] = s.flagged_count;
    sj["flagged_words"] = s.flagged_words;
    j["survey"] = sj;
  } else {
    j["survey"] = nullptr;
  }
  if (cert.aux) {
    const auto& a = *cert.aux;
    ojson aj;
    aj["t"] = a.t ? ojson(*a.t) : ojson(nullptr);
    aj["eps_aux"] = a.eps_aux;
    aj["delta1"] = a.delta1;
    aj["delta2"] = a.delta2;
    aj["delta3"] = a.delta3;
    aj["delta4"] = a.delta4;
    j["aux"] = aj;
  } else {
    j["aux"] = nullptr;
  }
  if (cert.report) {
    ojson checks = ojson::array();
    for (int i = 0; i < 5; ++i) checks.push_back(check_json(cert.report->checks[i], i + 1));
    j["assumptions"] = checks;
    j["all_assumptions_pass"] = cert.report->verdict;
    j["min_margin"] = cert.report->min_margin();
  } else {
    j["assumptions"] = nullptr;
  }
  if (cert.verdict == certifier::Verdict::certified && cert.report && cert.report->c1) {
    j["undistortion"] = {{"c1", *cert.report->c1}, {"c2", *cert.report->c2}};
  } else {
    j["undistortion"] = nullptr;
  }
  j["wall_time_seconds"] = cert.wall_time_seconds;
  return j.dump(2) + "\n";
}

Matrix parse_matrix(const std::string& text) {
  try {
    return matrix_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, std::string("cannot parse matrix: ") + e.what());
  }
}

Vector parse_vector(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, std::string("cannot parse vector: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::invalid_input, "vector must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_entry(j[i]);
  return v;
}

}  // namespace anosov::io

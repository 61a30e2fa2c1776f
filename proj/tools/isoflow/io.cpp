#include "io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "isoflow/errors.hpp"
#include "isoflow/random.hpp"

namespace isoflow::cli {

namespace {

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigurationError(field + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigurationError(field + ": must be finite");
  return v;
}

std::vector<double> numbers(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigurationError(field + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::array<double, 3> vec3(const Json& j, const std::string& field) {
  const auto v = numbers(j, field);
  if (v.size() != 3) throw ConfigurationError(field + ": expected 3 components");
  return {v[0], v[1], v[2]};
}

std::size_t positive_size(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw ConfigurationError(field + ": expected a positive integer");
  return j.get<std::size_t>();
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigurationError(where + ": missing field '" + key + "'");
  return j.at(key);
}

Matrix square(const Json& j, const std::string& field) {
  Matrix m = matrix_from_json(j, field);
  if (!m.is_square()) throw ConfigurationError(field + ": matrix must be square");
  return m;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw ConfigurationError(field + ": expected a non-empty list of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ConfigurationError(field + ": rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = j[r][c];
      const std::string where = field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (e.is_array()) {
        if (e.size() != 2) throw ConfigurationError(where + ": expected [re, im]");
        m(r, c) = Complex(number(e[0], where), number(e[1], where));
      } else {
        m(r, c) = number(e, where);
      }
    }
  }
  return m;
}

Json tableau_to_json(const ButcherTableau& t) {
  Json a = Json::array();
  for (std::size_t i = 0; i < t.stages; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < t.stages; ++j) row.push_back(t.coeff(i, j));
    a.push_back(std::move(row));
  }
  Json out;
  if (!t.name.empty()) out["name"] = t.name;
  out["s"] = t.stages;
  out["A"] = std::move(a);
  out["b"] = t.b;
  out["c"] = t.c;
  return out;
}

ButcherTableau tableau_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigurationError(field + ": expected an object");
  ButcherTableau t;
  t.stages = positive_size(require(j, "s", field), field + ".s");
  const Json& a = require(j, "A", field);
  if (!a.is_array() || a.size() != t.stages)
    throw ConfigurationError(field + ".A: expected " + std::to_string(t.stages) + " rows");
  for (std::size_t i = 0; i < t.stages; ++i) {
    const auto row = numbers(a[i], field + ".A[" + std::to_string(i) + "]");
    if (row.size() != t.stages)
      throw ConfigurationError(field + ".A: rows must have " + std::to_string(t.stages) +
                               " entries");
    t.a.insert(t.a.end(), row.begin(), row.end());
  }
  t.b = numbers(require(j, "b", field), field + ".b");
  if (j.contains("c")) {
    t.c = numbers(j.at("c"), field + ".c");
  } else {
    for (std::size_t i = 0; i < t.stages; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < t.stages; ++k) s += t.coeff(i, k);
      t.c.push_back(s);
    }
  }
  if (j.contains("name")) t.name = j.at("name").get<std::string>();
  t.validate_shape();
  return t;
}

Json partitioned_to_json(const PartitionedTableau& t) {
  Json out;
  out["first"] = tableau_to_json(t.first);
  out["second"] = tableau_to_json(t.second);
  return out;
}

PartitionedTableau partitioned_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigurationError(field + ": expected an object");
  return {tableau_from_json(require(j, "first", field), field + ".first"),
          tableau_from_json(require(j, "second", field), field + ".second")};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigurationError(path.string() + ": " + e.what());
  }
}

FlowPreset flow_from_json(const Json& j, std::uint64_t seed) {
  if (!j.is_object()) throw ConfigurationError("flow: expected a preset name or an object");
  const std::string kind = require(j, "kind", "flow").get<std::string>();
  const std::string where = "flow(" + kind + ")";
  FlowPreset p;
  p.name = j.value("name", std::string("custom-") + kind);

  auto initial = [&](const char* key) { return square(require(j, key, where), where + "." + key); };

  if (kind == "rigid-body") {
    const auto d = numbers(require(j, "inertia", where), where + ".inertia");
    p.flow = rigid_body_flow(InertiaAction::row_scaled(d));
    p.initial = {j.contains("W0") ? initial("W0") : rigid_body_initial(d.size())};
  } else if (kind == "toda") {
    p.flow = toda_flow(j.contains("W0") ? initial("W0").rows()
                                        : numbers(require(j, "a", where), where + ".a").size());
    if (j.contains("W0")) {
      p.initial = {initial("W0")};
    } else {
      const auto a = numbers(j.at("a"), where + ".a");
      const auto b = numbers(require(j, "b", where), where + ".b");
      p.initial = {toda_initial(a, b)};
    }
  } else if (kind == "bloch-iserles") {
    p.flow = bloch_iserles_flow(initial("N"));
    p.initial = {initial("W0")};
  } else if (kind == "chu") {
    const Matrix w0 = initial("W0");
    p.flow = chu_flow(w0.rows(), j.value("force_centro", false));
    p.initial = {w0};
  } else if (kind == "brockett") {
    const Matrix n = initial("N");
    p.flow = brockett_flow(n);
    if (j.contains("W0")) {
      p.initial = {initial("W0")};
    } else {
      SplitMixNormal rng(seed);
      p.initial = {random_hermitian(rng, n.rows(), j.value("scale", 0.5))};
    }
  } else if (kind == "vortices") {
    const Json& pos = require(j, "positions", where);
    if (!pos.is_array() || pos.size() < 2)
      throw ConfigurationError(where + ".positions: need at least two vortices");
    std::vector<double> gamma(pos.size(), 1.0);
    if (j.contains("strengths")) gamma = numbers(j.at("strengths"), where + ".strengths");
    p.flow = point_vortex_flow(gamma);
    for (std::size_t i = 0; i < pos.size(); ++i)
      p.initial.push_back(su2_from_vector(vec3(pos[i], where + ".positions")));
  } else if (kind == "heisenberg") {
    if (j.contains("spins")) {
      const Json& spins = j.at("spins");
      if (!spins.is_array() || spins.size() < 2)
        throw ConfigurationError(where + ".spins: need at least two spins");
      p.flow = heisenberg_chain_flow(spins.size());
      for (const auto& s : spins) p.initial.push_back(su2_from_vector(vec3(s, where + ".spins")));
    } else {
      const std::size_t n = positive_size(require(j, "n", where), where + ".n");
      FlowPreset base = make_preset("heisenberg-" + std::to_string(n), seed);
      p.flow = std::move(base.flow);
      p.initial = std::move(base.initial);
    }
  } else {
    throw ConfigurationError("flow: unknown kind '" + kind + "'");
  }

  if (j.contains("h")) p.h = number(j.at("h"), where + ".h");
  if (j.contains("T")) p.t_final = number(j.at("T"), where + ".T");
  std::visit([&](auto& f) { f.name = p.name; }, p.flow);

  const ProductFlowDefinition sys = p.system();
  if (p.initial.size() != sys.size())
    throw ConfigurationError(where + ": initial data has the wrong component count");
  for (std::size_t c = 0; c < sys.size(); ++c)
    if (p.initial[c].rows() != sys.components[c].dimension)
      throw ConfigurationError(where + ": initial data has the wrong dimension");
  return p;
}

std::vector<Json> load_flow_dir(const std::filesystem::path& dir) {
  std::vector<Json> out;
  if (dir.empty() || !std::filesystem::is_directory(dir)) return out;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    Json j = read_json_file(f);
    if (!j.contains("name")) j["name"] = f.stem().string();
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace isoflow::cli

#include "fanfactor/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fanfactor {

namespace {

using nlohmann::json;

const Int kNumberLimit = Int(1) << 53;

json int_to_json(const Int& x) {
  if (x > -kNumberLimit && x < kNumberLimit) return json(x.get_si());
  return json(x.get_str());
}

Int int_from_json(const json& j, const char* where) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument(std::string(where) + ": empty integer");
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9')
        throw std::invalid_argument(std::string(where) + ": bad integer '" + s + "'");
    return Int(s);
  }
  throw std::invalid_argument(std::string(where) +
                              ": expected an integer or a decimal string");
}

Vec vec_from_json(const json& j, const char* where) {
  if (!j.is_array()) throw std::invalid_argument(std::string(where) + ": expected a vector");
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(int_from_json(e, where));
  return v;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(int_to_json(x));
  return a;
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, true, true);
  if (!j.is_object()) throw std::invalid_argument("document: expected a JSON object");
  return j;
}

Vec load_ray(const json& e, int dim, std::ostream* warnings) {
  Vec v = vec_from_json(e, "rays");
  if (static_cast<int>(v.size()) != dim)
    throw std::invalid_argument("rays: vector width differs from dim");
  if (is_zero(v)) throw std::invalid_argument("rays: zero ray");
  Vec p = primitive(v);
  if (vec_cmp(p, v) != 0 && warnings)
    *warnings << "warning: ray " << vec_str(v) << " normalized to " << vec_str(p) << "\n";
  return p;
}

Fan fan_from_object(const json& j, std::ostream* warnings) {
  if (!j.contains("dim") || !j.contains("rays") || !j.contains("cones"))
    throw std::invalid_argument("fan document: needs dim, rays and cones");
  Fan f;
  f.dim = j.at("dim").get<int>();
  for (const auto& e : j.at("rays")) f.rays.push_back(load_ray(e, f.dim, warnings));
  for (const auto& e : j.at("cones")) {
    if (!e.is_array()) throw std::invalid_argument("cones: expected an index list");
    ConeIdx c;
    for (const auto& x : e) {
      if (!x.is_number_integer()) throw std::invalid_argument("cones: bad index");
      c.push_back(x.get<int>());
    }
    std::sort(c.begin(), c.end());
    f.maximal.push_back(std::move(c));
  }
  validate_fan(f);
  return f;
}

json fan_to_object(const Fan& f, const std::string& name) {
  Fan c = canonical(f);
  json j;
  j["dim"] = c.dim;
  if (!name.empty()) j["name"] = name;
  json rays = json::array();
  for (const auto& r : c.rays) rays.push_back(vec_to_json(r));
  j["rays"] = std::move(rays);
  json cones = json::array();
  for (const auto& m : c.maximal) cones.push_back(json(m));
  j["cones"] = std::move(cones);
  return j;
}

json moves_to_json(const Script& sc) {
  json moves = json::array();
  for (const auto& m : sc) {
    json e;
    e["op"] = m.op == MoveOp::subdivide ? "subdivide" : "assemble";
    e["ray"] = vec_to_json(m.ray);
    moves.push_back(std::move(e));
  }
  return moves;
}

Script moves_from_json(const json& arr, std::ostream* warnings) {
  if (!arr.is_array()) throw std::invalid_argument("script: moves must be a list");
  Script sc;
  for (const auto& e : arr) {
    if (!e.is_object() || !e.contains("op") || !e.contains("ray"))
      throw std::invalid_argument("script: each move needs op and ray");
    Move m;
    std::string op = e.at("op").get<std::string>();
    if (op == "subdivide")
      m.op = MoveOp::subdivide;
    else if (op == "assemble")
      m.op = MoveOp::assemble;
    else
      throw std::invalid_argument("script: unknown op '" + op + "'");
    Vec v = vec_from_json(e.at("ray"), "script ray");
    if (is_zero(v)) throw std::invalid_argument("script: zero ray");
    m.ray = primitive(v);
    if (vec_cmp(m.ray, v) != 0 && warnings)
      *warnings << "warning: ray " << vec_str(v) << " normalized to " << vec_str(m.ray)
                << "\n";
    sc.push_back(std::move(m));
  }
  return sc;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

Fan fan_from_json(const std::string& text, std::ostream* warnings) {
  return fan_from_object(parse_text(text), warnings);
}

std::string fan_to_json(const Fan& f, const std::string& name) {
  return dump(fan_to_object(f, name));
}

LiftedFan lifted_from_json(const std::string& text, std::ostream* warnings) {
  json j = parse_text(text);
  if (!j.contains("base_dim"))
    throw std::invalid_argument("lifted fan document: needs base_dim");
  LiftedFan s;
  s.base_dim = j.at("base_dim").get<int>();
  s.fan = fan_from_object(j, warnings);
  if (s.fan.dim != s.base_dim + 1)
    throw std::invalid_argument("lifted fan document: dim must be base_dim + 1");
  for (const auto& m : s.fan.maximal)
    if (!pi_strongly_convex(s, m))
      throw std::invalid_argument("lifted fan document: projection of a cone is not "
                                  "strongly convex");
  return s;
}

std::string lifted_to_json(const LiftedFan& s, const std::string& name) {
  json j = fan_to_object(s.fan, name);
  j["base_dim"] = s.base_dim;
  return dump(j);
}

Script script_from_json(const std::string& text, std::ostream* warnings) {
  json j = parse_text(text);
  if (!j.contains("moves")) throw std::invalid_argument("script document: needs moves");
  return moves_from_json(j.at("moves"), warnings);
}

std::string script_to_json(const Script& sc) {
  json j;
  j["moves"] = moves_to_json(sc);
  return dump(j);
}

std::string factorization_to_json(const FactorizationResult& r) {
  json j;
  j["down"] = {{"moves", moves_to_json(r.down)}};
  j["up"] = {{"moves", moves_to_json(r.up)}};
  j["top"] = fan_to_object(r.top, "");
  return dump(j);
}

std::string graph_to_dot(const LiftedFan& s, const CircuitGraph& g) {
  std::ostringstream os;
  os << "digraph circuits {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    os << "  n" << i << " [label=\"";
    const auto& c = g.nodes[i].rays;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) os << ' ';
      os << vec_str(s.fan.rays[c[k]]);
    }
    os << "\"];\n";
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    for (int j : g.edges[i]) os << "  n" << i << " -> n" << j << ";\n";
  os << "}\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::runtime_error("cannot read " + path);
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out.good()) throw std::runtime_error("cannot write " + path);
}

}  // namespace fanfactor

#include "exparc/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "exparc/errors.hpp"

namespace exparc {

using nlohmann::json;

namespace {

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError("state JSON: " + where + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError("state JSON: " + where + " is not finite");
  return v;
}

std::vector<double> number_array(const json& j, const std::string& field) {
  if (!j.contains(field)) throw InputError("state JSON: missing field \"" + field + "\"");
  const json& a = j.at(field);
  if (!a.is_array() || a.empty()) {
    throw InputError("state JSON: \"" + field + "\" must be a non-empty array");
  }
  std::vector<double> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(number_at(a[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ProbabilityVector parse_classical(const json& j) {
  std::vector<double> w = number_array(j, "weights");
  if (!j.contains("quadrature")) return ProbabilityVector(std::move(w));
  std::vector<double> h = number_array(j, "quadrature");
  if (h.size() != w.size()) {
    throw InputError("state JSON: \"quadrature\" length differs from \"weights\"");
  }
  return ProbabilityVector(std::move(w), std::move(h));
}

DensityMatrix parse_quantum(const json& j) {
  if (!j.contains("dim") || !j.at("dim").is_number_integer() || j.at("dim").get<long>() < 1) {
    throw InputError("state JSON: \"dim\" must be a positive integer");
  }
  const long n = j.at("dim").get<long>();
  if (!j.contains("matrix") || !j.at("matrix").is_array()) {
    throw InputError("state JSON: missing array \"matrix\"");
  }
  const json& m = j.at("matrix");
  if (static_cast<long>(m.size()) != n * n) {
    throw InputError("state JSON: \"matrix\" must hold dim*dim entries");
  }
  CMatrix out(n, n);
  for (long k = 0; k < n * n; ++k) {
    const json& e = m[static_cast<std::size_t>(k)];
    const std::string where = "matrix[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2) {
      throw InputError("state JSON: " + where + " must be a [re, im] pair");
    }
    out(k / n, k % n) = Complex(number_at(e[0], where), number_at(e[1], where));
  }
  return DensityMatrix(HermitianMatrix(out));
}

}  // namespace

State parse_state(const json& j) {
  if (!j.is_object()) throw InputError("state JSON: top level must be an object");
  if (!j.contains("type") || !j.at("type").is_string()) {
    throw InputError("state JSON: missing string field \"type\"");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "classical") return parse_classical(j);
  if (type == "quantum") return parse_quantum(j);
  throw InputError("state JSON: unknown type \"" + type + "\"");
}

State parse_state_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("state JSON: ") + e.what());
  }
  return parse_state(j);
}

State load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read state file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_text(buf.str());
}

json state_to_json(const ProbabilityVector& p) {
  return json{{"type", "classical"}, {"weights", p.weights()}, {"quadrature", p.quadrature()}};
}

json state_to_json(const DensityMatrix& rho) {
  const int n = rho.dim();
  json m = json::array();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex z = rho.matrix()(i, j);
      m.push_back(json::array({z.real(), z.imag()}));
    }
  }
  return json{{"type", "quantum"}, {"dim", n}, {"matrix", std::move(m)}};
}

json state_to_json(const State& s) {
  return std::visit([](const auto& v) { return state_to_json(v); }, s);
}

std::string dump_compact(const json& j) { return j.dump(); }

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double state_distance(const State& a, const State& b) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (a.index() != b.index()) return kInf;
  if (const auto* p = std::get_if<ProbabilityVector>(&a)) {
    const auto& q = std::get<ProbabilityVector>(b);
    if (p->size() != q.size()) return kInf;
    double d = 0.0;
    for (std::size_t i = 0; i < p->size(); ++i) {
      d = std::max(d, std::abs((*p)[i] - q[i]));
      d = std::max(d, std::abs(p->quadrature()[i] - q.quadrature()[i]));
    }
    return d;
  }
  const auto& x = std::get<DensityMatrix>(a);
  const auto& y = std::get<DensityMatrix>(b);
  if (x.dim() != y.dim()) return kInf;
  return (x.matrix() - y.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace exparc

#include "exparc/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "exparc/arc.hpp"

namespace exparc {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// One output cell: a number, a flag or an embedded state.
using Cell = std::variant<double, bool, json>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  std::string s = dump_compact(std::get<json>(c));
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render(const Table& table, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      os << (i ? "," : "") << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << '\n';
    }
    return os.str();
  }
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { r[table.columns[i]] = v; }, row[i]);
    }
    rows.push_back(std::move(r));
  }
  ordered_json doc = {{"columns", table.columns}, {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

// Runs f at t, turning a math-domain failure into an error that names t.
template <class F>
auto at_point(double t, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const GridPointError&) {
    throw;
  } catch (const DomainError& e) {
    throw GridPointError(t, e.what());
  }
}

void check_same_kind(const State& a, const State& b) {
  if (a.index() != b.index()) {
    throw InputError("source and target states differ in type");
  }
  const std::size_t na = std::visit([](const auto& s) -> std::size_t {
    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ProbabilityVector>) {
      return s.size();
    } else {
      return static_cast<std::size_t>(s.dim());
    }
  }, a);
  const std::size_t nb = std::visit([](const auto& s) -> std::size_t {
    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ProbabilityVector>) {
      return s.size();
    } else {
      return static_cast<std::size_t>(s.dim());
    }
  }, b);
  if (na != nb) throw InputError("source and target states differ in dimension");
  if (const auto* p = std::get_if<ProbabilityVector>(&a)) {
    if (p->quadrature() != std::get<ProbabilityVector>(b).quadrature()) {
      throw InputError("source and target states use different quadrature weights");
    }
  }
}

}  // namespace

std::vector<double> GridSpec::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] =
        k == count - 1 ? max : min + (max - min) * static_cast<double>(k) / (count - 1);
  }
  return out;
}

GridSpec parse_grid(const std::string& text) {
  const auto bad = [&](const std::string& why) {
    return InputError("--grid \"" + text + "\": " + why + " (expected min:max:count)");
  };
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw bad("missing field");
  GridSpec g;
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, c1);
    const std::string b = text.substr(c1 + 1, c2 - c1 - 1);
    const std::string c = text.substr(c2 + 1);
    g.min = std::stod(a, &used);
    if (used != a.size()) throw bad("bad min");
    g.max = std::stod(b, &used);
    if (used != b.size()) throw bad("bad max");
    g.count = std::stoi(c, &used);
    if (used != c.size()) throw bad("bad count");
  } catch (const std::logic_error&) {
    throw bad("not a number");
  }
  if (!std::isfinite(g.min) || !std::isfinite(g.max) || !(g.min < g.max)) {
    throw bad("min must be below max");
  }
  if (g.count < 2) throw bad("count must be at least 2");
  return g;
}

OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw InputError("--output must be csv or json, got \"" + text + "\"");
}

SupportPolicy parse_support_mode(const std::string& text) {
  SupportPolicy p;
  if (text == "clip") {
    p.mode = SupportPolicy::Mode::ClipToZero;
  } else if (text == "reject") {
    p.mode = SupportPolicy::Mode::Reject;
  } else {
    throw InputError("--support must be clip or reject, got \"" + text + "\"");
  }
  return p;
}

GridPointError::GridPointError(double t, const std::string& what)
    : DomainError("at t = " + format_number(t) + ": " + what), t_(t) {}

Observable parse_observable(const json& j) {
  if (!j.is_object()) throw InputError("observable JSON: top level must be an object");
  if (j.contains("values")) {
    DiscreteObservable a;
    const json& v = j.at("values");
    if (!v.is_array() || v.empty()) throw InputError("observable JSON: bad \"values\"");
    for (const auto& e : v) {
      if (!e.is_number()) throw InputError("observable JSON: non-numeric value");
      a.values.push_back(e.get<double>());
    }
    return a;
  }
  // Same layout as a quantum state, without the density-matrix checks.
  if (!j.contains("dim") || !j.at("dim").is_number_integer() || !j.contains("matrix") ||
      !j.at("matrix").is_array()) {
    throw InputError("observable JSON: expected \"values\" or \"dim\" with \"matrix\"");
  }
  const long n = j.at("dim").get<long>();
  const json& m = j.at("matrix");
  if (n < 1 || static_cast<long>(m.size()) != n * n) {
    throw InputError("observable JSON: \"matrix\" must hold dim*dim entries");
  }
  CMatrix out(n, n);
  for (long k = 0; k < n * n; ++k) {
    const json& e = m[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw InputError("observable JSON: matrix entries must be [re, im] pairs");
    }
    out(k / n, k % n) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return HermitianMatrix(out);
}

Observable load_observable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read observable file \"" + path + "\"");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("observable JSON: ") + e.what());
  }
  return parse_observable(j);
}

ArcSpectralWeights pair_weights(const State& source, const State& target,
                                const SupportPolicy& policy) {
  check_same_kind(source, target);
  if (const auto* p = std::get_if<ProbabilityVector>(&source)) {
    return radon_nikodym(*p, std::get<ProbabilityVector>(target));
  }
  return quantum_arc_weights(std::get<DensityMatrix>(source), std::get<DensityMatrix>(target),
                             policy);
}

std::string cmd_arc(const ArcRequest& req, OutputFormat format) {
  const ArcSpectralWeights arc = pair_weights(req.source, req.target, req.policy);
  const bool classical = std::holds_alternative<ProbabilityVector>(req.source);
  if (req.outputs.tangent) {
    if (!req.observable) throw InputError("tangent column requested without an observable");
    if (classical != std::holds_alternative<DiscreteObservable>(*req.observable)) {
      throw InputError("observable kind does not match the states");
    }
    const std::size_t n = classical ? std::get<ProbabilityVector>(req.source).size()
                                    : static_cast<std::size_t>(
                                          std::get<DensityMatrix>(req.source).dim());
    const std::size_t m = classical
                              ? std::get<DiscreteObservable>(*req.observable).values.size()
                              : static_cast<std::size_t>(
                                    std::get<HermitianMatrix>(*req.observable).dim());
    if (n != m) throw InputError("observable dimension differs from state dimension");
  }

  Table table;
  table.columns.push_back("t");
  const ArcOutputs& o = req.outputs;
  if (o.zeta) table.columns.push_back("zeta");
  if (o.zetaPrime) table.columns.push_back("zeta_prime");
  if (o.zetaSecond) table.columns.push_back("zeta_second");
  if (o.dualCoordinate) table.columns.push_back("t_star");
  if (o.statePoints) table.columns.push_back("state");
  if (o.tangent) table.columns.push_back("tangent");

  for (double t : req.grid.points()) {
    table.rows.push_back(at_point(t, [&] {
      std::vector<Cell> row{t};
      if (o.zeta) row.emplace_back(zeta(arc, t));
      if (o.zetaPrime) row.emplace_back(zeta_prime(arc, t));
      if (o.zetaSecond) row.emplace_back(zeta_second(arc, t));
      if (o.dualCoordinate) row.emplace_back(dual_coordinate(arc, t));
      if (o.statePoints) {
        if (classical) {
          row.emplace_back(state_to_json(arc_point(std::get<ProbabilityVector>(req.source),
                                                   std::get<ProbabilityVector>(req.target), t)));
        } else {
          row.emplace_back(state_to_json(arc_density(std::get<DensityMatrix>(req.source),
                                                     std::get<DensityMatrix>(req.target), t,
                                                     req.policy)));
        }
      }
      if (o.tangent) {
        if (classical) {
          row.emplace_back(classical_state_tangent(std::get<ProbabilityVector>(req.source),
                                                   std::get<ProbabilityVector>(req.target), t,
                                                   std::get<DiscreteObservable>(*req.observable)));
        } else {
          row.emplace_back(state_tangent(std::get<DensityMatrix>(req.source),
                                         std::get<DensityMatrix>(req.target), t,
                                         std::get<HermitianMatrix>(*req.observable), req.policy));
        }
      }
      return row;
    }));
  }
  return render(table, format);
}

std::string cmd_compare_geodesic(const State& source, const State& target, const GridSpec& grid,
                                 OutputFormat format, const SupportPolicy& policy) {
  check_same_kind(source, target);
  const auto* x = std::get_if<DensityMatrix>(&source);
  if (x == nullptr) throw InputError("compare-geodesic needs quantum states");
  const auto& y = std::get<DensityMatrix>(target);
  if (!x->faithful(policy)) throw FaithfulnessError("compare-geodesic: source is singular");
  if (!y.faithful(policy)) throw FaithfulnessError("compare-geodesic: target is singular");
  const double comm = frobenius_norm(commutator(x->matrix(), y.matrix()));

  Table table;
  table.columns = {"t", "trace_distance", "commutator_norm"};
  for (double t : grid.points()) {
    table.rows.push_back(at_point(t, [&] {
      const double d = trace_distance(arc_density(*x, y, t, policy).matrix(),
                                      log_geodesic(*x, y, t, policy).matrix());
      return std::vector<Cell>{t, d, comm};
    }));
  }
  return render(table, format);
}

std::string cmd_legendre(const State& source, const State& target,
                         const std::optional<GridSpec>& grid, OutputFormat format,
                         const SupportPolicy& policy) {
  const ArcSpectralWeights arc = pair_weights(source, target, policy);
  GridSpec g;
  if (grid) {
    g = *grid;
  } else if (arc.is_flat()) {
    g = GridSpec{-1.0, 1.0, 101};
  } else {
    double lo = 0.0;
    if (arc.has_kernel()) {
      double mass = 0.0;
      for (const auto& p : arc.points()) {
        if (p.lambda > 0.0) {
          mass += p.weight;
          lo += p.weight * std::log(p.lambda);
        }
      }
      lo = 0.5 * lo / mass;
    } else {
      lo = zeta_prime(arc, 0.0);
    }
    g = GridSpec{lo, zeta_prime(arc, 1.0), 101};
  }

  Table table;
  table.columns = {"s", "t_star", "zeta_star", "residual", "interior", "degenerate"};
  for (double s : g.points()) {
    table.rows.push_back(at_point(s, [&] {
      const LegendrePair lp = legendre(arc, s);
      const double residual = std::abs(zeta(arc, lp.tStar) + lp.zetaStar - s * lp.tStar);
      return std::vector<Cell>{s, lp.tStar, lp.zetaStar, residual, lp.interior, lp.degenerate};
    }));
  }
  return render(table, format);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

}  // namespace exparc

#pragma once

// Grid evaluations behind the command-line tool. Each command returns the
// full output text; nothing is written to stdout here.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "exparc/errors.hpp"
#include "exparc/serialize.hpp"

namespace exparc {

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  int count = 101;

  /// Evenly spaced points; the last one is exactly max.
  std::vector<double> points() const;
};

/// "min:max:count" with min < max and count >= 2.
GridSpec parse_grid(const std::string& text);

enum class OutputFormat { Csv, Json };

OutputFormat parse_output_format(const std::string& text);
SupportPolicy parse_support_mode(const std::string& text);

/// A math-domain failure at a specific grid point.
class GridPointError : public DomainError {
 public:
  GridPointError(double t, const std::string& what);
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// Diagonal values for a classical pair, a Hermitian matrix for a quantum one.
using Observable = std::variant<DiscreteObservable, HermitianMatrix>;

/// {"type":"observable","values":[...]} or
/// {"type":"observable","dim":n,"matrix":[[re,im],...]}.
Observable parse_observable(const nlohmann::json& j);
Observable load_observable(const std::string& path);

struct ArcOutputs {
  bool zeta = true;
  bool zetaPrime = true;
  bool zetaSecond = true;
  bool dualCoordinate = true;
  bool statePoints = true;
  /// Requires an observable.
  bool tangent = false;
};

struct ArcRequest {
  State source;
  State target;
  GridSpec grid;
  ArcOutputs outputs;
  std::optional<Observable> observable;
  SupportPolicy policy;
};

/// Spectral data of the pair; InputError when the states differ in type or
/// dimension.
ArcSpectralWeights pair_weights(const State& source, const State& target,
                                const SupportPolicy& policy = {});

/// Columns: t, zeta, zeta_prime, zeta_second, t_star, state, tangent (the
/// enabled subset, in that order).
std::string cmd_arc(const ArcRequest& request, OutputFormat format);

/// Columns: t, trace_distance, commutator_norm (Frobenius norm of
/// [rho_x, rho_y]). Both states must be strictly positive density matrices.
std::string cmd_compare_geodesic(const State& source, const State& target, const GridSpec& grid,
                                 OutputFormat format, const SupportPolicy& policy = {});

/// Columns: s, t_star, zeta_star, residual, interior, degenerate. Without a
/// grid the slopes span [zeta'(0+), zeta'(1)] with 101 points.
std::string cmd_legendre(const State& source, const State& target,
                         const std::optional<GridSpec>& grid, OutputFormat format,
                         const SupportPolicy& policy = {});

/// Splits one CSV line, honoring double-quoted cells.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace exparc

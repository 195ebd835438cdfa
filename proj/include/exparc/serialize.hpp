#pragma once

// JSON encoding of states.
//
//   {"type":"classical","weights":[...],"quadrature":[...]}   (quadrature optional)
//   {"type":"quantum","dim":n,"matrix":[[re,im],...]}         (row-major, n*n entries)

#include <string>
#include <variant>

#include <json.hpp>

#include "exparc/classical.hpp"
#include "exparc/quantum.hpp"

namespace exparc {

using State = std::variant<ProbabilityVector, DensityMatrix>;

/// Throws InputError on any schema violation (the message names the field).
State parse_state(const nlohmann::json& j);
State parse_state_text(const std::string& text);
/// Reads and parses a file; unreadable files are an InputError too.
State load_state(const std::string& path);

nlohmann::json state_to_json(const ProbabilityVector& p);
nlohmann::json state_to_json(const DensityMatrix& rho);
nlohmann::json state_to_json(const State& s);

/// Compact single-line encoding used inside CSV cells and reports.
std::string dump_compact(const nlohmann::json& j);

/// %.17g rendering of a double (CSV cells).
std::string format_number(double v);

/// Largest entrywise difference between two states of the same kind and size;
/// +inf when they are not comparable.
double state_distance(const State& a, const State& b);

}  // namespace exparc

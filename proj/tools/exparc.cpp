// exparc: exponential arcs between states from the command line.
//
// Exit codes: 0 ok, 1 verify reported a failure, 2 input or schema error,
// 3 math-domain error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "exparc/commands.hpp"
#include "exparc/errors.hpp"
#include "exparc/verification.hpp"

namespace {

constexpr int kExitFailedChecks = 1;
constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

int report_error(const char* kind, const std::string& message, std::optional<double> t,
                 int code) {
  nlohmann::ordered_json err;
  err["error"] = kind;
  err["message"] = message;
  if (t) err["t"] = *t;
  std::cerr << err.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential arcs between classical and quantum states"};
  app.require_subcommand(1);

  std::string input;
  std::string target;
  std::string grid_text;
  std::string output = "csv";
  std::string support = "clip";
  std::string observable;
  std::uint64_t seed = 42;
  std::optional<double> tol;
  std::vector<std::string> fixtures;

  const auto add_pair = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "Source state (JSON file)")->required();
    cmd->add_option("--target", target, "Target state (JSON file)")->required();
    cmd->add_option("--output", output, "csv or json")->capture_default_str();
    cmd->add_option("--support", support, "clip or reject")->capture_default_str();
  };

  CLI::App* arc = app.add_subcommand("arc", "Evaluate zeta, its derivatives and the arc on a grid");
  add_pair(arc);
  arc->add_option("--grid", grid_text, "min:max:count (default 0:1:101)");
  arc->add_option("--observable", observable, "Observable JSON; adds a tangent column");

  CLI::App* cmp = app.add_subcommand("compare-geodesic",
                                     "Trace distance between the arc and the log-linear path");
  add_pair(cmp);
  cmp->add_option("--grid", grid_text, "min:max:count (default 0:1:101)");

  CLI::App* leg = app.add_subcommand("legendre", "Legendre transform of zeta on a slope grid");
  add_pair(leg);
  leg->add_option("--grid", grid_text, "min:max:count over slopes");

  CLI::App* ver = app.add_subcommand("verify", "Run the seeded invariant checks");
  ver->add_option("--seed", seed, "Random seed")->capture_default_str();
  ver->add_option("--tol", tol, "Override the tolerance of residual checks");
  ver->add_option("--input", fixtures, "State files to check for schema validity");
  ver->add_option("--support", support, "clip or reject")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("input", e.what(), std::nullopt, kExitInput);
  }

  try {
    const exparc::SupportPolicy policy = exparc::parse_support_mode(support);
    if (ver->parsed()) {
      exparc::RunConfig cfg;
      cfg.seed = seed;
      if (tol && !(*tol > 0.0)) throw exparc::InputError("--tol must be positive");
      cfg.tolerance = tol;
      cfg.policy = policy;
      cfg.fixtures = fixtures;
      const exparc::VerifyReport report = exparc::cmd_verify(cfg);
      std::cout << report.to_json();
      return report.passed() ? 0 : kExitFailedChecks;
    }

    const exparc::OutputFormat format = exparc::parse_output_format(output);
    const exparc::State source = exparc::load_state(input);
    const exparc::State dest = exparc::load_state(target);
    std::optional<exparc::GridSpec> grid;
    if (!grid_text.empty()) grid = exparc::parse_grid(grid_text);

    if (arc->parsed()) {
      exparc::ArcRequest req{source, dest, grid.value_or(exparc::GridSpec{}), {}, std::nullopt,
                             policy};
      if (!observable.empty()) {
        req.observable = exparc::load_observable(observable);
        req.outputs.tangent = true;
      }
      std::cout << exparc::cmd_arc(req, format);
    } else if (cmp->parsed()) {
      std::cout << exparc::cmd_compare_geodesic(source, dest, grid.value_or(exparc::GridSpec{}),
                                                format, policy);
    } else {
      std::cout << exparc::cmd_legendre(source, dest, grid, format, policy);
    }
    return 0;
  } catch (const exparc::GridPointError& e) {
    return report_error("domain", e.what(), e.t(), kExitDomain);
  } catch (const exparc::InputError& e) {
    return report_error("input", e.what(), std::nullopt, kExitInput);
  } catch (const exparc::DomainError& e) {
    return report_error("domain", e.what(), std::nullopt, kExitDomain);
  } catch (const exparc::Error& e) {
    return report_error("domain", e.what(), std::nullopt, kExitDomain);
  }
}

#include <pybind11/pybind11.h>

#include "gowers/scenario.hpp"
#include "gowers/instances.hpp"
#include "gowers/solver.hpp"

namespace py = pybind11;
using namespace gowers;

namespace {

// Every entry point exchanges JSON text; the Python layer converts to and from dicts.
template <typename F>
std::string guarded(F&& body) {
  try {
    return body().dump();
  } catch (const Error& e) {
    throw std::runtime_error(e.to_json().dump());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.def("run_scenario", [](const std::string& scenario, std::int64_t budget_nodes) {
    RunOptions options;
    if (budget_nodes >= 0) options.budget_nodes = static_cast<std::uint64_t>(budget_nodes);
    py::gil_scoped_release release;
    RunOutcome out = run_scenario(json::parse(scenario), options);
    return json{{"report", out.report}, {"exit_code", out.exit_code}}.dump();
  });
  m.def("render_report", [](const std::string& report, const std::string& format) {
    try {
      return render_report(json::parse(report), format);
    } catch (const Error& e) {
      throw std::runtime_error(e.to_json().dump());
    }
  });
  m.def("instance_summary", [](const std::string& spec) {
    return guarded([&] { return build_instance(json::parse(spec))->summary(); });
  });
  m.def("check_axioms", [](const std::string& spec, int horizon) {
    py::gil_scoped_release release;
    return guarded([&] { return check_axioms(*build_instance(json::parse(spec)), horizon).to_json(); });
  });
  m.def("solve", [](const std::string& spec, const std::string& kind, const std::string& payoff_spec, int horizon,
                    const std::string& owner, const std::string& root) {
    py::gil_scoped_release release;
    return guarded([&] {
      SpacePtr space = build_instance(json::parse(spec));
      Payoff payoff = make_payoff(*space, json::parse(payoff_spec), horizon);
      Game game = game_for(parse_game_kind(kind), resolve_subspace(*space, json::parse(root)), payoff);
      return solve(*space, game, payoff, parse_player(owner)).to_json();
    });
  });
}

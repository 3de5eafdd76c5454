#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gowers/scenario.hpp"

using namespace gowers;

namespace {

struct OutputFlags {
  std::string out_dir;
  std::string format = "table";
  std::optional<std::uint64_t> budget_nodes;
};

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
  cmd->add_option("--out", flags.out_dir, "Directory for <name>.report.json and <name>.summary.txt");
  cmd->add_option("--format", flags.format, "Stdout rendering")->check(CLI::IsMember({"json", "table"}));
  cmd->add_option("--budget-nodes", flags.budget_nodes, "Override the scenario's node budget");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int emit(const RunOutcome& outcome, const OutputFlags& flags) {
  std::string dir = flags.out_dir;
  if (dir.empty())
    if (const char* env = std::getenv("GOWERS_OUT_DIR")) dir = env;
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    const std::string name = outcome.report.value("scenario", "unnamed");
    write_file(std::filesystem::path(dir) / (name + ".report.json"), render_report(outcome.report, "json"));
    write_file(std::filesystem::path(dir) / (name + ".summary.txt"), render_report(outcome.report, "table"));
  }
  std::cout << render_report(outcome.report, flags.format);
  if (outcome.report.contains("error")) std::cerr << outcome.report["error"].dump() << "\n";
  return outcome.exit_code;
}

// Loads a scenario and swaps its pipeline for the given stages, so the single-stage
// subcommands share the runner with `run`.
json with_pipeline(const std::string& path, json stages, const std::string& suffix) {
  json scenario = read_json_file(path);
  if (!scenario.is_object()) throw SpecInvalid("scenario must be a JSON object");
  scenario["name"] = scenario.value("name", "unnamed") + "." + suffix;
  scenario["pipeline"] = std::move(stages);
  return scenario;
}

json reduce_stages(const std::string& name, const std::string& owner, const json& params) {
  static const std::map<std::string, std::pair<std::string, std::string>> inputs{
      {"adversarial_from_kastanas", {"K", ""}},
      {"transfer_a_to_b", {"A", "I"}},
      {"gowers_from_asymptotic", {"F", "I"}},
      {"asymptotic_from_gowers", {"G", "II"}},
      {"approx_asymptotic_from_gowers", {"G", "II"}},
      {"strong_asymptotic_from_asymptotic", {"F", "I"}},
      {"homogeneous_from_asymptotic", {"F", "I"}}};
  json reduce = params.is_object() ? params : json::object();
  reduce["op"] = "reduce";
  reduce["name"] = name;
  auto it = inputs.find(name);
  if (it == inputs.end()) return json::array({reduce});
  const std::string who = it->second.second.empty() ? owner : it->second.second;
  const bool complement = it->second.first == "K" && who == "II";
  json solve{{"op", "solve"}, {"game", it->second.first}, {"owner", who}, {"target", complement ? "complement" : "payoff"}};
  return json::array({solve, reduce});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite Gowers-space game lab"};
  app.require_subcommand(1);

  OutputFlags flags;
  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run a scenario pipeline");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  add_output_flags(run, flags);

  std::string instance_path;
  int horizon = 2;
  auto* axioms = app.add_subcommand("axioms", "Check the five axioms on an instance");
  axioms->add_option("instance", instance_path, "Instance JSON")->required();
  axioms->add_option("--horizon", horizon, "History length bound")->required()->check(CLI::PositiveNumber);
  add_output_flags(axioms, flags);

  std::string owner = "I", target = "payoff", game_kind;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the scenario's game");
  solve_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  solve_cmd->add_option("--owner", owner, "Goal owner")->check(CLI::IsMember({"I", "II"}));
  solve_cmd->add_option("--target", target, "Goal set")->check(CLI::IsMember({"payoff", "complement"}));
  solve_cmd->add_option("--game", game_kind, "Game kind overriding the scenario's");
  add_output_flags(solve_cmd, flags);

  std::string reduction, params_text = "{}";
  auto* reduce_cmd = app.add_subcommand("reduce", "Solve for the reduction's input strategy and transform it");
  reduce_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  reduce_cmd->add_option("--name", reduction, "Reduction name")->required();
  reduce_cmd->add_option("--owner", owner, "Owner for adversarial_from_kastanas")->check(CLI::IsMember({"I", "II"}));
  reduce_cmd->add_option("--params", params_text, "Extra stage fields as a JSON object");
  add_output_flags(reduce_cmd, flags);

  std::string flavor = "strategic", p_ref = "root";
  auto* dichotomy_cmd = app.add_subcommand("dichotomy", "Check the Ramsey dichotomy below p");
  dichotomy_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  dichotomy_cmd->add_option("--flavor", flavor)->check(CLI::IsMember({"adversarial", "strategic"}));
  dichotomy_cmd->add_option("--p", p_ref, "Subspace name or id");
  add_output_flags(dichotomy_cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    RunOptions options{flags.budget_nodes};
    json scenario;
    if (*run) {
      scenario = read_json_file(scenario_path);
    } else if (*axioms) {
      json instance = read_json_file(instance_path);
      const std::string name = instance.is_object() ? instance.value("name", "instance") : "instance";
      scenario = json{{"name", name + ".axioms"},
                      {"instance", instance},
                      {"game", {{"kind", "F"}, {"horizon", horizon}}},
                      {"payoff", "accept_all"},
                      {"pipeline", json::array({{{"op", "axioms"}, {"horizon", horizon}}})}};
    } else if (*solve_cmd) {
      json stage{{"op", "solve"}, {"owner", owner}, {"target", target}};
      if (!game_kind.empty()) stage["game"] = game_kind;
      scenario = with_pipeline(scenario_path, json::array({stage}), "solve");
    } else if (*reduce_cmd) {
      json params;
      try {
        params = json::parse(params_text);
      } catch (const json::parse_error& e) {
        throw SpecInvalid(std::string("--params is not JSON: ") + e.what());
      }
      scenario = with_pipeline(scenario_path, reduce_stages(reduction, owner, params), "reduce");
    } else {
      json ref = p_ref;
      if (!p_ref.empty() && std::all_of(p_ref.begin(), p_ref.end(), ::isdigit)) ref = std::stoi(p_ref);
      scenario = with_pipeline(scenario_path, json::array({{{"op", "dichotomy"}, {"flavor", flavor}, {"p", ref}}}),
                               "dichotomy");
    }
    return emit(run_scenario(scenario, options), flags);
  } catch (const Error& e) {
    std::cerr << e.to_json().dump() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << json{{"code", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return kExitInternal;
  }
}

#include "nonsig/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "nonsig/decompose.hpp"
#include "nonsig/error.hpp"
#include "nonsig/ghz.hpp"
#include "nonsig/inequality.hpp"
#include "nonsig/json_io.hpp"
#include "nonsig/network.hpp"

namespace nonsig {

namespace {

struct Common {
  bool pretty = false;
  unsigned threads = 0;
};

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

int parse_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::logic_error&) {
    throw InputError(what + ": '" + s + "' is not an integer");
  }
  if (pos != s.size()) throw InputError(what + ": '" + s + "' is not an integer");
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::logic_error&) {
    throw InputError(what + ": '" + s + "' is not a number");
  }
  if (pos != s.size()) throw InputError(what + ": '" + s + "' is not a number");
  return v;
}

Json witness_json(const Signature& sig, const SignalingWitness& w) {
  Json context = Json::array();
  for (std::size_t p = 0; p < w.context.size(); ++p)
    context.push_back(p == w.party ? Json(nullptr) : Json(sig.inputs(p).symbol(w.context[p])));
  return Json{{"party", sig.party(w.party)},
              {"context", std::move(context)},
              {"input_a", sig.inputs(w.party).symbol(w.input_a)},
              {"input_b", sig.inputs(w.party).symbol(w.input_b)},
              {"marginal_a", w.marginal_a},
              {"marginal_b", w.marginal_b}};
}

std::string table_text(const NonsignalingResource& r) {
  std::ostringstream s;
  const auto& sig = r.signature();
  s << "id " << r.id() << "\n";
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
    const auto in = sig.decode_inputs(i);
    std::vector<int> xs;
    for (std::size_t p = 0; p < in.size(); ++p) xs.push_back(sig.inputs(p).symbol(in[p]));
    s << "inputs " << join_symbols(xs) << ":";
    for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) {
      const auto outs = sig.decode_outputs(o);
      std::vector<int> as;
      for (std::size_t p = 0; p < outs.size(); ++p) as.push_back(sig.outputs(p).symbol(outs[p]));
      s << "  " << join_symbols(as) << "=" << to_string(r.at(i, o));
    }
    s << "\n";
  }
  return s.str();
}

// ---- validate ------------------------------------------------------------------

int cmd_validate(const std::string& path, bool counterexample, const Common& c, std::ostream& out) {
  const Scenario s = load_scenario(path);
  bool ok = true;
  Json resources = Json::array();
  for (const auto& r : s.resources) {
    Json rj{{"id", r.resource.id()}, {"nonsignaling", r.nonsignaling.ok}};
    if (!r.nonsignaling.ok) {
      rj["message"] = r.nonsignaling.message;
      if (r.nonsignaling.witness) rj["violation"] = witness_json(r.resource.signature(), *r.nonsignaling.witness);
      if (!counterexample) ok = false;
    }
    resources.push_back(std::move(rj));
  }
  const auto net = validate_network(s.parties, s.resource_list(), s.trees, s.bins);
  if (!net.ok) ok = false;
  Json report{{"scenario", s.name},
              {"resources", std::move(resources)},
              {"network", Json{{"ok", net.ok}, {"message", net.message}}},
              {"ok", ok}};
  if (c.pretty) {
    out << "scenario " << s.name << "\n";
    for (const auto& r : report["resources"])
      out << "  resource " << r["id"].get<std::string>() << ": "
          << (r["nonsignaling"].get<bool>() ? "nonsignaling" : "SIGNALING " + r["message"].get<std::string>()) << "\n";
    out << "  network: " << (net.ok ? "ok" : net.message) << "\n" << (ok ? "PASS" : "FAIL") << "\n";
  } else {
    emit(out, report);
  }
  return ok ? kExitOk : kExitDomain;
}

// ---- joint ------------------------------------------------------------------------

int cmd_joint(const std::string& path, const std::string& settings_text, bool allow_unnormalized, const Common& c,
              std::ostream& out) {
  const Scenario s = load_scenario(path);
  const Network net = s.network();
  std::vector<int> settings;
  if (!settings_text.empty())
    for (const auto& part : split(settings_text, ',')) settings.push_back(parse_int(part, "--settings"));
  if (settings.size() != net.party_count())
    throw InputError("--settings: expected " + std::to_string(net.party_count()) + " comma-separated symbols");
  EvalOptions opts{c.threads, allow_unnormalized};
  const auto d = joint_distribution(net, settings, opts);
  if (c.pretty) {
    for (std::size_t i = 0; i < d.table.size(); ++i) {
      if (sgn(d.table[i]) == 0) continue;
      for (const auto& [id, symbols] : decode_assignment(net, i)) out << id << "=" << join_symbols(symbols) << " ";
      out << ": " << to_string(d.table[i]) << "\n";
    }
    out << "sum " << to_string(d.sum) << "\n";
  } else {
    emit(out, joint_to_json(net, d));
  }
  return kExitOk;
}

// ---- behavior ------------------------------------------------------------------------

int cmd_behavior(const std::string& path, bool check_nosig, const std::string& output, const Common& c,
                 std::ostream& out, std::ostream& err) {
  const Scenario s = load_scenario(path);
  const Network net = s.network();
  const Behavior b = induced_behavior(net, EvalOptions{c.threads, false});
  int code = kExitOk;
  Json j = behavior_to_json(net, b);
  if (check_nosig) {
    const auto rep = validate_nonsignaling(b);
    j["nonsignaling"] = rep.ok;
    if (!rep.ok) {
      err << "behavior is signaling: " << rep.message << "\n";
      code = kExitDomain;
    }
  }
  if (!output.empty()) {
    std::ofstream f(output);
    if (!f) throw InputError(output + ": cannot write file");
    f << j.dump(2) << "\n";
  }
  if (c.pretty)
    out << table_text(b);
  else if (output.empty())
    emit(out, j);
  return code;
}

// ---- decompose ------------------------------------------------------------------------

int cmd_decompose(const std::string& path, const std::string& vertices, const Common& c, std::ostream& out) {
  const auto r = nonsignaling_resource_from_json(read_json_file(path));
  VertexSet vs;
  if (vertices == "local")
    vs = local_deterministic_vertices(r.signature());
  else if (vertices == "ns222")
    vs = ns_vertices_222(r.signature().parties());
  else
    vs = vertex_set_from_json(read_json_file(vertices));
  if (!(vs.signature() == r.signature()))
    throw InputError("vertex set signature does not match resource '" + r.id() + "'");
  const auto d = decompose_extremal(r, vs);
  if (c.pretty) {
    if (d.feasible()) {
      out << "mixture of " << d.mixture->size() << " vertices\n";
      for (std::size_t i = 0; i < d.mixture->size(); ++i)
        out << "  " << to_string(d.mixture->components[i].first) << " * " << vs.vertices[d.vertex_indices[i]].id()
            << "\n";
    } else {
      out << "not in the hull: functional value " << to_string(d.certificate->value_on_target)
          << " exceeds vertex maximum " << to_string(d.certificate->max_on_vertices) << "\n";
    }
  } else {
    emit(out, decomposition_to_json(d, vs));
  }
  return d.feasible() ? kExitOk : kExitDomain;
}

// ---- ineq ------------------------------------------------------------------------------

std::optional<LinearInequality> linear_inequality(const std::string& name) {
  if (name == "mao") return mao_inequality();
  if (name == "cr-corr") return chao_reichardt_correlator();
  if (name == "cao") return cao_inequality();
  if (name == "mao-relabeled") return relabeled_mao();
  if (name == "cao-s14-linear") return cao_s14_linearized();
  return std::nullopt;
}

const std::vector<std::string>& inequality_names() {
  static const std::vector<std::string> names{"mao",    "cr-corr",        "cr-prob", "cao",
                                              "cao-s14", "mao-relabeled", "cao-s14-linear"};
  return names;
}

template <class Scalar>
Json value_json(const Scalar& v) {
  if constexpr (std::is_same_v<Scalar, double>)
    return v;
  else
    return to_string(v);
}

template <class Scalar>
int eval_on(const std::string& name, const BasicResource<Scalar>& b, double tol, const Common& c, std::ostream& out) {
  Evaluation<Scalar> e;
  std::string relation;
  Json bound;
  if (name == "cr-prob") {
    e = chao_reichardt_probability_form(b, tol);
    relation = ">=";
    bound = value_json<Scalar>(Scalar(1));
  } else if (name == "cao-s14") {
    e = evaluate_cao_s14(b, tol);
    relation = "<=";
    bound = value_json<Scalar>(Scalar(6));
  } else {
    const auto ineq = linear_inequality(name);
    if (!ineq) throw InputError("--ineq: unknown inequality '" + name + "'");
    e = evaluate(*ineq, b, tol);
    relation = "<=";
    if constexpr (std::is_same_v<Scalar, double>)
      bound = ineq->bound.get_d();
    else
      bound = to_string(ineq->bound);
  }
  if (c.pretty) {
    std::ostringstream v;
    if constexpr (std::is_same_v<Scalar, double>)
      v << std::setprecision(12) << e.value;
    else
      v << to_string(e.value);
    out << name << ": value " << v.str() << " " << relation << " " << bound.dump() << " "
        << (e.satisfied ? "satisfied" : "VIOLATED") << "\n";
  } else {
    emit(out, Json{{"inequality", name},
                   {"value", value_json(e.value)},
                   {"relation", relation},
                   {"bound", bound},
                   {"satisfied", e.satisfied},
                   {"exact", !std::is_same_v<Scalar, double>}});
  }
  return kExitOk;
}

int cmd_ineq_eval(const std::string& name, const std::string& behavior_path, double tol, const Common& c,
                  std::ostream& out) {
  const auto b = behavior_from_json(read_json_file(behavior_path));
  if (b.exact) return eval_on(name, *b.exact, tol, c, out);
  return eval_on(name, *b.floating, tol, c, out);
}

int cmd_ineq_derive(const Common& c, std::ostream& out) {
  const auto report = verify_derivation_chain();
  if (c.pretty) {
    for (const auto& s : report.steps)
      out << s.id << "  " << (s.passed ? "PASS" : "FAIL") << "  " << std::setw(3) << s.vertices_checked << "  "
          << s.description << (s.detail.empty() ? "" : "  [" + s.detail + "]") << "\n";
  } else {
    Json steps = Json::array();
    for (const auto& s : report.steps)
      steps.push_back(Json{{"step", s.id},
                           {"description", s.description},
                           {"passed", s.passed},
                           {"vertices_checked", s.vertices_checked},
                           {"extreme", to_string(s.extreme)},
                           {"witness", s.witness},
                           {"detail", s.detail}});
    emit(out, Json{{"steps", std::move(steps)}, {"passed", report.passed()}});
  }
  return report.passed() ? kExitOk : kExitDomain;
}

// ---- ghz -------------------------------------------------------------------------------

int cmd_ghz_search(const std::string& name, std::size_t grid, double refine, const Common& c, std::ostream& out) {
  const auto ineq = linear_inequality(name);
  if (!ineq) throw InputError("--ineq: '" + name + "' is not a linear correlator inequality");
  SearchOptions opts{grid, refine, c.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.threads};
  const auto r = search_max_violation(*ineq, opts);
  if (c.pretty) {
    out << std::setprecision(12) << name << ": best value " << r.value << " (bound " << ineq->bound.get_d()
        << ")\nangles";
    for (const auto& p : r.strategy.angles) {
      out << " |";
      for (double a : p) out << " " << a;
    }
    out << "\n";
  } else {
    emit(out, Json{{"inequality", name},
                   {"angles", strategy_to_json(r.strategy)},
                   {"value", r.value},
                   {"grid_value", r.grid_value},
                   {"bound", ineq->bound.get_d()}});
  }
  return kExitOk;
}

QuantumStrategy parse_angles(const std::string& text) {
  if (std::filesystem::is_regular_file(text)) return strategy_from_json(read_json_file(text));
  QuantumStrategy s;
  for (const auto& party : split(text, ';')) {
    std::vector<double> angles;
    for (const auto& a : split(party, ',')) angles.push_back(parse_double(a, "--angles"));
    s.angles.push_back(std::move(angles));
  }
  validate_strategy(s);
  return s;
}

int cmd_ghz_eval(const std::string& angles, const std::string& output, const Common& c, std::ostream& out) {
  const auto b = ghz_behavior(parse_angles(angles));
  const Json j = float_behavior_to_json(b);
  if (!output.empty()) {
    std::ofstream f(output);
    if (!f) throw InputError(output + ": cannot write file");
    f << j.dump(2) << "\n";
  }
  if (c.pretty) {
    const auto& sig = b.signature();
    for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
      out << "settings";
      for (auto x : sig.decode_inputs(i)) out << " " << x;
      out << ":";
      for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) out << " " << std::setprecision(6) << b.at(i, o);
      out << "\n";
    }
  } else if (output.empty()) {
    emit(out, j);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Networks of nonsignaling resources: validation, behaviors, decompositions, inequalities"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--pretty", common.pretty, "Human-readable output instead of JSON");
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)")->capture_default_str();

  std::string scenario, settings, output, resource, vertices = "local", ineq_name, behavior_path, angles;
  bool counterexample = false, allow_unnormalized = false, check_nosig = false;
  double tolerance = 1e-9, refine = 1e-4;
  std::size_t grid = 16;

  auto* validate = app.add_subcommand("validate", "Validate resources, trees and network of a scenario");
  validate->add_option("scenario", scenario, "Scenario JSON file")->required();
  validate->add_flag("--counterexample", counterexample, "Report signaling resources without failing");

  auto* joint = app.add_subcommand("joint", "Joint distribution of resource outputs for one settings tuple");
  joint->add_option("scenario", scenario, "Scenario JSON file")->required();
  joint->add_option("--settings", settings, "Comma-separated setting symbols, one per party")->required();
  joint->add_flag("--allow-unnormalized", allow_unnormalized, "Accept signaling resources and report the sum");

  auto* behavior = app.add_subcommand("behavior", "Induced behavior of a scenario");
  behavior->add_option("scenario", scenario, "Scenario JSON file")->required();
  behavior->add_flag("--check-nosig", check_nosig, "Validate the behavior as nonsignaling");
  behavior->add_option("-o,--output", output, "Write the behavior JSON to this file");

  auto* decompose = app.add_subcommand("decompose", "Convex decomposition over a vertex set");
  decompose->add_option("resource", resource, "Resource JSON file")->required();
  decompose->add_option("--vertices", vertices, "local, ns222, or a vertex-set JSON file")->capture_default_str();

  auto* ineq = app.add_subcommand("ineq", "Tripartite inequalities");
  ineq->require_subcommand(1);
  auto* ineq_eval = ineq->add_subcommand("eval", "Evaluate an inequality on a behavior file");
  ineq_eval->add_option("--ineq", ineq_name, "Inequality name")
      ->required()
      ->check(CLI::IsMember(inequality_names()));
  ineq_eval->add_option("--behavior", behavior_path, "Behavior JSON file")->required();
  ineq_eval->add_option("--tolerance", tolerance, "Tolerance for float behaviors")->capture_default_str();
  auto* ineq_derive = ineq->add_subcommand("derive", "Check the derivation chain");

  auto* ghz = app.add_subcommand("ghz", "GHZ measurement oracle");
  ghz->require_subcommand(1);
  auto* ghz_search = ghz->add_subcommand("search", "Search measurement angles maximizing an inequality");
  ghz_search->add_option("--ineq", ineq_name, "Inequality name")->required();
  ghz_search->add_option("--grid", grid, "Grid points per angle")->capture_default_str();
  ghz_search->add_option("--refine", refine, "Final coordinate-descent step")->capture_default_str();
  auto* ghz_eval = ghz->add_subcommand("eval", "Behavior of a measurement strategy");
  ghz_eval->add_option("--angles", angles, "'a0,a1;b0,b1;c0,c1' or a strategy JSON file")->required();
  ghz_eval->add_option("-o,--output", output, "Write the behavior JSON to this file");

  std::vector<const char*> argv{"nonsig"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (*validate) return cmd_validate(scenario, counterexample, common, out);
    if (*joint) return cmd_joint(scenario, settings, allow_unnormalized, common, out);
    if (*behavior) return cmd_behavior(scenario, check_nosig, output, common, out, err);
    if (*decompose) return cmd_decompose(resource, vertices, common, out);
    if (*ineq_eval) return cmd_ineq_eval(ineq_name, behavior_path, tolerance, common, out);
    if (*ineq_derive) return cmd_ineq_derive(common, out);
    if (*ghz_search) return cmd_ghz_search(ineq_name, grid, refine, common, out);
    if (*ghz_eval) return cmd_ghz_eval(angles, output, common, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitInput;
}

}  // namespace nonsig

#include "nonsig/json_io.hpp"

#include <fstream>
#include <sstream>

#include "nonsig/error.hpp"

namespace nonsig {

namespace {

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object()) throw InputError(what + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(what + ": missing field '" + key + "'");
  return *it;
}

std::string get_string(const Json& j, const std::string& what) {
  if (!j.is_string()) throw InputError(what + ": expected a string");
  return j.get<std::string>();
}

int get_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw InputError(what + ": expected an integer");
  return j.get<int>();
}

std::vector<std::string> get_strings(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(get_string(e, what));
  return out;
}

std::vector<int> get_ints(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& e : j) out.push_back(get_int(e, what));
  return out;
}

std::vector<Alphabet> get_alphabets(const Json& j, const std::vector<std::string>& parties, const std::string& what) {
  if (!j.is_object()) throw InputError(what + ": expected an object keyed by party");
  std::vector<Alphabet> out;
  for (const auto& p : parties) {
    if (!j.contains(p)) throw InputError(what + ": no alphabet for party '" + p + "'");
    out.emplace_back(get_ints(j[p], what + "." + p));
  }
  if (j.size() != parties.size()) throw InputError(what + ": alphabet for an unknown party");
  return out;
}

Json alphabets_json(const std::vector<std::string>& parties, const std::vector<Alphabet>& alphabets) {
  Json out = Json::object();
  for (std::size_t p = 0; p < parties.size(); ++p) out[parties[p]] = alphabets[p].symbols();
  return out;
}

std::vector<std::string> parties_or(const Json& j, std::vector<std::string> fallback, const std::string& what) {
  return j.contains("parties") ? get_strings(j["parties"], what + ".parties") : std::move(fallback);
}

std::string input_key(const Signature& sig, const IndexTuple& idx) {
  std::vector<int> symbols;
  for (std::size_t p = 0; p < idx.size(); ++p) symbols.push_back(sig.inputs(p).symbol(idx[p]));
  return join_symbols(symbols);
}

std::string output_key(const Signature& sig, const IndexTuple& idx) {
  std::vector<int> symbols;
  for (std::size_t p = 0; p < idx.size(); ++p) symbols.push_back(sig.outputs(p).symbol(idx[p]));
  return join_symbols(symbols);
}

/// {"x1,x2": {"a1,a2": value}}; every input tuple must be present, absent
/// output tuples are zero.
template <class Scalar, class Read>
std::vector<Scalar> read_table(const Json& j, const Signature& sig, const std::string& what, Read&& read) {
  if (!j.is_object()) throw InputError(what + ".table: expected an object keyed by input tuple");
  std::map<std::string, std::size_t> out_index;
  for (std::size_t o = 0; o < sig.output_tuple_count(); ++o) out_index[output_key(sig, sig.decode_outputs(o))] = o;
  std::vector<Scalar> table(sig.input_tuple_count() * sig.output_tuple_count(), Scalar(0));
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
    const std::string key = input_key(sig, sig.decode_inputs(i));
    if (!j.contains(key)) throw InputError(what + ".table: no row for input tuple \"" + key + "\"");
    const auto& row = j[key];
    if (!row.is_object()) throw InputError(what + ".table[\"" + key + "\"]: expected an object keyed by output tuple");
    for (const auto& [okey, v] : row.items()) {
      auto it = out_index.find(okey);
      if (it == out_index.end())
        throw InputError(what + ".table[\"" + key + "\"]: output tuple \"" + okey + "\" is outside the alphabets");
      table[i * sig.output_tuple_count() + it->second] = read(v);
    }
  }
  if (j.size() != sig.input_tuple_count()) throw InputError(what + ".table: row for an input tuple outside the alphabets");
  return table;
}

template <class Scalar, class Write>
Json write_table(const BasicResource<Scalar>& r, Write&& write) {
  const auto& sig = r.signature();
  Json rows = Json::object();
  for (std::size_t i = 0; i < sig.input_tuple_count(); ++i) {
    Json row = Json::object();
    for (std::size_t o = 0; o < sig.output_tuple_count(); ++o)
      row[output_key(sig, sig.decode_outputs(o))] = write(r.at(i, o));
    rows[input_key(sig, sig.decode_inputs(i))] = std::move(row);
  }
  return rows;
}

NonsignalingResource generate(const Json& j, const std::string& id, const std::string& kind) {
  const std::string what = "resource '" + id + "'";
  if (kind == "pr") return make_pr_box(id, parties_or(j, {"A", "B"}, what));
  if (kind == "pr_class")
    return make_pr_class_box(get_int(field(j, "alpha", what), what), get_int(field(j, "beta", what), what),
                             get_int(field(j, "gamma", what), what), id, parties_or(j, {"A", "B"}, what));
  if (kind == "noisy_pr")
    return noisy_pr_box(rational_from_json(field(j, "v", what)), parties_or(j, {"A", "B"}, what)).with_id(id);
  const auto parties = get_strings(field(j, "parties", what), what + ".parties");
  if (kind == "deterministic") {
    const auto inputs = get_alphabets(field(j, "inputs", what), parties, what + ".inputs");
    const auto outputs = get_alphabets(field(j, "outputs", what), parties, what + ".outputs");
    const auto& fj = field(j, "functions", what);
    if (!fj.is_array() || fj.size() != parties.size()) throw InputError(what + ".functions: one object per party");
    std::vector<std::map<int, int>> functions;
    for (const auto& f : fj) {
      if (!f.is_object()) throw InputError(what + ".functions: expected {input: output} objects");
      std::map<int, int> m;
      for (const auto& [k, v] : f.items()) {
        try {
          m[std::stoi(k)] = get_int(v, what + ".functions");
        } catch (const std::logic_error&) {
          throw InputError(what + ".functions: key '" + k + "' is not an integer");
        }
      }
      functions.push_back(std::move(m));
    }
    return make_local_deterministic(id, parties, inputs, outputs, functions);
  }
  if (kind == "shared") {
    const auto outputs = get_alphabets(field(j, "outputs", what), parties, what + ".outputs");
    std::vector<Rational> dist;
    for (const auto& e : field(j, "distribution", what)) dist.push_back(rational_from_json(e));
    return make_shared_randomness(id, parties, outputs, std::move(dist));
  }
  if (kind == "uniform") {
    const auto inputs = get_alphabets(field(j, "inputs", what), parties, what + ".inputs");
    const auto outputs = get_alphabets(field(j, "outputs", what), parties, what + ".outputs");
    return make_uniform(id, Signature(parties, inputs, outputs));
  }
  throw InputError(what + ": unknown kind '" + kind + "'");
}

Signature table_signature(const Json& j, const std::string& what) {
  const auto parties = get_strings(field(j, "parties", what), what + ".parties");
  return Signature(parties, get_alphabets(field(j, "inputs", what), parties, what + ".inputs"),
                   get_alphabets(field(j, "outputs", what), parties, what + ".outputs"));
}

Node node_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a node object");
  if (!j.contains("consult")) {
    for (const auto& [k, v] : j.items())
      if (k != "outcome") throw InputError(where + ": unexpected field '" + k + "' in a terminal node");
    return Node::leaf(j.contains("outcome") ? get_string(j["outcome"], where + ".outcome") : std::string{});
  }
  const std::string resource = get_string(j["consult"], where + ".consult");
  const int input = get_int(field(j, "input", where), where + ".input");
  const auto& edges = field(j, "edges", where);
  if (!edges.is_array() || edges.empty()) throw InputError(where + ".edges: expected a non-empty array");
  std::vector<int> labels;
  std::vector<Node> children;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string w = where + ".edges[" + std::to_string(i) + "]";
    labels.push_back(get_int(field(edges[i], "output", w), w + ".output"));
    children.push_back(node_from_json(field(edges[i], "node", w), w + ".node"));
  }
  return Node::consult(resource, input, std::move(labels), std::move(children));
}

Json node_to_json(const Node& n) {
  Json j = Json::object();
  if (n.terminal()) {
    if (!n.outcome.empty()) j["outcome"] = n.outcome;
    return j;
  }
  j["consult"] = n.resource;
  j["input"] = n.input;
  Json edges = Json::array();
  for (std::size_t i = 0; i < n.children.size(); ++i)
    edges.push_back(Json{{"output", n.edge_labels[i]}, {"node", node_to_json(n.children[i])}});
  j["edges"] = std::move(edges);
  return j;
}

Json reference(const Json& j, const std::filesystem::path& base_dir) {
  if (j.is_string()) return read_json_file(base_dir / j.get<std::string>());
  return j;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": malformed JSON: " + e.what());
  }
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("expected an exact rational (\"p/q\" string or integer), got " + j.dump());
}

LoadedResource resource_from_json(const Json& j) {
  const std::string id = get_string(field(j, "id", "resource"), "resource.id");
  const std::string what = "resource '" + id + "'";
  if (j.contains("kind") && get_string(j["kind"], what + ".kind") != "table") {
    auto r = generate(j, id, j["kind"].get<std::string>());
    return {r, ValidationReport::pass()};
  }
  const Signature sig = table_signature(j, what);
  auto table = read_table<Rational>(field(j, "table", what), sig, what, rational_from_json);
  auto r = NonsignalingResource::new_unchecked(id, sig, std::move(table));
  if (auto rep = validate_table(r); !rep.ok) throw DomainError(what + ": " + rep.message);
  auto ns = validate_nonsignaling(r);
  if (ns.ok) r = NonsignalingResource::create(id, r.signature(), r.table());
  return {std::move(r), std::move(ns)};
}

NonsignalingResource nonsignaling_resource_from_json(const Json& j) {
  auto loaded = resource_from_json(j);
  if (!loaded.nonsignaling.ok)
    throw DomainError("resource '" + loaded.resource.id() + "' is signaling: " + loaded.nonsignaling.message);
  return std::move(loaded.resource);
}

Json resource_to_json(const NonsignalingResource& r) {
  const auto& sig = r.signature();
  return Json{{"id", r.id()},
              {"parties", sig.parties()},
              {"inputs", alphabets_json(sig.parties(), sig.input_alphabets())},
              {"outputs", alphabets_json(sig.parties(), sig.output_alphabets())},
              {"table", write_table(r, [](const Rational& q) { return to_string(q); })}};
}

Json float_behavior_to_json(const FloatBehavior& b) {
  const auto& sig = b.signature();
  return Json{{"id", b.id()},
              {"scalar", "float"},
              {"parties", sig.parties()},
              {"inputs", alphabets_json(sig.parties(), sig.input_alphabets())},
              {"outputs", alphabets_json(sig.parties(), sig.output_alphabets())},
              {"table", write_table(b, [](double v) { return v; })}};
}

AnyBehavior behavior_from_json(const Json& j) {
  AnyBehavior out;
  if (j.is_object() && j.contains("scalar") && j["scalar"] == "float") {
    const std::string id = j.contains("id") ? get_string(j["id"], "behavior.id") : "behavior";
    const Signature sig = table_signature(j, "behavior");
    auto table = read_table<double>(field(j, "table", "behavior"), sig, "behavior", [](const Json& e) {
      if (!e.is_number()) throw InputError("behavior.table: expected numbers in a float behavior");
      return e.get<double>();
    });
    out.floating = FloatBehavior::create(id, sig, std::move(table));
    return out;
  }
  Json copy = j;
  if (copy.is_object() && !copy.contains("id")) copy["id"] = "behavior";
  out.exact = nonsignaling_resource_from_json(copy);
  return out;
}

DecisionTree tree_from_json(const Json& j) {
  DecisionTree t;
  t.party = get_string(field(j, "party", "tree"), "tree.party");
  const std::string what = "tree of party '" + t.party + "'";
  t.settings = get_ints(field(j, "settings", what), what + ".settings");
  if (j.contains("scope"))
    for (auto& id : get_strings(j["scope"], what + ".scope")) t.scope.insert(std::move(id));
  const auto& roots = field(j, "roots", what);
  if (!roots.is_array() || roots.size() != t.settings.size())
    throw InputError(what + ".roots: expected one root per setting");
  for (std::size_t i = 0; i < roots.size(); ++i)
    t.roots.push_back(node_from_json(roots[i], what + ".roots[" + std::to_string(i) + "]"));
  return t;
}

Json tree_to_json(const DecisionTree& t) {
  Json roots = Json::array();
  for (const auto& r : t.roots) roots.push_back(node_to_json(r));
  return Json{{"party", t.party}, {"scope", t.scope}, {"settings", t.settings}, {"roots", std::move(roots)}};
}

std::vector<NonsignalingResource> Scenario::resource_list() const {
  std::vector<NonsignalingResource> out;
  for (const auto& r : resources) out.push_back(r.resource);
  return out;
}

bool Scenario::all_nonsignaling() const {
  return std::all_of(resources.begin(), resources.end(), [](const auto& r) { return r.nonsignaling.ok; });
}

Network Scenario::network() const { return Network::create(parties, resource_list(), trees, bins); }

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir) {
  Scenario s;
  if (!j.is_object()) throw InputError("scenario: expected a JSON object");
  if (j.contains("name")) s.name = get_string(j["name"], "scenario.name");
  if (j.contains("description")) s.description = get_string(j["description"], "scenario.description");
  s.parties = get_strings(field(j, "parties", "scenario"), "scenario.parties");
  const auto& resources = field(j, "resources", "scenario");
  if (!resources.is_array()) throw InputError("scenario.resources: expected an array");
  for (const auto& r : resources) s.resources.push_back(resource_from_json(reference(r, base_dir)));
  const auto& trees = field(j, "trees", "scenario");
  if (!trees.is_object()) throw InputError("scenario.trees: expected an object keyed by party");
  for (const auto& party : s.parties) {
    if (!trees.contains(party)) throw InputError("scenario.trees: no tree for party '" + party + "'");
    const Json tj = reference(trees[party], base_dir);
    DecisionTree t = tree_from_json(tj);
    if (t.party != party)
      throw InputError("scenario.trees." + party + ": tree belongs to party '" + t.party + "'");
    if (!tj.contains("scope"))
      for (const auto& r : s.resources)
        if (r.resource.signature().party_index(party)) t.scope.insert(r.resource.id());
    s.trees.push_back(std::move(t));
  }
  for (const auto& [party, _] : trees.items())
    if (std::find(s.parties.begin(), s.parties.end(), party) == s.parties.end())
      throw InputError("scenario.trees: '" + party + "' is not a party");
  if (j.contains("bins")) {
    const auto& bins = j["bins"];
    if (!bins.is_object()) throw InputError("scenario.bins: expected an object keyed by party");
    for (const auto& [party, map] : bins.items()) {
      if (!map.is_object()) throw InputError("scenario.bins." + party + ": expected {label: outcome}");
      for (const auto& [label, v] : map.items()) s.bins[party][label] = get_int(v, "scenario.bins." + party);
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path), path.parent_path());
}

Json network_to_scenario_json(const Network& net, const std::string& name) {
  Json resources = Json::array();
  for (const auto& r : net.resources()) resources.push_back(resource_to_json(r));
  Json trees = Json::object();
  for (const auto& t : net.trees()) trees[t.party] = tree_to_json(t);
  Json j{{"name", name}, {"parties", net.parties()}, {"resources", std::move(resources)}, {"trees", std::move(trees)}};
  if (!net.bins().empty()) j["bins"] = net.bins();
  return j;
}

Json joint_to_json(const Network& net, const JointDistribution& d) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < d.table.size(); ++i) {
    if (sgn(d.table[i]) == 0) continue;
    Json outputs = Json::object();
    for (const auto& [id, symbols] : decode_assignment(net, i)) outputs[id] = symbols;
    entries.push_back(Json{{"outputs", std::move(outputs)}, {"probability", to_string(d.table[i])}});
  }
  return Json{{"settings", d.settings}, {"entries", std::move(entries)}, {"sum", to_string(d.sum)}};
}

Json behavior_to_json(const Network& net, const Behavior& b) {
  Json j = resource_to_json(b);
  Json labels = Json::object();
  for (std::size_t p = 0; p < net.party_count(); ++p) labels[net.parties()[p]] = net.outcome_labels(p);
  j["outcome_labels"] = std::move(labels);
  return j;
}

Json vertex_set_to_json(const VertexSet& vs) {
  Json vertices = Json::array();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Json v = resource_to_json(vs.vertices[i]);
    v["vertex_kind"] = to_string(vs.kinds[i]);
    vertices.push_back(std::move(v));
  }
  return Json{{"vertices", std::move(vertices)}};
}

VertexSet vertex_set_from_json(const Json& j) {
  const Json& list = j.is_array() ? j : field(j, "vertices", "vertex set");
  if (!list.is_array()) throw InputError("vertex set: expected an array of resources");
  std::vector<NonsignalingResource> vertices;
  std::vector<VertexKind> kinds;
  for (const auto& v : list) {
    vertices.push_back(nonsignaling_resource_from_json(v));
    VertexKind kind = VertexKind::external;
    if (v.contains("vertex_kind")) {
      const std::string k = get_string(v["vertex_kind"], "vertex_kind");
      if (k == to_string(VertexKind::deterministic))
        kind = VertexKind::deterministic;
      else if (k == to_string(VertexKind::pr_class))
        kind = VertexKind::pr_class;
      else if (k != to_string(VertexKind::external))
        throw InputError("vertex_kind: unknown value '" + k + "'");
    }
    kinds.push_back(kind);
  }
  return make_vertex_set(std::move(vertices), std::move(kinds));
}

Json decomposition_to_json(const Decomposition& d, const VertexSet& vs) {
  if (d.feasible()) {
    Json comps = Json::array();
    for (std::size_t i = 0; i < d.mixture->size(); ++i) {
      const auto& [w, r] = d.mixture->components[i];
      const std::size_t v = d.vertex_indices[i];
      comps.push_back(Json{{"weight", to_string(w)},
                           {"vertex", v},
                           {"id", vs.vertices[v].id()},
                           {"vertex_kind", to_string(vs.kinds[v])},
                           {"resource", resource_to_json(r)}});
    }
    return Json{{"feasible", true}, {"components", std::move(comps)}};
  }
  const auto& c = *d.certificate;
  Json coeffs = Json::array();
  for (const auto& q : c.coefficients) coeffs.push_back(to_string(q));
  return Json{{"feasible", false},
              {"certificate",
               Json{{"coefficients", std::move(coeffs)},
                    {"bound", to_string(c.bound)},
                    {"value_on_target", to_string(c.value_on_target)},
                    {"max_on_vertices", to_string(c.max_on_vertices)}}}};
}

Json strategy_to_json(const QuantumStrategy& s) { return Json(s.angles); }

QuantumStrategy strategy_from_json(const Json& j) {
  const Json& a = j.is_object() ? field(j, "angles", "strategy") : j;
  if (!a.is_array()) throw InputError("strategy: expected angles as an array per party");
  QuantumStrategy s;
  for (const auto& party : a) {
    if (!party.is_array()) throw InputError("strategy: expected angles as an array per party");
    std::vector<double> angles;
    for (const auto& x : party) {
      if (!x.is_number()) throw InputError("strategy: angles must be numbers");
      angles.push_back(x.get<double>());
    }
    s.angles.push_back(std::move(angles));
  }
  validate_strategy(s);
  return s;
}

}  // namespace nonsig

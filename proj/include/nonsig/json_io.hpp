#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nonsig/decompose.hpp"
#include "nonsig/ghz.hpp"
#include "nonsig/network.hpp"
#include "nonsig/resource.hpp"
#include "nonsig/tree.hpp"

namespace nonsig {

using Json = nlohmann::ordered_json;

/// Throws InputError naming the path on a missing file or malformed JSON.
Json read_json_file(const std::filesystem::path& path);

/// Exact value from "p/q", "p" or a JSON integer.
Rational rational_from_json(const Json& j);

// ---- resources -----------------------------------------------------------------
//
// {"id": "R1", "parties": ["A","B"], "inputs": {"A": [0,1], "B": [0,1]},
//  "outputs": {"A": [0,1], "B": [0,1]},
//  "table": {"0,0": {"0,0": "1/2", "1,1": "1/2"}, "0,1": {...}, ...}}
//
// Rows are keyed by the comma-joined input symbols and entries by the
// comma-joined output symbols, in party order; every row must be present,
// absent entries are 0. Instead of
// a table, "kind" may name a generator: "pr", "pr_class" (alpha, beta,
// gamma), "noisy_pr" (v), "uniform", "deterministic" (functions: one
// {input: output} object per party) or "shared" (distribution, indexed by
// output tuple with the first party most significant).

struct LoadedResource {
  /// Marked nonsignaling-checked only when the check passed.
  NonsignalingResource resource;
  ValidationReport nonsignaling;
};

/// Shape and normalization are always enforced (InputError / DomainError);
/// a signaling table is loaded and reported, not rejected.
LoadedResource resource_from_json(const Json& j);

/// Like `resource_from_json` but throws DomainError on a signaling table.
NonsignalingResource nonsignaling_resource_from_json(const Json& j);

Json resource_to_json(const NonsignalingResource& r);

/// Float tables carry "scalar": "float" and plain numbers.
Json float_behavior_to_json(const FloatBehavior& b);

/// A behavior file: exact unless it carries "scalar": "float".
struct AnyBehavior {
  std::optional<NonsignalingResource> exact;
  std::optional<FloatBehavior> floating;
};
AnyBehavior behavior_from_json(const Json& j);

// ---- trees -----------------------------------------------------------------
//
// {"party": "A", "scope": ["R1","R2"], "settings": [0,1], "roots": [node, ...]}
// node: {"consult": "R1", "input": 0, "edges": [{"output": 0, "node": node}, ...]}
//     | {"outcome": "label"}   (terminal; omit "outcome" for the transcript label)
// Without "scope", the scenario loader uses every resource the party belongs to.

DecisionTree tree_from_json(const Json& j);
Json tree_to_json(const DecisionTree& t);

// ---- scenarios -------------------------------------------------------------
//
// {"name": ..., "description": ..., "parties": ["A","B","C"],
//  "resources": ["r1.json", {...inline resource...}],
//  "trees": {"A": "alice.json", "B": {...inline tree...}},
//  "bins": {"A": {"R1=0": 0, "R1=1": 1}}}
// File references are resolved relative to the scenario file.

struct Scenario {
  std::string name;
  std::string description;
  std::vector<std::string> parties;
  std::vector<LoadedResource> resources;
  std::vector<DecisionTree> trees;
  Bins bins;

  std::vector<NonsignalingResource> resource_list() const;
  bool all_nonsignaling() const;
  Network network() const;
};

Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir);

// ---- results -----------------------------------------------------------------

Json network_to_scenario_json(const Network& net, const std::string& name);
Json joint_to_json(const Network& net, const JointDistribution& d);
Json behavior_to_json(const Network& net, const Behavior& b);
Json vertex_set_to_json(const VertexSet& vs);
VertexSet vertex_set_from_json(const Json& j);
Json decomposition_to_json(const Decomposition& d, const VertexSet& vs);
Json strategy_to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(const Json& j);

}  // namespace nonsig

#pragma once

#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nonsig/resource.hpp"

namespace nonsig {

/// Internal node when `children` is non-empty: consult `resource` with input
/// symbol `input`; `edge_labels[i]` is the output symbol leading to
/// `children[i]`. Terminal otherwise, with an optional outcome label (empty
/// means "use the default transcript label").
struct Node {
  std::string resource;
  int input = 0;
  std::vector<int> edge_labels;
  std::vector<Node> children;
  std::string outcome;

  bool terminal() const { return children.empty(); }
  static Node leaf(std::string outcome = {}) {
    Node n;
    n.outcome = std::move(outcome);
    return n;
  }
  static Node consult(std::string resource, int input, std::vector<int> labels, std::vector<Node> children) {
    return Node{std::move(resource), input, std::move(labels), std::move(children), {}};
  }

  friend bool operator==(const Node&, const Node&) = default;
};

/// One party's wiring strategy: one root edge per setting symbol.
struct DecisionTree {
  std::string party;
  std::vector<int> settings;
  std::vector<Node> roots;
  std::set<std::string> scope;

  const Node& root_for(int setting) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

/// Canonical transcript label: "R1=1,R2=0" with resource ids in sorted order.
std::string transcript_label(const std::map<std::string, int>& outputs);

/// Checks the structural conditions against `resources` (which must contain
/// every scoped resource with this party as a member). Reports the first
/// violation with its path from the root.
ValidationReport validate_tree(const DecisionTree& t, const Alphabet& settings,
                               std::span<const NonsignalingResource> resources);

struct PathTrace {
  std::map<std::string, int> inputs;
  std::vector<std::string> consult_order;
  std::string outcome_label;
};

/// Follows the setting edge and then, at each consultation, the edge labeled
/// by that resource's output in `outputs`. Throws InputError when `outputs`
/// misses a consulted resource or holds an unexpected symbol.
PathTrace trace_path(const DecisionTree& t, int setting, const std::map<std::string, int>& outputs);

/// Copy with every empty terminal label replaced by its transcript label.
DecisionTree materialize_outcomes(DecisionTree t);

/// Bypasses every consultation of `k`: each such node is replaced by its child
/// along the edge `output_for(input)`. Terminal labels are materialized first
/// so outcomes keep their original meaning.
DecisionTree excise(const DecisionTree& t, const std::string& k, const std::function<int(int)>& output_for);

/// Excision of an input-free (or fixed-output) resource with output `a`.
DecisionTree excise_input_free(const DecisionTree& t, const std::string& k, int a);

/// Appends, below every terminal, a chain consulting each unused resource with
/// its dummy input; all outputs lead to the same terminal, which keeps its
/// original label. `output_alphabets` gives each resource's output symbols for
/// this party.
DecisionTree append_unused(const DecisionTree& t, std::span<const std::string> unused,
                           std::span<const int> dummy_inputs,
                           std::span<const std::vector<int>> output_alphabets);

/// Convenience overload reading output alphabets from `resources`.
DecisionTree append_unused(const DecisionTree& t, std::span<const std::string> unused,
                           std::span<const int> dummy_inputs, std::span<const NonsignalingResource> resources);

/// Companion of `with_bottom_input` for parties that do use `k`: every node of
/// `k` gains a `bottom` edge copying the subtree of its first edge (that edge
/// carries probability zero). Labels are materialized first.
DecisionTree augment_for_bottom(const DecisionTree& t, const std::string& k, int bottom);

std::size_t count_terminals(const DecisionTree& t);

}  // namespace nonsig

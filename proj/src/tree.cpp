#include "nonsig/tree.hpp"

#include <algorithm>

#include "nonsig/error.hpp"

namespace nonsig {

const Node& DecisionTree::root_for(int setting) const {
  auto it = std::find(settings.begin(), settings.end(), setting);
  if (it == settings.end())
    throw InputError("party '" + party + "': no root edge for setting " + std::to_string(setting));
  return roots[static_cast<std::size_t>(it - settings.begin())];
}

std::string transcript_label(const std::map<std::string, int>& outputs) {
  std::string label;
  for (const auto& [id, out] : outputs) {
    if (!label.empty()) label += ',';
    label += id + '=' + std::to_string(out);
  }
  return label;
}

namespace {

struct ScopedResource {
  const NonsignalingResource* resource = nullptr;
  std::size_t slot = 0;
};

class TreeChecker {
 public:
  TreeChecker(const DecisionTree& t, std::map<std::string, ScopedResource> scoped)
      : t_(t), scoped_(std::move(scoped)) {}

  ValidationReport check(const Node& n, const std::string& path) {
    if (n.terminal()) {
      if (used_.size() != t_.scope.size()) {
        std::string missing;
        for (const auto& id : t_.scope)
          if (std::find(used_.begin(), used_.end(), id) == used_.end()) missing += (missing.empty() ? "" : ",") + id;
        return ValidationReport::fail("uneven depth: path " + path + " ends after " + std::to_string(used_.size()) +
                                      " consultations without consulting " + missing);
      }
      return ValidationReport::pass();
    }
    const std::string here = path + "/" + n.resource + "(" + std::to_string(n.input) + ")";
    auto it = scoped_.find(n.resource);
    if (it == scoped_.end())
      return ValidationReport::fail("dangling resource reference '" + n.resource + "' at " + here);
    if (std::find(used_.begin(), used_.end(), n.resource) != used_.end())
      return ValidationReport::fail("resource '" + n.resource + "' consulted twice on path " + here);
    const Signature& sig = it->second.resource->signature();
    const std::size_t slot = it->second.slot;
    if (!sig.inputs(slot).contains(n.input))
      return ValidationReport::fail("input " + std::to_string(n.input) + " outside the input alphabet of '" +
                                    n.resource + "' at " + here);
    if (n.edge_labels.size() != n.children.size())
      return ValidationReport::fail("edge labels and children disagree at " + here);
    const auto& outs = sig.outputs(slot).symbols();
    std::vector<int> labels = n.edge_labels;
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
      return ValidationReport::fail("duplicate output edge at " + here);
    std::vector<int> expected = outs;
    std::sort(expected.begin(), expected.end());
    if (labels != expected)
      return ValidationReport::fail("output edges at " + here + " are not a bijection onto the " +
                                    std::to_string(outs.size()) + " outputs of '" + n.resource + "'");
    used_.push_back(n.resource);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      auto r = check(n.children[i], here + "-" + std::to_string(n.edge_labels[i]));
      if (!r.ok) return r;
    }
    used_.pop_back();
    return ValidationReport::pass();
  }

 private:
  const DecisionTree& t_;
  std::map<std::string, ScopedResource> scoped_;
  std::vector<std::string> used_;
};

void materialize(Node& n, std::map<std::string, int>& outputs) {
  if (n.terminal()) {
    if (n.outcome.empty()) n.outcome = transcript_label(outputs);
    return;
  }
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    outputs[n.resource] = n.edge_labels[i];
    materialize(n.children[i], outputs);
  }
  outputs.erase(n.resource);
}

Node excise_node(const Node& n, const std::string& k, const std::function<int(int)>& output_for) {
  if (n.terminal()) return n;
  if (n.resource == k) {
    const int a = output_for(n.input);
    auto it = std::find(n.edge_labels.begin(), n.edge_labels.end(), a);
    if (it == n.edge_labels.end())
      throw InputError("excise: output " + std::to_string(a) + " is not an edge of '" + k + "'");
    return excise_node(n.children[static_cast<std::size_t>(it - n.edge_labels.begin())], k, output_for);
  }
  Node copy = n;
  for (auto& c : copy.children) c = excise_node(c, k, output_for);
  return copy;
}

Node unused_chain(const Node& terminal, std::span<const std::string> unused, std::span<const int> dummy,
                  std::span<const std::vector<int>> outs) {
  if (unused.empty()) return terminal;
  const Node below = unused_chain(terminal, unused.subspan(1), dummy.subspan(1), outs.subspan(1));
  return Node::consult(unused[0], dummy[0], outs[0], std::vector<Node>(outs[0].size(), below));
}

void append_below(Node& n, std::span<const std::string> unused, std::span<const int> dummy,
                  std::span<const std::vector<int>> outs) {
  if (n.terminal()) {
    n = unused_chain(n, unused, dummy, outs);
    return;
  }
  for (auto& c : n.children) append_below(c, unused, dummy, outs);
}

void add_bottom_edges(Node& n, const std::string& k, int bottom) {
  if (n.terminal()) return;
  for (auto& c : n.children) add_bottom_edges(c, k, bottom);
  if (n.resource == k && std::find(n.edge_labels.begin(), n.edge_labels.end(), bottom) == n.edge_labels.end()) {
    n.edge_labels.push_back(bottom);
    n.children.push_back(n.children.front());
  }
}

std::size_t terminals(const Node& n) {
  if (n.terminal()) return 1;
  std::size_t total = 0;
  for (const auto& c : n.children) total += terminals(c);
  return total;
}

}  // namespace

ValidationReport validate_tree(const DecisionTree& t, const Alphabet& settings,
                               std::span<const NonsignalingResource> resources) {
  std::map<std::string, ScopedResource> scoped;
  for (const auto& id : t.scope) {
    auto it = std::find_if(resources.begin(), resources.end(), [&](const auto& r) { return r.id() == id; });
    if (it == resources.end()) return ValidationReport::fail("dangling resource reference '" + id + "' in scope");
    auto slot = it->signature().party_index(t.party);
    if (!slot)
      return ValidationReport::fail("party '" + t.party + "' is not a member of scoped resource '" + id + "'");
    scoped[id] = {&*it, *slot};
  }
  if (t.roots.size() != t.settings.size())
    return ValidationReport::fail("party '" + t.party + "': settings and root edges disagree");
  std::vector<int> have = t.settings, want = settings.symbols();
  std::sort(have.begin(), have.end());
  std::sort(want.begin(), want.end());
  if (std::adjacent_find(have.begin(), have.end()) != have.end())
    return ValidationReport::fail("party '" + t.party + "': duplicate root edge");
  if (have != want)
    return ValidationReport::fail("party '" + t.party + "': root edges are not one per setting");
  TreeChecker checker(t, std::move(scoped));
  for (std::size_t i = 0; i < t.roots.size(); ++i) {
    auto r = checker.check(t.roots[i], t.party + ":setting " + std::to_string(t.settings[i]));
    if (!r.ok) return r;
  }
  return ValidationReport::pass();
}

PathTrace trace_path(const DecisionTree& t, int setting, const std::map<std::string, int>& outputs) {
  PathTrace trace;
  std::map<std::string, int> seen;
  const Node* n = &t.root_for(setting);
  while (!n->terminal()) {
    auto out = outputs.find(n->resource);
    if (out == outputs.end()) throw InputError("trace_path: no output given for '" + n->resource + "'");
    auto edge = std::find(n->edge_labels.begin(), n->edge_labels.end(), out->second);
    if (edge == n->edge_labels.end())
      throw InputError("trace_path: output " + std::to_string(out->second) + " is not an edge of '" + n->resource +
                       "'");
    trace.inputs[n->resource] = n->input;
    trace.consult_order.push_back(n->resource);
    seen[n->resource] = out->second;
    n = &n->children[static_cast<std::size_t>(edge - n->edge_labels.begin())];
  }
  trace.outcome_label = n->outcome.empty() ? transcript_label(seen) : n->outcome;
  return trace;
}

DecisionTree materialize_outcomes(DecisionTree t) {
  for (auto& root : t.roots) {
    std::map<std::string, int> outputs;
    materialize(root, outputs);
  }
  return t;
}

DecisionTree excise(const DecisionTree& t, const std::string& k, const std::function<int(int)>& output_for) {
  if (!t.scope.contains(k)) throw InputError("excise: '" + k + "' is not in the scope of party '" + t.party + "'");
  DecisionTree out = materialize_outcomes(t);
  for (auto& root : out.roots) root = excise_node(root, k, output_for);
  out.scope.erase(k);
  return out;
}

DecisionTree excise_input_free(const DecisionTree& t, const std::string& k, int a) {
  return excise(t, k, [a](int) { return a; });
}

DecisionTree append_unused(const DecisionTree& t, std::span<const std::string> unused,
                           std::span<const int> dummy_inputs, std::span<const std::vector<int>> output_alphabets) {
  if (unused.size() != dummy_inputs.size() || unused.size() != output_alphabets.size())
    throw InputError("append_unused: one dummy input and output alphabet per resource");
  for (const auto& id : unused) {
    if (t.scope.contains(id))
      throw InputError("append_unused: '" + id + "' is already consulted by party '" + t.party + "'");
    if (std::count(unused.begin(), unused.end(), id) > 1) throw InputError("append_unused: '" + id + "' listed twice");
  }
  if (unused.empty()) return t;
  DecisionTree out = materialize_outcomes(t);
  for (auto& root : out.roots) append_below(root, unused, dummy_inputs, output_alphabets);
  out.scope.insert(unused.begin(), unused.end());
  return out;
}

DecisionTree append_unused(const DecisionTree& t, std::span<const std::string> unused,
                           std::span<const int> dummy_inputs, std::span<const NonsignalingResource> resources) {
  if (unused.size() != dummy_inputs.size()) throw InputError("append_unused: one dummy input per resource");
  std::vector<std::vector<int>> outs;
  for (std::size_t i = 0; i < unused.size(); ++i) {
    auto it = std::find_if(resources.begin(), resources.end(), [&](const auto& r) { return r.id() == unused[i]; });
    if (it == resources.end()) throw InputError("append_unused: unknown resource '" + unused[i] + "'");
    auto slot = it->signature().party_index(t.party);
    if (!slot) throw InputError("append_unused: party '" + t.party + "' is not a member of '" + unused[i] + "'");
    if (!it->signature().inputs(*slot).contains(dummy_inputs[i]))
      throw InputError("append_unused: dummy input " + std::to_string(dummy_inputs[i]) + " outside the alphabet of '" +
                       unused[i] + "'");
    outs.push_back(it->signature().outputs(*slot).symbols());
  }
  return append_unused(t, unused, dummy_inputs, std::span<const std::vector<int>>(outs));
}

DecisionTree augment_for_bottom(const DecisionTree& t, const std::string& k, int bottom) {
  DecisionTree out = materialize_outcomes(t);
  for (auto& root : out.roots) add_bottom_edges(root, k, bottom);
  return out;
}

std::size_t count_terminals(const DecisionTree& t) {
  std::size_t total = 0;
  for (const auto& root : t.roots) total += terminals(root);
  return total;
}

}  // namespace nonsig

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nonsig/resource.hpp"
#include "nonsig/tree.hpp"

namespace nonsig {

/// Induced distribution P(outcomes | settings); parties are the network
/// parties, inputs are settings, outputs are (binned) final outcomes.
using Behavior = NonsignalingResource;

/// Per-party map from transcript label to a reported outcome symbol.
using Bins = std::map<std::string, std::map<std::string, int>>;

struct EvalOptions {
  /// Worker threads for settings-level parallelism; 0 means hardware
  /// concurrency. Results do not depend on this value.
  unsigned threads = 1;
  /// Accept signaling resources and report the total instead of asserting 1.
  bool allow_unnormalized = false;
};

/// Parties, resources, one decision tree per party and optional binning.
/// Immutable once created.
///
/// Outcome symbols: each party's terminal labels (after binning) are sorted,
/// numerically when every label is an integer. Integer labels are used as the
/// outcome symbols directly; otherwise a label's symbol is its index in the
/// sorted list (see `outcome_labels`).
class Network {
 public:
  Network() = default;

  /// Validates membership, scopes, trees and bins; throws DomainError (or
  /// InputError for references to unknown parties/resources).
  static Network create(std::vector<std::string> parties, std::vector<NonsignalingResource> resources,
                        std::vector<DecisionTree> trees, Bins bins = {});

  const std::vector<std::string>& parties() const { return parties_; }
  const std::vector<NonsignalingResource>& resources() const { return resources_; }
  /// Trees in party order.
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const Bins& bins() const { return bins_; }
  std::size_t party_count() const { return parties_.size(); }

  std::size_t party_index(const std::string& name) const;
  std::size_t resource_index(const std::string& id) const;

  const Alphabet& settings(std::size_t party) const { return settings_[party]; }
  const std::vector<std::string>& outcome_labels(std::size_t party) const { return labels_[party]; }
  const Alphabet& outcomes(std::size_t party) const { return outcomes_[party]; }
  Signature behavior_signature() const;

  /// Same network with the given outcome label lists; each must contain the
  /// labels the party can actually produce. Keeps behavior signatures aligned
  /// across networks derived from one another (excision can drop labels).
  Network with_outcome_labels(std::vector<std::vector<std::string>> labels) const;

  /// True when every resource passed the nonsignaling validator.
  bool all_nonsignaling() const;

  // Compiled form used by the evaluators.
  struct CompiledNode {
    int resource = -1;  // -1 for a terminal
    std::uint32_t slot = 0;
    std::uint32_t input = 0;
    std::vector<std::uint32_t> child;  // indexed by output index
    std::uint32_t outcome = 0;
  };
  struct CompiledTree {
    std::vector<CompiledNode> nodes;
    std::vector<std::uint32_t> root;  // indexed by setting index
  };
  const CompiledTree& compiled(std::size_t party) const { return compiled_[party]; }
  /// Network party index of each slot of resource k.
  const std::vector<std::size_t>& members(std::size_t k) const { return members_[k]; }

 private:
  void compile();

  std::vector<std::string> parties_;
  std::vector<NonsignalingResource> resources_;
  std::vector<DecisionTree> trees_;
  Bins bins_;
  std::vector<Alphabet> settings_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<Alphabet> outcomes_;
  std::vector<CompiledTree> compiled_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<bool> nonsignaling_;
};

/// Structural validation without constructing; the CLI uses it for reports.
ValidationReport validate_network(const std::vector<std::string>& parties,
                                  const std::vector<NonsignalingResource>& resources,
                                  const std::vector<DecisionTree>& trees, const Bins& bins = {});

/// Output symbols of every resource, listed in that resource's party order.
using OutputAssignment = std::map<std::string, std::vector<int>>;

/// One factor R_k(a_k | x_k) of the product rule, symbols in resource party order.
struct Factor {
  std::string resource;
  std::vector<int> outputs;
  std::vector<int> inputs;
  Rational value;
};

/// Traces every party's tree for `settings` (symbols, party order) and
/// `outputs`, returning one factor per resource.
std::vector<Factor> joint_factors(const Network& net, const std::vector<int>& settings,
                                  const OutputAssignment& outputs);

/// Product of `joint_factors`.
Rational joint_probability(const Network& net, const std::vector<int>& settings, const OutputAssignment& outputs);

struct JointDistribution {
  std::vector<int> settings;
  /// Output tuple count of each resource; the table is flattened in mixed
  /// radix over resources in network order (first resource most significant),
  /// each digit being that resource's flattened output tuple.
  std::vector<std::size_t> radix;
  std::vector<Rational> table;
  Rational sum;
};

/// Full table for one settings tuple. Throws DomainError when a resource is
/// signaling (unless allowed) or when the total differs from 1 (unless
/// allowed, in which case it is only reported).
JointDistribution joint_distribution(const Network& net, const std::vector<int>& settings,
                                     const EvalOptions& options = {});

/// Output assignment corresponding to a flat index of a joint table.
OutputAssignment decode_assignment(const Network& net, std::size_t flat);

/// Regrouped-by-party, binned behavior for every settings tuple.
Behavior induced_behavior(const Network& net, const EvalOptions& options = {});

/// Network where party `p` is removed and every resource it shares is replaced
/// by its marginal on the remaining members (resources used by `p` alone are
/// dropped).
Network remove_party(const Network& net, std::size_t p);

struct MarginalComparison {
  Behavior marginalized;  // marginal of the full behavior
  Behavior reduced;       // behavior of the reduced network
  bool equal = false;
};
MarginalComparison compare_marginal_routes(const Network& net, std::size_t p, const EvalOptions& options = {});

/// Behavior of the other parties; throws DomainError when the two routes of
/// `compare_marginal_routes` disagree.
Behavior marginal_without_party(const Network& net, std::size_t p, const EvalOptions& options = {});

/// Parties of `a` followed by parties of `b`. Throws InputError on shared
/// parties or resource ids.
Network disjoint_union(const Network& a, const Network& b);

ValidationReport check_disjoint_factorization(const Network& a, const Network& b, const EvalOptions& options = {});

/// Copy with every party and resource id suffixed.
Network rename_network(const Network& net, const std::string& suffix);

/// Replaces the table of resource `id` (same signature) and revalidates.
Network replace_resource(const Network& net, const std::string& id, const NonsignalingResource& replacement);

}  // namespace nonsig

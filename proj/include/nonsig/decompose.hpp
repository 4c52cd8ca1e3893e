#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonsig/network.hpp"
#include "nonsig/resource.hpp"

namespace nonsig {

/// Convex combination; weights are positive and sum to exactly 1.
template <class T>
struct Mixture {
  std::vector<std::pair<Rational, T>> components;

  std::size_t size() const { return components.size(); }
  Rational total_weight() const {
    Rational w = 0;
    for (const auto& c : components) w += c.first;
    return w;
  }
};

enum class VertexKind { deterministic, pr_class, external };

const char* to_string(VertexKind kind);

/// Resources of one signature, pairwise distinct, each nonsignaling.
struct VertexSet {
  std::vector<NonsignalingResource> vertices;
  std::vector<VertexKind> kinds;

  std::size_t size() const { return vertices.size(); }
  const Signature& signature() const { return vertices.front().signature(); }
};

/// Checks the VertexSet invariants; throws DomainError (InputError for an
/// empty set or mismatched kinds).
VertexSet make_vertex_set(std::vector<NonsignalingResource> vertices, std::vector<VertexKind> kinds);

/// Upper bound on enumerated vertices: NONSIG_VERTEX_CAP, default 10^6.
std::size_t vertex_cap();

/// Every product of per-party functions input -> output. Throws DomainError
/// naming the count when it exceeds `vertex_cap()`.
VertexSet local_deterministic_vertices(const Signature& sig);

/// The 16 deterministic and 8 PR-class vertices of the bipartite
/// two-input two-output nonsignaling polytope. Each PR-class vertex is checked
/// to lie outside the hull of the other 23.
VertexSet ns_vertices_222(const std::vector<std::string>& parties = {"A", "B"});

/// Linear functional w on the table (flattened input-major, like the
/// resource tables) with w.target > bound >= w.V for every vertex V.
struct SeparatingFunctional {
  Signature signature;
  std::vector<Rational> coefficients;
  Rational bound;
  Rational value_on_target;
  Rational max_on_vertices;

  Rational evaluate(const NonsignalingResource& r) const;
};

struct Decomposition {
  /// Mixture over the vertices (items are copies of the vertex resources).
  std::optional<Mixture<NonsignalingResource>> mixture;
  /// Vertex index of each mixture component.
  std::vector<std::size_t> vertex_indices;
  std::optional<SeparatingFunctional> certificate;

  bool feasible() const { return mixture.has_value(); }
};

/// r = sum_i p_i V_i with p >= 0, sum p = 1, or a separating functional. Both
/// outcomes are re-verified exactly before returning.
Decomposition decompose_extremal(const NonsignalingResource& r, const VertexSet& vs);

/// Decomposition over `local_deterministic_vertices(r.signature())`.
Decomposition is_local(const NonsignalingResource& r);

/// v*PR + (1-v)*uniform.
NonsignalingResource noisy_pr_box(Rational v, const std::vector<std::string>& parties = {"A", "B"});

/// sum_c w_c * behavior(net_c).
Behavior mixture_behavior(const Mixture<Network>& mix, const EvalOptions& options = {});

/// Combines every input-free resource into one shared random variable and
/// returns one network per value with positive probability: those resources
/// are removed and every tree is excised as though the value had been
/// observed. With `verify`, asserts that the mixture reproduces the behavior.
Mixture<Network> factor_out_shared_randomness(const Network& net, bool verify = true,
                                              const EvalOptions& options = {});

/// Removes every local deterministic resource, bypassing its consultations
/// along the deterministic output. Outcome labels are preserved.
Network excise_local_deterministic(const Network& net);

/// Replaces each resource that has a vertex set by its decomposition, giving
/// a mixture of networks built from vertices only (resources without a set are
/// kept). Throws DomainError when some resource has no decomposition. With
/// `excise_deterministic`, local deterministic resources are then excised
/// from every component. With `verify`, asserts behavior equality.
Mixture<Network> expand_to_extremal_mixture(const Network& net, const std::map<std::string, VertexSet>& vertex_sets,
                                            bool excise_deterministic = false, bool verify = true,
                                            const EvalOptions& options = {});

}  // namespace nonsig

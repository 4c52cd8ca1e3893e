#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nonsig {

/// Ordered, duplicate-free list of symbols. Tables are indexed by position in
/// the alphabet, never by symbol value.
class Alphabet {
 public:
  Alphabet() = default;
  /// Throws InputError when empty or when a symbol repeats.
  explicit Alphabet(std::vector<int> symbols);

  /// {0, 1, ..., n-1}
  static Alphabet range(std::size_t n);

  std::size_t size() const { return symbols_.size(); }
  int symbol(std::size_t index) const { return symbols_.at(index); }
  const std::vector<int>& symbols() const { return symbols_; }
  std::optional<std::size_t> index_of(int symbol) const;
  bool contains(int symbol) const { return index_of(symbol).has_value(); }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<int> symbols_;
};

using IndexTuple = std::vector<std::size_t>;

/// Party list plus per-party input and output alphabets. Input and output
/// tuples are flattened in mixed radix with the first party most significant.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> parties, std::vector<Alphabet> inputs,
            std::vector<Alphabet> outputs);

  std::size_t party_count() const { return parties_.size(); }
  const std::vector<std::string>& parties() const { return parties_; }
  const std::string& party(std::size_t i) const { return parties_.at(i); }
  std::optional<std::size_t> party_index(const std::string& name) const;

  const Alphabet& inputs(std::size_t party) const { return inputs_.at(party); }
  const Alphabet& outputs(std::size_t party) const { return outputs_.at(party); }
  const std::vector<Alphabet>& input_alphabets() const { return inputs_; }
  const std::vector<Alphabet>& output_alphabets() const { return outputs_; }

  std::size_t input_tuple_count() const { return input_count_; }
  std::size_t output_tuple_count() const { return output_count_; }

  std::size_t encode_inputs(std::span<const std::size_t> idx) const;
  std::size_t encode_outputs(std::span<const std::size_t> idx) const;
  IndexTuple decode_inputs(std::size_t flat) const;
  IndexTuple decode_outputs(std::size_t flat) const;

  /// Every party has a single input symbol.
  bool input_free() const;

  /// Signature restricted to the listed parties, in the listed order.
  Signature restrict_to(std::span<const std::size_t> keep) const;

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.parties_ == b.parties_ && a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_;
  }

 private:
  std::vector<std::string> parties_;
  std::vector<Alphabet> inputs_;
  std::vector<Alphabet> outputs_;
  std::size_t input_count_ = 1;
  std::size_t output_count_ = 1;
};

/// Increments a mixed-radix counter in place (last digit fastest).
/// Returns false once the counter wraps back to all zeros.
bool next_index(IndexTuple& digits, std::span<const std::size_t> radix);

/// Comma-joined symbols, the key format used by the JSON table schema.
std::string join_symbols(std::span<const int> symbols);

}  // namespace nonsig

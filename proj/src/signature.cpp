#include "nonsig/signature.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "nonsig/error.hpp"

namespace nonsig {

Alphabet::Alphabet(std::vector<int> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InputError("alphabet must be non-empty");
  std::unordered_set<int> seen;
  for (int s : symbols_)
    if (!seen.insert(s).second)
      throw InputError("alphabet has duplicate symbol " + std::to_string(s));
}

Alphabet Alphabet::range(std::size_t n) {
  std::vector<int> symbols(n);
  std::iota(symbols.begin(), symbols.end(), 0);
  return Alphabet(std::move(symbols));
}

std::optional<std::size_t> Alphabet::index_of(int symbol) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - symbols_.begin());
}

Signature::Signature(std::vector<std::string> parties, std::vector<Alphabet> inputs,
                     std::vector<Alphabet> outputs)
    : parties_(std::move(parties)), inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  if (parties_.size() != inputs_.size() || parties_.size() != outputs_.size())
    throw InputError("signature needs one input and one output alphabet per party");
  std::unordered_set<std::string> seen;
  for (const auto& p : parties_)
    if (!seen.insert(p).second) throw InputError("duplicate party '" + p + "'");
  for (std::size_t i = 0; i < parties_.size(); ++i) {
    if (inputs_[i].size() == 0 || outputs_[i].size() == 0)
      throw InputError("party '" + parties_[i] + "' has an empty alphabet");
    input_count_ *= inputs_[i].size();
    output_count_ *= outputs_[i].size();
  }
}

std::optional<std::size_t> Signature::party_index(const std::string& name) const {
  auto it = std::find(parties_.begin(), parties_.end(), name);
  if (it == parties_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - parties_.begin());
}

namespace {

std::size_t encode(std::span<const std::size_t> idx, const std::vector<Alphabet>& alphabets) {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < alphabets.size(); ++i) flat = flat * alphabets[i].size() + idx[i];
  return flat;
}

IndexTuple decode(std::size_t flat, const std::vector<Alphabet>& alphabets) {
  IndexTuple idx(alphabets.size());
  for (std::size_t i = alphabets.size(); i-- > 0;) {
    idx[i] = flat % alphabets[i].size();
    flat /= alphabets[i].size();
  }
  return idx;
}

}  // namespace

std::size_t Signature::encode_inputs(std::span<const std::size_t> idx) const {
  return encode(idx, inputs_);
}
std::size_t Signature::encode_outputs(std::span<const std::size_t> idx) const {
  return encode(idx, outputs_);
}
IndexTuple Signature::decode_inputs(std::size_t flat) const { return decode(flat, inputs_); }
IndexTuple Signature::decode_outputs(std::size_t flat) const { return decode(flat, outputs_); }

bool Signature::input_free() const {
  return std::all_of(inputs_.begin(), inputs_.end(), [](const Alphabet& a) { return a.size() == 1; });
}

Signature Signature::restrict_to(std::span<const std::size_t> keep) const {
  std::vector<std::string> parties;
  std::vector<Alphabet> ins, outs;
  for (std::size_t p : keep) {
    parties.push_back(parties_.at(p));
    ins.push_back(inputs_.at(p));
    outs.push_back(outputs_.at(p));
  }
  return Signature(std::move(parties), std::move(ins), std::move(outs));
}

bool next_index(IndexTuple& digits, std::span<const std::size_t> radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

std::string join_symbols(std::span<const int> symbols) {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(symbols[i]);
  }
  return out;
}

}  // namespace nonsig

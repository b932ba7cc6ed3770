#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace learnspace {

// Error hierarchy. The CLI maps each category onto its own exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class StructuralError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class CapacityError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

using ConceptId = int;

/// Ordered list of distinct concept labels. Identity of a concept is its index.
class Domain {
public:
  Domain() = default;
  explicit Domain(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(ConceptId c) const { return labels_.at(static_cast<std::size_t>(c)); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<ConceptId> find(std::string_view label) const;
  ConceptId index_of(std::string_view label) const;  // throws ValidationError

  bool operator==(const Domain& other) const { return labels_ == other.labels_; }

private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, ConceptId> index_;
};

/// A set of concepts stored as 64-bit words, bit c%64 of word c/64 is concept c.
class State {
public:
  State() = default;
  explicit State(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static State full(std::size_t n);
  static State from_indices(std::size_t n, std::initializer_list<ConceptId> ids);
  static State from_indices(std::size_t n, const std::vector<ConceptId>& ids);

  std::size_t universe() const { return n_; }
  std::size_t word_count() const { return words_.size(); }
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  bool test(ConceptId c) const {
    return (words_[static_cast<std::size_t>(c) >> 6] >> (static_cast<std::size_t>(c) & 63)) & 1u;
  }
  void set(ConceptId c) { words_[static_cast<std::size_t>(c) >> 6] |= std::uint64_t{1} << (c & 63); }
  void reset(ConceptId c) { words_[static_cast<std::size_t>(c) >> 6] &= ~(std::uint64_t{1} << (c & 63)); }
  void flip(ConceptId c) { words_[static_cast<std::size_t>(c) >> 6] ^= std::uint64_t{1} << (c & 63); }

  State with(ConceptId c) const { State s = *this; s.set(c); return s; }
  State without(ConceptId c) const { State s = *this; s.reset(c); return s; }

  std::size_t count() const;
  bool none() const;
  bool is_full() const { return count() == n_; }

  bool is_subset_of(const State& other) const;
  bool intersects(const State& other) const;

  State& operator|=(const State& o);
  State& operator&=(const State& o);
  State& subtract(const State& o);
  friend State operator|(State a, const State& b) { return a |= b; }
  friend State operator&(State a, const State& b) { return a &= b; }
  friend State operator-(State a, const State& b) { return a.subtract(b); }

  std::vector<ConceptId> elements() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(static_cast<ConceptId>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
        bits &= bits - 1;
      }
    }
  }

  bool operator==(const State& o) const = default;

  std::size_t hash() const;

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Canonical ordering: by cardinality, then lexicographically by sorted concept indices.
bool canonical_less(const State& a, const State& b);

struct StateHash {
  std::size_t operator()(const State& s) const { return s.hash(); }
};

using StateSet = std::unordered_set<State, StateHash>;

/// Formats a state as `{}` or comma-separated labels in domain order.
std::string format_state(const Domain& d, const State& s);
/// Inverse of format_state; `{}` is the empty state.
State parse_state(const Domain& d, std::string_view text);
State parse_concept_list(const Domain& d, std::string_view text);

/// An explicit deduplicated family of states over one domain.
class SetFamily {
public:
  static constexpr std::size_t kMaxStates = std::size_t{1} << 24;

  SetFamily() = default;
  SetFamily(Domain domain, std::vector<State> states);

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  const std::vector<State>& states() const { return states_; }
  bool contains(const State& s) const { return index_.contains(s); }

  /// Union of all members.
  State ground() const;

  auto begin() const { return states_.begin(); }
  auto end() const { return states_.end(); }

  bool operator==(const SetFamily& o) const {
    return domain_ == o.domain_ && states_ == o.states_;
  }

private:
  Domain domain_;
  std::vector<State> states_;  // canonical order
  StateSet index_;
};

SetFamily powerset(const Domain& d);
Domain make_domain(std::size_t n);  // labels c0..c{n-1}, or A..Z when n <= 26

bool is_accessible(const SetFamily& family);
bool is_union_closed(const SetFamily& family);
bool is_intersection_closed(const SetFamily& family);
bool is_learning_space(const SetFamily& family);

struct Fringes {
  State inner;
  State outer;
  bool operator==(const Fringes&) const = default;
};

Fringes state_fringes_bruteforce(const SetFamily& family, const State& s);

// `.states` text format.
SetFamily parse_states(std::string_view text);
std::string serialize_states(const SetFamily& family);

// Shared header-line helpers for the text formats.
std::vector<std::string> split_labels(std::string_view text, std::size_t line);
std::string_view trim(std::string_view s);
Domain parse_domain_header(std::string_view line, std::size_t line_no);
std::string join_labels(const Domain& d);

}  // namespace learnspace

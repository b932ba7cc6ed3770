#include "learnspace/sequence_space.hpp"

#include <algorithm>
#include <set>

#include "text_lines.hpp"

namespace learnspace {

namespace {

void check_permutation(const Domain& d, const std::vector<ConceptId>& seq, std::size_t index) {
  const auto n = d.size();
  std::vector<int> seen(n, 0);
  std::string bad;
  for (auto c : seq) {
    if (c < 0 || static_cast<std::size_t>(c) >= n)
      throw ValidationError("sequence " + std::to_string(index) + " has a concept outside the domain");
    ++seen[static_cast<std::size_t>(c)];
  }
  std::string missing, dup;
  for (std::size_t c = 0; c < n; ++c) {
    auto& into = seen[c] == 0 ? missing : dup;
    if (seen[c] != 1) into += (into.empty() ? "" : ",") + d.label(static_cast<ConceptId>(c));
  }
  if (!missing.empty() || !dup.empty()) {
    std::string msg = "sequence " + std::to_string(index) + " is not a permutation of the domain";
    if (!missing.empty()) msg += "; missing: " + missing;
    if (!dup.empty()) msg += "; duplicated: " + dup;
    throw ValidationError(msg);
  }
}

void require_member(const SequenceSpace& sp, const State& s) {
  if (s.universe() != sp.n()) throw ValidationError("state over a domain of different size");
  if (!contains(sp, s)) throw ValidationError("not a state of the learning space: " + format_state(sp.domain(), s));
}

}  // namespace

SequenceSpace::SequenceSpace(Domain domain, std::vector<std::vector<ConceptId>> sequences)
    : domain_(std::move(domain)) {
  if (!domain_.empty() && sequences.empty())
    throw ValidationError("a nonempty domain needs at least one learning sequence");
  std::set<std::vector<ConceptId>> seen;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    check_permutation(domain_, sequences[i], i);
    if (!seen.insert(sequences[i]).second) {
      ++dropped_duplicates_;
      continue;
    }
    sequences_.push_back(std::move(sequences[i]));
  }
  positions_.assign(sequences_.size(), std::vector<int>(domain_.size()));
  for (std::size_t i = 0; i < sequences_.size(); ++i)
    for (std::size_t j = 0; j < sequences_[i].size(); ++j)
      positions_[i][static_cast<std::size_t>(sequences_[i][j])] = static_cast<int>(j);
}

SequenceSpace SequenceSpace::from_labels(Domain domain, const std::vector<std::vector<std::string>>& seqs) {
  std::vector<std::vector<ConceptId>> ids;
  for (const auto& s : seqs) {
    auto& row = ids.emplace_back();
    for (const auto& l : s) row.push_back(domain.index_of(l));
  }
  return SequenceSpace(std::move(domain), std::move(ids));
}

SequenceSpace SequenceSpace::from_strings(const std::vector<std::string>& seqs) {
  std::vector<std::string> labels;
  if (!seqs.empty())
    for (char c : seqs.front()) labels.emplace_back(1, c);
  std::sort(labels.begin(), labels.end());
  Domain d(labels);
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : seqs) {
    auto& row = rows.emplace_back();
    for (char c : s) row.emplace_back(1, c);
  }
  return from_labels(std::move(d), rows);
}

MexVector mex(const SequenceSpace& sp, const State& s) {
  MexVector v(sp.k(), static_cast<int>(sp.n()));
  for (std::size_t i = 0; i < sp.k(); ++i) {
    const auto& seq = sp.sequence(i);
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (!s.test(seq[j])) {
        v[i] = static_cast<int>(j);
        break;
      }
    }
  }
  return v;
}

State up(const SequenceSpace& sp, const MexVector& v) {
  if (v.size() != sp.k()) throw ValidationError("mex vector length differs from the number of sequences");
  State s(sp.n());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0 || v[i] > static_cast<int>(sp.n()))
      throw ValidationError("mex coordinate " + std::to_string(v[i]) + " out of range");
    for (int j = 0; j < v[i]; ++j) s.set(sp.sequence(i)[static_cast<std::size_t>(j)]);
  }
  return s;
}

bool contains(const SequenceSpace& sp, const State& s) {
  return s.universe() == sp.n() && up(sp, mex(sp, s)) == s;
}

State predecessor(const SequenceSpace& sp, const State& s) {
  require_member(sp, s);
  if (s.none()) throw ValidationError("the empty state has no predecessor");
  auto v = mex(sp, s);
  while (true) {
    auto last = std::find_if(v.rbegin(), v.rend(), [](int x) { return x != 0; });
    --*last;
    auto t = up(sp, v);
    if (t != s) return t;
  }
}

std::size_t prefix_depth(const SequenceSpace& sp, const State& s, const MexVector& m) {
  // Smallest p such that s is the union of the first p+1 sequences' prefixes.
  State acc(sp.n());
  if (acc == s) return 0;
  for (std::size_t i = 0; i < sp.k(); ++i) {
    for (int j = 0; j < m[i]; ++j) acc.set(sp.sequence(i)[static_cast<std::size_t>(j)]);
    if (acc == s) return i;
  }
  return sp.k();
}

std::vector<Successor> successors(const SequenceSpace& sp, const State& s) {
  require_member(sp, s);
  const auto m = mex(sp, s);
  const auto p = prefix_depth(sp, s, m);
  const auto n = static_cast<int>(sp.n());
  std::vector<Successor> out;
  State earlier(sp.n());
  for (std::size_t i = 0; i < sp.k(); ++i) {
    if (m[i] >= n) continue;
    const ConceptId x = sp.sequence(i)[static_cast<std::size_t>(m[i])];
    if (earlier.test(x)) continue;
    earlier.set(x);
    if (i < p) continue;
    State t = s.with(x);
    out.push_back({t, mex(sp, t), i});
  }
  return out;
}

Fringes fringes(const SequenceSpace& sp, const State& s) {
  require_member(sp, s);
  const auto m = mex(sp, s);
  Fringes f{State(sp.n()), State(sp.n())};
  for (std::size_t i = 0; i < sp.k(); ++i)
    if (m[i] < static_cast<int>(sp.n())) f.outer.set(sp.sequence(i)[static_cast<std::size_t>(m[i])]);
  s.for_each([&](ConceptId x) {
    MexVector v(m);
    for (std::size_t i = 0; i < sp.k(); ++i) v[i] = std::min(v[i], sp.position(i, x));
    if (up(sp, v) == s.without(x)) f.inner.set(x);
  });
  return f;
}

SequenceSpace project(const SequenceSpace& sp, const State& keep) {
  if (keep.universe() != sp.n()) throw ValidationError("projection set over a domain of different size");
  if (keep.none()) throw ValidationError("projection onto an empty concept set");
  std::vector<std::string> labels;
  std::vector<int> new_index(sp.n(), -1);
  keep.for_each([&](ConceptId c) {
    new_index[static_cast<std::size_t>(c)] = static_cast<int>(labels.size());
    labels.push_back(sp.domain().label(c));
  });
  std::vector<std::vector<ConceptId>> seqs;
  for (const auto& seq : sp.sequences()) {
    auto& row = seqs.emplace_back();
    for (auto c : seq)
      if (keep.test(c)) row.push_back(new_index[static_cast<std::size_t>(c)]);
  }
  return SequenceSpace(Domain(std::move(labels)), std::move(seqs));
}

State union_via_mex(const SequenceSpace& sp, const State& s, const State& t) {
  require_member(sp, s);
  require_member(sp, t);
  auto a = mex(sp, s);
  const auto b = mex(sp, t);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::max(a[i], b[i]);
  return up(sp, a);
}

SetFamily sequence_family(const SequenceSpace& sp) {
  std::vector<State> states;
  enumerate_states(sp, [&](const State& s) {
    if (states.size() == SetFamily::kMaxStates)
      throw CapacityError("learning space exceeds explicit-family capacity");
    states.push_back(s);
  });
  return SetFamily(sp.domain(), std::move(states));
}

SequenceSpace parse_seqs(std::string_view text) {
  detail::LineReader r(text);
  auto header = r.next();
  if (!header) throw ParseError("missing 'domain:' header", r.line_no);
  Domain d = parse_domain_header(*header, r.line_no);
  std::vector<std::vector<ConceptId>> seqs;
  while (auto line = r.next()) {
    auto& row = seqs.emplace_back();
    for (const auto& l : split_labels(*line, r.line_no)) {
      auto c = d.find(l);
      if (!c) throw ParseError("unknown concept '" + l + "'", r.line_no);
      row.push_back(*c);
    }
  }
  return SequenceSpace(std::move(d), std::move(seqs));
}

std::string serialize_seqs(const SequenceSpace& sp) {
  std::string out = "domain: " + join_labels(sp.domain()) + "\n";
  for (const auto& seq : sp.sequences()) {
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (j) out += ',';
      out += sp.domain().label(seq[j]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace learnspace

#include "learnspace/assessment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace learnspace {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-12;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// A product of response terms as (number of zero factors, log of the rest),
// so that a noiseless model never produces inf - inf.
struct LogTerm {
  int zeros = 0;
  double log = 0;

  void mul(double x) {
    if (x == 0) ++zeros;
    else log += std::log(x);
  }
  LogTerm operator+(const LogTerm& o) const { return {zeros + o.zeros, log + o.log}; }
  LogTerm operator-(const LogTerm& o) const { return {zeros - o.zeros, log - o.log}; }
  double value() const { return zeros > 0 ? kNegInf : log; }
};

// Depth-first likelihood accumulation. Each node's subtree total is added to
// the concept that node added, which every state of the subtree contains.
class LikelihoodVisitor {
public:
  LikelihoodVisitor(std::size_t n, const ResponseLog& log, const ResponseModel& model, const Prior& prior)
      : prior_(prior), delta_(n), acc_(n + 1, kNegInf), level_(n + 1), concept_(n, kNegInf) {
    for (const auto& r : log.entries()) {
      LogTerm in, out;
      in.mul(r.correct ? 1 - model.beta : model.beta);
      out.mul(r.correct ? model.eta : 1 - model.eta);
      root_.mul(r.correct ? model.eta : 1 - model.eta);
      delta_[static_cast<std::size_t>(r.item)] = delta_[static_cast<std::size_t>(r.item)] + (in - out);
    }
  }

  void enter(ConceptId added, const State& s) {
    if (added < 0) {
      depth_ = 0;
      level_[0] = root_;
    } else {
      ++depth_;
      level_[depth_] = level_[depth_ - 1] + delta_[static_cast<std::size_t>(added)];
    }
    double own = level_[depth_].value();
    if (prior_ && own != kNegInf) {
      const double w = prior_(s);
      if (w < 0 || !std::isfinite(w)) throw ValidationError("prior weight must be finite and non-negative");
      own = w == 0 ? kNegInf : own + std::log(w);
    }
    acc_[depth_] = own;
  }

  void leave(ConceptId added, const State&) {
    const double subtotal = acc_[depth_];
    if (added < 0) {
      total_ = subtotal;
      return;
    }
    concept_[static_cast<std::size_t>(added)] = log_add(concept_[static_cast<std::size_t>(added)], subtotal);
    --depth_;
    acc_[depth_] = log_add(acc_[depth_], subtotal);
  }

  Marginals result() const {
    if (total_ == kNegInf || std::isnan(total_))
      throw NumericalError("every state has zero likelihood under the responses");
    Marginals m;
    m.log_normalizer = total_;
    for (double c : concept_) m.p.push_back(std::clamp(std::exp(c - total_), 0.0, 1.0));
    return m;
  }

private:
  const Prior& prior_;
  std::vector<LogTerm> delta_;
  LogTerm root_;
  std::vector<double> acc_;
  std::vector<LogTerm> level_;
  std::vector<double> concept_;
  std::size_t depth_ = 0;
  double total_ = kNegInf;
};

void check_log(std::size_t n, const ResponseLog& log) {
  for (const auto& r : log.entries())
    if (r.item < 0 || static_cast<std::size_t>(r.item) >= n)
      throw ValidationError("response for a concept outside the domain");
}

std::string fmt_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", p);
  return buf;
}

}  // namespace

void ResponseModel::validate() const {
  if (!(beta >= 0 && beta < 0.5)) throw ValidationError("beta must lie in [0, 0.5)");
  if (!(eta >= 0 && eta < 0.5)) throw ValidationError("eta must lie in [0, 0.5)");
}

void AssessmentConfig::validate() const {
  model.validate();
  if (!(theta_lo > 0 && theta_lo < 0.5 && theta_hi > 0.5 && theta_hi < 1))
    throw ValidationError("thresholds must satisfy 0 < theta_lo < 0.5 < theta_hi < 1");
  if (collection_size < 1) throw ValidationError("collection size must be at least 1");
}

void ResponseLog::add(ConceptId item, bool correct) {
  if (item < 0 || static_cast<std::size_t>(item) >= asked_.universe())
    throw ValidationError("response for a concept outside the domain");
  entries_.push_back({item, correct});
  asked_.set(item);
}

double answer_term(const ResponseModel& model, const State& s, ConceptId item, bool correct) {
  if (s.test(item)) return correct ? 1 - model.beta : model.beta;
  return correct ? model.eta : 1 - model.eta;
}

Marginals assess(const SequenceSpace& sp, const ResponseLog& log, const ResponseModel& model, const Prior& prior) {
  model.validate();
  check_log(sp.n(), log);
  LikelihoodVisitor v(sp.n(), log, model, prior);
  traverse_states(sp, v);
  return v.result();
}

Marginals assess(const HasseDiagram& h, const ResponseLog& log, const ResponseModel& model, const Prior& prior) {
  model.validate();
  check_log(h.size(), log);
  LikelihoodVisitor v(h.size(), log, model, prior);
  traverse_lower_sets(h, v);
  return v.result();
}

std::optional<ConceptId> select_question(const std::vector<double>& p, const State& asked, double theta_lo,
                                         double theta_hi) {
  bool settled = true;
  std::optional<ConceptId> best;
  double best_gap = 0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const auto x = static_cast<ConceptId>(c);
    if (asked.test(x)) continue;
    if (p[c] > theta_lo && p[c] < theta_hi) settled = false;
    const double gap = std::abs(p[c] - 0.5);
    const bool tie = best && std::abs(gap - best_gap) <= kTieTolerance;
    if (!best || gap < best_gap - kTieTolerance || (tie && p[c] < p[static_cast<std::size_t>(*best)] - kTieTolerance)) {
      best = x;
      best_gap = gap;
    }
  }
  if (settled) return std::nullopt;
  return best;
}

SequenceSpace augment_with_random_sample(const SequenceSpace& sp, const State& q, ConceptId target,
                                         std::size_t sample_size, std::uint64_t seed) {
  if (target < 0 || static_cast<std::size_t>(target) >= sp.n()) throw ValidationError("target concept outside the domain");
  State rest = State::full(sp.n()) - q;
  rest.reset(target);
  const auto pool = rest.elements();
  std::vector<ConceptId> sample;
  std::mt19937_64 rng(seed);
  std::sample(pool.begin(), pool.end(), std::back_inserter(sample), std::min(sample_size, pool.size()), rng);
  State keep = q.with(target);
  for (auto c : sample) keep.set(c);
  return project(sp, keep);
}

ProjectionAssessment::ProjectionAssessment(SequenceSpace sp, AssessmentConfig cfg)
    : sp_(std::move(sp)), cfg_(cfg), rng_(cfg.seed), log_(sp_.n()), p_(sp_.n(), 0.0), final_(sp_.n()) {
  cfg_.validate();
}

void ProjectionAssessment::run_round() {
  const auto n = sp_.n();
  const State& q = log_.asked();
  std::vector<ConceptId> unasked = (State::full(n) - q).elements();
  std::shuffle(unasked.begin(), unasked.end(), rng_);

  std::vector<std::vector<ConceptId>> collections;
  for (std::size_t i = 0; i < unasked.size(); i += cfg_.collection_size)
    collections.emplace_back(unasked.begin() + static_cast<std::ptrdiff_t>(i),
                             unasked.begin() + static_cast<std::ptrdiff_t>(std::min(i + cfg_.collection_size, unasked.size())));
  if (collections.empty()) collections.emplace_back();  // everything asked: assess Q alone

  std::vector<double> p(n, 0.0);
  std::vector<double> q_sum(n, 0.0);
  for (const auto& c : collections) {
    State keep = q;
    for (auto x : c) keep.set(x);
    if (keep.none()) continue;
    auto proj = project(sp_, keep);
    // Concepts of the projection are those of `keep`, in domain order.
    const auto kept = keep.elements();
    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < kept.size(); ++i) local[static_cast<std::size_t>(kept[i])] = static_cast<int>(i);
    ResponseLog plog(kept.size());
    for (const auto& r : log_.entries()) plog.add(local[static_cast<std::size_t>(r.item)], r.correct);
    const auto m = assess(proj, plog, cfg_.model);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const auto x = static_cast<std::size_t>(kept[i]);
      if (q.test(kept[i])) q_sum[x] += m.p[i];
      else p[x] = m.p[i];
    }
  }
  q.for_each([&](ConceptId x) { p[static_cast<std::size_t>(x)] = q_sum[static_cast<std::size_t>(x)] / static_cast<double>(collections.size()); });
  p_ = p;
  rounds_.push_back(p);
  for (std::size_t c = 0; c < n; ++c)
    transcript_.push_back("marginal " + sp_.domain().label(static_cast<ConceptId>(c)) + " " + fmt_prob(p[c]));
}

void ProjectionAssessment::finish() {
  finished_ = true;
  pending_.reset();
  State known(sp_.n());
  for (std::size_t c = 0; c < sp_.n(); ++c)
    if (p_[c] >= cfg_.theta_hi) known.set(static_cast<ConceptId>(c));
  final_ = up(sp_, mex(sp_, known));
  transcript_.push_back("final " + format_state(sp_.domain(), final_));
}

std::optional<ConceptId> ProjectionAssessment::next_question() {
  if (finished_) return std::nullopt;
  if (pending_) return pending_;
  run_round();
  const auto& asked = log_.asked();
  if (asked.count() == sp_.n()) {
    // Every concept has been asked; stop whether or not all are settled.
    capped_ = std::any_of(p_.begin(), p_.end(), [&](double x) { return x > cfg_.theta_lo && x < cfg_.theta_hi; });
    finish();
    return std::nullopt;
  }
  auto q = select_question(p_, asked, cfg_.theta_lo, cfg_.theta_hi);
  if (!q) {
    finish();
    return std::nullopt;
  }
  pending_ = q;
  transcript_.push_back("ask " + sp_.domain().label(*q));
  return q;
}

void ProjectionAssessment::answer(ConceptId item, bool correct) {
  if (finished_) throw ValidationError("the assessment has already finished");
  if (!pending_ || *pending_ != item)
    throw ValidationError("answer does not match the pending question");
  log_.add(item, correct);
  pending_.reset();
  transcript_.push_back("answer " + sp_.domain().label(item) + (correct ? " 1" : " 0"));
}

AssessmentResult run_projection_assessment(const SequenceSpace& sp, const AnswerOracle& student,
                                           const AssessmentConfig& cfg) {
  ProjectionAssessment a(sp, cfg);
  while (auto q = a.next_question()) a.answer(*q, student(*q));
  return {a.final_state(), a.log().entries(), a.round_marginals(), a.hit_question_cap(), a.transcript()};
}

}  // namespace learnspace

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "learnspace/core.hpp"
#include "learnspace/quasi_ordinal.hpp"
#include "learnspace/sequence_space.hpp"

namespace learnspace {

/// Careless-mistake rate beta on known concepts and lucky-guess rate eta on unknown ones.
struct ResponseModel {
  double beta = 0.1;
  double eta = 0.01;
  void validate() const;
};

struct Response {
  ConceptId item;
  bool correct;
  bool operator==(const Response&) const = default;
};

class ResponseLog {
public:
  ResponseLog() = default;
  explicit ResponseLog(std::size_t n) : asked_(n) {}

  void add(ConceptId item, bool correct);
  const std::vector<Response>& entries() const { return entries_; }
  const State& asked() const { return asked_; }
  std::size_t size() const { return entries_.size(); }

private:
  std::vector<Response> entries_;
  State asked_;
};

struct Marginals {
  std::vector<double> p;
  double log_normalizer = 0;  // natural log of the total likelihood
};

/// Per-state prior weight (need not be normalized). Empty means uniform.
using Prior = std::function<double(const State&)>;

struct AssessmentConfig {
  ResponseModel model;
  double theta_lo = 0.2;
  double theta_hi = 0.8;
  std::size_t collection_size = 8;
  std::uint64_t seed = 0;
  void validate() const;
};

double answer_term(const ResponseModel& model, const State& s, ConceptId item, bool correct);

/// Posterior probability of each concept being known, computed in a single
/// depth-first pass over the states. Throws NumericalError if every state has
/// zero likelihood.
Marginals assess(const SequenceSpace& sp, const ResponseLog& log, const ResponseModel& model,
                 const Prior& prior = {});
Marginals assess(const HasseDiagram& h, const ResponseLog& log, const ResponseModel& model,
                 const Prior& prior = {});

/// The unasked concept with probability closest to 1/2, or nothing once every
/// unasked concept lies outside (theta_lo, theta_hi). Ties go to the smaller
/// probability, then to the lower index.
std::optional<ConceptId> select_question(const std::vector<double>& p, const State& asked, double theta_lo,
                                         double theta_hi);

/// project(space, q + R + {target}) for a uniform random R of the remaining concepts.
SequenceSpace augment_with_random_sample(const SequenceSpace& sp, const State& q, ConceptId target,
                                         std::size_t sample_size, std::uint64_t seed);

/// Incremental driver for the projection-based assessment loop. Each round
/// randomly partitions the unasked concepts into collections, assesses each
/// collection together with the asked concepts in the projected space, and
/// either stops or asks the concept closest to 1/2.
class ProjectionAssessment {
public:
  ProjectionAssessment(SequenceSpace sp, AssessmentConfig cfg);

  /// Runs a round if needed and returns the next question, or nothing when finished.
  std::optional<ConceptId> next_question();
  void answer(ConceptId item, bool correct);

  bool finished() const { return finished_; }
  bool hit_question_cap() const { return capped_; }
  const SequenceSpace& space() const { return sp_; }
  const AssessmentConfig& config() const { return cfg_; }
  const ResponseLog& log() const { return log_; }
  const std::vector<double>& marginals() const { return p_; }
  const std::vector<std::vector<double>>& round_marginals() const { return rounds_; }
  std::optional<ConceptId> pending() const { return pending_; }
  /// Snapped to a state: up(mex({x : p(x) >= theta_hi})). Valid once finished.
  const State& final_state() const { return final_; }
  const std::vector<std::string>& transcript() const { return transcript_; }

private:
  void run_round();
  void finish();

  SequenceSpace sp_;
  AssessmentConfig cfg_;
  std::mt19937_64 rng_;
  ResponseLog log_;
  std::vector<double> p_;
  std::vector<std::vector<double>> rounds_;
  std::optional<ConceptId> pending_;
  bool finished_ = false;
  bool capped_ = false;
  State final_;
  std::vector<std::string> transcript_;
};

struct AssessmentResult {
  State final_state;
  std::vector<Response> responses;
  std::vector<std::vector<double>> round_marginals;
  bool hit_question_cap = false;
  std::vector<std::string> transcript;
};

using AnswerOracle = std::function<bool(ConceptId)>;

AssessmentResult run_projection_assessment(const SequenceSpace& sp, const AnswerOracle& student,
                                           const AssessmentConfig& cfg);

}  // namespace learnspace

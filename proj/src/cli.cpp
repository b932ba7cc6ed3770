#include "learnspace/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <random>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "learnspace/adaptation.hpp"
#include "learnspace/assessment.hpp"
#include "learnspace/base_dimension.hpp"
#include "learnspace/fibers_algebra.hpp"
#include "learnspace/service.hpp"
#include "learnspace/space_io.hpp"
#include "text_lines.hpp"

namespace learnspace {

using nlohmann::json;

namespace {

struct Globals {
  bool json = false;
  std::uint64_t seed = 0;
};

// Collects the result of one command as text and as JSON.
class Output {
public:
  Output(std::ostream& out, const Globals& g, std::string command) : out_(out), g_(g) {
    j_ = {{"schema_version", kSchemaVersion}, {"command", std::move(command)}};
  }
  json& j() { return j_; }
  void line(const std::string& s) { text_ += s + '\n'; }
  void raw(const std::string& s) { text_ += s; }
  void flush() {
    if (g_.json) out_ << j_.dump(2) << '\n';
    else out_ << text_;
  }

private:
  std::ostream& out_;
  const Globals& g_;
  json j_;
  std::string text_;
};

json labels(const Domain& d, const State& s) {
  json a = json::array();
  s.for_each([&](ConceptId c) { a.push_back(d.label(c)); });
  return a;
}

json word_json(const Domain& d, const std::vector<ConceptId>& w) {
  json a = json::array();
  for (auto c : w) a.push_back(d.label(c));
  return a;
}

std::string word_text(const Domain& d, const std::vector<ConceptId>& w) {
  std::string s;
  for (auto c : w) {
    if (!s.empty()) s += ',';
    s += d.label(c);
  }
  return s;
}

State concept_list(const Domain& d, const std::string& text) {
  if (trim(text).empty()) return State(d.size());
  return parse_state(d, text);
}

LoadedSpace load(const std::string& path, std::ostream& err) {
  auto space = load_space(path);
  if (auto sp = std::get_if<SequenceSpace>(&space.rep); sp && sp->dropped_duplicates() > 0)
    err << "warning: " << path << ": dropped " << sp->dropped_duplicates() << " duplicate sequence(s)\n";
  return space;
}

void write_or_print(Output& o, const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    o.raw(text);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + out_path + "'");
  f << text;
  o.j()["written"] = out_path;
}

json seqs_json(const SequenceSpace& sp) {
  json a = json::array();
  for (const auto& s : sp.sequences()) a.push_back(word_json(sp.domain(), s));
  return a;
}

BaseFamily base_of(const LoadedSpace& sp) {
  if (auto h = std::get_if<HasseDiagram>(&sp.rep)) return base_of_hasse(*h);
  if (auto s = std::get_if<SequenceSpace>(&sp.rep)) return base_of_sequences(*s);
  return base_of_family(std::get<SetFamily>(sp.rep));
}

Fringes fringes_of(const LoadedSpace& sp, const State& s) {
  if (auto h = std::get_if<HasseDiagram>(&sp.rep)) return fringe_qos(*h, s);
  if (auto q = std::get_if<SequenceSpace>(&sp.rep)) return fringes(*q, s);
  const auto& f = std::get<SetFamily>(sp.rep);
  if (!f.contains(s)) throw ValidationError("not a state of the space: " + format_state(f.domain(), s));
  return state_fringes_bruteforce(f, s);
}

std::map<ConceptId, bool> read_answers(const Domain& d, const std::string& path) {
  const auto text = read_text_file(path);
  detail::LineReader r(text);
  std::map<ConceptId, bool> out;
  while (auto line = r.next()) {
    std::istringstream ls(*line);
    std::string label, value, extra;
    ls >> label >> value;
    if (label.empty() || (value != "0" && value != "1") || (ls >> extra))
      throw ParseError("expected '<concept> 0|1'", r.line_no);
    auto c = d.find(label);
    if (!c) throw ParseError("unknown concept '" + label + "'", r.line_no);
    out[*c] = value == "1";
  }
  return out;
}

// Exhaustive summaries of a semilattice used by --check.
void describe_semilattice(Output& o, const SemilatticeTable& t) {
  auto names = [&](const std::vector<std::size_t>& xs) {
    std::string s;
    json a = json::array();
    for (auto x : xs) {
      s += (s.empty() ? "" : " ") + t.name(x);
      a.push_back(x);
    }
    return std::pair{s, a};
  };
  const auto c = classify_elements(t);
  const auto sep = has_separated_equalizers(t);
  const bool qos = c.irreducibles == c.primes;
  auto [irr_s, irr_j] = names(c.irreducibles);
  auto [pr_s, pr_j] = names(c.primes);
  o.line("objects: " + std::to_string(t.size()));
  o.line("identity: " + t.name(t.identity()));
  o.line("irreducibles: " + irr_s);
  o.line("primes: " + pr_s);
  std::string sing;
  json sing_j = json::array();
  for (const auto& s : c.singulars) {
    sing += (sing.empty() ? "" : " ") + t.name(s.object) + "->" + t.name(s.successor);
    sing_j.push_back({{"object", s.object}, {"successor", s.successor}});
  }
  o.line("singulars: " + sing);
  if (sep.separated) {
    o.line("separated equalizers: yes");
  } else {
    const auto& w = *sep.witness;
    o.line("separated equalizers: no (pair " + t.name(w.x) + ", " + t.name(w.y) + " equalizes " + t.name(w.a) +
           " and " + t.name(w.b) + ")");
    o.j()["witness"] = {{"x", w.x}, {"y", w.y}, {"a", w.a}, {"b", w.b}};
  }
  o.line(std::string("antimatroid: ") + (sep.separated ? "yes" : "no"));
  o.line(std::string("quasi-ordinal: ") + (qos ? "yes" : "no"));
  o.j()["objects"] = t.size();
  o.j()["identity"] = t.identity();
  o.j()["irreducibles"] = irr_j;
  o.j()["primes"] = pr_j;
  o.j()["singulars"] = sing_j;
  o.j()["separated_equalizers"] = sep.separated;
  o.j()["antimatroid"] = sep.separated;
  o.j()["quasi_ordinal"] = qos;
}

int serve(const std::string& host, int port, const std::string& persist, const std::string& static_dir,
          std::uint64_t max_states, std::ostream& err) {
  ServiceOptions opts;
  opts.persist_path = persist;
  opts.max_states = max_states;
  SessionService service(opts);
  httplib::Server server;
  install_routes(server, service, static_dir);
  err << "listening on http://" << host << ":" << port << "\n";
  err.flush();
  if (!server.listen(host, port)) throw ValidationError("cannot listen on " + host + ":" + std::to_string(port));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learning spaces: generation, minimal representations, adaptation and assessment"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Emit machine-readable JSON");
  app.add_option("--seed", g.seed, "Seed for every randomized step")->capture_default_str();

  std::string in, in2, out_path, state_text, keep, know, unknow, answers;
  std::size_t limit = 100000;
  bool list = false;

  auto input = [&](CLI::App* c) { c->add_option("input", in, "Space file (.hasse, .seqs or .states)")->required(); };

  auto* c_states = app.add_subcommand("states", "Count (and optionally list) the states of a space");
  input(c_states);
  c_states->add_flag("--list", list, "Print every state after the count");

  auto* c_base = app.add_subcommand("base", "Print the base of a space");
  input(c_base);

  auto* c_min = app.add_subcommand("minimize", "Minimum set of learning sequences for a space");
  input(c_min);
  c_min->add_option("-o,--output", out_path, "Write the .seqs here instead of standard output");

  auto* c_dims = app.add_subcommand("dims", "Base size and convex dimension");
  input(c_dims);

  auto* c_proj = app.add_subcommand("project", "Project a space onto a subset of its concepts");
  input(c_proj);
  c_proj->add_option("--keep", keep, "Comma-separated concepts to keep")->required();
  c_proj->add_option("-o,--output", out_path, "Output file");

  auto* c_fringe = app.add_subcommand("fringe", "Inner and outer fringe of one state");
  input(c_fringe);
  c_fringe->add_option("--state", state_text, "Comma-separated concepts, or {} for the empty state")->required();

  auto* c_fspace = app.add_subcommand("fringe-space", "States that can be removed from or added to a space");
  input(c_fspace);

  auto* c_add = app.add_subcommand("add-state", "Add a state to a space");
  input(c_add);
  c_add->add_option("--state", state_text, "The new state")->required();
  c_add->add_option("-o,--output", out_path, "Output .seqs file");

  auto* c_remove = app.add_subcommand("remove-state", "Remove a state from a space");
  input(c_remove);
  c_remove->add_option("--state", state_text, "The state to remove")->required();
  c_remove->add_option("-o,--output", out_path, "Output .seqs file");

  auto* c_words = app.add_subcommand("basic-words", "List the learning sequences of a space");
  input(c_words);
  c_words->add_option("--limit", limit, "Stop after this many words")->capture_default_str();

  AssessmentConfig cfg;
  std::uint64_t simulate = 0;
  auto* c_assess = app.add_subcommand("assess", "Run the projection-based assessment loop");
  input(c_assess);
  auto* o_answers = c_assess->add_option("--answers", answers, "File of '<concept> 0|1' lines");
  auto* o_sim = c_assess->add_option("--simulate", simulate, "Simulate a student at a random state from this seed");
  o_answers->excludes(o_sim);
  c_assess->add_option("--beta", cfg.model.beta, "Careless-mistake rate")->capture_default_str();
  c_assess->add_option("--eta", cfg.model.eta, "Lucky-guess rate")->capture_default_str();
  c_assess->add_option("--theta-lo", cfg.theta_lo, "Settled-unknown threshold")->capture_default_str();
  c_assess->add_option("--theta-hi", cfg.theta_hi, "Settled-known threshold")->capture_default_str();
  c_assess->add_option("--collection-size", cfg.collection_size, "Concepts per collection")->capture_default_str();

  auto* c_fiber = app.add_subcommand("fiber", "States containing K and avoiding U");
  input(c_fiber);
  c_fiber->add_option("--know", know, "Concepts known (K)");
  c_fiber->add_option("--unknow", unknow, "Concepts not known (U)");

  auto* c_upper = app.add_subcommand("recognize-upper", "Is the union closure of some sets an upper subfamily?");
  c_upper->add_option("generators", in, "Generators as a .states file")->required();
  c_upper->add_option("-o,--output", out_path, "Write the learning space's .seqs here");

  auto* c_join = app.add_subcommand("join", "Pairwise unions of two spaces on one domain");
  c_join->add_option("a", in, "First space")->required();
  c_join->add_option("b", in2, "Second space")->required();
  c_join->add_option("-o,--output", out_path, "Output .seqs file");

  bool check = false, to_am = false, to_qos = false;
  auto* c_sl = app.add_subcommand("semilattice", "Algebraic checks on a semilattice table");
  c_sl->add_option("input", in, ".semilattice file")->required();
  auto* f_check = c_sl->add_flag("--check", check, "Classify objects and test representability");
  auto* f_am = c_sl->add_flag("--to-antimatroid", to_am, "Print the N(x) family");
  auto* f_qos = c_sl->add_flag("--to-qos", to_qos, "Print the diagram on the primes");
  f_check->excludes(f_am, f_qos);
  f_am->excludes(f_qos);

  int port = 8080;
  std::string host = "127.0.0.1", persist, static_dir;
  std::uint64_t max_states = ServiceOptions{}.max_states;
  auto* c_serve = app.add_subcommand("serve", "Run the HTTP/JSON assessment service");
  c_serve->add_option("--port", port, "TCP port")->capture_default_str();
  c_serve->add_option("--host", host, "Address to bind")->capture_default_str();
  c_serve->add_option("--persist", persist, "Append events as JSON lines to this file");
  c_serve->add_option("--static", static_dir, "Directory served at / (the browser client)");
  c_serve->add_option("--max-states", max_states, "Refuse spaces with more states")->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    auto* cmd = app.get_subcommands().front();
    Output o(out, g, cmd->get_name());

    if (cmd == c_states) {
      auto sp = load(in, err);
      std::uint64_t count = 0;
      json states = json::array();
      std::string listing;
      for_each_state(sp, [&](const State& s) {
        ++count;
        if (!list) return;
        if (g.json) states.push_back(labels(sp.domain(), s));
        else listing += format_state(sp.domain(), s) + '\n';
      });
      o.line(std::to_string(count));
      o.raw(listing);
      o.j()["count"] = count;
      if (list) o.j()["states"] = states;
    } else if (cmd == c_base) {
      auto sp = load(in, err);
      auto b = base_of(sp);
      json sets = json::array();
      for (const auto& s : b.sets) {
        o.line(format_state(b.domain, s));
        sets.push_back(labels(b.domain, s));
      }
      o.j()["base"] = sets;
      o.j()["dim_b"] = b.sets.size();
    } else if (cmd == c_min) {
      auto sp = load(in, err);
      Minimized m = std::visit([](const auto& r) { return minimize(r); }, sp.rep);
      write_or_print(o, out_path, serialize_seqs(m.space));
      o.j()["sequences"] = seqs_json(m.space);
      o.j()["dim_c"] = m.dim_c();
      o.j()["dim_b"] = m.base.sets.size();
    } else if (cmd == c_dims) {
      auto sp = load(in, err);
      DimensionReport r = std::visit([](const auto& x) { return dimensions(x); }, sp.rep);
      o.line("n: " + std::to_string(r.n));
      o.line("dim_B: " + std::to_string(r.dim_b));
      o.line("dim_C: " + std::to_string(r.dim_c));
      o.line(std::string("order_dim_is_2: ") + (r.order_dim_is_2 ? "yes" : "no"));
      o.j()["n"] = r.n;
      o.j()["dim_b"] = r.dim_b;
      o.j()["dim_c"] = r.dim_c;
      o.j()["order_dim_is_2"] = r.order_dim_is_2;
    } else if (cmd == c_proj) {
      auto sp = load(in, err);
      const auto k = concept_list(sp.domain(), keep);
      if (k.none()) throw ValidationError("--keep names no concepts");
      std::string text;
      if (auto h = std::get_if<HasseDiagram>(&sp.rep)) {
        text = serialize_hasse(restrict(*h, k));
      } else if (auto q = std::get_if<SequenceSpace>(&sp.rep)) {
        text = serialize_seqs(project(*q, k));
      } else {
        const auto& f = std::get<SetFamily>(sp.rep);
        const auto kept = k.elements();
        std::vector<std::string> names;
        for (auto c : kept) names.push_back(f.domain().label(c));
        Domain sub(names);
        std::vector<State> states;
        for (const auto& s : f) {
          State t(kept.size());
          for (std::size_t i = 0; i < kept.size(); ++i)
            if (s.test(kept[i])) t.set(static_cast<ConceptId>(i));
          states.push_back(t);
        }
        text = serialize_states(SetFamily(sub, states));
      }
      write_or_print(o, out_path, text);
      o.j()["format"] = format_name(sp.format);
      o.j()["text"] = text;
    } else if (cmd == c_fringe) {
      auto sp = load(in, err);
      const auto s = parse_state(sp.domain(), state_text);
      const auto f = fringes_of(sp, s);
      o.line("inner: " + format_state(sp.domain(), f.inner));
      o.line("outer: " + format_state(sp.domain(), f.outer));
      o.j()["state"] = labels(sp.domain(), s);
      o.j()["inner"] = labels(sp.domain(), f.inner);
      o.j()["outer"] = labels(sp.domain(), f.outer);
    } else if (cmd == c_fspace) {
      auto sp = load(in, err);
      const auto seqs = sp.sequences();
      const auto f = space_fringe(seqs);
      json rem = json::array(), add = json::array();
      o.line("removable:");
      for (const auto& s : f.removable) {
        o.line("  " + format_state(seqs.domain(), s));
        rem.push_back(labels(seqs.domain(), s));
      }
      o.line("addable:");
      for (const auto& s : f.addable) {
        o.line("  " + format_state(seqs.domain(), s));
        add.push_back(labels(seqs.domain(), s));
      }
      o.j()["removable"] = rem;
      o.j()["addable"] = add;
    } else if (cmd == c_add || cmd == c_remove) {
      auto sp = load(in, err);
      const auto seqs = sp.sequences();
      const auto s = parse_state(seqs.domain(), state_text);
      auto r = cmd == c_add ? add_state(seqs, s) : remove_state(seqs, s);
      write_or_print(o, out_path, serialize_seqs(r.space));
      o.j()["sequences"] = seqs_json(r.space);
    } else if (cmd == c_words) {
      auto sp = load(in, err);
      auto w = enumerate_basic_words(sp.domain(), sp.membership(), limit);
      json words = json::array();
      for (const auto& word : w.words) {
        o.line(word_text(sp.domain(), word));
        words.push_back(word_json(sp.domain(), word));
      }
      if (w.truncated) err << "warning: stopped after " << limit << " words\n";
      o.j()["words"] = words;
      o.j()["truncated"] = w.truncated;
    } else if (cmd == c_assess) {
      auto sp = load(in, err);
      const auto seqs = sp.sequences();
      const auto& d = seqs.domain();
      cfg.seed = g.seed;
      cfg.validate();
      AnswerOracle student;
      std::map<ConceptId, bool> given;
      std::optional<State> truth;
      std::mt19937_64 sim_rng(simulate);
      if (!answers.empty()) {
        given = read_answers(d, answers);
        student = [&](ConceptId c) {
          auto it = given.find(c);
          if (it == given.end()) throw ValidationError("no answer given for concept " + d.label(c));
          return it->second;
        };
      } else if (o_sim->count() > 0) {
        std::vector<State> states;
        enumerate_states(seqs, [&](const State& s) {
          if (states.size() == SetFamily::kMaxStates) throw CapacityError("too many states to pick a student from");
          states.push_back(s);
        });
        truth = states[std::uniform_int_distribution<std::size_t>(0, states.size() - 1)(sim_rng)];
        std::bernoulli_distribution slip(cfg.model.beta), guess(cfg.model.eta);
        student = [&](ConceptId c) { return truth->test(c) ? !slip(sim_rng) : guess(sim_rng); };
      } else {
        throw ValidationError("assess needs --answers FILE or --simulate SEED");
      }
      auto r = run_projection_assessment(seqs, student, cfg);
      o.line("seed " + std::to_string(g.seed));
      if (truth) o.line("student " + format_state(d, *truth));
      for (const auto& l : r.transcript) o.line(l);
      o.j()["seed"] = g.seed;
      if (truth) {
        o.j()["simulate"] = simulate;
        o.j()["student"] = labels(d, *truth);
      }
      o.j()["transcript"] = r.transcript;
      o.j()["final"] = labels(d, r.final_state);
      o.j()["questions"] = r.responses.size();
      o.j()["hit_question_cap"] = r.hit_question_cap;
      if (r.hit_question_cap) err << "warning: every concept was asked without settling all of them\n";
    } else if (cmd == c_fiber) {
      auto sp = load(in, err);
      const auto k = concept_list(sp.domain(), know), u = concept_list(sp.domain(), unknow);
      SetFamily f = std::visit([&](const auto& r) { return fiber(r, k, u); }, sp.rep);
      json states = json::array();
      for (const auto& s : f) {
        o.line(format_state(f.domain(), s));
        states.push_back(labels(f.domain(), s));
      }
      o.j()["states"] = states;
    } else if (cmd == c_upper) {
      auto fam = parse_states(read_text_file(in));
      std::vector<State> gens;
      for (const auto& s : fam)
        if (!s.none()) gens.push_back(s);
      GeneratorFamily gf(fam.domain(), gens);
      auto r = recognize_upper_subfamily(gf);
      o.j()["upper_subfamily"] = r.has_value();
      if (r) {
        o.line("upper subfamily: yes");
        o.j()["sequences"] = seqs_json(*r);
        o.j()["domain"] = r->domain().labels();
        write_or_print(o, out_path, serialize_seqs(*r));
      } else {
        o.line("upper subfamily: no");
        for (const auto& s : gens)
          if (!reachable_order(gf, s)) {
            o.line("unreachable: " + format_state(gf.domain(), s));
            o.j()["unreachable"] = labels(gf.domain(), s);
            break;
          }
      }
    } else if (cmd == c_join) {
      auto a = load(in, err).sequences();
      auto b = load(in2, err).sequences();
      auto j = join(a, b);
      write_or_print(o, out_path, serialize_seqs(j));
      o.j()["sequences"] = seqs_json(j);
    } else if (cmd == c_sl) {
      if (!check && !to_am && !to_qos) {
        err << "semilattice: one of --check, --to-antimatroid or --to-qos is required\n";
        return kExitParse;
      }
      auto t = parse_semilattice(read_text_file(in));
      if (check) {
        describe_semilattice(o, t);
      } else if (to_am) {
        auto r = to_antimatroid(t);
        o.j()["separated_equalizers"] = r.separation.separated;
        o.j()["is_learning_space"] = r.is_learning_space;
        if (!r.is_learning_space) {
          const auto& w = *r.separation.witness;
          o.flush();
          err << "error: not an antimatroid; objects " << w.x << " and " << w.y << " equalize " << w.a << " and "
              << w.b << " with nothing between them\n";
          return kExitValidation;
        }
        json sets = json::array();
        for (std::size_t x = 0; x < t.size(); ++x) {
          o.line("# object " + std::to_string(x) + " -> " + format_state(r.domain, r.sets[x]));
          sets.push_back(labels(r.domain, r.sets[x]));
        }
        o.raw(serialize_states(r.family));
        o.j()["sets"] = sets;
        o.j()["domain"] = r.domain.labels();
      } else {
        auto r = to_quasi_ordinal(t);
        o.j()["quasi_ordinal"] = r.diagram.has_value();
        if (!r.diagram) {
          o.flush();
          err << "error: not quasi-ordinal; object " << *r.irreducible_not_prime << " is irreducible but not prime\n";
          return kExitValidation;
        }
        o.raw(serialize_hasse(*r.diagram));
        o.j()["text"] = serialize_hasse(*r.diagram);
      }
    } else if (cmd == c_serve) {
      return serve(host, port, persist, static_dir, max_states, err);
    }
    o.flush();
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace learnspace

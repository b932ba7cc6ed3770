#include "learnspace/space_io.hpp"

#include <fstream>
#include <sstream>

namespace learnspace {

SpaceFormat parse_format_name(std::string_view name) {
  if (name == "hasse") return SpaceFormat::hasse;
  if (name == "seqs") return SpaceFormat::seqs;
  if (name == "states") return SpaceFormat::states;
  throw ValidationError("unknown space format '" + std::string(name) + "' (expected hasse, seqs or states)");
}

std::string_view format_name(SpaceFormat f) {
  switch (f) {
    case SpaceFormat::hasse: return "hasse";
    case SpaceFormat::seqs: return "seqs";
    case SpaceFormat::states: return "states";
  }
  return "?";
}

SpaceFormat format_of_path(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  if (ext.empty()) throw ValidationError("cannot tell the format of '" + p.string() + "' without an extension");
  return parse_format_name(ext.substr(1));
}

const Domain& LoadedSpace::domain() const {
  return std::visit([](const auto& r) -> const Domain& { return r.domain(); }, rep);
}

MembershipOracle LoadedSpace::membership() const {
  if (auto h = std::get_if<HasseDiagram>(&rep)) return [h](const State& s) { return is_lower_set(*h, s); };
  if (auto sp = std::get_if<SequenceSpace>(&rep)) return [sp](const State& s) { return contains(*sp, s); };
  const auto* f = &std::get<SetFamily>(rep);
  return [f](const State& s) { return f->contains(s); };
}

SequenceSpace LoadedSpace::sequences() const {
  if (auto sp = std::get_if<SequenceSpace>(&rep)) return *sp;
  if (auto h = std::get_if<HasseDiagram>(&rep)) return minimize(*h).space;
  return minimize(std::get<SetFamily>(rep)).space;
}

LoadedSpace parse_space(SpaceFormat format, std::string_view text) {
  switch (format) {
    case SpaceFormat::hasse: return {format, parse_hasse(text)};
    case SpaceFormat::seqs: return {format, parse_seqs(text)};
    case SpaceFormat::states: {
      auto f = parse_states(text);
      if (!is_learning_space(f))
        throw ValidationError("the listed states do not form a learning space "
                              "(it must contain the empty set and be accessible and closed under union)");
      return {format, std::move(f)};
    }
  }
  throw ValidationError("unknown space format");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedSpace load_space(const std::filesystem::path& path) {
  const auto format = format_of_path(path);
  return parse_space(format, read_text_file(path));
}

std::uint64_t count_states(const LoadedSpace& space, std::uint64_t cap) {
  std::uint64_t count = 0;
  for_each_state(space, [&](const State&) {
    if (++count > cap) throw CapacityError("the space has more than " + std::to_string(cap) + " states");
  });
  return count;
}

}  // namespace learnspace

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "learnspace/base_dimension.hpp"
#include "learnspace/core.hpp"
#include "learnspace/quasi_ordinal.hpp"
#include "learnspace/sequence_space.hpp"

namespace learnspace {

enum class SpaceFormat { hasse, seqs, states };

/// "hasse", "seqs" or "states"; throws ValidationError otherwise.
SpaceFormat parse_format_name(std::string_view name);
std::string_view format_name(SpaceFormat f);
/// Format from a file extension (.hasse, .seqs, .states).
SpaceFormat format_of_path(const std::filesystem::path& p);

/// A learning space in whichever representation it was given. Explicit
/// families are checked to be learning spaces when loaded.
struct LoadedSpace {
  SpaceFormat format;
  std::variant<HasseDiagram, SequenceSpace, SetFamily> rep;

  const Domain& domain() const;
  std::size_t n() const { return domain().size(); }
  MembershipOracle membership() const;
  /// The space itself when given as sequences, otherwise a minimum representation.
  SequenceSpace sequences() const;
};

LoadedSpace parse_space(SpaceFormat format, std::string_view text);
LoadedSpace load_space(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

/// Number of states; throws CapacityError as soon as it exceeds `cap`.
std::uint64_t count_states(const LoadedSpace& space, std::uint64_t cap);

/// Calls f(state) for every state, in the representation's traversal order.
template <typename F>
void for_each_state(const LoadedSpace& space, F&& f) {
  if (auto h = std::get_if<HasseDiagram>(&space.rep)) enumerate_lower_sets(*h, f);
  else if (auto sp = std::get_if<SequenceSpace>(&space.rep)) enumerate_states(*sp, f);
  else
    for (const auto& s : std::get<SetFamily>(space.rep)) f(s);
}

}  // namespace learnspace

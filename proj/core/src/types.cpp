#include "eegsz/types.hpp"

namespace eegsz {

namespace {
constexpr std::array<std::string_view, kRhythmCount> kRhythmNames{"delta", "theta", "alpha", "beta",
                                                                  "gamma"};
}

std::string_view rhythm_name(Rhythm r) noexcept { return kRhythmNames[index_of(r)]; }

std::optional<Rhythm> parse_rhythm(std::string_view name) noexcept {
  for (Rhythm r : kAllRhythms) {
    if (kRhythmNames[index_of(r)] == name) return r;
  }
  return std::nullopt;
}

std::string_view label_name(Label l) noexcept { return l == Label::seizure ? "S" : "SF"; }

std::optional<Label> parse_label(std::string_view name) noexcept {
  if (name == "S") return Label::seizure;
  if (name == "SF") return Label::seizure_free;
  return std::nullopt;
}

}  // namespace eegsz

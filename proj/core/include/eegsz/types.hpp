#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace eegsz {

/// Clinical EEG rhythms, in ascending frequency order.
enum class Rhythm : std::size_t { delta = 0, theta, alpha, beta, gamma };

inline constexpr std::size_t kRhythmCount = 5;

inline constexpr std::array<Rhythm, kRhythmCount> kAllRhythms{
    Rhythm::delta, Rhythm::theta, Rhythm::alpha, Rhythm::beta, Rhythm::gamma};

constexpr std::size_t index_of(Rhythm r) noexcept { return static_cast<std::size_t>(r); }

std::string_view rhythm_name(Rhythm r) noexcept;
std::optional<Rhythm> parse_rhythm(std::string_view name) noexcept;

/// Class label. The positive (detection target) class is `seizure`.
enum class Label { seizure, seizure_free };

/// "S" or "SF".
std::string_view label_name(Label l) noexcept;
std::optional<Label> parse_label(std::string_view name) noexcept;

}  // namespace eegsz

#pragma once

#include <compare>
#include <cstdint>

namespace cachemod {

/// Number of label bits a receiver already knows, counted from the MSB end
/// (prefix) and from the LSB end (suffix) of an m-bit label.
struct MaskShape {
  unsigned prefix = 0;
  unsigned suffix = 0;

  constexpr unsigned known() const noexcept { return prefix + suffix; }
  friend constexpr auto operator<=>(const MaskShape&, const MaskShape&) = default;
};

} // namespace cachemod

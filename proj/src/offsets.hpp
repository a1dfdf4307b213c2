#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

namespace iqa::kernels::detail {

struct Offset {
  int dy;
  int dx;
};

// Window offsets in tie-break order: Manhattan distance, then row-major.
inline std::vector<Offset> search_offsets(int radius) {
  std::vector<Offset> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) offsets.push_back({dy, dx});
  std::stable_sort(offsets.begin(), offsets.end(), [](const Offset& l, const Offset& r) {
    return std::abs(l.dy) + std::abs(l.dx) < std::abs(r.dy) + std::abs(r.dx);
  });
  return offsets;
}

}  // namespace iqa::kernels::detail

#pragma once

#include <cstddef>
#include <vector>

namespace infmat {

// Finite section sizes at which a quantity of an infinite matrix is probed:
// start, start*growth, start*growth^2, ... with max_size as the last entry.
struct TruncationSchedule {
  std::size_t start = 8;
  double growth = 2.0;
  std::size_t max_size = 1024;

  // Throws InvalidArgument when start < 1, growth < 2 or max_size < start.
  void validate() const;

  // Strictly increasing. Sizes are rounded to the nearest integer and the
  // final size is max_size even when the geometric sequence overshoots it.
  std::vector<std::size_t> sizes() const;

  // Sizes capped at `extent`; used when one side of a matrix is finite.
  std::vector<std::size_t> sizes_up_to(std::size_t extent) const;
};

}  // namespace infmat

#pragma once

#include <cstddef>
#include <functional>

namespace tfseg {

// Applies fn to every index in [0, count) using up to `jobs` threads,
// splitting the range into contiguous chunks. The first exception (by
// chunk order) is rethrown after all threads join. jobs <= 1 runs inline.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace tfseg

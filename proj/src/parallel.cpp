#include "subsum/parallel.hpp"

#include <omp.h>

namespace subsum {

int Threads::resolve() const { return count > 0 ? count : omp_get_max_threads(); }

}  // namespace subsum

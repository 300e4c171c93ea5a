#pragma once

namespace subsum {

/// Worker count for the OpenMP kernels. 0 means "whatever OpenMP would pick".
struct Threads {
    int count = 0;

    int resolve() const;
};

}  // namespace subsum

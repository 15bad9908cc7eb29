#pragma once

#include <gmpxx.h>

#include "zpell/arith.hpp"

namespace zpell {

/// prod_{p | n} (1 + 1/(p^2 - 1)) (1 - 1/(p + 1)) as an exact fraction.
/// Each prime contributes p^3 / ((p - 1)(p + 1)^2); n = 1 gives 1.
mpq_class sigma_lower_bound(u64 n);

}  // namespace zpell

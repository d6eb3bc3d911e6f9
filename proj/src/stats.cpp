#include "qx/stats.hpp"

// Statistics helpers are header-only templates; this translation unit keeps
// the target layout uniform.

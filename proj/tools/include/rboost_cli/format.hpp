#pragma once

#include <string>

namespace rboost::cli {

/// Fixed-width-free decimal text with 10 significant digits; NaN prints as "-".
std::string fmt(double v);

/// Shortest text that reparses to the same double.
std::string fmt_exact(double v);

}  // namespace rboost::cli

#include "rboost_cli/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace rboost::cli {

std::string fmt(double v) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace rboost::cli

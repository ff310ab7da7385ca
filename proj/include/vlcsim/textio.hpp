#pragma once
#include <cstdio>
#include <istream>
#include <string>

#include "vlcsim/matrix.hpp"

namespace vlc {

// shortest decimal form that parses back to the identical double
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline void expect_word(std::istream& in, const char* word, const char* what) {
  std::string t;
  in >> t;
  require(static_cast<bool>(in) && t == word, what);
}

inline double read_num(std::istream& in, const char* what) {
  double v = 0.0;
  in >> v;
  require(static_cast<bool>(in), what);
  return v;
}

}  // namespace vlc

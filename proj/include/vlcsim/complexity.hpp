#pragma once
#include <cstddef>
#include <string>

namespace vlc {

// per-symbol real multiplication budget of the hidden stage; the
// closed-form figures follow textbook operation counts for a dense
// product and a transform-based circulant product, the measured
// figures count multiplies actually executed by an instrumented copy
// of each loop in this codebase
struct ComplexityReport {
  std::size_t hidden = 0;
  std::size_t inputs = 0;
  long long dense_per_symbol = 0;
  long long circulant_per_symbol = 0;
  double ratio = 0.0;
  unsigned long long dense_measured = 0;
  unsigned long long circulant_measured = 0;
};

ComplexityReport complexity_report(std::size_t hidden, std::size_t inputs);

std::string format_complexity_table(const ComplexityReport& rep);
std::string format_complexity_csv(const ComplexityReport& rep);

}  // namespace vlc

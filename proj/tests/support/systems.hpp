#pragma once

#include <initializer_list>

#include "magtor/system.hpp"

namespace magtor::testing {

/// sum r_j dx_j ^ dy_j in (x_1, y_1, ..., x_m, y_m) order.
inline IntMatrix interleaved_form(std::initializer_list<int> r) {
  IntMatrix out(2 * r.size(), 2 * r.size());
  std::size_t j = 0;
  for (int value : r) {
    out(2 * j, 2 * j + 1) = value;
    out(2 * j + 1, 2 * j) = -value;
    ++j;
  }
  return out;
}

inline RatMatrix diagonal(std::initializer_list<Rational> entries) {
  RatMatrix out(entries.size(), entries.size());
  std::size_t i = 0;
  for (const auto& value : entries) {
    out(i, i) = value;
    ++i;
  }
  return out;
}

inline TorusMagneticSystem make_system(RatMatrix metric, IntMatrix magnetic) {
  return TorusMagneticSystem(MetricGram(std::move(metric)), SymplecticGram(std::move(magnetic)));
}

// Worked examples in (x1, y1, x2, y2) order.
inline TorusMagneticSystem example_i_omega() { return make_system(diagonal({1, 1, 1, 4}), interleaved_form({2, 2})); }
inline TorusMagneticSystem example_i_omega_prime() {
  return make_system(diagonal({1, 1, 1, 4}), interleaved_form({1, 4}));
}
inline TorusMagneticSystem example_ii_h() { return make_system(diagonal({1, 4, 1, 4}), interleaved_form({2, 2})); }
inline TorusMagneticSystem example_ii_h_prime() {
  return make_system(diagonal({1, 1, 4, 4}), interleaved_form({1, 4}));
}

}  // namespace magtor::testing

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "canonconn/carnot.hpp"

namespace fixtures {

using canonconn::CarnotSpec;
using canonconn::Mat;
using canonconn::Rat;
using canonconn::Vec;

inline Vec unit(std::size_t n, std::size_t i, Rat value = 1) {
  Vec v(n);
  v[i] = value;
  return v;
}

inline CarnotSpec heisenberg23() {
  CarnotSpec s;
  s.step = 2;
  s.layer_dims = {2, 1};
  s.brackets = {{0, 1, unit(3, 2)}};
  s.gram_minus1 = Mat::identity(2);
  s.labels = {"A1", "A2", "B"};
  return s;
}

// A1 A2 | B | C1 C2 with [A1,A2] = B, [Aj,B] = Cj
inline CarnotSpec rolling235() {
  CarnotSpec s;
  s.step = 3;
  s.layer_dims = {2, 1, 2};
  s.brackets = {{0, 1, unit(5, 2)}, {0, 2, unit(5, 3)}, {1, 2, unit(5, 4)}};
  s.gram_minus1 = Mat::identity(2);
  s.labels = {"A1", "A2", "B", "C1", "C2"};
  return s;
}

// A1..An | B_ij (i<j, lexicographic) with [Ai,Aj] = B_ij
inline CarnotSpec free_step2(std::size_t n1) {
  CarnotSpec s;
  s.step = 2;
  const std::size_t n2 = n1 * (n1 - 1) / 2, n = n1 + n2;
  s.layer_dims = {n1, n2};
  s.gram_minus1 = Mat::identity(n1);
  for (std::size_t i = 0; i < n1; ++i) s.labels.push_back("A" + std::to_string(i + 1));
  std::size_t k = n1;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = i + 1; j < n1; ++j) {
      s.brackets.push_back({i, j, unit(n, k)});
      s.labels.push_back("B" + std::to_string(i + 1) + std::to_string(j + 1));
      ++k;
    }
  return s;
}

// 5-dimensional Heisenberg: [A1,A2] = B, [A3,A4] = lambda B
inline CarnotSpec contact5(Rat lambda) {
  CarnotSpec s;
  s.step = 2;
  s.layer_dims = {4, 1};
  s.brackets = {{0, 1, unit(5, 4)}, {2, 3, unit(5, 4, lambda)}};
  s.gram_minus1 = Mat::identity(4);
  s.labels = {"A1", "A2", "A3", "A4", "B"};
  return s;
}

inline CarnotSpec contact_std() { return contact5(1); }
inline CarnotSpec contact_two_eigen() { return contact5(Rat(1, 2)); }

inline std::vector<std::pair<std::string, CarnotSpec>> all() {
  return {{"heisenberg23", heisenberg23()},   {"rolling235", rolling235()},
          {"free_step2_n3", free_step2(3)},   {"free_step2_n4", free_step2(4)},
          {"contact_std", contact_std()},     {"contact_two_eigen", contact_two_eigen()}};
}

}  // namespace fixtures

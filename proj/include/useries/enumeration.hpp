#pragma once

#include <cstdint>

#include "useries/step_function.hpp"

namespace useries {

// Frozen bijection between positive integers and all (level, rational
// values) step functions. The order is:
//
//   n = 2^a * (2b + 1)  ->  level a, value-tuple index b          (ruler split)
//   b -> (c_1, ..., c_{2^a})  by a balanced binary tree of Cantor unpairings
//   c -> rational  with  0 -> 0,  2k-1 -> +cw(k),  2k -> -cw(k)   (sign interleaving)
//
// where cw(k) is the k-th positive rational in Calkin-Wilf breadth-first
// order (cw(k) = fusc(k)/fusc(k+1)). The first few entries:
//
//   n=1: 0 (level 0)     n=2: 0 (level 1)      n=3: 1 (constant)
//   n=4: 0 (level 2)     n=5: -1 (constant)    n=6: chi_[0,pi)
//   n=7: 1/2 (constant)  n=8: 0 (level 3)      n=10: chi_[pi,2pi)
//
// The ruler split keeps materialized levels logarithmic in n, so any index a
// test can reach decodes to a representable function.
StepFunction enumerate_step(std::uint64_t n);

// Inverse of enumerate_step; throws std::overflow_error when the pairing
// index would not fit in 64 bits.
std::uint64_t index_of_step(const StepFunction& f);

// Building blocks, exposed for the bijection tests.
std::uint64_t fusc(std::uint64_t n);
Rational calkin_wilf(std::uint64_t k);          // k >= 1
Rational rational_by_index(std::uint64_t c);    // 0-based, signed order
std::uint64_t index_of_rational(const Rational& r);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);
std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b);

} // namespace useries

#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace nsbox {

// Exact rational arithmetic everywhere a verdict depends on it.
using Rat = mpq_class;
using Int = mpz_class;

// Parses "a/b", "a", or a decimal like "0.45" (converted exactly).
Rat rat_from_string(const std::string& s);

// Lowest terms; integers print without "/1".
std::string rat_to_string(const Rat& q);

double rat_to_double(const Rat& q);

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Sum of a vector, exact.
Rat rat_sum(const std::vector<Rat>& v);

}  // namespace nsbox

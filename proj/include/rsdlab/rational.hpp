#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace rsdlab {

// Exact rational arithmetic everywhere the engine promises exact answers.
using Rat = mpq_class;

// Parses "3", "-3", "1/3", "0.475", "1e-6", "2.5e3". Throws InputError on junk.
Rat parse_rat(const std::string& s);

// mpq_class(num, den) keeps the fraction unreduced, and comparisons on
// unreduced values misbehave. Use this for any quotient whose operands may
// share a factor.
Rat rat_frac(long num, long den);

// Canonical form: "p/q", or just "p" when the denominator is 1.
std::string rat_str(const Rat& r);

double rat_double(const Rat& r);

// r^e for integer e >= 0.
Rat rat_pow(const Rat& r, unsigned long e);

Rat rat_sum(const std::vector<Rat>& v);

// Lexicographic key for a rational vector, usable as a map key.
std::string vec_key(const std::vector<Rat>& v);

} // namespace rsdlab

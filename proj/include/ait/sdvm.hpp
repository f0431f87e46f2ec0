#pragma once

// Closed forms for the SDVM domain.
//
// Every halting program is DUP^a . w . HALT where w is empty or starts with
// an EMIT (a DUP on empty output appends nothing). Writing N_s[l] for the
// number of such w of l opcodes with output s,
//   P(s) = sum_l N_s[l] sum_a 4^{-(a+l+1)} = (1/3) sum_l N_s[l] 4^{-l}.
// Because DUP only doubles, every w for a prefix of s ends in a shorter
// prefix of s, so N is a small dynamic program over the prefixes of s.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "ait/bitstring.hpp"
#include "ait/dyadic.hpp"

namespace ait::sdvm {

/// N_s[l] for l = 0..|s|.
std::vector<mpz_class> canonical_counts(const BitString& s);

/// P_SDVM(s) = sum of 2^{-|p|} over programs with output s.
Rational exact_p(const BitString& s);

/// K_SDVM(s): 2 * (shortest canonical word) + 2.
std::uint64_t exact_k(const BitString& s);

/// Steps used by DUP^a . w . HALT with |w| = l producing s.
inline std::uint64_t program_steps(std::uint64_t opcodes_before_halt, std::size_t output_len) {
  return opcodes_before_halt + 1 + output_len;
}

/// Exact mass of programs with output s that stage `stage` of the
/// dovetailing schedule has not found (length or steps above the stage).
Rational missing_mass(const BitString& s, std::uint64_t stage);

/// Mass of all programs with at most k opcodes before HALT: 1 - (3/4)^{k+1}.
Rational omega_upto(unsigned k);

/// sum over programs with at most k opcodes before HALT of |p| 2^{-|p|}.
Rational length_weighted_upto(unsigned k);

}  // namespace ait::sdvm

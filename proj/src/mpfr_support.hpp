#pragma once

// Bridge between Dyadic values and MPFR. MPFR's correctly rounded functions
// under MPFR_RNDD / MPFR_RNDU give the directed bounds every enclosure needs.

#include <algorithm>

#include <mpfr.h>

#include "ait/dyadic.hpp"
#include "ait/errors.hpp"

namespace ait::detail {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  /// Exact copy of a dyadic (precision grows to fit the numerator).
  explicit Mpfr(const Dyadic& d) {
    const auto bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(d.numerator().get_mpz_t(), 2));
    mpfr_init2(v_, std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
    mpfr_set_z_2exp(v_, d.numerator().get_mpz_t(), static_cast<mpfr_exp_t>(d.exponent()), MPFR_RNDN);
  }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

  [[nodiscard]] Dyadic to_dyadic() const {
    if (mpfr_zero_p(v_)) return Dyadic();
    if (!mpfr_number_p(v_)) throw PrecisionError("non-finite intermediate result");
    mpz_class z;
    const mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), v_);
    return Dyadic(z, e);
  }

 private:
  mpfr_t v_;
};

inline mpfr_rnd_t mode(Rounding dir) { return dir == Rounding::down ? MPFR_RNDD : MPFR_RNDU; }

}  // namespace ait::detail

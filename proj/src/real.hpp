#pragma once

// Minimal RAII wrapper around an mpfr_t, internal to the library sources.
// Only the handful of operations needed by the character evaluators.

#include <gmpxx.h>
#include <mpfr.h>

#include <utility>

namespace weylwalk::detail {

class Real {
public:
    explicit Real(mpfr_prec_t prec = 128) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    void set_zero() { mpfr_set_zero(v_, 1); }
    void set(double d) { mpfr_set_d(v_, d, MPFR_RNDN); }
    void set(const mpq_class& q) { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

    void add(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); }
    void sub(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); }
    void mul(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); }
    void div(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); }
    void mul_q(const mpq_class& q) { mpfr_mul_q(v_, v_, q.get_mpq_t(), MPFR_RNDN); }
    void neg() { mpfr_neg(v_, v_, MPFR_RNDN); }
    // v += a * b without an explicit temporary.
    void addmul(const Real& a, const Real& b) { mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN); }
    void addmul_q(const Real& a, const mpq_class& q) {
        Real t(prec());
        mpfr_mul_q(t.v_, a.v_, q.get_mpq_t(), MPFR_RNDN);
        mpfr_add(v_, v_, t.v_, MPFR_RNDN);
    }

    void log_self() { mpfr_log(v_, v_, MPFR_RNDN); }
    void exp_self() { mpfr_exp(v_, v_, MPFR_RNDN); }
    void abs_self() { mpfr_abs(v_, v_, MPFR_RNDN); }

    bool is_zero() const { return mpfr_zero_p(v_); }
    int sgn() const { return mpfr_sgn(v_); }
    // Binary exponent of |v| (only valid for nonzero values).
    mpfr_exp_t exponent() const { return mpfr_get_exp(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

}  // namespace weylwalk::detail

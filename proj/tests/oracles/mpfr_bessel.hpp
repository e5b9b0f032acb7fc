#pragma once

// High-precision reference values for J0, J1, Y0, Y1 from the ascending power
// series evaluated in MPFR at 320 bits. At |x| <= 50 the largest series term
// is ~1e20, so 320 bits leave well over 200 correct bits in the result.
// Shares no code with the library's evaluator.

#include <mpfr.h>

namespace oracle {

class MpfrBessel {
public:
    explicit MpfrBessel(double x, mpfr_prec_t prec = 320) : prec_(prec) {
        for (mpfr_ptr v : {x_, q_, term0_, term1_, harm_, j0_, j1_, s0_, s1_, tmp_, tmp2_}) {
            mpfr_init2(v, prec_);
        }
        mpfr_set_d(x_, x, MPFR_RNDN);
        compute();
    }
    ~MpfrBessel() {
        for (mpfr_ptr v : {x_, q_, term0_, term1_, harm_, j0_, j1_, s0_, s1_, tmp_, tmp2_}) {
            mpfr_clear(v);
        }
    }
    MpfrBessel(const MpfrBessel&) = delete;
    MpfrBessel& operator=(const MpfrBessel&) = delete;

    double j0() const { return mpfr_get_d(j0_, MPFR_RNDN); }
    double j1() const { return mpfr_get_d(j1_, MPFR_RNDN); }

    // Y0 = (2/pi)[(ln(x/2) + gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2]
    double y0() const {
        Scratch s(prec_);
        log_term(s.a);
        mpfr_mul(s.a, s.a, j0_, MPFR_RNDN);
        mpfr_add(s.a, s.a, s0_, MPFR_RNDN);
        two_over_pi(s.b);
        mpfr_mul(s.a, s.a, s.b, MPFR_RNDN);
        return mpfr_get_d(s.a, MPFR_RNDN);
    }

    // Y1 = (2/pi)(ln(x/2) + gamma) J1 - (1/pi) S1 - 2/(pi x)
    double y1() const {
        Scratch s(prec_);
        log_term(s.a);
        mpfr_mul(s.a, s.a, j1_, MPFR_RNDN);
        two_over_pi(s.b);
        mpfr_mul(s.a, s.a, s.b, MPFR_RNDN);
        mpfr_const_pi(s.b, MPFR_RNDN);
        mpfr_div(s.c, s1_, s.b, MPFR_RNDN);
        mpfr_sub(s.a, s.a, s.c, MPFR_RNDN);
        mpfr_mul(s.c, s.b, x_, MPFR_RNDN);
        mpfr_ui_div(s.c, 2, s.c, MPFR_RNDN);
        mpfr_sub(s.a, s.a, s.c, MPFR_RNDN);
        return mpfr_get_d(s.a, MPFR_RNDN);
    }

private:
    struct Scratch {
        explicit Scratch(mpfr_prec_t p) {
            mpfr_inits2(p, a, b, c, static_cast<mpfr_ptr>(nullptr));
        }
        ~Scratch() { mpfr_clears(a, b, c, static_cast<mpfr_ptr>(nullptr)); }
        mpfr_t a, b, c;
    };

    void log_term(mpfr_t out) const {
        mpfr_t g;
        mpfr_init2(g, prec_);
        mpfr_div_ui(out, x_, 2, MPFR_RNDN);
        mpfr_log(out, out, MPFR_RNDN);
        mpfr_const_euler(g, MPFR_RNDN);
        mpfr_add(out, out, g, MPFR_RNDN);
        mpfr_clear(g);
    }

    void two_over_pi(mpfr_t out) const {
        mpfr_const_pi(out, MPFR_RNDN);
        mpfr_ui_div(out, 2, out, MPFR_RNDN);
    }

    void compute() {
        // q = x^2/4
        mpfr_sqr(q_, x_, MPFR_RNDN);
        mpfr_div_ui(q_, q_, 4, MPFR_RNDN);
        mpfr_set_ui(term0_, 1, MPFR_RNDN);
        mpfr_div_ui(term1_, x_, 2, MPFR_RNDN);
        mpfr_set_ui(harm_, 0, MPFR_RNDN);
        mpfr_set(j0_, term0_, MPFR_RNDN);
        mpfr_set(j1_, term1_, MPFR_RNDN);
        mpfr_set_ui(s0_, 0, MPFR_RNDN);
        mpfr_set(s1_, term1_, MPFR_RNDN);
        for (unsigned long k = 1; k < 400; ++k) {
            mpfr_mul(term0_, term0_, q_, MPFR_RNDN);
            mpfr_div_ui(term0_, term0_, k * k, MPFR_RNDN);
            mpfr_neg(term0_, term0_, MPFR_RNDN);
            mpfr_mul(term1_, term1_, q_, MPFR_RNDN);
            mpfr_div_ui(term1_, term1_, k * (k + 1), MPFR_RNDN);
            mpfr_neg(term1_, term1_, MPFR_RNDN);
            mpfr_set_ui(tmp_, 1, MPFR_RNDN);
            mpfr_div_ui(tmp_, tmp_, k, MPFR_RNDN);
            mpfr_add(harm_, harm_, tmp_, MPFR_RNDN);

            mpfr_add(j0_, j0_, term0_, MPFR_RNDN);
            mpfr_add(j1_, j1_, term1_, MPFR_RNDN);
            // s0 += -term0 * H_k
            mpfr_mul(tmp_, term0_, harm_, MPFR_RNDN);
            mpfr_sub(s0_, s0_, tmp_, MPFR_RNDN);
            // s1 += term1 * (2 H_k + 1/(k+1))
            mpfr_set_ui(tmp2_, 1, MPFR_RNDN);
            mpfr_div_ui(tmp2_, tmp2_, k + 1, MPFR_RNDN);
            mpfr_mul_2ui(tmp_, harm_, 1, MPFR_RNDN);
            mpfr_add(tmp_, tmp_, tmp2_, MPFR_RNDN);
            mpfr_mul(tmp_, tmp_, term1_, MPFR_RNDN);
            mpfr_add(s1_, s1_, tmp_, MPFR_RNDN);
        }
    }

    mpfr_prec_t prec_;
    mpfr_t x_, q_, term0_, term1_, harm_, j0_, j1_, s0_, s1_, tmp_, tmp2_;
};

}  // namespace oracle

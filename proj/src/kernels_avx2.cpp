// AVX2+FMA kernel variants. Compiled only on x86-64 with -mavx2 -mfma; the
// dispatcher keeps this TU out of the scalar fallback path entirely.
//
// exp: Cody-Waite base-2 reduction, degree-13 Taylor core on |r| <= ln2/2,
// two-step 2^k scaling so values near the overflow/underflow bounds (and
// subnormal results) come out right.
// sincos: Cody-Waite pi/2 reduction (three-term split, exact products thanks
// to FMA) with the fdlibm kernel polynomials, valid to |x| = 1e6; larger
// magnitudes and non-finite lanes are recomputed with libm.

#include "dephasim/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <cstring>

namespace dephasim::kernels {
namespace {

inline __m256d pow2i(__m128i e) {
  // 2^e for biased-exponent-safe e; caller keeps e within [-600, 600].
  __m128i biased = _mm_add_epi32(e, _mm_set1_epi32(1023));
  __m256i wide = _mm256_cvtepi32_epi64(biased);
  return _mm256_castsi256_pd(_mm256_slli_epi64(wide, 52));
}

inline __m256d exp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.44269504088896340736e+00);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

  __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  k = _mm256_max_pd(k, _mm256_set1_pd(-1080.0));
  k = _mm256_min_pd(k, _mm256_set1_pd(1080.0));

  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  // sum_{j=0..13} r^j / j!
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^k in two halves; a single step would overflow the exponent field for
  // |k| > 1022 even when the final result is finite or subnormal.
  __m128i ki = _mm256_cvtpd_epi32(k);
  __m128i k1 = _mm_srai_epi32(ki, 1);
  __m128i k2 = _mm_sub_epi32(ki, k1);
  p = _mm256_mul_pd(p, pow2i(k1));
  p = _mm256_mul_pd(p, pow2i(k2));

  // Saturate outside the representable range (covers +-inf inputs too).
  __m256d lo = _mm256_cmp_pd(x, _mm256_set1_pd(-745.2), _CMP_LT_OQ);
  __m256d hi = _mm256_cmp_pd(x, _mm256_set1_pd(709.9), _CMP_GT_OQ);
  p = _mm256_blendv_pd(p, _mm256_setzero_pd(), lo);
  p = _mm256_blendv_pd(p, _mm256_set1_pd(HUGE_VAL), hi);
  return p;
}

void exp_avx2(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, exp4(_mm256_loadu_pd(x + i)));
  }
  if (i < n) {
    // Padded tail keeps per-element results independent of batch position.
    double xin[4] = {0.0, 0.0, 0.0, 0.0};
    double out[4];
    std::memcpy(xin, x + i, (n - i) * sizeof(double));
    _mm256_storeu_pd(out, exp4(_mm256_loadu_pd(xin)));
    std::memcpy(y + i, out, (n - i) * sizeof(double));
  }
}

constexpr double kSinCosCutoff = 1e6;

// fdlibm kernel coefficients.
constexpr double S1 = -1.66666666666666324348e-01;
constexpr double S2 = 8.33333333332248946124e-03;
constexpr double S3 = -1.98412698298579493134e-04;
constexpr double S4 = 2.75573137070700676789e-06;
constexpr double S5 = -2.50507602534068634195e-08;
constexpr double S6 = 1.58969099521155010221e-10;
constexpr double C1 = 4.16666666666666019037e-02;
constexpr double C2 = -1.38888888888741095749e-03;
constexpr double C3 = 2.48015872894767294178e-05;
constexpr double C4 = -2.75573143513906633035e-07;
constexpr double C5 = 2.08757232129817482790e-09;
constexpr double C6 = -1.13596475577881948265e-11;

// Returns a lane mask of elements that need the libm fallback.
inline int sincos4(__m256d x, __m256d* s_out, __m256d* c_out) {
  const __m256d two_over_pi = _mm256_set1_pd(6.36619772367581343076e-01);
  const __m256d pio2_1 = _mm256_set1_pd(1.57079632673412561417e+00);
  const __m256d pio2_2 = _mm256_set1_pd(6.07710050630396597660e-11);
  const __m256d pio2_3 = _mm256_set1_pd(2.02226624871116645580e-21);

  __m256d ax = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
  __m256d bad = _mm256_or_pd(_mm256_cmp_pd(ax, _mm256_set1_pd(kSinCosCutoff), _CMP_GT_OQ),
                             _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
  int fallback = _mm256_movemask_pd(bad);

  __m256d k = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  // Clamp so the int conversion below stays defined even on fallback lanes.
  k = _mm256_max_pd(k, _mm256_set1_pd(-1e9));
  k = _mm256_min_pd(k, _mm256_set1_pd(1e9));

  __m256d r = _mm256_fnmadd_pd(k, pio2_1, x);
  r = _mm256_fnmadd_pd(k, pio2_2, r);
  r = _mm256_fnmadd_pd(k, pio2_3, r);
  __m256d z = _mm256_mul_pd(r, r);

  // sin(r) = r + r*z*(S1 + z*(... S6))
  __m256d sp = _mm256_set1_pd(S6);
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(S5));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(S4));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(S3));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(S2));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(S1));
  __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), sp, r);

  // cos(r) = (1 - z/2) + ((1 - w) - z/2 + z^2*poly), fdlibm's compensated form
  __m256d cp = _mm256_set1_pd(C6);
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(C5));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(C4));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(C3));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(C2));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(C1));
  __m256d hz = _mm256_mul_pd(z, _mm256_set1_pd(0.5));
  __m256d w = _mm256_sub_pd(_mm256_set1_pd(1.0), hz);
  __m256d tail = _mm256_sub_pd(_mm256_sub_pd(_mm256_set1_pd(1.0), w), hz);
  tail = _mm256_fmadd_pd(_mm256_mul_pd(z, z), cp, tail);
  __m256d cos_r = _mm256_add_pd(w, tail);

  // Quadrant fix-up: q = k mod 4 selects the (sin,cos) pair and signs.
  __m128i q32 = _mm256_cvtpd_epi32(k);
  __m256i q = _mm256_cvtepi32_epi64(q32);
  __m256i bit0 = _mm256_and_si256(q, _mm256_set1_epi64x(1));
  __m256i bit1 = _mm256_and_si256(q, _mm256_set1_epi64x(2));
  __m256d swap = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(bit0, _mm256_set1_epi64x(1)));

  __m256d s_base = _mm256_blendv_pd(sin_r, cos_r, swap);
  __m256d c_base = _mm256_blendv_pd(cos_r, sin_r, swap);

  // sin sign flips on q = 2,3; cos sign flips on q = 1,2.
  __m256i sin_flip = _mm256_slli_epi64(bit1, 62);
  __m256i qp1 = _mm256_add_epi64(q, _mm256_set1_epi64x(1));
  __m256i cos_flip = _mm256_slli_epi64(_mm256_and_si256(qp1, _mm256_set1_epi64x(2)), 62);

  *s_out = _mm256_xor_pd(s_base, _mm256_castsi256_pd(sin_flip));
  *c_out = _mm256_xor_pd(c_base, _mm256_castsi256_pd(cos_flip));
  return fallback;
}

void sincos_avx2(const double* x, double* s, double* c, std::size_t n) {
  std::size_t i = 0;
  auto fix_lanes = [&](std::size_t base, int mask, std::size_t lanes) {
    for (std::size_t lane = 0; lane < lanes; ++lane) {
      if (mask & (1 << lane)) {
        s[base + lane] = std::sin(x[base + lane]);
        c[base + lane] = std::cos(x[base + lane]);
      }
    }
  };
  for (; i + 4 <= n; i += 4) {
    __m256d vs, vc;
    int mask = sincos4(_mm256_loadu_pd(x + i), &vs, &vc);
    _mm256_storeu_pd(s + i, vs);
    _mm256_storeu_pd(c + i, vc);
    if (mask) fix_lanes(i, mask, 4);
  }
  if (i < n) {
    double xin[4] = {0.0, 0.0, 0.0, 0.0};
    double so[4], co[4];
    std::memcpy(xin, x + i, (n - i) * sizeof(double));
    __m256d vs, vc;
    int mask = sincos4(_mm256_loadu_pd(xin), &vs, &vc);
    _mm256_storeu_pd(so, vs);
    _mm256_storeu_pd(co, vc);
    std::memcpy(s + i, so, (n - i) * sizeof(double));
    std::memcpy(c + i, co, (n - i) * sizeof(double));
    if (mask) fix_lanes(i, mask, n - i);
  }
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc0);
  }
  double acc = hsum(acc0);
  for (; i < n; ++i) acc += a[i] * b[i] * c[i];
  return acc;
}

}  // namespace

const Ops* avx2_ops_impl() noexcept {
  static const Ops ops{"avx2", &exp_avx2, &sincos_avx2, &dot_avx2, &dot3_avx2};
  return &ops;
}

}  // namespace dephasim::kernels

#endif  // __AVX2__ && __FMA__

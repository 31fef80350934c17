#include "nw/evalnum.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nw/auxpoly.hpp"
#include "nw/derivation.hpp"
#include "nw/eisenstein.hpp"
#include "nw/error.hpp"
#include "nw/parallel.hpp"

namespace nw {

BigFloat power_tail_bound(unsigned a, std::size_t N, const BigFloat& t) {
  if (mpfr_sgn(t.get()) < 0 || mpfr_cmp_ui(t.get(), 1) >= 0) fail("OutsideDisk", "tail bound needs 0 <= t < 1");
  BigFloat out(kRadiusPrec), x(kRadiusPrec), one_minus(kRadiusPrec);
  if (mpfr_zero_p(t.get())) return out;
  mpfr_fac_ui(out.get(), a + 1, MPFR_RNDU);
  mpfr_pow_ui(x.get(), t.get(), N + 1, MPFR_RNDU);
  mpfr_mul(out.get(), out.get(), x.get(), MPFR_RNDU);
  mpfr_set_ui(x.get(), N + 1, MPFR_RNDU);
  mpfr_pow_ui(x.get(), x.get(), a, MPFR_RNDU);
  mpfr_mul(out.get(), out.get(), x.get(), MPFR_RNDU);
  mpfr_ui_sub(one_minus.get(), 1, t.get(), MPFR_RNDD);
  mpfr_pow_ui(one_minus.get(), one_minus.get(), a + 1, MPFR_RNDD);
  mpfr_div(out.get(), out.get(), one_minus.get(), MPFR_RNDU);
  return out;
}

ComplexBall eval_partial_sum(const TruncatedSeries& s, const ComplexBall& z) {
  const mpfr_prec_t p = z.prec();
  ComplexBall acc(p);
  for (std::size_t i = s.trunc_order() + 1; i-- > 0;) acc = acc * z + ComplexBall(RealBall(s[i], p));
  return acc;
}

namespace {

void add_error_both(ComplexBall& z, const BigFloat& e) {
  z.re().add_error(e);
  z.im().add_error(e);
}

BigFloat abs_bound(const ComplexBall& z) {
  BigFloat t = z.abs_upper();
  if (mpfr_cmp_ui(t.get(), 1) >= 0) fail("OutsideDisk", "|z| + radius must be below 1");
  return t;
}

std::vector<mpz_class> sigma_table(std::size_t N, unsigned long e) {
  std::vector<mpz_class> sig(N + 1);
  mpz_class pw;
  for (std::size_t d = 1; d <= N; ++d) {
    mpz_ui_pow_ui(pw.get_mpz_t(), d, e);
    for (std::size_t m = d; m <= N; m += d) sig[m] += pw;
  }
  return sig;
}

// Extra working bits covering the largest term |c| m^w t^m relative to 1.
mpfr_prec_t guard_bits(int weight, const BigFloat& t, std::size_t N, const mpq_class& c) {
  const double lt = std::log2(std::max(t.to_double(), 1e-300));
  double best = 0;
  for (std::size_t m = 1; m <= N; m = m < 64 ? m + 1 : m + m / 16)
    best = std::max(best, weight * std::log2(static_cast<double>(m)) + static_cast<double>(m) * lt);
  best += std::log2(std::abs(c.get_d()) + 1);
  return 32 + static_cast<mpfr_prec_t>(std::ceil(best)) + static_cast<mpfr_prec_t>(std::log2(N + 2.0));
}

ComplexBall eisenstein_sum(int weight, const ComplexBall& z, mpfr_prec_t prec, bool majorant) {
  const BigFloat t = abs_bound(z);
  const mpq_class c = majorant ? abs(eisenstein_constant(weight)) : eisenstein_constant(weight);
  const std::size_t N = eisenstein_terms(weight, t, prec);
  const mpfr_prec_t wp = prec + guard_bits(weight, t, N, c);
  const auto sig = sigma_table(N, static_cast<unsigned long>(weight - 1));
  const ComplexBall zw{z.re().with_prec(std::max(wp, z.prec())), z.im().with_prec(std::max(wp, z.prec()))};
  ComplexBall acc(wp);
  for (std::size_t m = N; m >= 1; --m) acc = acc * zw + ComplexBall(RealBall(sig[m], wp));
  acc = acc * zw;
  ComplexBall out = ComplexBall(RealBall(1, wp)) + RealBall(c, wp) * acc;
  BigFloat tail = power_tail_bound(static_cast<unsigned>(weight), N, t);
  BigFloat cabs(kRadiusPrec);
  mpfr_set_q(cabs.get(), mpq_class(abs(c)).get_mpq_t(), MPFR_RNDU);
  mpfr_mul(tail.get(), tail.get(), cabs.get(), MPFR_RNDU);
  add_error_both(out, tail);
  return {out.re().with_prec(prec), out.im().with_prec(prec)};
}

}  // namespace

std::size_t eisenstein_terms(int weight, const BigFloat& t, mpfr_prec_t prec) {
  if (weight != 2 && weight != 4 && weight != 6) fail("InvalidArgument", "Eisenstein weight must be 2, 4 or 6");
  if (mpfr_cmp_ui(t.get(), 1) >= 0) fail("OutsideDisk", "|z| + radius must be below 1");
  if (mpfr_zero_p(t.get())) return 1;
  BigFloat thr(kRadiusPrec), cabs(kRadiusPrec);
  mpfr_set_ui_2exp(thr.get(), 1, -static_cast<long>(prec) + 4, MPFR_RNDN);
  mpfr_set_q(cabs.get(), mpq_class(abs(eisenstein_constant(weight))).get_mpq_t(), MPFR_RNDU);
  std::size_t N = 4;
  for (;;) {
    BigFloat b = power_tail_bound(static_cast<unsigned>(weight), N, t);
    mpfr_mul(b.get(), b.get(), cabs.get(), MPFR_RNDU);
    if (mpfr_less_p(b.get(), thr.get())) return N;
    if (N > 20000000) fail("OutsideDisk", "point too close to the unit circle for the requested precision");
    N += std::max<std::size_t>(4, N / 8);
  }
}

ComplexBall eval_series(const TruncatedSeries& s, const ComplexBall& z, int weight) {
  const BigFloat t = abs_bound(z);
  ComplexBall out = eval_partial_sum(s, z);
  BigFloat tail = power_tail_bound(static_cast<unsigned>(weight), s.trunc_order(), t);
  BigFloat cabs(kRadiusPrec);
  mpfr_set_q(cabs.get(), mpq_class(abs(eisenstein_constant(weight))).get_mpq_t(), MPFR_RNDU);
  mpfr_mul(tail.get(), tail.get(), cabs.get(), MPFR_RNDU);
  add_error_both(out, tail);
  return out;
}

ComplexBall eval_eisenstein(int weight, const ComplexBall& z, mpfr_prec_t prec) {
  return eisenstein_sum(weight, z, prec, false);
}

RealBall eisenstein_majorant(int weight, const RealBall& t, mpfr_prec_t prec) {
  if (mpfr_sgn(t.lower().get()) < 0) fail("InvalidArgument", "majorant needs t >= 0");
  return eisenstein_sum(weight, ComplexBall(t), prec, true).re();
}

ComplexBall eval_poly(const SparsePoly& P, const std::vector<ComplexBall>& args) {
  if (args.size() != P.nvars()) fail("ArityMismatch", "argument count differs from the variable count");
  const mpfr_prec_t p = args.empty() ? 128 : args[0].prec();
  std::vector<std::vector<ComplexBall>> powers(args.size());
  for (std::size_t v = 0; v < args.size(); ++v) powers[v].push_back(ComplexBall(RealBall(1, p)));
  auto power = [&](std::size_t v, std::uint32_t k) -> const ComplexBall& {
    while (powers[v].size() <= k) powers[v].push_back(powers[v].back() * args[v]);
    return powers[v][k];
  };
  ComplexBall sum(p);
  for (const auto& [e, c] : P.terms()) {
    ComplexBall term(RealBall(c, p));
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v]) term = term * power(v, e[v]);
    sum = sum + term;
  }
  return sum;
}

TransformResidues quasimodular_transform_check(long a, long b, long c, long d, const ComplexBall& tau,
                                               mpfr_prec_t prec) {
  if (mpz_class(a) * d - mpz_class(b) * c != 1) fail("NotUnimodular", "ad - bc must equal 1");
  if (!tau.im().is_positive()) fail("OutsideDisk", "tau must lie in the upper half-plane");
  const mpfr_prec_t wp = prec + 32;
  const ComplexBall t{tau.re().with_prec(wp), tau.im().with_prec(wp)};
  const ComplexBall j = RealBall(c, wp) * t + ComplexBall(RealBall(d, wp));
  const ComplexBall gt = (RealBall(a, wp) * t + ComplexBall(RealBall(b, wp))) / j;
  if (!gt.im().is_positive()) fail("OutsideDisk", "image of tau left the upper half-plane");

  const ComplexBall q1 = q_from_tau(t), q2 = q_from_tau(gt);
  const ComplexBall e2 = eval_eisenstein(2, q1, wp), e4 = eval_eisenstein(4, q1, wp), e6 = eval_eisenstein(6, q1, wp);
  const ComplexBall g2 = eval_eisenstein(2, q2, wp), g4 = eval_eisenstein(4, q2, wp), g6 = eval_eisenstein(6, q2, wp);

  // 12 c j / (2 pi i) = -i * 6 c j / pi
  const RealBall pi = RealBall::pi(wp);
  const ComplexBall corr = ComplexBall::i(wp) * (RealBall(-6 * c, wp) * j) / pi;
  const ComplexBall j2 = sqr(j), j4 = sqr(j2), j6 = j4 * j2;
  TransformResidues out{g2 - j2 * e2 - corr, g4 - j4 * e4, g6 - j6 * e6, t, gt};
  return out;
}

std::vector<PhilipponRow> philippon_window(const ComplexBall& z, const PhilipponOptions& opts) {
  std::vector<std::vector<PhilipponRow>> per_degree(opts.degrees.size());
  parallel_for(opts.degrees.size(), opts.jobs, [&](std::size_t idx) {
    const unsigned d = opts.degrees[idx];
    const AuxPolyReport rep = construct_aux_poly(d);
    for (unsigned k : opts.k_schedule) {
      const SparsePoly Q = iterated_wk(rep.poly, k);
      if (Q.is_zero()) fail("InternalError", "w^[k] P_d vanished identically");
      for (mpfr_prec_t p = opts.start_prec;; p *= 2) {
        if (p > (1 << 18)) fail("PrecisionExhausted", "could not separate Q_d(z, ...) from zero");
        const ComplexBall zp{z.re().with_prec(p), z.im().with_prec(p)};
        const ComplexBall val =
            eval_poly(Q, {zp, eval_eisenstein(2, zp, p), eval_eisenstein(4, zp, p), eval_eisenstein(6, zp, p)});
        const RealBall mod = abs(val);
        if (!mod.is_positive()) continue;
        PhilipponRow row{d, rep.achieved_ord, k, log(mod), Q.degree(), log_mpz(Q.height().get_num()), 0, false, p};
        row.ratio = row.log_abs.mid().to_double() / std::pow(static_cast<double>(d), 4);
        row.outside_window = row.ratio < -opts.window_a || row.ratio > -opts.window_b;
        per_degree[idx].push_back(std::move(row));
        break;
      }
    }
  });
  std::vector<PhilipponRow> rows;
  for (auto& v : per_degree)
    for (auto& r : v) rows.push_back(std::move(r));
  return rows;
}

}  // namespace nw

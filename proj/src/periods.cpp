#include "nw/periods.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "nw/error.hpp"
#include "nw/evalnum.hpp"

namespace nw {

namespace {

BigFloat zero_radius() { return BigFloat(kRadiusPrec); }

RealBall point(const RealBall& x) { return RealBall(x.mid(), zero_radius()); }
ComplexBall point(const ComplexBall& z) { return {point(z.re()), point(z.im())}; }

RealBall upper_point(const RealBall& x) { return RealBall(x.upper(), zero_radius()); }
RealBall lower_point(const RealBall& x) { return RealBall(x.lower(), zero_radius()); }

ComplexBall cx(const RealBall& x) { return ComplexBall(x); }

double mid_d(const RealBall& x) { return x.mid().to_double(); }

// Some square root of z, chosen away from the principal branch cut.
ComplexBall any_sqrt(const ComplexBall& z) {
  if (mpfr_sgn(z.re().mid().get()) >= 0) return sqrt(z);
  return ComplexBall::i(z.prec()) * sqrt(-z);
}

// Lower bound for the Bernstein parameter max |t +- sqrt(t^2 - 1)| of the
// ellipse with foci -1, 1 passing through t.
RealBall bernstein_rho_lower(const ComplexBall& t) {
  const ComplexBall r = any_sqrt(sqr(t) - cx(RealBall(1, t.prec())));
  const RealBall a = abs(t + r), b = abs(t - r);
  const BigFloat la = a.lower(), lb = b.lower();
  return RealBall(mpfr_greater_p(la.get(), lb.get()) ? la : lb, zero_radius());
}

// Lower bound for the distance between the ellipses of parameters rho < rho_k:
// |J(w1) - J(w2)| >= (|w2| - |w1|)(1 - 1/(|w1||w2|))/2 for J(w) = (w + 1/w)/2.
RealBall ellipse_gap(const RealBall& rho_k, const RealBall& rho) {
  const RealBall one(1, rho.prec());
  return lower_point(mul_2si((rho_k - rho) * (one - one / (rho * rho_k)), -1));
}

// Semi-major axis (rho + 1/rho)/2 bounds |t| on the ellipse.
RealBall semi_major(const RealBall& rho) { return upper_point(mul_2si(rho + RealBall(1, rho.prec()) / rho, -1)); }

std::size_t nodes_for(double log_M, double log_rho, double per_node_factor, mpfr_prec_t wp) {
  const double need = static_cast<double>(wp) * std::log(2.0) + std::max(log_M, 0.0) + 4;
  return std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(need / (per_node_factor * log_rho))) + 1);
}

void add_error(ComplexBall& z, const BigFloat& e) {
  z.re().add_error(e);
  z.im().add_error(e);
}

bool ball_meets_nonpositive_integer(const ComplexBall& s) {
  if (!s.im().contains_zero()) return false;
  const BigFloat lo = s.re().lower(), hi = s.re().upper();
  if (mpfr_sgn(lo.get()) > 0) return false;
  // smallest integer >= lo, compared against min(hi, 0)
  BigFloat c(lo.prec());
  mpfr_ceil(c.get(), lo.get());
  return mpfr_lessequal_p(c.get(), hi.get()) && mpfr_sgn(c.get()) <= 0;
}

// Gamma for 1/4 < Re s < 2 by Gamma(s) = gamma(s, X) + Gamma(s, X), with
// |Gamma(s, X)| <= int_X^oo t e^{-t} dt = (X + 1) e^{-X} when Re s <= 2.
ComplexBall gamma_strip(const ComplexBall& s, mpfr_prec_t wp) {
  const long X = static_cast<long>(std::ceil(static_cast<double>(wp) * std::log(2.0))) + 16;
  const RealBall Xb(X, wp);
  ComplexBall term = cx(RealBall(1, wp)) / s;
  ComplexBall sum = term;
  for (long k = 1;; ++k) {
    term = Xb * term / (s + cx(RealBall(k, wp)));
    sum = sum + term;
    if (k > 2 * X) {
      const BigFloat tu = term.abs_upper(), sl = sum.abs_lower();
      if (mpfr_zero_p(tu.get()) || (!mpfr_zero_p(sl.get()) && mpfr_get_exp(tu.get()) < mpfr_get_exp(sl.get()) - wp))
        break;
    }
  }
  // For k > 2X the ratio of consecutive terms is below 1/2, so the tail is at most |term|.
  add_error(sum, term.abs_upper());
  ComplexBall out = exp(s * log(Xb) - cx(Xb)) * sum;
  add_error(out, (RealBall(X + 1, wp) * exp(-Xb)).upper());
  return out;
}

}  // namespace

ComplexBall gamma(const ComplexBall& s, mpfr_prec_t prec) {
  if (ball_meets_nonpositive_integer(s)) fail("PoleProximity", "argument ball meets a pole of Gamma");
  const mpfr_prec_t wp = prec + 64;
  const ComplexBall sw{s.re().with_prec(std::max(wp, s.prec())), s.im().with_prec(std::max(wp, s.prec()))};
  const long shift = static_cast<long>(std::floor(mid_d(s.re()) - 0.5));
  const ComplexBall s0 = sw - cx(RealBall(shift, wp));
  if (!s0.re().is_positive() || !s0.re().certainly_le(RealBall(2, wp)))
    fail("PoleProximity", "argument ball too wide for the Gamma evaluation");
  ComplexBall g = gamma_strip(s0, wp);
  if (shift > 0) {
    for (long j = 0; j < shift; ++j) g = g * (s0 + cx(RealBall(j, wp)));
  } else {
    for (long j = 0; j < -shift; ++j) {
      const ComplexBall f = sw + cx(RealBall(j, wp));
      if (f.contains_zero()) fail("PoleProximity", "argument ball meets a pole of Gamma");
      g = g / f;
    }
  }
  return {g.re().with_prec(prec), g.im().with_prec(prec)};
}

RealBall gamma(const mpq_class& s, mpfr_prec_t prec) {
  return gamma(ComplexBall::from_rationals(s, 0, prec + 64), prec).re();
}

ComplexBall beta(const ComplexBall& a, const ComplexBall& b, mpfr_prec_t prec) {
  if (!a.re().is_positive() || !b.re().is_positive()) fail("InvalidArgument", "beta needs Re a, Re b > 0");
  const mpfr_prec_t wp = prec + 16;
  const ComplexBall out = gamma(a, wp) * gamma(b, wp) / gamma(a + b, wp);
  return {out.re().with_prec(prec), out.im().with_prec(prec)};
}

RealBall beta(const mpq_class& a, const mpq_class& b, mpfr_prec_t prec) {
  const mpfr_prec_t wp = prec + 16;
  return beta(ComplexBall::from_rationals(a, 0, wp), ComplexBall::from_rationals(b, 0, wp), prec).re();
}

namespace {

struct SegmentIntegrals {
  ComplexBall omega, eta;  // loop integrals, twice the segment integrals
  std::size_t nodes;
};

// Loop integrals of dx/y and x dx/y around the segment [a, b], c the third
// root. With x = m + h t, dx/y = g(t) dt / sqrt(1 - t^2) and
// g = 1/(2 S sqrt(1 - kappa t)), S^2 = c - m, kappa = h/(c - m); g is analytic
// inside the Bernstein ellipse through 1/kappa.
SegmentIntegrals segment_integrals(const ComplexBall& a, const ComplexBall& b, const ComplexBall& c, mpfr_prec_t wp) {
  const ComplexBall m = mul_2si(a + b, -1), h = mul_2si(b - a, -1);
  const ComplexBall cm = c - m;
  const ComplexBall kappa = h / cm;
  const ComplexBall S = any_sqrt(cm);
  const RealBall one(1, wp);

  const RealBall rho_k = bernstein_rho_lower(cm / h);
  if (!(rho_k - one).is_positive()) fail("Degenerate", "root lies on the integration segment");
  const RealBall rho = lower_point(mul_2si(one + rho_k, -1));
  const RealBall delta = ellipse_gap(rho_k, rho);
  const RealBall Mg = upper_point(one / (mul_2si(lower_point(abs(S)), 1) * sqrt(lower_point(abs(kappa)) * delta)));
  const RealBall Mx = upper_point(abs(m) + abs(h) * semi_major(rho));
  const RealBall Meta = upper_point(Mg * Mx);
  const double logM = std::log(std::max(mid_d(Mg), mid_d(Meta)) * 2 * M_PI);
  const std::size_t n = nodes_for(logM, std::log(mid_d(rho)), 2.0, wp);

  // |error| <= 2 pi M / (rho^(2n) - 1)
  const RealBall pi = RealBall::pi(wp);
  const RealBall denom = lower_point(pow(rho, 2 * n) - one);
  const BigFloat err_g = (mul_2si(pi, 1) * Mg / denom).upper();
  const BigFloat err_eta = (mul_2si(pi, 1) * Meta / denom).upper();

  ComplexBall sum_g(wp), sum_xg(wp);
  const ComplexBall twoS = mul_2si(S, 1);
  for (std::size_t j = 1; j <= n; ++j) {
    const RealBall theta = pi * RealBall(static_cast<long>(2 * j - 1), wp) / RealBall(static_cast<long>(2 * n), wp);
    const RealBall t = cos(theta);
    const ComplexBall g = cx(one) / (twoS * sqrt(cx(one) - t * kappa));
    sum_g = sum_g + g;
    sum_xg = sum_xg + (m + t * h) * g;
  }
  const RealBall w = pi / RealBall(static_cast<long>(n), wp);
  ComplexBall om = w * sum_g, et = w * sum_xg;
  add_error(om, err_g);
  add_error(et, err_eta);
  return {mul_2si(om, 1), mul_2si(et, 1), n};
}

std::array<ComplexBall, 3> cubic_roots(const EllipticCurveQ& curve, mpfr_prec_t wp) {
  // monic: x^3 + p1 x + p0
  const mpq_class p1 = -curve.u / 4, p0 = -curve.v / 4;
  using C = std::complex<long double>;
  const long double a1 = p1.get_d(), a0 = p0.get_d();
  auto pd = [&](C x) { return x * x * x + a1 * x + a0; };
  std::array<C, 3> z{C(1, 0), C(0.4L, 0.9L), C(-0.7L, -0.5L)};
  for (int it = 0; it < 500; ++it)
    for (int i = 0; i < 3; ++i) {
      C den = 1;
      for (int j = 0; j < 3; ++j)
        if (j != i) den *= z[i] - z[j];
      if (std::abs(den) > 0) z[i] -= pd(z[i]) / den;
    }

  const RealBall P1(p1, wp), P0(p0, wp), three(3, wp);
  auto p_of = [&](const ComplexBall& x) { return x * sqr(x) + P1 * x + cx(P0); };
  auto dp_of = [&](const ComplexBall& x) { return three * sqr(x) + cx(P1); };
  std::array<ComplexBall, 3> roots;
  std::array<BigFloat, 3> rad;
  const int steps = 4 + static_cast<int>(std::ceil(std::log2(static_cast<double>(wp) / 40.0 + 1)));
  for (int i = 0; i < 3; ++i) {
    BigFloat re(wp), im(wp);
    mpfr_set_ld(re.get(), z[i].real(), MPFR_RNDN);
    mpfr_set_ld(im.get(), z[i].imag(), MPFR_RNDN);
    ComplexBall x{RealBall(re, zero_radius()), RealBall(im, zero_radius())};
    for (int it = 0; it < steps; ++it) {
      const ComplexBall d = dp_of(x);
      if (d.contains_zero()) fail("Degenerate", "multiple root");
      x = point(x - p_of(x) / d);
    }
    // A disk of radius deg |p/p'| about x contains a root.
    const ComplexBall d = dp_of(x);
    if (d.contains_zero()) fail("Degenerate", "multiple root");
    rad[i] = (three * abs(p_of(x)) / abs(d)).upper();
    roots[i] = x;
    roots[i].re().add_error(rad[i]);
    roots[i].im().add_error(rad[i]);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      RealBall sep = abs(point(roots[i]) - point(roots[j]));
      const RealBall r = RealBall(rad[i], zero_radius()) + RealBall(rad[j], zero_radius());
      if (!(sep - mul_2si(r, 1)).is_positive()) fail("Degenerate", "roots are not separated at this precision");
    }
  std::sort(roots.begin(), roots.end(), [](const ComplexBall& x, const ComplexBall& y) {
    // real parts that agree within the balls (conjugate pairs) fall back to the imaginary part
    if (!x.re().overlaps(y.re())) return mpfr_less_p(x.re().mid().get(), y.re().mid().get()) != 0;
    return mpfr_less_p(x.im().mid().get(), y.im().mid().get()) != 0;
  });
  return roots;
}

void recompute(PeriodData& pd) {
  const mpfr_prec_t p = pd.omega1.prec();
  pd.tau = pd.omega2 / pd.omega1;
  pd.legendre_residual = pd.omega1 * pd.eta2 - pd.omega2 * pd.eta1 - ComplexBall::i(p) * mul_2si(RealBall::pi(p), 1);
}

}  // namespace

PeriodData elliptic_periods(const EllipticCurveQ& curve, mpfr_prec_t prec) {
  if (curve.discriminant() == 0) fail("Degenerate", "u^3 - 27 v^2 = 0");
  const mpfr_prec_t wp = prec + 40;
  PeriodData pd;
  pd.roots = cubic_roots(curve, wp);
  const auto& r = pd.roots;
  const SegmentIntegrals A = segment_integrals(r[0], r[1], r[2], wp);
  const SegmentIntegrals B = segment_integrals(r[1], r[2], r[0], wp);
  pd.nodes = std::max(A.nodes, B.nodes);
  pd.omega1 = A.omega;
  pd.eta1 = A.eta;
  pd.omega2 = B.omega;
  pd.eta2 = B.eta;
  pd.tau = pd.omega2 / pd.omega1;
  if (pd.tau.im().contains_zero()) fail("Degenerate", "periods are not independent at this precision");
  if (pd.tau.im().is_negative()) {
    pd.omega2 = -pd.omega2;
    pd.eta2 = -pd.eta2;
  }
  const bool flip = mpfr_sgn(pd.omega1.re().mid().get()) < 0 ||
                    (pd.omega1.re().contains_zero() && mpfr_sgn(pd.omega1.im().mid().get()) < 0);
  if (flip) {
    pd.omega1 = -pd.omega1;
    pd.omega2 = -pd.omega2;
    pd.eta1 = -pd.eta1;
    pd.eta2 = -pd.eta2;
  }
  recompute(pd);
  auto round = [prec](ComplexBall& z) { z = {z.re().with_prec(prec), z.im().with_prec(prec)}; };
  for (ComplexBall* z : {&pd.omega1, &pd.omega2, &pd.eta1, &pd.eta2, &pd.tau, &pd.legendre_residual}) round(*z);
  for (auto& z : pd.roots) round(z);
  return pd;
}

std::array<long, 4> reduce_basis(PeriodData& pd) {
  std::array<long, 4> M{1, 0, 0, 1};
  auto left_mul = [&](long a, long b, long c, long d) {
    M = {a * M[0] + b * M[2], a * M[1] + b * M[3], c * M[0] + d * M[2], c * M[1] + d * M[3]};
  };
  for (int it = 0; it < 1000; ++it) {
    const double x = mid_d(pd.tau.re()), y = mid_d(pd.tau.im());
    const long n = std::abs(x) > 0.5 + 1e-12 ? std::lround(x) : 0;
    if (n != 0) {
      const RealBall nb(n, pd.omega1.prec());
      pd.omega2 = pd.omega2 - nb * pd.omega1;
      pd.eta2 = pd.eta2 - nb * pd.eta1;
      left_mul(1, -n, 0, 1);
      recompute(pd);
      continue;
    }
    if (x * x + y * y < 1 - 1e-12) {
      std::swap(pd.omega1, pd.omega2);
      std::swap(pd.eta1, pd.eta2);
      pd.omega2 = -pd.omega2;
      pd.eta2 = -pd.eta2;
      left_mul(0, -1, 1, 0);
      recompute(pd);
      continue;
    }
    return M;
  }
  fail("InternalError", "tau reduction did not terminate");
}

Prop47Result prop47_check(const EllipticCurveQ& curve, mpfr_prec_t prec) {
  const mpfr_prec_t wp = prec + 24;
  Prop47Result res;
  res.periods = elliptic_periods(curve, wp);
  res.reduction = reduce_basis(res.periods);
  const PeriodData& pd = res.periods;
  const ComplexBall q = q_from_tau(pd.tau);
  res.e2 = eval_eisenstein(2, q, wp);
  res.e4 = eval_eisenstein(4, q, wp);
  res.e6 = eval_eisenstein(6, q, wp);
  const ComplexBall two_pi_i = ComplexBall::i(wp) * mul_2si(RealBall::pi(wp), 1);
  const ComplexBall w = pd.omega1 / two_pi_i;
  const ComplexBall w2 = sqr(w), w4 = sqr(w2);
  res.rhs2 = RealBall(12, wp) * w * (pd.eta1 / two_pi_i);
  res.rhs4 = RealBall(mpq_class(12 * curve.u), wp) * w4;
  res.rhs6 = RealBall(mpq_class(-216 * curve.v), wp) * w4 * w2;
  res.r2 = res.e2 - res.rhs2;
  res.r4 = res.e4 - res.rhs4;
  res.r6 = res.e6 - res.rhs6;
  return res;
}

FejerRule fejer_rule(std::size_t n, mpfr_prec_t prec) {
  if (n < 1) fail("InvalidArgument", "Fejer rule needs n >= 1");
  const RealBall pi = RealBall::pi(prec);
  // c[i] = cos(i pi / n), i < 2n
  std::vector<RealBall> c;
  c.reserve(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i)
    c.push_back(cos(pi * RealBall(static_cast<long>(i), prec) / RealBall(static_cast<long>(n), prec)));
  FejerRule rule;
  const RealBall one(1, prec), two_over_n = RealBall(2, prec) / RealBall(static_cast<long>(n), prec);
  for (std::size_t j = 1; j <= n; ++j) {
    // node cos((2j - 1) pi / (2n)) = cos of half the angle index 2j - 1
    rule.nodes.push_back(cos(pi * RealBall(static_cast<long>(2 * j - 1), prec) /
                             RealBall(static_cast<long>(2 * n), prec)));
    RealBall s(prec);
    for (std::size_t m = 1; m <= n / 2; ++m) {
      const std::size_t idx = (m * (2 * j - 1)) % (2 * n);
      s = s + c[idx] / RealBall(static_cast<long>(4 * m * m - 1), prec);
    }
    rule.weights.push_back(two_over_n * (one - mul_2si(s, 1)));
  }
  return rule;
}

HyperellipticResult hyperelliptic_c5_periods(unsigned k, unsigned l, mpfr_prec_t prec) {
  if (k < 1 || k > 4 || l < 1 || l > 4) fail("InvalidArgument", "k and l must lie in 1..4");
  const mpfr_prec_t wp = prec + 32;
  const RealBall one(1, wp);
  const RealBall pi = RealBall::pi(wp);
  const ComplexBall zeta = exp(ComplexBall::i(wp) * (mul_2si(pi, 1) / RealBall(5, wp)));

  // x = 1 - s^2 turns the base segment into int_{-1}^{1} (1 - s^2)^(k-1) / sqrt(h(1 - s^2)) ds,
  // h(x) = 1 + x + ... + x^4 = prod_j (x - zeta^j); singularities at s = +-sqrt(1 - zeta^j).
  std::vector<RealBall> rho_j;
  RealBall rho_min(wp);
  for (unsigned j = 1; j <= 4; ++j) {
    const ComplexBall sj = any_sqrt(cx(one) - pow(zeta, j));
    rho_j.push_back(bernstein_rho_lower(sj));
    if (j == 1 || mpfr_less_p(rho_j.back().mid().get(), rho_min.mid().get())) rho_min = rho_j.back();
  }
  const RealBall rho = lower_point(mul_2si(one + rho_min, -1));
  RealBall hprod = one;
  for (const auto& rj : rho_j) hprod = hprod * ellipse_gap(rj, rho);
  const RealBall a = semi_major(rho);
  const RealBall M = upper_point(pow(one + sqr(a), k - 1) / lower_point(hprod));
  const std::size_t n = nodes_for(std::log(8 * mid_d(M)), std::log(mid_d(rho)), 1.0, wp);
  // Fejer rule error <= sum_{m >= n} 2 M rho^-m (2 + 2) = 8 M rho^-n / (1 - 1/rho)
  const BigFloat err = (RealBall(8, wp) * M / (pow(rho, n) * lower_point(one - one / rho))).upper();

  const FejerRule rule = fejer_rule(n, wp);
  RealBall seg(wp);
  for (std::size_t j = 0; j < n; ++j) {
    const RealBall x = one - sqr(rule.nodes[j]);
    const RealBall h = one + x * (one + x * (one + x * (one + x)));
    seg = seg + rule.weights[j] * pow(x, k - 1) / sqrt(h);
  }
  seg.add_error(err);

  // Loop = eps - (tau o eps) + (sigma o tau o eps) - (sigma o eps) with
  // tau^* w_k = -w_k and sigma^* w_k = zeta^k w_k, then sigma^(l-1).
  const ComplexBall I = cx(seg);
  const ComplexBall zk = pow(zeta, k);
  const ComplexBall on_eps = I, on_tau_eps = -I, on_sigma_tau_eps = zk * (-I), on_sigma_eps = zk * I;
  const ComplexBall base_loop = on_eps - on_tau_eps + on_sigma_tau_eps - on_sigma_eps;
  const ComplexBall shift = pow(zeta, static_cast<unsigned long>(k) * (l - 1));

  HyperellipticResult res;
  res.k = k;
  res.l = l;
  res.nodes = n;
  const RealBall B = beta(mpq_class(k, 5), mpq_class(1, 2), wp);
  res.segment = seg.with_prec(prec);
  res.segment_closed = (B / RealBall(5, wp)).with_prec(prec);
  const ComplexBall loop = shift * base_loop;
  const ComplexBall closed = (RealBall(mpq_class(2, 5), wp) * B) * (shift * (cx(one) - zk));
  auto round = [prec](const ComplexBall& z) { return ComplexBall{z.re().with_prec(prec), z.im().with_prec(prec)}; };
  res.loop = round(loop);
  res.closed = round(closed);
  res.residual = round(loop - closed);
  return res;
}

}  // namespace nw

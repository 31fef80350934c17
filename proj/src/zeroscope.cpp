#include "nw/zeroscope.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "nw/auxpoly.hpp"
#include "nw/eisenstein.hpp"
#include "nw/error.hpp"
#include "nw/evalnum.hpp"
#include "nw/parallel.hpp"
#include "nw/rational.hpp"

namespace nw {

namespace {

const std::vector<std::string>& coord_names() {
  static const std::vector<std::string> names = default_names(4);
  return names;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

unsigned long parse_count(const std::string& text, const std::string& spec) {
  try {
    const mpz_class v = parse_integer(text);
    if (v < 0 || !v.fits_ulong_p()) throw Error("ParseError", "");
    return v.get_ui();
  } catch (const Error&) {
    fail("UsageError", "malformed family spec '" + spec + "'");
  }
}

mpq_class fourth_power(int deg) {
  const mpz_class d = deg;
  return mpq_class(d * d * d * d);
}

SparsePoly abs_coefficients(const SparsePoly& P) {
  SparsePoly out(P.nvars());
  for (const auto& [e, c] : P.terms()) out.add_term(e, abs(c));
  return out;
}

TruncatedSeries abs_series(const TruncatedSeries& s) {
  std::vector<mpq_class> c(s.coeffs().begin(), s.coeffs().end());
  for (auto& x : c) x = abs(x);
  return TruncatedSeries(std::move(c));
}

}  // namespace

std::vector<SparsePoly> random_family(std::size_t count, unsigned maxdeg, std::uint64_t seed) {
  if (maxdeg < 1) fail("InvalidArgument", "maxdeg must be >= 1");
  // Raw draws reduced with %, so the family is the same on every platform.
  std::mt19937_64 rng(seed);
  auto exponents_of_degree = [&](unsigned k) {
    Exponents e(4, 0);
    for (unsigned u = 0; u < k; ++u) ++e[rng() % 4];
    return e;
  };
  auto coefficient = [&] {
    long c = 0;
    while (c == 0) c = static_cast<long>(rng() % 19) - 9;
    return mpq_class(c);
  };
  std::vector<SparsePoly> out;
  while (out.size() < count) {
    const unsigned D = 1 + static_cast<unsigned>(rng() % maxdeg);
    SparsePoly P(4);
    P.add_term(exponents_of_degree(D), coefficient());
    const unsigned extra = static_cast<unsigned>(rng() % 5);
    for (unsigned t = 0; t < extra; ++t) P = P + SparsePoly::monomial(exponents_of_degree(rng() % (D + 1)), coefficient());
    if (rng() % 2 == 0) P = P - SparsePoly::constant(4, P.evaluate({0, 1, 1, 1}));
    if (P.is_constant() || P.is_zero()) continue;
    out.push_back(std::move(P));
  }
  return out;
}

std::vector<FamilyMember> make_family(const std::string& spec, unsigned jobs) {
  std::vector<FamilyMember> out;
  const auto parts = split(spec, ':');
  if (parts.empty()) fail("UsageError", "empty family spec");
  const std::string& kind = parts[0];
  if (kind == "coords" && parts.size() == 1) {
    for (std::size_t i = 0; i < 4; ++i) out.push_back({SparsePoly::variable(4, i), coord_names()[i]});
  } else if (kind == "random" && parts.size() == 4) {
    const auto count = parse_count(parts[1], spec);
    const auto maxdeg = parse_count(parts[2], spec);
    const auto seed = parse_count(parts[3], spec);
    const auto polys = random_family(count, static_cast<unsigned>(maxdeg), seed);
    for (std::size_t i = 0; i < polys.size(); ++i) out.push_back({polys[i], "random#" + std::to_string(i)});
  } else if (kind == "aux" && parts.size() == 2) {
    const auto dmax = parse_count(parts[1], spec);
    if (dmax < 1) fail("UsageError", "aux family needs dmax >= 1");
    std::vector<FamilyMember> aux(dmax);
    parallel_for(dmax, jobs, [&](std::size_t i) {
      aux[i] = {construct_aux_poly(static_cast<unsigned>(i + 1)).poly, "aux_d" + std::to_string(i + 1)};
    });
    out = std::move(aux);
  } else if (kind == "file" && parts.size() >= 2) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) fail("IOError", "cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.push_back({parse_poly(line, coord_names()), path + ":" + std::to_string(lineno)});
    }
  } else {
    fail("UsageError", "unknown family spec '" + spec + "'");
  }
  for (const auto& m : out)
    if (m.P.is_constant() || m.P.is_zero()) fail("InvalidArgument", "constant family member " + m.label);
  return out;
}

MultiplicityRecord measure_multiplicity(const SparsePoly& P, std::size_t truncation, std::size_t ceiling) {
  if (P.is_constant() || P.is_zero()) fail("InvalidArgument", "multiplicity of a constant is not defined");
  MultiplicityRecord rec;
  rec.P = P;
  rec.deg = P.degree();
  for (std::size_t N = std::max<std::size_t>(truncation, 1);; N *= 2) {
    N = std::min(N, ceiling);
    const Order o = ord(compose_poly(P, make_phi(N)));
    rec.truncation = N;
    if (o.determinate()) {
      rec.ord = *o.value;
      rec.ratio = mpq_class(*o.value) / fourth_power(rec.deg);
      rec.ratio->canonicalize();
      return rec;
    }
    if (N >= ceiling) return rec;
  }
}

ScanResult multiplicity_scan(const std::vector<FamilyMember>& family, const ScanOptions& opts) {
  for (const auto& m : family)
    if (m.P.is_constant() || m.P.is_zero()) fail("InvalidArgument", "constant family member " + m.label);
  ScanResult res;
  res.records.resize(family.size());
  const std::size_t N0 = std::min(std::max<std::size_t>(opts.truncation, 1), opts.ceiling);
  const PhiBundle phi = make_phi(N0);
  parallel_for(family.size(), opts.jobs, [&](std::size_t i) {
    const Order o = ord(compose_poly(family[i].P, phi));
    MultiplicityRecord rec;
    if (o.determinate()) {
      rec.P = family[i].P;
      rec.deg = family[i].P.degree();
      rec.ord = *o.value;
      rec.ratio = mpq_class(*o.value) / fourth_power(rec.deg);
      rec.ratio->canonicalize();
      rec.truncation = N0;
    } else {
      rec = measure_multiplicity(family[i].P, 2 * N0, opts.ceiling);
    }
    rec.label = family[i].label;
    res.records[i] = std::move(rec);
  });

  for (const auto& rec : res.records) {
    if (opts.envelope && rec.ord && mpq_class(*rec.ord) > *opts.envelope * fourth_power(rec.deg))
      fail("EnvelopeViolation", "ord " + std::to_string(*rec.ord) + " exceeds " + opts.envelope->get_str() +
                                    " * deg^4 for " + rec.label + ": " + to_string(rec.P));
  }

  std::stable_sort(res.records.begin(), res.records.end(), [](const auto& a, const auto& b) {
    if (a.ratio && b.ratio) return *a.ratio > *b.ratio;
    return a.ratio.has_value() && !b.ratio.has_value();
  });
  res.summary.count = res.records.size();
  for (const auto& rec : res.records) {
    if (!rec.ratio) {
      res.summary.any_indeterminate = true;
      continue;
    }
    if (!res.summary.max_ratio || *rec.ratio > *res.summary.max_ratio) res.summary.max_ratio = rec.ratio;
  }
  return res;
}

CauchyGapResult cauchy_gap_check(const SparsePoly& P, const ComplexBall& z, const mpq_class& rho, mpfr_prec_t prec,
                                 std::size_t truncation) {
  if (P.nvars() != 4) fail("ArityMismatch", "expected a polynomial in x0..x3");
  if (P.is_zero()) fail("InvalidArgument", "P must be nonzero");
  if (rho <= 0 || rho >= 1) fail("OutsideDisk", "rho must lie in (0, 1)");
  const BigFloat t = z.abs_upper();
  if (mpfr_cmp_q(t.get(), rho.get_mpq_t()) >= 0)
    fail("OutsideDisk", "|z| must be below rho");
  const RealBall az = abs(z);
  if (!az.is_positive()) fail("InvalidArgument", "z must be bounded away from 0");

  CauchyGapResult res;
  // Order of f, doubling while indeterminate.
  std::size_t N = std::max<std::size_t>(truncation, 8);
  TruncatedSeries f;
  PhiBundle phi;
  for (;;) {
    phi = make_phi(N);
    f = compose_poly(P, phi);
    const Order o = ord(f);
    if (o.determinate()) {
      res.m = *o.value;
      break;
    }
    if (N >= 400000) fail("IndeterminateOrder", "P o phi vanishes to the truncation ceiling");
    N = std::min<std::size_t>(2 * N, 400000);
  }
  res.truncation = N;

  // M(rho): stored coefficients exactly, the rest through the absolute-value majorant.
  mpq_class rp = 1;
  res.M_partial = 0;
  for (std::size_t i = 0; i <= N; ++i) {
    res.M_partial += abs(f[i]) * rp;
    rp *= rho;
  }
  const PhiBundle hat{phi.q_series, abs_series(phi.e2), abs_series(phi.e4), abs_series(phi.e6)};
  const SparsePoly Phat = abs_coefficients(P);
  const TruncatedSeries fhat = compose_poly(Phat, hat);
  mpq_class hat_partial = 0;
  rp = 1;
  for (std::size_t i = 0; i <= N; ++i) {
    hat_partial += fhat[i] * rp;
    rp *= rho;
  }
  const RealBall r(rho, prec);
  const ComplexBall full = eval_poly(Phat, {ComplexBall(r), ComplexBall(eisenstein_majorant(2, r, prec)),
                                            ComplexBall(eisenstein_majorant(4, r, prec)),
                                            ComplexBall(eisenstein_majorant(6, r, prec))});
  const RealBall tail = full.re() - RealBall(hat_partial, prec);
  BigFloat tail_up = tail.upper();
  if (!mpfr_number_p(tail_up.get())) fail("TailBoundFailure", "tail bound is not finite");
  if (mpfr_sgn(tail_up.get()) < 0) mpfr_set_zero(tail_up.get(), 1);
  res.M_tail = RealBall(tail_up, BigFloat(kRadiusPrec));
  res.M = RealBall(res.M_partial, prec) + res.M_tail;
  res.rhs = RealBall(static_cast<long>(res.m), prec) * log(az / r) + log(res.M);

  // Left side by direct evaluation.
  const ComplexBall zp{z.re().with_prec(std::max(prec, z.prec())), z.im().with_prec(std::max(prec, z.prec()))};
  const ComplexBall val =
      eval_poly(P, {zp, eval_eisenstein(2, zp, prec), eval_eisenstein(4, zp, prec), eval_eisenstein(6, zp, prec)});
  res.abs_f = abs(val);
  res.f_nonzero = res.abs_f.is_positive();
  const BigFloat rhs_hi = res.rhs.upper(), rhs_lo = res.rhs.lower();
  if (res.f_nonzero) {
    res.log_abs_f = log(res.abs_f);
    res.pass = mpfr_lessequal_p(res.log_abs_f.lower().get(), rhs_hi.get());
  } else {
    res.log_abs_f = RealBall(prec);
    res.pass = true;
  }
  const BigFloat f_hi = res.abs_f.upper();
  if (mpfr_sgn(f_hi.get()) <= 0) {
    res.strict = true;
  } else {
    const RealBall log_hi = log(RealBall(f_hi, BigFloat(kRadiusPrec)));
    res.strict = mpfr_lessequal_p(log_hi.upper().get(), rhs_lo.get());
  }
  return res;
}

}  // namespace nw

#include "nw/cli.hpp"

#include <CLI11.hpp>
#include <gmpxx.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "nw/auxpoly.hpp"
#include "nw/derivation.hpp"
#include "nw/eisenstein.hpp"
#include "nw/error.hpp"
#include "nw/evalnum.hpp"
#include "nw/parallel.hpp"
#include "nw/periods.hpp"
#include "nw/rational.hpp"
#include "nw/siegel.hpp"
#include "nw/zeroscope.hpp"

namespace nw::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";
constexpr mpfr_prec_t kFallbackBits = 128;

// ---------------------------------------------------------------------------
// serialization

json rat(const mpq_class& x) { return to_short_string(x); }
json integer(const mpz_class& x) { return x.get_str(); }

json ball(const RealBall& x) { return {{"mid", x.mid_string()}, {"rad", x.rad_string()}}; }
json cball(const ComplexBall& z) { return {{"re", ball(z.re())}, {"im", ball(z.im())}}; }

std::string decimal(const mpq_class& x, int digits, mpfr_rnd_t rnd) {
  BigFloat f(256);
  mpfr_set_q(f.get(), x.get_mpq_t(), rnd);
  return f.to_string(digits, rnd);
}

std::string fixed(double x) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(12);
  s << x;
  return s.str();
}

json series_coeffs(const TruncatedSeries& s, std::size_t n) {
  json a = json::array();
  for (std::size_t i = 0; i <= n; ++i) a.push_back(rat(s[i]));
  return a;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// ---------------------------------------------------------------------------
// argument parsing helpers

[[noreturn]] void usage(const std::string& msg) { fail("UsageError", msg); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<mpq_class> rationals(const std::string& text, std::size_t count, const std::string& flag) {
  const auto parts = split(text, ',');
  if (count != 0 && parts.size() != count)
    usage(flag + " expects " + std::to_string(count) + " comma-separated values, got '" + text + "'");
  std::vector<mpq_class> out;
  for (const auto& p : parts) {
    try {
      out.push_back(parse_rational(p));
    } catch (const Error&) {
      usage(flag + ": cannot parse '" + p + "'");
    }
  }
  return out;
}

std::vector<long> longs(const std::string& text, std::size_t count, const std::string& flag) {
  std::vector<long> out;
  for (const auto& q : rationals(text, count, flag)) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p()) usage(flag + " expects integers");
    out.push_back(q.get_num().get_si());
  }
  return out;
}

EllipticCurveQ curve_of(const std::string& text) {
  const auto uv = rationals(text, 2, "--curve");
  return {uv[0], uv[1]};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IOError", "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail("IOError", "cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------

struct Globals {
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

struct Report {
  json body = json::object();
  std::string csv;   // set when the table format was requested
  std::string text;  // set for text output
  std::optional<mpfr_prec_t> bits;
  std::optional<std::size_t> truncation;
};

struct Command {
  CLI::App* app = nullptr;
  std::function<void(Report&)> handler;
};

mpfr_prec_t resolve_bits(const std::optional<long>& flag) {
  long b = kFallbackBits;
  if (flag) {
    b = *flag;
  } else if (const char* env = std::getenv("NW_DEFAULT_BITS"); env && *env) {
    try {
      const mpz_class v = parse_integer(env);
      if (!v.fits_slong_p()) usage("NW_DEFAULT_BITS out of range");
      b = v.get_si();
    } catch (const Error&) {
      usage(std::string("NW_DEFAULT_BITS is not an integer: ") + env);
    }
  }
  if (b < 16 || b > (1L << 20)) usage("precision must lie in 16..2^20 bits");
  return static_cast<mpfr_prec_t>(b);
}

json option_values(const CLI::App* app) {
  json params = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->count() == 0 && opt->get_type_size() == 0) {
      params[name] = false;
      continue;
    }
    if (opt->count() == 0) {
      params[name] = opt->get_default_str().empty() ? json(nullptr) : json(opt->get_default_str());
      continue;
    }
    const auto& res = opt->results();
    if (opt->get_type_size() == 0) {
      params[name] = true;
    } else if (res.size() == 1 && opt->get_expected_max() <= 1) {
      params[name] = res[0];
    } else {
      params[name] = res;
    }
  }
  return params;
}

// ---------------------------------------------------------------------------
// subcommands

void add_qexp(CLI::App& root, std::vector<Command>& cmds) {
  auto* app = root.add_subcommand("qexp", "exact q-expansion of E2, E4, E6, Delta or j");
  auto weight = std::make_shared<std::string>();
  auto terms = std::make_shared<std::size_t>(10);
  auto format = std::make_shared<std::string>("json");
  app->add_option("--weight", *weight, "2, 4, 6, delta or j")
      ->required()
      ->check(CLI::IsMember({"2", "4", "6", "delta", "j"}));
  app->add_option("--terms", *terms, "highest power of q reported")->capture_default_str();
  app->add_option("--format", *format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  cmds.push_back({app, [=](Report& rep) {
                    const std::size_t N = *terms;
                    rep.truncation = N;
                    json coeffs = json::array();
                    long lowest = 0;
                    std::ostringstream text;
                    if (*weight == "j") {
                      const LaurentTruncated j = j_series(N + 2);
                      lowest = -static_cast<long>(j.pole_order());
                      for (long e = lowest; e <= static_cast<long>(N); ++e) {
                        coeffs.push_back(rat(j.coeff(e)));
                        text << e << ' ' << to_short_string(j.coeff(e)) << '\n';
                      }
                    } else {
                      const TruncatedSeries s = *weight == "delta" ? delta_series(std::max<std::size_t>(N, 1))
                                                                   : eisenstein_series(std::stoi(*weight), N);
                      coeffs = series_coeffs(s, N);
                      for (std::size_t i = 0; i <= N; ++i) text << i << ' ' << to_short_string(s[i]) << '\n';
                    }
                    rep.body["series"] = *weight;
                    rep.body["lowest_exponent"] = lowest;
                    rep.body["trunc_order"] = N;
                    rep.body["coefficients"] = coeffs;
                    if (*format == "text") rep.text = text.str();
                  }});
}

void add_derive(CLI::App& root, std::vector<Command>& cmds) {
  auto* app = root.add_subcommand("derive", "apply a derivation to a polynomial");
  auto field = std::make_shared<std::string>();
  auto poly = std::make_shared<std::string>();
  auto iterate = std::make_shared<unsigned>(1);
  auto check = std::make_shared<bool>(false);
  app->add_option("--field", *field, "v (on x1 x2 x3), w (on x0..x3) or custom:<file>")->required();
  app->add_option("--apply", *poly, "polynomial text")->required();
  app->add_option("--iterate", *iterate, "k; for w this is the operator w^[k], otherwise D applied k times")
      ->capture_default_str();
  app->add_flag("--check-invariance", *check, "report the cofactor D(P)/P if it is a polynomial");
  cmds.push_back({app, [=](Report& rep) {
                    std::optional<Derivation> D;
                    std::vector<std::string> names;
                    const bool is_w = *field == "w";
                    if (*field == "v") {
                      D = ramanujan_v();
                      names = {"x1", "x2", "x3"};
                    } else if (is_w) {
                      D = ramanujan_w();
                      names = default_names(4);
                    } else if (field->rfind("custom:", 0) == 0) {
                      NamedDerivation nd = parse_derivation(read_file(field->substr(7)));
                      D = std::move(nd.field);
                      names = std::move(nd.names);
                    } else {
                      usage("--field must be v, w or custom:<file>");
                    }
                    const SparsePoly P = parse_poly(*poly, names);
                    SparsePoly R = P;
                    if (is_w) {
                      R = iterated_wk(P, *iterate);
                    } else {
                      for (unsigned i = 0; i < *iterate; ++i) R = apply(*D, R);
                    }
                    rep.body["variables"] = names;
                    rep.body["input"] = to_string(P, names);
                    rep.body["operator"] = is_w ? "w^[k]" : "D^k";
                    rep.body["k"] = *iterate;
                    rep.body["result"] = to_string(R, names);
                    if (*check) {
                      const auto cof = invariance_check(*D, P);
                      rep.body["invariant"] = cof.has_value();
                      rep.body["cofactor"] = cof ? json(to_string(*cof, names)) : json(nullptr);
                    }
                  }});
}

void add_siegel(CLI::App& root, std::vector<Command>& cmds) {
  auto* app = root.add_subcommand("siegel", "small integer kernel vector of an integer matrix");
  auto path = std::make_shared<std::string>();
  app->add_option("--matrix", *path, "file: 'r s' then r rows of s integers")->required();
  cmds.push_back({app, [=](Report& rep) {
                    const IntMatrix T = parse_int_matrix(read_file(*path));
                    const SiegelResult res = small_kernel(T);
                    bool member = true;
                    for (const auto& row : T.entries) {
                      mpz_class acc = 0;
                      for (std::size_t j = 0; j < T.cols; ++j) acc += row[j] * res.vector[j];
                      member = member && acc == 0;
                    }
                    json v = json::array();
                    for (const auto& x : res.vector) v.push_back(integer(x));
                    rep.body["rows"] = T.rows;
                    rep.body["cols"] = T.cols;
                    rep.body["matrix_norm"] = integer(T.norm_inf());
                    rep.body["rank"] = res.rank;
                    rep.body["method"] = res.method;
                    rep.body["vector"] = v;
                    rep.body["norm"] = integer(res.norm);
                    rep.body["bound_floor"] = integer(res.bound_floor);
                    rep.body["within_bound"] = res.within_bound;
                    rep.body["in_kernel"] = member;
                  }});
}

json aux_json(const AuxPolyReport& r) {
  return {{"d", r.d},
          {"r", r.r},
          {"s", r.s},
          {"poly", to_string(r.poly)},
          {"achieved_ord", r.achieved_ord},
          {"certification_trunc", r.certification_trunc},
          {"height", integer(r.height)},
          {"matrix_height", integer(r.matrix_height)},
          {"siegel_bound", integer(r.siegel_bound)},
          {"within_bound", r.within_bound},
          {"ord_certified", r.achieved_ord >= r.r},
          {"rank", r.rank},
          {"solver_method", r.solver_method}};
}

void add_auxpoly(CLI::App& root, std::vector<Command>& cmds, const Globals& g) {
  auto* app = root.add_subcommand("auxpoly", "auxiliary polynomials P_d with P_d o phi vanishing to order r");
  auto degrees = std::make_shared<std::string>();
  auto order = std::make_shared<std::optional<std::size_t>>();
  auto quartic = std::make_shared<bool>(false);
  auto emit = std::make_shared<std::string>();
  auto report = std::make_shared<std::string>("json");
  app->add_option("--degree", *degrees, "d, or a comma-separated list of degrees")->required();
  app->add_option("--order", *order, "r (default floor(s/2))");
  app->add_flag("--quartic-order", *quartic, "use r = floor(d^4/4) as the default order");
  app->add_option("--emit-poly", *emit, "write each P_d, one per line");
  app->add_option("--report", *report, "json, or csv for the height-growth table")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmds.push_back({app, [=, &g](Report& rep) {
                    std::vector<unsigned> ds;
                    for (long d : longs(*degrees, 0, "--degree")) {
                      if (d < 1 || d > 64) usage("--degree values must lie in 1..64");
                      ds.push_back(static_cast<unsigned>(d));
                    }
                    const OrderRule rule = *quartic ? OrderRule::Quartic : OrderRule::HalfColumns;
                    std::vector<AuxPolyReport> reports(ds.size());
                    // Parallel over degrees; each construction runs single-threaded.
                    parallel_for(ds.size(), g.jobs, [&](std::size_t i) {
                      reports[i] = construct_aux_poly(ds[i], *order, rule, ds.size() == 1 ? g.jobs : 1);
                    });
                    json arr = json::array(), table = json::array();
                    std::ostringstream csv, polys;
                    csv << "d,r,log_height,ratio\n";
                    for (const auto& r : reports) {
                      arr.push_back(aux_json(r));
                      const double lh = r.height > 0 ? log_mpz(r.height) : 0.0;
                      std::optional<double> ratio;
                      if (r.d > 1) ratio = lh / (r.d * std::log(static_cast<double>(r.d)));
                      table.push_back({{"d", r.d},
                                       {"r", r.r},
                                       {"log_height", fixed(lh)},
                                       {"ratio", ratio ? json(fixed(*ratio)) : json(nullptr)}});
                      csv << r.d << ',' << r.r << ',' << fixed(lh) << ',' << (ratio ? fixed(*ratio) : "") << '\n';
                      polys << to_string(r.poly) << '\n';
                    }
                    if (!emit->empty()) write_file(*emit, polys.str());
                    rep.body["reports"] = arr;
                    rep.body["height_growth"] = table;
                    if (*report == "csv") rep.csv = csv.str();
                  }});
}

void add_zeroscan(CLI::App& root, std::vector<Command>& cmds, const Globals& g) {
  auto* app = root.add_subcommand("zeroscan", "orders of vanishing of P o phi over a family");
  auto family = std::make_shared<std::string>();
  auto opts = std::make_shared<ScanOptions>();
  auto envelope = std::make_shared<std::string>("48");
  auto report = std::make_shared<std::string>("json");
  app->add_option("--family", *family, "coords | random:<count>:<maxdeg>[:<seed>] | aux:<dmax> | file:<path>")
      ->required();
  app->add_option("--truncation", opts->truncation, "initial truncation order")->capture_default_str();
  app->add_option("--ceiling", opts->ceiling, "largest truncation tried")->capture_default_str();
  app->add_option("--envelope", *envelope, "abort if ord > C deg^4 ('none' disables)")->capture_default_str();
  app->add_option("--report", *report, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmds.push_back({app, [=, &g](Report& rep) {
                    std::string spec = *family;
                    // random:<count>:<maxdeg> takes its seed from --seed
                    if (spec.rfind("random:", 0) == 0 && split(spec, ':').size() == 3)
                      spec += ":" + std::to_string(g.seed.value_or(0));
                    ScanOptions o = *opts;
                    o.jobs = g.jobs;
                    if (*envelope == "none") {
                      o.envelope.reset();
                    } else {
                      o.envelope = rationals(*envelope, 1, "--envelope")[0];
                    }
                    rep.truncation = o.truncation;
                    const ScanResult res = multiplicity_scan(make_family(spec, g.jobs), o);
                    json recs = json::array();
                    std::ostringstream csv;
                    csv << "label,deg,ord,ratio,truncation,poly\n";
                    for (const auto& r : res.records) {
                      recs.push_back({{"label", r.label},
                                      {"poly", to_string(r.P)},
                                      {"deg", r.deg},
                                      {"ord", r.ord ? json(*r.ord) : json(nullptr)},
                                      {"ratio", r.ratio ? rat(*r.ratio) : json(nullptr)},
                                      {"truncation", r.truncation}});
                      csv << csv_field(r.label) << ',' << r.deg << ',' << (r.ord ? std::to_string(*r.ord) : "") << ','
                          << (r.ratio ? to_short_string(*r.ratio) : "") << ',' << r.truncation << ','
                          << csv_field(to_string(r.P)) << '\n';
                    }
                    rep.body["family"] = spec;
                    rep.body["records"] = recs;
                    rep.body["summary"] = {
                        {"count", res.summary.count},
                        {"max_ratio", res.summary.max_ratio ? rat(*res.summary.max_ratio) : json(nullptr)},
                        {"any_indeterminate", res.summary.any_indeterminate}};
                    if (*report == "csv") rep.csv = csv.str();
                  }});
}

// --z re,im  or  --tau re,im  (z = exp(2 pi i tau))
ComplexBall point_of(const std::string& z, const std::string& tau, mpfr_prec_t prec) {
  if (z.empty() == tau.empty()) usage("give exactly one of --z and --tau");
  if (!z.empty()) {
    const auto v = rationals(z, 2, "--z");
    return ComplexBall::from_rationals(v[0], v[1], prec);
  }
  const auto v = rationals(tau, 2, "--tau");
  if (v[1] <= 0) fail("OutsideDisk", "Im tau must be positive");
  return q_from_tau(ComplexBall::from_rationals(v[0], v[1], prec + 32));
}

void add_eval(CLI::App& root, std::vector<Command>& cmds) {
  auto* app = root.add_subcommand("eval", "certified value of E2, E4 or E6 at a point of the unit disk");
  auto weight = std::make_shared<int>();
  auto z = std::make_shared<std::string>(), tau = std::make_shared<std::string>();
  auto bits = std::make_shared<std::optional<long>>();
  app->add_option("--weight", *weight, "2, 4 or 6")->required()->check(CLI::IsMember({2, 4, 6}));
  app->add_option("--z", *z, "re,im");
  app->add_option("--tau", *tau, "re,im with z = exp(2 pi i tau)");
  app->add_option("--bits", *bits, "precision");
  cmds.push_back({app, [=](Report& rep) {
                    const mpfr_prec_t p = resolve_bits(*bits);
                    rep.bits = p;
                    const ComplexBall zb = point_of(*z, *tau, p);
                    const ComplexBall v = eval_eisenstein(*weight, zb, p);
                    rep.body["weight"] = *weight;
                    rep.body["z"] = cball(zb);
                    rep.body["terms"] = eisenstein_terms(*weight, zb.abs_upper(), p);
                    rep.body["value"] = cball(v);
                  }});
}

void add_transform(CLI::App& root, std::vector<Command>& cmds) {
  auto* app = root.add_subcommand("transform", "residuals of the (quasi)modular transformation laws");
  auto gamma_s = std::make_shared<std::string>(), tau = std::make_shared<std::string>();
  auto bits = std::make_shared<std::optional<long>>();
  app->add_option("--gamma", *gamma_s, "a,b,c,d with ad - bc = 1")->required();
  app->add_option("--tau", *tau, "re,im")->required();
  app->add_option("--bits", *bits, "precision");
  cmds.push_back({app, [=](Report& rep) {
                    const mpfr_prec_t p = resolve_bits(*bits);
                    rep.bits = p;
                    const auto g = longs(*gamma_s, 4, "--gamma");
                    const auto t = rationals(*tau, 2, "--tau");
                    const auto res = quasimodular_transform_check(g[0], g[1], g[2], g[3],
                                                                  ComplexBall::from_rationals(t[0], t[1], p), p);
                    rep.body["gamma"] = g;
                    rep.body["tau"] = cball(res.tau);
                    rep.body["gamma_tau"] = cball(res.gamma_tau);
                    rep.body["residual_e2"] = cball(res.r2);
                    rep.body["residual_e4"] = cball(res.r4);
                    rep.body["residual_e6"] = cball(res.r6);
                    rep.body["all_contain_zero"] = res.all_contain_zero();
                  }});
}

void add_philippon(CLI::App& root, std::vector<Command>& cmds, const Globals& g) {
  auto* app = root.add_subcommand("philippon", "log|Q_d| at (z, E2, E4, E6) for Q_d = w^[k] P_d");
  auto z = std::make_shared<std::string>(), tau = std::make_shared<std::string>();
  auto dmax = std::make_shared<unsigned>();
  auto ks = std::make_shared<std::string>("0,1,2");
  auto window = std::make_shared<std::string>("10,0");
  auto report = std::make_shared<std::string>("json");
  app->add_option("--z", *z, "re,im");
  app->add_option("--tau", *tau, "re,im with z = exp(2 pi i tau)");
  app->add_option("--dmax", *dmax, "degrees 1..dmax")->required();
  app->add_option("--k", *ks, "k schedule")->capture_default_str();
  app->add_option("--window", *window, "a,b: flag ratios outside [-a, -b]")->capture_default_str();
  app->add_option("--report", *report, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmds.push_back({app, [=, &g](Report& rep) {
                    PhilipponOptions o;
                    for (unsigned d = 1; d <= *dmax; ++d) o.degrees.push_back(d);
                    o.k_schedule.clear();
                    for (long k : longs(*ks, 0, "--k")) {
                      if (k < 0 || k > 64) usage("--k values must lie in 0..64");
                      o.k_schedule.push_back(static_cast<unsigned>(k));
                    }
                    const auto w = rationals(*window, 2, "--window");
                    o.window_a = w[0].get_d();
                    o.window_b = w[1].get_d();
                    o.jobs = g.jobs;
                    const ComplexBall zb = point_of(*z, *tau, 1024);
                    const auto rows = philippon_window(zb, o);
                    json arr = json::array();
                    std::ostringstream csv;
                    csv << "d,m,k,log_abs_mid,log_abs_rad,deg_q,log_height_q,ratio,outside_window,prec\n";
                    for (const auto& r : rows) {
                      arr.push_back({{"d", r.d},
                                     {"m", r.m},
                                     {"k", r.k},
                                     {"log_abs_q", ball(r.log_abs)},
                                     {"deg_q", r.deg_q},
                                     {"log_height_q", fixed(r.log_height_q)},
                                     {"ratio", fixed(r.ratio)},
                                     {"outside_window", r.outside_window},
                                     {"prec", r.prec_used}});
                      csv << r.d << ',' << r.m << ',' << r.k << ',' << r.log_abs.mid_string() << ','
                          << r.log_abs.rad_string() << ',' << r.deg_q << ',' << fixed(r.log_height_q) << ','
                          << fixed(r.ratio) << ',' << (r.outside_window ? 1 : 0) << ',' << r.prec_used << '\n';
                    }
                    rep.body["z"] = cball(zb);
                    rep.body["window"] = {{"a", fixed(o.window_a)}, {"b", fixed(o.window_b)}};
                    rep.body["rows"] = arr;
                    if (*report == "csv") rep.csv = csv.str();
                  }});
}

void add_liouville(CLI::App& root, std::vector<Command>& cmds) {
  auto* app = root.add_subcommand("liouville", "certified Liouville gaps along continued-fraction convergents");
  auto minpoly = std::make_shared<std::string>();
  auto qmax = std::make_shared<std::string>();
  auto root_index = std::make_shared<std::optional<std::size_t>>();
  app->add_option("--minpoly", *minpoly, "integer coefficients, leading first (x^2 - 2: 1,0,-2)")->required();
  app->add_option("--qmax", *qmax, "largest denominator")->required();
  app->add_option("--root", *root_index, "index of the real root in increasing order (default: largest)");
  cmds.push_back({app, [=](Report& rep) {
                    std::vector<mpz_class> coeffs;
                    for (const auto& q : rationals(*minpoly, 0, "--minpoly")) {
                      if (q.get_den() != 1) usage("--minpoly expects integers");
                      coeffs.push_back(q.get_num());
                    }
                    const auto qm = rationals(*qmax, 1, "--qmax")[0];
                    if (qm.get_den() != 1 || qm < 1) usage("--qmax expects a positive integer");
                    const LiouvilleResult res = liouville_check(coeffs, qm.get_num(), *root_index);
                    json recs = json::array();
                    for (const auto& r : res.records)
                      recs.push_back({{"p", integer(r.p)},
                                      {"q", integer(r.q)},
                                      {"gap_lower", decimal(r.gap_lower, 20, MPFR_RNDD)},
                                      {"certified", r.certified}});
                    rep.body["degree"] = res.degree;
                    rep.body["alpha_interval"] = {decimal(res.alpha_lo, 30, MPFR_RNDD),
                                                  decimal(res.alpha_hi, 30, MPFR_RNDU)};
                    rep.body["M_interval"] = {decimal(res.M_lo, 20, MPFR_RNDD), decimal(res.M_hi, 20, MPFR_RNDU)};
                    rep.body["c_interval"] = {decimal(res.c_lo, 20, MPFR_RNDD), decimal(res.c_hi, 20, MPFR_RNDU)};
                    rep.body["records"] = recs;
                    rep.body["pass"] = res.pass;
                  }});
}

json periods_json(const PeriodData& pd) {
  json roots = json::array();
  for (const auto& r : pd.roots) roots.push_back(cball(r));
  return {{"omega1", cball(pd.omega1)}, {"omega2", cball(pd.omega2)}, {"eta1", cball(pd.eta1)},
          {"eta2", cball(pd.eta2)},     {"tau", cball(pd.tau)},       {"legendre_residual", cball(pd.legendre_residual)},
          {"roots", roots},             {"nodes", pd.nodes}};
}

std::vector<EllipticCurveQ> curves_of(const std::vector<std::string>& texts) {
  std::vector<EllipticCurveQ> out;
  for (const auto& t : texts) out.push_back(curve_of(t));
  return out;
}

void add_periods(CLI::App& root, std::vector<Command>& cmds, const Globals& g) {
  auto* app = root.add_subcommand("periods", "periods and quasi-periods of y^2 = 4x^3 - u x - v");
  auto curves = std::make_shared<std::vector<std::string>>();
  auto bits = std::make_shared<std::optional<long>>();
  auto reduce = std::make_shared<bool>(false);
  app->add_option("--curve", *curves, "u,v (repeatable)")->required()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  app->add_option("--bits", *bits, "precision");
  app->add_flag("--reduce", *reduce, "also report the basis with tau in the fundamental domain");
  cmds.push_back({app, [=, &g](Report& rep) {
                    const mpfr_prec_t p = resolve_bits(*bits);
                    rep.bits = p;
                    const auto cs = curves_of(*curves);
                    std::vector<json> out(cs.size());
                    parallel_for(cs.size(), g.jobs, [&](std::size_t i) {
                      PeriodData pd = elliptic_periods(cs[i], p);
                      json j = {{"u", rat(cs[i].u)}, {"v", rat(cs[i].v)}, {"periods", periods_json(pd)}};
                      if (*reduce) {
                        const auto M = reduce_basis(pd);
                        j["reduction"] = M;
                        j["reduced"] = periods_json(pd);
                      }
                      out[i] = std::move(j);
                    });
                    rep.body["curves"] = out;
                  }});
}

void add_prop47(CLI::App& root, std::vector<Command>& cmds, const Globals& g) {
  auto* app = root.add_subcommand("prop47", "E2, E4, E6 at tau against period expressions");
  auto curves = std::make_shared<std::vector<std::string>>();
  auto bits = std::make_shared<std::optional<long>>();
  app->add_option("--curve", *curves, "u,v (repeatable)")->required()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  app->add_option("--bits", *bits, "precision");
  cmds.push_back({app, [=, &g](Report& rep) {
                    const mpfr_prec_t p = resolve_bits(*bits);
                    rep.bits = p;
                    const auto cs = curves_of(*curves);
                    std::vector<json> out(cs.size());
                    parallel_for(cs.size(), g.jobs, [&](std::size_t i) {
                      const Prop47Result r = prop47_check(cs[i], p);
                      out[i] = {{"u", rat(cs[i].u)},
                                {"v", rat(cs[i].v)},
                                {"reduction", r.reduction},
                                {"tau", cball(r.periods.tau)},
                                {"omega1", cball(r.periods.omega1)},
                                {"eta1", cball(r.periods.eta1)},
                                {"e2", cball(r.e2)},
                                {"e4", cball(r.e4)},
                                {"e6", cball(r.e6)},
                                {"rhs2", cball(r.rhs2)},
                                {"rhs4", cball(r.rhs4)},
                                {"rhs6", cball(r.rhs6)},
                                {"residual2", cball(r.r2)},
                                {"residual4", cball(r.r4)},
                                {"residual6", cball(r.r6)},
                                {"all_contain_zero", r.all_contain_zero()}};
                    });
                    rep.body["curves"] = out;
                  }});
}

void add_hyper5(CLI::App& root, std::vector<Command>& cmds, const Globals& g) {
  auto* app = root.add_subcommand("hyper5", "loop integrals of x^(k-1) dx/y on y^2 = 1 - x^5 against Beta values");
  auto k = std::make_shared<unsigned>(), l = std::make_shared<unsigned>();
  auto all = std::make_shared<bool>(false);
  auto bits = std::make_shared<std::optional<long>>();
  app->add_option("--k", *k, "1..4");
  app->add_option("--l", *l, "1..4");
  app->add_flag("--all", *all, "every (k, l) in 1..4 x 1..4");
  app->add_option("--bits", *bits, "precision");
  cmds.push_back({app, [=, &g](Report& rep) {
                    const mpfr_prec_t p = resolve_bits(*bits);
                    rep.bits = p;
                    std::vector<std::pair<unsigned, unsigned>> pairs;
                    if (*all) {
                      for (unsigned a = 1; a <= 4; ++a)
                        for (unsigned b = 1; b <= 4; ++b) pairs.emplace_back(a, b);
                    } else {
                      if (app->count("--k") == 0 || app->count("--l") == 0) usage("give --k and --l, or --all");
                      pairs.emplace_back(*k, *l);
                    }
                    std::vector<json> out(pairs.size());
                    parallel_for(pairs.size(), g.jobs, [&](std::size_t i) {
                      const auto r = hyperelliptic_c5_periods(pairs[i].first, pairs[i].second, p);
                      out[i] = {{"k", r.k},
                                {"l", r.l},
                                {"segment", ball(r.segment)},
                                {"segment_closed", ball(r.segment_closed)},
                                {"loop", cball(r.loop)},
                                {"closed", cball(r.closed)},
                                {"residual", cball(r.residual)},
                                {"overlap", r.loop.overlaps(r.closed)},
                                {"nodes", r.nodes}};
                    });
                    rep.body["results"] = out;
                  }});
}

void add_selftest(CLI::App& root, std::vector<Command>& cmds) {
  auto* app = root.add_subcommand("selftest", "exact identity suite");
  auto terms = std::make_shared<std::size_t>(100);
  app->add_option("--terms", *terms, "truncation order")->capture_default_str();
  cmds.push_back({app, [=](Report& rep) {
                    rep.truncation = *terms;
                    const auto checks = selftest(*terms);
                    json arr = json::array();
                    std::size_t cases = 0, passed = 0;
                    for (const auto& c : checks) {
                      arr.push_back({{"name", c.name}, {"cases", c.cases}, {"passed", c.passed}});
                      cases += c.cases;
                      passed += c.passed;
                    }
                    rep.body["checks"] = arr;
                    rep.body["cases"] = cases;
                    rep.body["passed"] = passed;
                    if (passed != cases) fail("SelftestFailure", std::to_string(cases - passed) + " identity checks failed");
                  }});
}

}  // namespace

std::vector<SelftestCheck> selftest(std::size_t N) {
  if (N < 4) fail("InvalidArgument", "selftest needs at least 4 terms");
  std::vector<SelftestCheck> out;
  auto record = [&](std::string name, std::size_t cases, std::size_t passed) {
    out.push_back({std::move(name), cases, passed});
  };
  const PhiBundle phi = make_phi(N);

  std::size_t ok = 0;
  for (const auto& r : ramanujan_residuals(phi)) ok += r.is_zero();
  record("ramanujan_system", 3, ok);

  const TruncatedSeries d = delta_series(N);
  record("theta_log_delta", 1, theta(d) == phi.e2 * d);

  {
    const TruncatedSeries& e2 = phi.e2;
    const TruncatedSeries& e4 = phi.e4;
    const TruncatedSeries& e6 = phi.e6;
    const TruncatedSeries den = series_pow(e4, 3) - e6 * e6;
    const LaurentTruncated j = j_series(N);
    const LaurentTruncated tj = theta(j), ttj = theta(tj);
    const std::array<std::pair<const LaurentTruncated*, TruncatedSeries>, 3> cases{{
        {&j, 1728 * series_pow(e4, 3)},
        {&tj, -1728 * (e4 * e4 * e6)},
        {&ttj, 288 * (-(e2 * e4 * e4 * e6) + 4 * (e4 * e6 * e6) + 3 * series_pow(e4, 4))},
    }};
    ok = 0;
    for (const auto& [lhs_j, rhs] : cases) {
      const LaurentTruncated lhs = *lhs_j * den;
      bool same = true;
      for (long e = -static_cast<long>(lhs.pole_order()); e <= lhs.known_to(); ++e)
        same = same && lhs.coeff(e) == (e < 0 ? mpq_class(0) : rhs[static_cast<std::size_t>(e)]);
      ok += same;
    }
    record("j_identities", 3, ok);
  }

  const auto polys = random_family(20, 3, 2024);
  const Derivation w = ramanujan_w();
  ok = 0;
  for (std::size_t i = 0; i + 1 < polys.size(); i += 2) {
    const SparsePoly& a = polys[i];
    const SparsePoly& b = polys[i + 1];
    ok += apply(w, a * b) == apply(w, a) * b + a * apply(w, b);
  }
  record("leibniz", polys.size() / 2, ok);

  ok = 0;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const unsigned k = static_cast<unsigned>(i % 5);
    TruncatedSeries f = compose_poly(polys[i], phi);
    for (unsigned t = 0; t < k; ++t) f = derivative(f);
    const TruncatedSeries lhs = mpq_class(ipow(12, k)) * shift_up(f, k);
    ok += equal_to_common_order(lhs, compose_poly(iterated_wk(polys[i], k), phi));
  }
  record("wk_bridge", polys.size(), ok);
  return out;
}

Outcome run(const std::vector<std::string>& args) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App root{"Exact and certified computations around Eisenstein series and periods", "nw"};
  root.require_subcommand(1, 1);
  root.fallthrough();
  Globals g;
  std::optional<std::uint64_t> seed;
  root.add_option("--jobs", g.jobs, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
  root.add_option("--seed", seed, "seed for random:<count>:<maxdeg> families");
  root.add_flag("--timing", g.timing, "add wall time to the manifest (breaks byte-identical reports)");

  std::vector<Command> cmds;
  add_qexp(root, cmds);
  add_derive(root, cmds);
  add_siegel(root, cmds);
  add_auxpoly(root, cmds, g);
  add_zeroscan(root, cmds, g);
  add_eval(root, cmds);
  add_transform(root, cmds);
  add_philippon(root, cmds, g);
  add_liouville(root, cmds);
  add_periods(root, cmds, g);
  add_prop47(root, cmds, g);
  add_hyper5(root, cmds, g);
  add_selftest(root, cmds);
  for (auto& c : cmds) c.app->fallthrough();

  std::vector<const char*> argv{"nw"};
  for (const auto& a : args) argv.push_back(a.c_str());
  Outcome res;
  try {
    root.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = root.exit(e, out, err);
    res.out = out.str();
    res.err = err.str();
    res.exit_code = code == 0 ? 0 : 2;
    return res;
  }
  g.seed = seed;

  const Command* cmd = nullptr;
  for (const auto& c : cmds)
    if (c.app->parsed()) cmd = &c;

  json manifest = {{"subcommand", cmd->app->get_name()},
                   {"params", option_values(cmd->app)},
                   {"jobs", g.jobs},
                   {"seed", g.seed ? json(*g.seed) : json(nullptr)},
                   {"version", kVersion}};
  auto finish = [&](json& m) {
    if (g.timing)
      m["wall_time_s"] =
          fixed(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  };

  Report rep;
  auto stamp = [&] {
    if (rep.bits) manifest["bits"] = *rep.bits;
    if (rep.truncation) manifest["truncation"] = *rep.truncation;
    finish(manifest);
  };
  try {
    cmd->handler(rep);
    stamp();
    if (!rep.csv.empty()) {
      res.out = "# manifest " + manifest.dump() + "\n" + rep.csv;
    } else if (!rep.text.empty()) {
      res.out = "# manifest " + manifest.dump() + "\n" + rep.text;
    } else {
      json doc = {{"manifest", manifest}};
      for (auto& [key, value] : rep.body.items()) doc[key] = value;
      res.out = doc.dump(2) + "\n";
    }
  } catch (const Error& e) {
    if (e.code() == "UsageError" || e.code() == "ParseError") {
      res.exit_code = 2;
      res.err = std::string(e.what()) + "\n" + cmd->app->help();
      return res;
    }
    stamp();
    json doc = {{"manifest", manifest}, {"error", {{"code", e.code()}, {"message", e.what()}}}};
    res.out = doc.dump(2) + "\n";
    res.exit_code = 1;
  }
  return res;
}

}  // namespace nw::cli

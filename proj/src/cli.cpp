#include "zpell/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "zpell/census.hpp"
#include "zpell/contfrac.hpp"
#include "zpell/errors.hpp"
#include "zpell/fourier.hpp"
#include "zpell/modroots.hpp"
#include "zpell/pell.hpp"
#include "zpell/singular.hpp"
#include "zpell/version.hpp"
#include "zpell/zaremba.hpp"

namespace zpell::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Invalid flag values or combinations.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required option ") + flag);
  return *v;
}

Alpha parse_alpha(const std::optional<std::string>& text) {
  if (!text) throw UsageError("missing required option --alpha");
  try {
    return Alpha::parse(*text);
  } catch (const DomainError& e) {
    throw UsageError("malformed rational for --alpha: " + std::string(e.what()));
  }
}

Alpha parse_census_alpha(const std::optional<std::string>& text) {
  const Alpha a = parse_alpha(text);
  if (2 * a.num > a.den) throw UsageError("--alpha must lie in (0, 1/2]");
  return a;
}

bool want_json(const RunConfig& c, bool default_json) {
  if (c.format.empty()) return default_json;
  if (c.format == "json") return true;
  if (c.format == "text") return false;
  throw UsageError("--format must be text or json");
}

// Writes the main payload to --output, or to out.
void emit(const RunConfig& c, std::ostream& out, const std::string& payload) {
  if (c.output.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(c.output, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + c.output);
  f << payload;
}

void emit_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  writer(f);
}

std::string join(const std::vector<u64>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

json header(const char* command) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["command"] = command;
  return j;
}

fs::path pell_cache_path(const RunConfig& c) { return fs::path(c.cache_dir) / "pell.plt1"; }
fs::path sieve_cache_path(const RunConfig& c, unsigned A) {
  return fs::path(c.cache_dir) / ("zaremba_A" + std::to_string(A) + ".zsv1");
}

int do_cf(const RunConfig& c, std::ostream& out) {
  json j = header("cf");
  std::ostringstream text;
  if (c.D) {
    const SurdCF cf = cf_of_sqrt(*c.D);
    j["D"] = cf.D;
    j["a0"] = cf.a0;
    j["period"] = cf.period;
    text << "sqrt(" << cf.D << ") = [" << cf.a0 << "; (" << join(cf.period, ", ") << ")]\n"
         << "period length = " << cf.period.size() << '\n';
  } else {
    const u64 t = need(c.t, "--t");
    const u64 a = need(c.a, "--a");
    if (t == 0 || a >= t) throw UsageError("cf needs 0 <= a < t");
    const RationalCF cf = cf_of_rational(a, t);
    j["numerator"] = cf.numerator;
    j["denominator"] = cf.denominator;
    j["gcd"] = cf.gcd;
    j["quotients"] = cf.quotients;
    text << a << '/' << t << " = [0; " << join(cf.quotients, ", ") << "]\n";
    if (!cf.quotients.empty()) {
      const RationalCF alt = cf_alternate(cf);
      j["alternate"] = alt.quotients;
      text << "alternate = [0; " << join(alt.quotients, ", ") << "]\n";
    }
    text << "gcd = " << cf.gcd << '\n';
  }
  emit(c, out, want_json(c, false) ? j.dump(2) + "\n" : text.str());
  return kOk;
}

PellTable load_or_build_pell(const RunConfig& c, u64 x) {
  if (!c.cache_dir.empty() && fs::exists(pell_cache_path(c))) {
    PellTable cached = read_pell_table(pell_cache_path(c));
    if (cached.x >= x) {
      std::erase_if(cached.rows, [&](const PellSolution& s) { return s.D > x; });
      cached.x = x;
      return cached;
    }
  }
  PellTable table = build_pell_table(x, c.threads);
  if (!c.cache_dir.empty()) {
    fs::create_directories(c.cache_dir);
    write_pell_table(pell_cache_path(c), table);
  }
  return table;
}

int do_pell(const RunConfig& c, std::ostream& out) {
  std::optional<Alpha> alpha;
  if (c.alpha) alpha = parse_alpha(c.alpha);
  if (c.upto) {
    const PellTable table = load_or_build_pell(c, *c.upto);
    auto write = [&](std::ostream& o) {
      o << "D,t,u" << (alpha ? ",qualifies" : "") << '\n';
      for (const auto& s : table.rows) {
        o << s.D << ',' << s.t.get_str() << ',' << s.u.get_str();
        if (alpha) o << ',' << (qualifies(s, *alpha) ? "true" : "false");
        o << '\n';
      }
    };
    if (!c.csv.empty()) emit_file(c.csv, write);
    else {
      std::ostringstream s;
      write(s);
      emit(c, out, s.str());
    }
    return kOk;
  }
  const PellSolution sol = fundamental_solution(need(c.D, "--D or --upto"));
  json j = header("pell");
  j["D"] = sol.D;
  j["t"] = sol.t.get_str();
  j["u"] = sol.u.get_str();
  std::ostringstream text;
  text << "D = " << sol.D << "\nt = " << sol.t.get_str() << "\nu = " << sol.u.get_str() << '\n';
  if (alpha) {
    const bool q = qualifies(sol, *alpha);
    j["alpha"] = alpha->str();
    j["qualifies"] = q;
    text << "qualifies(alpha = " << alpha->str() << ") = " << (q ? "true" : "false") << '\n';
  }
  emit(c, out, want_json(c, false) ? j.dump(2) + "\n" : text.str());
  return kOk;
}

unsigned single_A(const RunConfig& c) {
  if (c.A.size() != 1) throw UsageError("exactly one --A is required");
  if (c.A.front() == 0) throw UsageError("--A must be at least 1");
  return c.A.front();
}

ZarembaSieve load_or_build_sieve(const RunConfig& c, u64 N, unsigned A) {
  if (!c.cache_dir.empty() && fs::exists(sieve_cache_path(c, A))) {
    ZarembaSieve cached = read_sieve(sieve_cache_path(c, A));
    if (cached.A() != A) throw CacheCorrupt("sieve cache parameter A does not match its file name");
    if (cached.N() == N) return cached;
    if (cached.N() > N) {
      ZarembaSieve trimmed(N, A);
      for (u64 t = 2; t <= N; ++t)
        if (cached.contains(t)) trimmed.set(t);
      return trimmed;
    }
  }
  ZarembaSieve sieve = sieve_Z(N, A, {c.threads, false});
  if (!c.cache_dir.empty()) {
    fs::create_directories(c.cache_dir);
    write_sieve(sieve_cache_path(c, A), sieve);
  }
  return sieve;
}

int do_zaremba(const RunConfig& c, std::ostream& out) {
  const unsigned A = single_A(c);
  json j = header("zaremba");
  std::ostringstream text;
  if (c.t) {
    const auto w = is_in_Z(*c.t, A);
    j["t"] = *c.t;
    j["A"] = A;
    j["in_Z"] = w.has_value();
    text << "t = " << *c.t << ", A = " << A << ": ";
    if (w) {
      j["witness_a"] = w->a;
      j["witness_quotients"] = w->quotients;
      text << "in Z, witness " << w->a << '/' << w->t << " = [0; " << join(w->quotients, ", ") << "]\n";
    } else {
      text << "not in Z\n";
    }
  } else {
    const u64 N = need(c.N, "--t or --N");
    const ZarembaSieve sieve = load_or_build_sieve(c, N, A);
    const u64 count = sieve.count();
    j["N"] = N;
    j["A"] = A;
    j["count"] = count;
    j["density"] = N ? static_cast<double>(count) / static_cast<double>(N) : 0.0;
    text << "N = " << N << ", A = " << A << ": " << count << " members, density "
         << (N ? static_cast<double>(count) / static_cast<double>(N) : 0.0) << '\n';
    if (!c.csv.empty())
      emit_file(c.csv, [&](std::ostream& o) {
        o << "t,in_Z\n";
        for (u64 t = 1; t <= N; ++t) o << t << ',' << (sieve.contains(t) ? 1 : 0) << '\n';
      });
  }
  emit(c, out, want_json(c, false) ? j.dump(2) + "\n" : text.str());
  return kOk;
}

int do_rho(const RunConfig& c, std::ostream& out) {
  json j = header("rho");
  std::ostringstream text;
  text.precision(17);
  if (c.u) {
    const RootsOfUnity r = roots_of_unity(*c.u);
    j["u"] = r.u;
    j["rho"] = r.rho;
    j["residues"] = r.residues;
    text << "u = " << r.u << ", rho = " << r.rho << ", residues mod " << r.u * r.u << ": " << join(r.residues, " ")
         << '\n';
  } else if (!c.sweep.empty()) {
    std::ostringstream s;
    write_rho_sweep_csv(s, c.sweep, c.threads);
    if (!c.csv.empty()) emit_file(c.csv, [&](std::ostream& o) { o << s.str(); });
    else emit(c, out, s.str());
    return kOk;
  } else {
    const u64 X = need(c.X, "--u, --X or --sweep");
    const RhoSum s = rho_sum(X, c.threads);
    j["X"] = X;
    j["sum"] = s.value;
    j["reference"] = s.reference;
    text << "X = " << X << "\nsum rho(u)/u = " << s.value << "\nreference (4/pi^2)(log X)^2 = " << s.reference
         << "\nresidual = " << s.value - s.reference << '\n';
    if (c.alpha) {
      const Alpha alpha = parse_alpha(c.alpha);
      const RhoWeightedSum w = rho_weighted_sum(X, alpha, c.threads);
      j["alpha"] = alpha.str();
      j["weighted_sum"] = w.value;
      j["weighted_ratio"] = w.ratio ? json(*w.ratio) : json(nullptr);
      text << "sum rho(u) u^(1/(2 alpha) - 1) = " << w.value << '\n';
      if (w.ratio) text << "ratio to X^(1/(2 alpha)) log X = " << *w.ratio << '\n';
    }
    if (!c.csv.empty()) emit_file(c.csv, [&](std::ostream& o) { write_rho_table_csv(o, X); });
  }
  emit(c, out, want_json(c, false) ? j.dump(2) + "\n" : text.str());
  return kOk;
}

int do_sigma(const RunConfig& c, std::ostream& out) {
  const u64 n = need(c.n, "--n");
  if (n == 0) throw UsageError("--n must be positive");
  const mpq_class v = sigma_lower_bound(n);
  json j = header("sigma");
  j["n"] = n;
  j["value"] = v.get_str();
  j["approx"] = v.get_d();
  std::ostringstream text;
  text << "n = " << n << ": " << v.get_str() << " (" << v.get_d() << ")\n";
  emit(c, out, want_json(c, false) ? j.dump(2) + "\n" : text.str());
  return kOk;
}

int do_census(const RunConfig& c, std::ostream& out) {
  const u64 x = need(c.x, "--x");
  const Alpha alpha = parse_census_alpha(c.alpha);
  for (const unsigned A : c.A)
    if (A == 0) throw UsageError("--A must be at least 1");
  if (c.method != "direct" && c.method != "both" && c.method != "literal")
    throw UsageError("--method must be direct, both or literal");

  CensusOptions options;
  options.threads = c.threads;
  std::optional<PellTable> pell_cache;
  std::vector<ZarembaSieve> sieves;
  if (!c.cache_dir.empty()) {
    if (fs::exists(pell_cache_path(c))) pell_cache = read_pell_table(pell_cache_path(c));
    for (const unsigned A : c.A)
      if (fs::exists(sieve_cache_path(c, A))) sieves.push_back(read_sieve(sieve_cache_path(c, A)));
  }
  if (pell_cache) options.pell_cache = &*pell_cache;
  options.sieves = sieves;

  if (c.method == "literal") {
    json j = header("census");
    j["parameters"] = {{"x", x}, {"alpha", alpha.str()}, {"A", c.A}, {"method", "literal"}};
    j["count_literal"] = hooley_count_literal(x, alpha, std::nullopt, options);
    auto zs = json::array();
    for (const unsigned A : c.A) zs.push_back({{"A", A}, {"count_literal_with_Z", hooley_count_literal(x, alpha, A, options)}});
    j["with_Z"] = zs;
    j["reference"] = hooley_reference(x, alpha);
    emit(c, out, j.dump(2) + "\n");
    return kOk;
  }

  const CensusReport report = census_with_Z(x, alpha, c.A, options);
  std::optional<u64> parametrized;
  if (c.method == "both") parametrized = hooley_count_parametrized(x, alpha, options);
  emit(c, out, census_json(report, parametrized));
  if (!c.csv.empty()) emit_file(c.csv, [&](std::ostream& o) { write_census_csv(o, report); });
  return kOk;
}

int do_fourier(const RunConfig& c, std::ostream& out) {
  const u64 N = need(c.N, "--N");
  const unsigned A = single_A(c);
  if (c.K_max == 0 || !std::has_single_bit(c.K_max)) throw UsageError("--kmax must be a power of two");
  u64 M = c.grid;
  if (M == 0) M = std::bit_ceil(2 * N);
  const ThetaMeasure theta = theta_density(N, A, c.threads);
  const auto grid = theta_hat_grid(theta, M);
  const ArcMasses masses = minor_arc_mass(grid, N, c.q_max, c.K_max, c.threads);
  const ArcProfile profile = arc_decay_profile(grid, N, c.q_max, c.K_max, c.threads);

  double grid_mean = 0.0;
  for (const auto& z : grid) grid_mean += std::norm(z);
  grid_mean /= static_cast<double>(M);
  const double direct = theta.sum_of_squares();

  json j = header("fourier");
  j["parameters"] = {{"N", N}, {"A", A}, {"grid", M}, {"q_max", c.q_max}, {"K_max", c.K_max}};
  u64 support = 0;
  for (const u64 cnt : theta.counts) support += cnt ? 1 : 0;
  j["theta"] = {{"strings", theta.total}, {"support", support}, {"sum_of_squares", direct}};
  j["theta_hat_0"] = {{"re", grid[0].real()}, {"im", grid[0].imag()}};
  j["parseval"] = {{"grid_mean", grid_mean}, {"direct", direct}, {"relative_error", std::abs(grid_mean - direct) / direct}};
  j["masses"] = {{"major", masses.major}, {"minor", masses.minor}, {"total", masses.total()},
                 {"minor_fraction", masses.minor_fraction()}};
  auto rows = json::array();
  for (const auto& r : profile.rows)
    rows.push_back({{"q", r.q}, {"K", r.K}, {"max_abs", r.max_abs}, {"reference", r.reference}, {"samples", r.samples}});
  j["profile"] = {{"rows", rows}, {"slope", profile.slope}};
  emit(c, out, j.dump(2) + "\n");
  if (!c.csv.empty()) emit_file(c.csv, [&](std::ostream& o) { write_arc_profile_csv(o, profile); });
  if (!c.mass_csv.empty())
    emit_file(c.mass_csv, [&](std::ostream& o) { write_mass_table_csv(o, N, A, c.q_max, c.K_max, M, masses); });
  return kOk;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.threads == 0) throw UsageError("--threads must be at least 1");
    if (c.subcommand == "cf") return do_cf(c, out);
    if (c.subcommand == "pell") return do_pell(c, out);
    if (c.subcommand == "zaremba") return do_zaremba(c, out);
    if (c.subcommand == "rho") return do_rho(c, out);
    if (c.subcommand == "sigma") return do_sigma(c, out);
    if (c.subcommand == "census") return do_census(c, out);
    if (c.subcommand == "fourier") return do_fourier(c, out);
    throw UsageError("unknown subcommand '" + c.subcommand + "'");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CacheCorrupt& e) {
    err << "error: cache corruption: " << e.what() << '\n';
    return kCacheCorrupt;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pell units, bounded partial quotients and circle-method diagnostics"};
  app.footer(
      "Exit codes: 0 success, 2 usage error (unknown subcommand, malformed option or rational),\n"
      "3 domain error (square D, empty support), 4 cache corruption (bad magic or length).");
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--threads", c.threads, "worker threads");
    sub->add_option("--cache-dir", c.cache_dir, "directory holding PLT1/ZSV1 caches");
    sub->add_option("-o,--output", c.output, "write the main payload here instead of stdout");
    sub->add_option("--format", c.format, "text or json");
  };

  auto* cf = app.add_subcommand("cf", "continued fraction of a/t or of sqrt(D)");
  cf->add_option("--a", c.a);
  cf->add_option("--t", c.t);
  cf->add_option("--D", c.D);

  auto* pell = app.add_subcommand("pell", "fundamental solution of t^2 - D u^2 = 1");
  pell->add_option("--D", c.D);
  pell->add_option("--upto", c.upto, "table for every nonsquare D <= value");
  pell->add_option("--alpha", c.alpha, "also decide eps_D <= D^(1/2 + alpha); rational p/q");
  pell->add_option("--csv", c.csv);

  auto* zar = app.add_subcommand("zaremba", "membership in Z(A) or the sieve of Z(A) up to N");
  zar->add_option("--t", c.t);
  zar->add_option("--N", c.N);
  zar->add_option("--A", c.A)->required();
  zar->add_option("--csv", c.csv);

  auto* rho = app.add_subcommand("rho", "square roots of unity mod u^2 and their sums");
  rho->add_option("--u", c.u);
  rho->add_option("--X", c.X);
  rho->add_option("--alpha", c.alpha);
  rho->add_option("--sweep", c.sweep, "X values for an (X, value, reference) CSV")->delimiter(',');
  rho->add_option("--csv", c.csv);

  auto* sigma = app.add_subcommand("sigma", "singular-series lower bound at n");
  sigma->add_option("--n", c.n);

  auto* census = app.add_subcommand("census", "discriminant census with Z(A) flags");
  census->add_option("--x", c.x)->required();
  census->add_option("--alpha", c.alpha, "rational p/q in (0, 1/2]")->required();
  census->add_option("--A", c.A, "repeatable");
  census->add_option("--method", c.method, "direct, both or literal");
  census->add_option("--csv", c.csv);

  auto* fourier = app.add_subcommand("fourier", "arc decomposition of theta_hat");
  fourier->add_option("--N", c.N)->required();
  fourier->add_option("--A", c.A)->required();
  fourier->add_option("--grid", c.grid, "power of two >= 2N");
  fourier->add_option("--qmax", c.q_max);
  fourier->add_option("--kmax", c.K_max, "power of two");
  fourier->add_option("--csv", c.csv, "arc profile table");
  fourier->add_option("--mass-csv", c.mass_csv, "major/minor mass table");

  for (auto* sub : {cf, pell, zar, rho, sigma, census, fourier}) common(sub);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace zpell::cli

#include "zpell/pell.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>

#include "zpell/contfrac.hpp"
#include "zpell/errors.hpp"
#include "zpell/parallel.hpp"

namespace zpell {

namespace {

mpz_class to_mpz(u64 v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return z;
}

void require_nonsquare(u64 D) {
  if (D == 0) throw DomainError("Pell equation needs D > 0");
  if (is_square(D)) throw SquareDiscriminant(std::to_string(D) + " is a perfect square");
}

u64 parse_u64(std::string_view s) {
  u64 v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end)
    throw DomainError("malformed integer '" + std::string(s) + "'");
  return v;
}

// (A + B sqrt D)^n by repeated squaring.
void pow_surd(const mpz_class& t, const mpz_class& u, u64 D, u64 n, mpz_class& A, mpz_class& B) {
  const mpz_class d = to_mpz(D);
  mpz_class bt = t, bu = u;
  A = 1;
  B = 0;
  while (n > 0) {
    if (n & 1) {
      mpz_class na = A * bt + d * B * bu;
      mpz_class nb = A * bu + B * bt;
      A.swap(na);
      B.swap(nb);
    }
    n >>= 1;
    if (n > 0) {
      mpz_class na = bt * bt + d * bu * bu;
      mpz_class nb = 2 * bt * bu;
      bt.swap(na);
      bu.swap(nb);
    }
  }
}

double log_mpz(const mpz_class& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

bool qualifies_exact(const mpz_class& t, const mpz_class& u, u64 D, Alpha alpha) {
  // eps <= D^((den + 2 num)/(2 den))  <=>  eps^(2 den) <= D^(den + 2 num)
  mpz_class A, B;
  pow_surd(t, u, D, 2 * alpha.den, A, B);
  mpz_class C;
  mpz_pow_ui(C.get_mpz_t(), to_mpz(D).get_mpz_t(), alpha.den + 2 * alpha.num);
  if (A > C) return false;
  const mpz_class slack = C - A;
  return B * B * to_mpz(D) <= slack * slack;
}

}  // namespace

Alpha Alpha::make(u64 num, u64 den) {
  if (den == 0) throw DomainError("alpha: zero denominator");
  if (num == 0) throw DomainError("alpha must be positive");
  const u64 g = gcd(num, den);
  return Alpha{num / g, den / g};
}

Alpha Alpha::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return make(parse_u64(text), 1);
  return make(parse_u64(text.substr(0, slash)), parse_u64(text.substr(slash + 1)));
}

std::string Alpha::str() const { return std::to_string(num) + "/" + std::to_string(den); }

PellSolution fundamental_solution(u64 D) {
  require_nonsquare(D);
  const SurdCF cf = cf_of_sqrt(D);
  // convergents of [a0; period] up to the end of the first period
  mpz_class p_prev = 1, q_prev = 0, p = to_mpz(cf.a0), q = 1;
  for (std::size_t i = 0; i + 1 < cf.period.size(); ++i) {
    const mpz_class a = to_mpz(cf.period[i]);
    mpz_class np = a * p + p_prev;
    mpz_class nq = a * q + q_prev;
    p_prev.swap(p);
    q_prev.swap(q);
    p.swap(np);
    q.swap(nq);
  }
  PellSolution sol{D, p, q};
  // odd period: p^2 - D q^2 = -1, so square the unit
  if (cf.period.size() % 2 == 1) sol = square_unit(sol);
  return sol;
}

std::optional<PellSolution> fundamental_solution_bounded(u64 D, u64 t_limit) {
  require_nonsquare(D);
  if (t_limit >= (u64{1} << 62)) throw DomainError("fundamental_solution_bounded: limit too large");
  const u64 a0 = isqrt(D);
  u128 p_prev = 1, q_prev = 0, p = a0, q = 1;
  u64 P = 0, Q = 1, a = a0;
  std::size_t length = 0;
  while (true) {
    if (p > t_limit) return std::nullopt;
    P = a * Q - P;
    Q = (D - P * P) / Q;
    a = (a0 + P) / Q;
    ++length;
    if (a == 2 * a0) break;
    const u128 np = a * p + p_prev, nq = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = np;
    q = nq;
  }
  u128 t = p, u = q;
  if (length % 2 == 1) {
    t = p * p + D * q * q;
    u = 2 * p * q;
  }
  if (t > t_limit) return std::nullopt;
  return PellSolution{D, to_mpz(static_cast<u64>(t)), to_mpz(static_cast<u64>(u))};
}

std::optional<PellSolution> pell_brute_oracle(u64 D, u64 t_max) {
  require_nonsquare(D);
  if (t_max < 2) return std::nullopt;
  // r = t^2 mod D and s = (2t + 1) mod D, advanced without division
  u64 r = 4 % D, s = 5 % D;
  for (u64 t = 2;; ++t) {
    if (r == 1 % D) {
      const u128 m = static_cast<u128>(t) * t - 1;
      const u128 u2 = m / D;
      const u64 u = isqrt128(u2);
      if (static_cast<u128>(u) * u == u2 && u > 0) return PellSolution{D, to_mpz(t), to_mpz(u)};
    }
    if (t == t_max) break;
    r += s;
    if (r >= D) r -= D;
    s += 2;
    if (s >= D) s -= D;
    if (s >= D) s -= D;
  }
  return std::nullopt;
}

namespace {

// Decides by logarithms unless the two sides are within the guard band.
bool qualifies_impl(double log_eps, const mpz_class& t, const mpz_class& u, u64 D, Alpha alpha) {
  const double rhs = (0.5 + alpha.value()) * std::log(static_cast<double>(D));
  const double guard = 1e-9 * (1.0 + std::abs(rhs));
  if (log_eps < rhs - guard) return true;
  if (log_eps > rhs + guard) return false;
  return qualifies_exact(t, u, D, alpha);
}

}  // namespace

bool qualifies(const PellSolution& sol, Alpha alpha) {
  const double lt = log_mpz(sol.t);
  const double lu = log_mpz(sol.u);
  const double log_eps = lt + std::log1p(std::exp(lu + 0.5 * std::log(static_cast<double>(sol.D)) - lt));
  return qualifies_impl(log_eps, sol.t, sol.u, sol.D, alpha);
}

bool qualifies(u64 D, u64 t, u64 u, Alpha alpha) {
  const long double eps = static_cast<long double>(t) + static_cast<long double>(u) * std::sqrt(static_cast<long double>(D));
  return qualifies_impl(static_cast<double>(std::log(eps)), to_mpz(t), to_mpz(u), D, alpha);
}

bool unit_at_least_two_sqrt(const PellSolution& sol) {
  // (t + u sqrt D)^2 >= 4D  <=>  t^2 + D u^2 - 4D + 2 t u sqrt D >= 0
  const mpz_class d = to_mpz(sol.D);
  const mpz_class rational = sol.t * sol.t + d * sol.u * sol.u - 4 * d;
  if (rational >= 0) return true;
  const mpz_class lhs = 4 * sol.t * sol.t * sol.u * sol.u * d;
  return lhs >= rational * rational;
}

PellSolution square_unit(const PellSolution& sol) {
  const mpz_class d = to_mpz(sol.D);
  return PellSolution{sol.D, sol.t * sol.t + d * sol.u * sol.u, 2 * sol.t * sol.u};
}

bool satisfies_pell(const PellSolution& sol) {
  return sol.t * sol.t - to_mpz(sol.D) * sol.u * sol.u == 1;
}

const PellSolution* PellTable::find(u64 D) const {
  auto it = std::lower_bound(rows.begin(), rows.end(), D,
                             [](const PellSolution& s, u64 d) { return s.D < d; });
  return (it != rows.end() && it->D == D) ? &*it : nullptr;
}

PellTable build_pell_table(u64 x, unsigned threads) {
  PellTable table{x, {}};
  const auto blocks = fixed_blocks(2, std::max<u64>(x, 2), 512);
  std::vector<std::vector<PellSolution>> parts(blocks.size());
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    for (u64 D = blocks[b].lo; D <= blocks[b].hi && D <= x; ++D)
      if (!is_square(D)) parts[b].push_back(fundamental_solution(D));
  });
  for (auto& part : parts)
    std::move(part.begin(), part.end(), std::back_inserter(table.rows));
  return table;
}

namespace {

constexpr char kPellMagic[4] = {'P', 'L', 'T', '1'};

void put_le(std::ostream& out, u64 v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_mpz(std::ostream& out, const mpz_class& z) {
  const std::size_t len = (mpz_sizeinbase(z.get_mpz_t(), 2) + 7) / 8;
  std::vector<unsigned char> bytes(len == 0 ? 1 : len, 0);
  std::size_t written = 0;
  mpz_export(bytes.data(), &written, -1, 1, 0, 0, z.get_mpz_t());
  bytes.resize(std::max<std::size_t>(written, 1));
  put_le(out, bytes.size(), 4);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

class ByteReader {
 public:
  explicit ByteReader(std::vector<unsigned char> data) : data_(std::move(data)) {}

  u64 le(int bytes) {
    need(static_cast<std::size_t>(bytes));
    u64 v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<u64>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  mpz_class mpz() {
    const u64 len = le(4);
    need(len);
    mpz_class z;
    mpz_import(z.get_mpz_t(), len, -1, 1, 0, 0, data_.data() + pos_);
    pos_ += len;
    return z;
  }
  const unsigned char* take(std::size_t n) {
    need(n);
    const unsigned char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw CacheCorrupt("cache file truncated");
  }
  std::vector<unsigned char> data_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheCorrupt("cannot open cache file " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void write_pell_table(const std::filesystem::path& path, const PellTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kPellMagic, 4);
  put_le(out, table.x, 8);
  for (const auto& row : table.rows) {
    put_le(out, row.D, 8);
    put_mpz(out, row.t);
    put_mpz(out, row.u);
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

PellTable read_pell_table(const std::filesystem::path& path) {
  ByteReader in(slurp(path));
  const unsigned char* magic = in.take(4);
  if (!std::equal(magic, magic + 4, kPellMagic)) throw CacheCorrupt("bad PLT1 magic in " + path.string());
  PellTable table;
  table.x = in.le(8);
  u64 expected = 2;
  while (!in.done()) {
    while (expected <= table.x && is_square(expected)) ++expected;
    PellSolution row;
    row.D = in.le(8);
    if (row.D != expected || row.D > table.x) throw CacheCorrupt("PLT1 records are not dense in D");
    row.t = in.mpz();
    row.u = in.mpz();
    if (!satisfies_pell(row)) throw CacheCorrupt("PLT1 record fails t^2 - D u^2 = 1 at D = " + std::to_string(row.D));
    table.rows.push_back(std::move(row));
    ++expected;
  }
  while (expected <= table.x && is_square(expected)) ++expected;
  if (expected <= table.x) throw CacheCorrupt("PLT1 table ends before x");
  return table;
}

}  // namespace zpell

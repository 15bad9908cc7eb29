#include "zpell/zaremba.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "zpell/contfrac.hpp"
#include "zpell/errors.hpp"
#include "zpell/parallel.hpp"

namespace zpell {

namespace {

// 1 <= n <= m: n/m has an expansion over {1..A}. The canonical last quotient
// may reach A + 1 because [.., A + 1] = [.., A, 1].
bool bounded_fraction(u64 n, u64 m, unsigned A) {
  if (n == m) return n == 1;
  u64 x = m, y = n;
  while (true) {
    const u64 q = x / y, r = x % y;
    if (r == 0) return y == 1 && q <= u64{A} + 1;
    if (q > A) return false;
    x = y;
    y = r;
  }
}

// Depth-first search over quotient prefixes in increasing order of value.
// Once q_j^2 > t the remaining suffix is pinned down by
// t = m q_j + n q_{j-1}, n = t q_{j-1}^{-1} mod q_j, so at most one
// candidate needs testing per prefix.
class MemberSearch {
 public:
  MemberSearch(u64 t, unsigned A) : t_(t), A_(A) {}

  std::optional<u64> run() {
    if (visit(1, 0, 0, 1, 0)) return found_;
    return std::nullopt;
  }

 private:
  bool visit(u64 p_prev, u64 q_prev, u64 p, u64 q, unsigned depth) {
    if (depth > 0 && static_cast<u128>(q) * q > t_) return solve_suffix(p_prev, q_prev, p, q);
    const u64 a_max = std::min<u64>(A_, (t_ - q_prev) / q);
    if (a_max == 0) return false;
    if ((depth + 1) % 2 == 1) {
      for (u64 a = a_max; a >= 1; --a)
        if (visit(p, q, a * p + p_prev, a * q + q_prev, depth + 1)) return true;
    } else {
      for (u64 a = 1; a <= a_max; ++a)
        if (visit(p, q, a * p + p_prev, a * q + q_prev, depth + 1)) return true;
    }
    return false;
  }

  bool solve_suffix(u64 p_prev, u64 q_prev, u64 p, u64 q) {
    const u64 n = mul_mod(t_ % q, inverse_mod(q_prev % q, q), q);
    const u128 used = static_cast<u128>(n) * q_prev;
    if (used > t_) return false;
    const u64 rest = t_ - static_cast<u64>(used);
    if (rest % q != 0) return false;
    const u64 m = rest / q;
    const bool ok = (n == 0) ? (m == 1) : (n <= m && bounded_fraction(n, m, A_));
    if (!ok) return false;
    found_ = m * p + n * p_prev;
    return true;
  }

  u64 t_;
  unsigned A_;
  u64 found_ = 0;
};

// Prefix nodes (q_{j-1}, q_j) of the quotient-string tree.
struct Node {
  u64 q_prev;
  u64 q;
};

// Expands the tree breadth-first until there are enough subtrees to share
// out; visit(n) is called on every node created here.
template <class Visit>
std::vector<Node> frontier(u64 N, unsigned A, std::size_t target, Visit&& visit) {
  std::vector<Node> level{{0, 1}};
  while (!level.empty() && level.size() < target) {
    std::vector<Node> next;
    for (const Node& node : level)
      for (u64 a = 1; a <= A; ++a) {
        const u64 nq = a * node.q + node.q_prev;
        if (nq > N) break;
        visit(nq);
        next.push_back({node.q, nq});
      }
    level.swap(next);
  }
  return level;
}

template <class Visit>
void descend(Node root, u64 N, unsigned A, Visit&& visit) {
  std::vector<Node> stack{root};
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    for (u64 a = 1; a <= A; ++a) {
      const u64 nq = a * node.q + node.q_prev;
      if (nq > N) break;
      visit(nq);
      stack.push_back({node.q, nq});
    }
  }
}

// Runs visit over every continuant <= N, sharing subtrees among workers.
template <class Visit>
void walk_continuants(u64 N, unsigned A, unsigned threads, Visit&& visit) {
  const std::size_t target = threads <= 1 ? 1 : 64 * std::size_t{threads};
  const auto tasks = frontier(N, A, target, visit);
  parallel_for(tasks.size(), threads, [&](std::size_t i) { descend(tasks[i], N, A, visit); });
}

}  // namespace

std::optional<ZarembaWitness> is_in_Z(u64 t, unsigned A) {
  if (t < 2 || A == 0) return std::nullopt;
  const auto a = MemberSearch(t, A).run();
  if (!a) return std::nullopt;
  RationalCF cf = cf_of_rational(*a, t);
  if (cf.max_quotient() > A) cf = cf_alternate(cf);
  return ZarembaWitness{t, *a, std::move(cf.quotients)};
}

bool witness_valid(const ZarembaWitness& w, unsigned A) {
  if (w.t < 2 || w.a == 0 || w.a >= w.t || gcd(w.a, w.t) != 1 || w.quotients.empty()) return false;
  if (std::any_of(w.quotients.begin(), w.quotients.end(), [&](u64 q) { return q == 0 || q > A; }))
    return false;
  const Convergent c = reconstruct(w.quotients);
  return c.p == w.a && c.q == w.t;
}

ZarembaSieve::ZarembaSieve(u64 N, unsigned A) : N_(N), A_(A), bits_((N + 7) / 8, 0) {}

u64 ZarembaSieve::count() const {
  u64 c = 0;
  for (const auto b : bits_) c += static_cast<u64>(std::popcount(b));
  return c;
}

bool ZarembaSieve::subset_of(const ZarembaSieve& other) const {
  for (u64 t = 1; t <= N_; ++t)
    if (contains(t) && !other.contains(t)) return false;
  return true;
}

ZarembaSieve sieve_Z(u64 N, unsigned A, SieveOptions options) {
  ZarembaSieve sieve(N, A);
  if (N == 0 || A == 0) return sieve;
  auto& bytes = sieve.mutable_bytes();
  if (options.threads <= 1) {
    walk_continuants(N, A, 1, [&](u64 q) {
      if (q >= 2) bytes[(q - 1) >> 3] |= static_cast<std::uint8_t>(1u << ((q - 1) & 7));
    });
  } else {
    walk_continuants(N, A, options.threads, [&](u64 q) {
      if (q >= 2)
        std::atomic_ref<std::uint8_t>(bytes[(q - 1) >> 3]).fetch_or(static_cast<std::uint8_t>(1u << ((q - 1) & 7)));
    });
  }
  if (options.record_witnesses) {
    std::vector<u64> members;
    for (u64 t = 2; t <= N; ++t)
      if (sieve.contains(t)) members.push_back(t);
    std::vector<std::optional<ZarembaWitness>> found(members.size());
    parallel_for(members.size(), options.threads, [&](std::size_t i) { found[i] = is_in_Z(members[i], A); });
    for (auto& w : found)
      if (w) sieve.witnesses.emplace(w->t, std::move(*w));
  }
  return sieve;
}

namespace {

constexpr char kSieveMagic[4] = {'Z', 'S', 'V', '1'};

}  // namespace

void write_sieve(const std::filesystem::path& path, const ZarembaSieve& sieve) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kSieveMagic, 4);
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((sieve.A() >> (8 * i)) & 0xFF));
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((sieve.N() >> (8 * i)) & 0xFF));
  const auto bytes = sieve.bytes();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ZarembaSieve read_sieve(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheCorrupt("cannot open cache file " + path.string());
  const std::vector<unsigned char> data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (data.size() < 16 || !std::equal(data.begin(), data.begin() + 4, kSieveMagic))
    throw CacheCorrupt("bad ZSV1 header in " + path.string());
  u64 A = 0, N = 0;
  for (int i = 0; i < 4; ++i) A |= static_cast<u64>(data[4 + i]) << (8 * i);
  for (int i = 0; i < 8; ++i) N |= static_cast<u64>(data[8 + i]) << (8 * i);
  if (A == 0 || N > (u64{1} << 40) || data.size() != 16 + (N + 7) / 8)
    throw CacheCorrupt("ZSV1 length does not match N in " + path.string());
  ZarembaSieve sieve(N, static_cast<unsigned>(A));
  std::copy(data.begin() + 16, data.end(), sieve.mutable_bytes().begin());
  // bits past N and the bit for t = 1 are never set by a valid writer
  if (N % 8 != 0 && (sieve.bytes().back() >> (N % 8)) != 0) throw CacheCorrupt("ZSV1 padding bits set");
  if (N >= 1 && sieve.contains(1)) throw CacheCorrupt("ZSV1 marks t = 1");
  return sieve;
}

double ThetaMeasure::sum_of_squares() const {
  double s = 0.0;
  for (const double w : weights) s += w * w;
  return s;
}

ThetaMeasure theta_density(u64 N, unsigned A, unsigned threads) {
  ThetaMeasure m;
  m.N = N;
  m.A = A;
  m.counts.assign(N + 1, 0);
  const u64 lo = N / 2;  // window is (N/2, N]
  if (N >= 2 && A >= 1) {
    if (threads <= 1) {
      walk_continuants(N, A, 1, [&](u64 q) {
        if (q > lo && q >= 2) ++m.counts[q];
      });
    } else {
      walk_continuants(N, A, threads, [&](u64 q) {
        if (q > lo && q >= 2) std::atomic_ref<u64>(m.counts[q]).fetch_add(1, std::memory_order_relaxed);
      });
    }
  }
  m.total = std::accumulate(m.counts.begin(), m.counts.end(), u64{0});
  if (m.total == 0)
    throw EmptySupport("theta_density: no continuant in (" + std::to_string(lo) + ", " + std::to_string(N) + "]");
  m.weights.assign(N + 1, 0.0);
  for (u64 n = 0; n <= N; ++n)
    m.weights[n] = static_cast<double>(m.counts[n]) / static_cast<double>(m.total);
  return m;
}

}  // namespace zpell

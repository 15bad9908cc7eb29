#include "zpell/singular.hpp"

#include "zpell/errors.hpp"

namespace zpell {

mpq_class sigma_lower_bound(u64 n) {
  if (n == 0) throw DomainError("sigma_lower_bound: n must be positive");
  mpz_class num = 1, den = 1;
  for (const u64 p : distinct_primes(n)) {
    const mpz_class P(static_cast<unsigned long>(p));
    num *= P * P * P;
    den *= (P - 1) * (P + 1) * (P + 1);
  }
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

}  // namespace zpell

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace qtwist {

/// n = prod p^e, primes strictly increasing.
struct FactoredInteger {
    std::uint64_t n = 1;
    std::vector<std::pair<std::uint64_t, unsigned>> factors;

    bool operator==(const FactoredInteger&) const = default;
};

/// Smallest-prime-factor table on [0, bound].
class Sieve {
public:
    explicit Sieve(std::uint32_t bound);

    std::uint32_t bound() const noexcept { return bound_; }
    bool is_prime(std::uint32_t n) const { return n >= 2 && spf_[n] == n; }
    std::uint32_t smallest_factor(std::uint32_t n) const { return spf_[n]; }
    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }

    /// Primes p <= limit (limit clamped to bound).
    std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) const;

    /// Factor n <= bound by repeated smallest-factor lookup.
    FactoredInteger factor_small(std::uint32_t n) const;

private:
    std::uint32_t bound_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

inline constexpr std::uint32_t kDefaultSieveBound = 4'000'000;

/// Process-wide sieve covering at least `bound`. Returned references stay
/// valid for the life of the process; the sieve is never mutated once built.
const Sieve& shared_sieve(std::uint32_t bound = kDefaultSieveBound);

bool is_prime(std::uint64_t n);

/// Complete factorization of 1 <= n < 2^64.
FactoredInteger factorize(std::uint64_t n);

/// Kronecker symbol (d/n), full extension to n <= 0 and even n.
int kronecker(std::int64_t d, std::int64_t n);

int moebius(std::uint64_t n);
bool is_squarefree(std::uint64_t n);

/// Fundamental discriminant: d = 1 mod 4 squarefree, or d = 4m with
/// m = 2,3 mod 4 squarefree. d = 1 counts (trivial character).
bool is_fundamental_discriminant(std::int64_t d);

std::uint64_t euler_phi(std::uint64_t n);
std::uint64_t divisor_count(std::uint64_t n);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// Distinct primes dividing n, increasing.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

/// Sorted residues { v^2 mod m : gcd(v, m) = 1 }.
std::vector<std::uint64_t> unit_square_classes(std::uint64_t m);

/// Smallest C with d(n) <= C n^eps for all n >= 1, i.e.
/// prod_p max_a (a+1) / p^(eps a).
double divisor_bound_constant(double eps);

}  // namespace qtwist

#include "qtwist/arith.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>

#include "qtwist/errors.hpp"

namespace qtwist {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool miller_rabin(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These bases are deterministic for n < 3.3e24.
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Brent's variant of Pollard rho; n odd composite.
u64 pollard_brent(u64 n) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ n);
    while (true) {
        const u64 c = rng() % (n - 1) + 1;
        u64 y = rng() % n;
        const u64 m = 128;
        u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            }
            r <<= 1;
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (miller_rabin(n)) {
        out.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

constexpr std::uint32_t kTrialBound = 1'000'000;

}  // namespace

Sieve::Sieve(std::uint32_t bound) : bound_(std::max<std::uint32_t>(bound, 2)), spf_(bound_ + 1, 0) {
    for (std::uint32_t i = 2; i <= bound_; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = i;
            primes_.push_back(i);
        }
        for (std::uint32_t p : primes_) {
            const u64 m = static_cast<u64>(p) * i;
            if (p > spf_[i] || m > bound_) break;
            spf_[m] = p;
        }
    }
    spf_[1] = 1;
}

std::vector<std::uint32_t> Sieve::primes_up_to(std::uint32_t limit) const {
    auto end = std::upper_bound(primes_.begin(), primes_.end(), limit);
    return {primes_.begin(), end};
}

FactoredInteger Sieve::factor_small(std::uint32_t n) const {
    if (n == 0) throw InvalidArgument("factor: n must be positive");
    if (n > bound_) throw InvalidArgument("factor_small: n exceeds sieve bound");
    FactoredInteger f;
    f.n = n;
    while (n > 1) {
        const std::uint32_t p = spf_[n];
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.factors.emplace_back(p, e);
    }
    return f;
}

const Sieve& shared_sieve(std::uint32_t bound) {
    static std::mutex mutex;
    static std::list<std::unique_ptr<Sieve>> sieves;
    std::lock_guard lock(mutex);
    if (sieves.empty() || sieves.back()->bound() < bound) {
        const std::uint32_t size = sieves.empty() ? std::max(bound, kTrialBound) : std::max(bound, 2 * sieves.back()->bound());
        sieves.push_back(std::make_unique<Sieve>(size));
    }
    return *sieves.back();
}

bool is_prime(std::uint64_t n) { return miller_rabin(n); }

FactoredInteger factorize(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("factorize: n must be positive");
    const Sieve& sieve = shared_sieve(kTrialBound);
    if (n <= sieve.bound()) return sieve.factor_small(static_cast<std::uint32_t>(n));

    FactoredInteger f;
    f.n = n;
    u64 rest = n;
    for (std::uint32_t p : sieve.primes_up_to(kTrialBound)) {
        if (static_cast<u64>(p) * p > rest) break;
        if (rest % p) continue;
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        f.factors.emplace_back(p, e);
    }
    if (rest > 1) {
        std::vector<u64> big;
        factor_rec(rest, big);
        std::sort(big.begin(), big.end());
        for (u64 p : big) {
            if (!f.factors.empty() && f.factors.back().first == p)
                ++f.factors.back().second;
            else
                f.factors.emplace_back(p, 1);
        }
    }
    return f;
}

int kronecker(std::int64_t d, std::int64_t n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    int result = 1;
    // (d/-1) = sign(d)
    u64 m;
    if (n < 0) {
        m = static_cast<u64>(-(n + 1)) + 1;
        if (d < 0) result = -result;
    } else {
        m = static_cast<u64>(n);
    }
    if ((m & 1) == 0) {
        if ((d & 1) == 0) return 0;
        int v = 0;
        while ((m & 1) == 0) {
            m >>= 1;
            ++v;
        }
        // (d/2) = +1 for d = +-1 mod 8, -1 for d = +-3 mod 8
        const std::int64_t r8 = ((d % 8) + 8) % 8;
        if ((v & 1) && (r8 == 3 || r8 == 5)) result = -result;
    }
    if (m == 1) return result;
    // Jacobi symbol (a/m), m odd positive.
    std::int64_t signed_a = d % static_cast<std::int64_t>(m);
    u64 a = static_cast<u64>(signed_a < 0 ? signed_a + static_cast<std::int64_t>(m) : signed_a);
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const u64 r = m & 7;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, m);
        if ((a & 3) == 3 && (m & 3) == 3) result = -result;
        a %= m;
    }
    return m == 1 ? result : 0;
}

int moebius(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("moebius: n must be positive");
    const auto f = factorize(n);
    for (const auto& [p, e] : f.factors)
        if (e > 1) return 0;
    return (f.factors.size() % 2) ? -1 : 1;
}

bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    const auto f = factorize(n);
    return std::all_of(f.factors.begin(), f.factors.end(), [](const auto& pe) { return pe.second == 1; });
}

bool is_fundamental_discriminant(std::int64_t d) {
    if (d == 0) return false;
    const u64 m = static_cast<u64>(d < 0 ? -d : d);
    const std::int64_t r4 = ((d % 4) + 4) % 4;
    if (r4 == 1) return is_squarefree(m);
    if (r4 != 0) return false;
    const std::int64_t q = d / 4;
    const std::int64_t q4 = ((q % 4) + 4) % 4;
    return (q4 == 2 || q4 == 3) && is_squarefree(m / 4);
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) return 0;
    u64 phi = n;
    for (const auto& [p, e] : factorize(n).factors) phi = phi / p * (p - 1);
    return phi;
}

std::uint64_t divisor_count(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("divisor_count: n must be positive");
    u64 count = 1;
    for (const auto& [p, e] : factorize(n).factors) count *= e + 1;
    return count;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    if (n == 0) return out;
    for (const auto& [p, e] : factorize(n).factors) out.push_back(p);
    return out;
}

std::vector<std::uint64_t> unit_square_classes(std::uint64_t m) {
    if (m == 0) throw InvalidArgument("unit_square_classes: modulus must be positive");
    if (m == 1) return {0};
    std::vector<char> seen(m, 0);
    for (u64 v = 1; v < m; ++v)
        if (std::gcd(v, m) == 1) seen[mulmod(v, v, m)] = 1;
    std::vector<std::uint64_t> out;
    for (u64 r = 0; r < m; ++r)
        if (seen[r]) out.push_back(r);
    return out;
}

double divisor_bound_constant(double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("divisor_bound_constant: eps must be positive");
    // Only primes with p^eps < 2 can contribute a factor above 1.
    const double limit = std::pow(2.0, 1.0 / eps);
    if (limit > 4.0e9) throw InvalidArgument("divisor_bound_constant: eps too small");
    const Sieve& sieve = shared_sieve(static_cast<std::uint32_t>(std::max(limit, 2.0)) + 1);
    double log_c = 0.0;
    for (std::uint32_t p : sieve.primes()) {
        if (p > limit) break;
        const double lp = eps * std::log(static_cast<double>(p));
        double best = 0.0;
        for (unsigned a = 1; a < 4096; ++a) {
            const double v = std::log(a + 1.0) - a * lp;
            if (v > best) best = v;
            else if (v < best - 1.0) break;
        }
        log_c += best;
    }
    return std::exp(log_c);
}

}  // namespace qtwist

// Exact tau(n) through Delta = q prod (1 - q^n)^24 = q (eta^3 / q^{1/8})^8,
// with eta^3 from Jacobi's identity and three squarings done by NTT modulo
// three 62-bit primes, recombined by Garner's algorithm.

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "qtwist/errors.hpp"
#include "qtwist/forms.hpp"

namespace qtwist {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

class Montgomery {
public:
    explicit Montgomery(u64 p) : p_(p) {
        u64 inv = p;  // p * inv = 1 mod 2^k, Newton doubling
        for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
        neg_inv_ = ~inv + 1;
        r2_ = static_cast<u64>((static_cast<u128>(1) << 64) % p);
        r2_ = static_cast<u64>(static_cast<u128>(r2_) * r2_ % p);
    }

    u64 modulus() const { return p_; }

    u64 reduce(u128 t) const {
        const u64 m = static_cast<u64>(t) * neg_inv_;
        const u64 r = static_cast<u64>((t + static_cast<u128>(m) * p_) >> 64);
        return r >= p_ ? r - p_ : r;
    }
    u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
    u64 to(u64 a) const { return mul(a % p_, r2_); }
    u64 from(u64 a) const { return reduce(a); }
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
    u64 pow(u64 base, u64 e) const {
        u64 result = to(1);
        while (e) {
            if (e & 1) result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }

private:
    u64 p_;
    u64 neg_inv_;
    u64 r2_;
};

struct NttPrime {
    u64 p;
    u64 generator;
};

// p = c * 2^40 + 1
constexpr std::array<NttPrime, 3> kPrimes{{
    {4611546380450660353ULL, 5},
    {4611524390218104833ULL, 3},
    {4611480409752993793ULL, 10},
}};

// In-place transform of Montgomery-form values, size a power of two.
void ntt(std::vector<u64>& a, bool inverse, const Montgomery& mont, u64 generator) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const u64 p = mont.modulus();
    const u64 g = mont.to(generator);
    std::vector<u64> twiddle;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 w = mont.pow(g, (p - 1) / len);
        if (inverse) w = mont.pow(w, p - 2);
        const std::size_t half = len / 2;
        twiddle.resize(half);
        twiddle[0] = mont.to(1);
        for (std::size_t k = 1; k < half; ++k) twiddle[k] = mont.mul(twiddle[k - 1], w);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const u64 u = a[i + k];
                const u64 v = mont.mul(a[i + k + half], twiddle[k]);
                a[i + k] = mont.add(u, v);
                a[i + k + half] = mont.sub(u, v);
            }
        }
    }
    if (inverse) {
        const u64 inv_n = mont.pow(mont.to(n), p - 2);
        for (auto& x : a) x = mont.mul(x, inv_n);
    }
}

// prod (1 - q^n)^24 mod p, exponents < order, as plain residues.
std::vector<u64> eta24_mod(std::size_t order, const NttPrime& prime) {
    const Montgomery mont(prime.p);
    const std::size_t size = std::bit_ceil(2 * order);
    std::vector<u64> a(size, 0);
    // eta^3 / q^{1/8} = sum_{m>=0} (-1)^m (2m+1) q^{m(m+1)/2}
    for (u64 m = 0; m * (m + 1) / 2 < order; ++m) {
        const u64 v = mont.to(2 * m + 1);
        a[m * (m + 1) / 2] = (m & 1) ? mont.sub(0, v) : v;
    }
    for (int squaring = 0; squaring < 3; ++squaring) {
        ntt(a, false, mont, prime.generator);
        for (auto& x : a) x = mont.mul(x, x);
        ntt(a, true, mont, prime.generator);
        std::fill(a.begin() + static_cast<std::ptrdiff_t>(order), a.end(), 0);
    }
    a.resize(order);
    for (auto& x : a) x = mont.from(x);
    return a;
}

}  // namespace

std::vector<BigInt> ramanujan_tau(std::uint64_t max_n) {
    if (max_n == 0) return {0};
    // |tau(n)| <= d(n) n^{11/2}; the CRT modulus ~2^186 covers n well past 10^9.
    if (max_n > 1'000'000'000ULL) throw InvalidArgument("ramanujan_tau: max_n too large");
    const std::size_t order = static_cast<std::size_t>(max_n);

    std::array<std::vector<u64>, 3> residues;
    for (std::size_t i = 0; i < kPrimes.size(); ++i) residues[i] = eta24_mod(order, kPrimes[i]);

    const u64 p0 = kPrimes[0].p, p1 = kPrimes[1].p, p2 = kPrimes[2].p;
    auto inv = [](u64 a, u64 m) {
        const Montgomery mont(m);
        return mont.from(mont.pow(mont.to(a), m - 2));
    };
    auto mulmod = [](u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); };
    const u64 inv_p0_mod_p1 = inv(p0 % p1, p1);
    const u64 inv_p0p1_mod_p2 = inv(mulmod(p0 % p2, p1 % p2, p2), p2);

    BigInt modulus = BigInt(p0);
    modulus *= p1;
    modulus *= p2;
    const BigInt half = modulus / 2;
    BigInt p0p1 = BigInt(p0);
    p0p1 *= p1;

    std::vector<BigInt> tau(max_n + 1);
    tau[0] = 0;
    for (std::size_t e = 0; e < order; ++e) {
        const u64 r0 = residues[0][e], r1 = residues[1][e], r2 = residues[2][e];
        // x = r0 + p0 * t1 + p0 p1 * t2
        const u64 t1 = mulmod((r1 + p1 - r0 % p1) % p1, inv_p0_mod_p1, p1);
        const u64 partial = (r0 % p2 + mulmod(p0 % p2, t1, p2)) % p2;
        const u64 t2 = mulmod((r2 + p2 - partial) % p2, inv_p0p1_mod_p2, p2);
        BigInt x = BigInt(t2) * p0p1;
        x += BigInt(t1) * BigInt(p0);
        x += BigInt(r0);
        if (x > half) x -= modulus;
        tau[e + 1] = std::move(x);
    }
    return tau;
}

}  // namespace qtwist

#include "qtwist/forms.hpp"

#include <cmath>
#include <sstream>

#include "qtwist/arith.hpp"
#include "qtwist/errors.hpp"

namespace qtwist {

namespace {

double to_double(const BigInt& x) { return mpz_get_d(x.get_mpz_t()); }

BigInt prime_power_coefficient(const BigInt& ap, std::uint64_t p, unsigned e, std::uint64_t level, unsigned half_weight) {
    const bool good = level % p != 0;
    BigInt pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), p, 2 * half_weight - 1);
    BigInt prev = 1, cur = ap;
    for (unsigned r = 1; r < e; ++r) {
        BigInt next = ap * cur;
        if (good) next -= pw * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return e == 0 ? BigInt(1) : cur;
}

}  // namespace

Eigenform::Eigenform(std::uint64_t level, unsigned half_weight, int root_number, std::string source,
                     std::vector<BigInt> coeffs)
    : level_(level), half_weight_(half_weight), root_number_(root_number), source_(std::move(source)), coeffs_(std::move(coeffs)) {
    if (level_ == 0) throw InvalidArgument("Eigenform: level must be positive");
    if (half_weight_ == 0) throw InvalidArgument("Eigenform: weight must be a positive even integer");
    if (root_number_ != 1 && root_number_ != -1 && root_number_ != 0)
        throw InvalidArgument("Eigenform: root number must be +1, -1 or 0 (undetermined)");
    if (coeffs_.size() < 2) throw InvalidArgument("Eigenform: empty coefficient table");
    if (coeffs_[1] != 1) throw InvalidArgument("Eigenform: a_1 must be 1 (normalized eigenform)");
    coeffs_[0] = 0;

    const std::size_t size = coeffs_.size();
    lambda_.assign(size, 0.0);
    weights_.assign(size, 0.0);
    const double k = half_weight_;
    for (std::size_t n = 1; n < size; ++n) {
        const double a = to_double(coeffs_[n]);
        const double dn = static_cast<double>(n);
        weights_[n] = a / std::pow(dn, k);
        lambda_[n] = weights_[n] * std::sqrt(dn);
    }
}

BigInt Eigenform::coefficient(std::uint64_t n) const {
    if (n == 0) throw InvalidArgument("coefficient: n must be positive");
    if (n <= max_n()) return coeffs_[n];
    BigInt result = 1;
    for (const auto& [p, e] : factorize(n).factors) {
        if (p > max_n()) {
            std::ostringstream msg;
            msg << "coefficient a_" << n << " needs a_" << p << " beyond table size " << max_n();
            throw NumericGuardError(msg.str(), p);
        }
        std::uint64_t pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= p;
        if (pe <= max_n())
            result *= coeffs_[pe];
        else
            result *= prime_power_coefficient(coeffs_[p], p, e, level_, half_weight_);
    }
    return result;
}

double Eigenform::weight_at(std::uint64_t n) const {
    if (n <= max_n()) return weights_.at(n);
    return to_double(coefficient(n)) / std::pow(static_cast<double>(n), static_cast<double>(half_weight_));
}

Eigenform Eigenform::truncated(std::uint64_t max_n) const {
    if (max_n == 0 || max_n > this->max_n()) throw InvalidArgument("truncated: size out of range");
    std::vector<BigInt> head(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(max_n + 1));
    return Eigenform(level_, half_weight_, root_number_, source_, std::move(head));
}

std::vector<BigInt> hecke_extend(const std::map<std::uint64_t, BigInt>& prime_values, std::uint64_t level,
                                 unsigned half_weight, std::uint64_t max_n) {
    if (level == 0 || half_weight == 0) throw InvalidArgument("hecke_extend: level and weight must be positive");
    if (max_n == 0) throw InvalidArgument("hecke_extend: max_n must be positive");
    if (max_n > 0xFFFFFFF0ULL) throw InvalidArgument("hecke_extend: max_n too large");
    const Sieve& sieve = shared_sieve(static_cast<std::uint32_t>(max_n));

    std::vector<BigInt> a(max_n + 1);
    a[1] = 1;
    for (std::uint64_t n = 2; n <= max_n; ++n) {
        const std::uint64_t p = sieve.smallest_factor(static_cast<std::uint32_t>(n));
        std::uint64_t rest = n, pe = 1;
        while (rest % p == 0) {
            rest /= p;
            pe *= p;
        }
        if (rest != 1) {
            mpz_mul(a[n].get_mpz_t(), a[pe].get_mpz_t(), a[rest].get_mpz_t());
            continue;
        }
        if (pe == p) {
            const auto it = prime_values.find(p);
            if (it == prime_values.end()) {
                std::ostringstream msg;
                msg << "hecke_extend: missing prime data for p = " << p;
                throw NumericGuardError(msg.str(), p);
            }
            a[n] = it->second;
            continue;
        }
        a[n] = a[p] * a[n / p];
        if (level % p != 0) {
            BigInt pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), p, 2 * half_weight - 1);
            a[n] -= pw * a[n / p / p];
        }
    }
    return a;
}

Eigenform hecke_extend_form(const std::map<std::uint64_t, BigInt>& prime_values, std::uint64_t level,
                            unsigned half_weight, int root_number, std::string source, std::uint64_t max_n) {
    return Eigenform(level, half_weight, root_number, std::move(source), hecke_extend(prime_values, level, half_weight, max_n));
}

Eigenform delta_coefficients(std::uint64_t max_n, std::uint64_t cap) {
    if (max_n == 0) throw InvalidArgument("delta_coefficients: max_n must be positive");
    if (max_n > cap) {
        std::ostringstream msg;
        msg << "delta_coefficients: max_n = " << max_n << " exceeds the configured cap " << cap;
        throw InvalidArgument(msg.str());
    }
    const auto tau = ramanujan_tau(max_n);
    std::map<std::uint64_t, BigInt> primes;
    const Sieve& sieve = shared_sieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(max_n, 2)));
    for (std::uint32_t p : sieve.primes_up_to(static_cast<std::uint32_t>(max_n))) primes.emplace_hint(primes.end(), p, tau[p]);
    // Level 1: Lambda(s) = (-1)^k Lambda(12 - s) with k = 6.
    return hecke_extend_form(primes, 1, 6, 1, "delta", max_n);
}

std::int64_t level32_ap(std::uint64_t p) {
    if (!is_prime(p)) {
        std::ostringstream msg;
        msg << "level32_ap: " << p << " is not prime";
        throw InvalidArgument(msg.str());
    }
    if (p == 2 || p % 4 == 3) return 0;
    // x^2 = -1 mod p from a quadratic non-residue, then Cornacchia.
    using u128 = unsigned __int128;
    auto powmod = [p](std::uint64_t b, std::uint64_t e) {
        std::uint64_t r = 1;
        b %= p;
        while (e) {
            if (e & 1) r = static_cast<std::uint64_t>(static_cast<u128>(r) * b % p);
            b = static_cast<std::uint64_t>(static_cast<u128>(b) * b % p);
            e >>= 1;
        }
        return r;
    };
    std::uint64_t c = 2;
    while (kronecker(static_cast<std::int64_t>(c), static_cast<std::int64_t>(p)) != -1) ++c;
    std::uint64_t x = powmod(c, (p - 1) / 4);
    std::uint64_t r0 = p, r1 = x > p / 2 ? p - x : x;
    while (static_cast<u128>(r1) * r1 > p) {
        const std::uint64_t r2 = r0 % r1;
        r0 = r1;
        r1 = r2;
    }
    std::int64_t a = static_cast<std::int64_t>(r1);
    std::int64_t b = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(p - r1 * r1))));
    while (static_cast<std::uint64_t>(b * b) > p - r1 * r1) --b;
    while (static_cast<std::uint64_t>((b + 1) * (b + 1)) <= p - r1 * r1) ++b;
    if (static_cast<std::uint64_t>(a * a + b * b) != p) throw std::logic_error("level32_ap: two-squares decomposition failed");
    if (a % 2 == 0) std::swap(a, b);
    // a odd, b even; sign of a fixed by a + b = 1 mod 4.
    if ((((a + b) % 4) + 4) % 4 != 1) a = -a;
    return 2 * a;
}

std::int64_t level32_ap_by_point_count(std::uint64_t p) {
    if (!is_prime(p)) throw InvalidArgument("level32_ap_by_point_count: p must be prime");
    if (p == 2) {
        // affine points (0,0), (1,0)
        return static_cast<std::int64_t>(p + 1) - 3;
    }
    std::int64_t sum = 0;
    const auto sp = static_cast<std::int64_t>(p);
    for (std::int64_t x = 0; x < sp; ++x) {
        const std::int64_t rhs = ((x * x % sp) * x - x) % sp;
        sum += kronecker(rhs, sp);
    }
    // #E = p + 1 + sum, a_p = p + 1 - #E
    return -sum;
}

Eigenform level32_form(std::uint64_t max_n, std::uint64_t cap) {
    if (max_n == 0) throw InvalidArgument("level32_form: max_n must be positive");
    if (max_n > cap) {
        std::ostringstream msg;
        msg << "level32_form: max_n = " << max_n << " exceeds the configured cap " << cap;
        throw InvalidArgument(msg.str());
    }
    std::map<std::uint64_t, BigInt> primes;
    const Sieve& sieve = shared_sieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(max_n, 2)));
    for (std::uint32_t p : sieve.primes_up_to(static_cast<std::uint32_t>(max_n)))
        primes.emplace_hint(primes.end(), p, BigInt(static_cast<long>(level32_ap(p))));
    // y^2 = x^3 - x has analytic rank 0: w = +1.
    return hecke_extend_form(primes, 32, 1, 1, "x32", max_n);
}

}  // namespace qtwist

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qtwist/qseries.hpp"

namespace qtwist {

/// Normalized Hecke eigenform of level N, weight 2k, trivial nebentypus,
/// carried as an exact coefficient table a_1..a_M plus the floating tables
/// used by the L-value sums:
///   lambda(n)  = a_n / n^{(2k-1)/2}
///   weight(n)  = a_n / n^k = lambda(n) / sqrt(n)
class Eigenform {
public:
    Eigenform(std::uint64_t level, unsigned half_weight, int root_number, std::string source, std::vector<BigInt> coeffs);

    std::uint64_t level() const noexcept { return level_; }
    unsigned half_weight() const noexcept { return half_weight_; }
    unsigned weight() const noexcept { return 2 * half_weight_; }
    /// Sign w of the functional equation of L(s, f).
    int root_number() const noexcept { return root_number_; }
    const std::string& source() const noexcept { return source_; }
    std::uint64_t max_n() const noexcept { return coeffs_.size() - 1; }

    /// Exact table, index 0 holds 0.
    const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }
    const std::vector<double>& lambda() const noexcept { return lambda_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// a_n for any n whose prime factors lie in the table; past max_n the value
    /// is rebuilt from prime-power data through the Hecke recursion.
    BigInt coefficient(std::uint64_t n) const;
    /// a_n / n^k, same coverage as coefficient().
    double weight_at(std::uint64_t n) const;

    /// Copy with only the first max_n coefficients.
    Eigenform truncated(std::uint64_t max_n) const;

private:
    std::uint64_t level_;
    unsigned half_weight_;
    int root_number_;
    std::string source_;
    std::vector<BigInt> coeffs_;
    std::vector<double> lambda_;
    std::vector<double> weights_;
};

/// tau(n) for 0 <= n <= max_n (tau(0) = 0), exact. Computed from Jacobi's
/// eta^3 series raised to the 8th power by number-theoretic transforms over
/// three 62-bit primes and CRT; independent of the pentagonal eta_quotient.
std::vector<BigInt> ramanujan_tau(std::uint64_t max_n);

inline constexpr std::uint64_t kDeltaDefaultCap = 2'000'000;
inline constexpr std::uint64_t kLevel32DefaultCap = 4'000'000;

/// Ramanujan Delta (N=1, k=6), Hecke-extended from tau(p).
Eigenform delta_coefficients(std::uint64_t max_n, std::uint64_t cap = kDeltaDefaultCap);

/// a_p of eta(4z)^2 eta(8z)^2 (y^2 = x^3 - x) by the two-squares rule.
std::int64_t level32_ap(std::uint64_t p);

/// a_p by counting points on y^2 = x^3 - x over F_p. O(p); oracle only.
std::int64_t level32_ap_by_point_count(std::uint64_t p);

/// The level-32 weight-2 newform, Hecke-extended from level32_ap.
Eigenform level32_form(std::uint64_t max_n, std::uint64_t cap = kLevel32DefaultCap);

/// Complete table from prime data via
///   a_{p^{r+1}} = a_p a_{p^r} - [p not | N] p^{2k-1} a_{p^{r-1}}
/// and multiplicativity. Every prime <= max_n must be present.
std::vector<BigInt> hecke_extend(const std::map<std::uint64_t, BigInt>& prime_values, std::uint64_t level,
                                 unsigned half_weight, std::uint64_t max_n);

Eigenform hecke_extend_form(const std::map<std::uint64_t, BigInt>& prime_values, std::uint64_t level,
                            unsigned half_weight, int root_number, std::string source, std::uint64_t max_n);

/// Coefficient file:
///   # level=<N> weight=<2k> maxn=<M> source=<tag>
///   <n>,<a_n>        for n = 1..M
void save_coefficients(const Eigenform& form, const std::filesystem::path& path);
void save_coefficients(const Eigenform& form, std::ostream& out);

/// The root number is not stored in the file; it is recovered from the
/// table by testing which sign makes the untwisted smoothed split Q-independent.
Eigenform load_coefficients(const std::filesystem::path& path);
Eigenform load_coefficients(std::istream& in);

}  // namespace qtwist

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

namespace qtwist {

using BigInt = mpz_class;

/// Truncated q-expansion with exact integer coefficients:
/// sum_{offset <= e < truncation_order} coeffs[e - offset] q^e.
class IntegerQSeries {
public:
    IntegerQSeries() = default;
    IntegerQSeries(std::uint64_t offset, std::vector<BigInt> coeffs, std::uint64_t truncation_order);

    std::uint64_t offset() const noexcept { return offset_; }
    std::uint64_t truncation_order() const noexcept { return order_; }
    const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }

    /// Coefficient of q^e; zero below the offset. Throws past the truncation order.
    BigInt coefficient(std::uint64_t e) const;

    /// Number of nonzero stored coefficients.
    std::size_t support_size() const;

    /// Exponents carrying a nonzero coefficient, ascending.
    std::vector<std::uint64_t> support() const;

    bool operator==(const IntegerQSeries& other) const;

private:
    std::uint64_t offset_ = 0;
    std::uint64_t order_ = 0;
    std::vector<BigInt> coeffs_;
};

/// Product truncated to the common range of validity. The sparser operand
/// drives the loop.
IntegerQSeries operator*(const IntegerQSeries& a, const IntegerQSeries& b);

/// prod_{n>=1} (1 - q^{t n}) = sum_m (-1)^m q^{t m(3m+1)/2}, exponents < order.
/// The q^{t/24} prefactor of eta(tz) is accounted for by eta_quotient.
IntegerQSeries eta_series(std::uint64_t scale, std::int64_t order);

/// theta(tz) = 1 + 2 sum_{n>=1} q^{t n^2}, exponents < order.
IntegerQSeries theta_series(std::uint64_t scale, std::int64_t order);

struct EtaFactor {
    std::uint64_t scale;
    unsigned power;
};

/// prod eta(t_i z)^{r_i} to exponents < order. Requires sum t_i r_i = 0 mod 24.
IntegerQSeries eta_quotient(std::span<const EtaFactor> factors, std::int64_t order);

}  // namespace qtwist

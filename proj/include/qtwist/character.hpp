#pragma once

#include <cstdint>
#include <vector>

namespace qtwist {

/// Real character n -> prod_i (d_i / n) built from Kronecker symbols.
/// Values are tabulated over one period when the period is at most
/// kMaxTabulatedPeriod; otherwise each value is a fresh symbol evaluation.
class RealCharacter {
public:
    static constexpr std::uint64_t kMaxTabulatedPeriod = 4'000'000;

    /// chi_d(n) = (d / n).
    static RealCharacter kronecker(std::int64_t d);

    /// Pointwise product.
    RealCharacter operator*(const RealCharacter& other) const;

    int operator()(std::uint64_t n) const;

    /// A period of n -> chi(n) on n >= 1 (not necessarily the minimal one).
    std::uint64_t period() const noexcept { return period_; }
    const std::vector<std::int64_t>& discriminants() const noexcept { return discriminants_; }
    bool tabulated() const noexcept { return !table_.empty(); }
    /// chi(r) for 0 <= r < period; empty when not tabulated.
    const std::vector<std::int8_t>& table() const noexcept { return table_; }

private:
    RealCharacter(std::vector<std::int64_t> discriminants, std::uint64_t period);
    int evaluate(std::uint64_t n) const;
    void tabulate();

    std::vector<std::int64_t> discriminants_;
    std::uint64_t period_;
    std::vector<std::int8_t> table_;
};

}  // namespace qtwist

#include "qtwist/character.hpp"

#include <numeric>

#include "qtwist/arith.hpp"
#include "qtwist/errors.hpp"

namespace qtwist {

namespace {

std::uint64_t kronecker_period(std::int64_t d) {
    const std::uint64_t m = static_cast<std::uint64_t>(d < 0 ? -d : d);
    const std::int64_t r4 = ((d % 4) + 4) % 4;
    return (r4 == 0 || r4 == 1) ? m : 4 * m;
}

}  // namespace

RealCharacter::RealCharacter(std::vector<std::int64_t> discriminants, std::uint64_t period)
    : discriminants_(std::move(discriminants)), period_(period) {
    if (period_ <= kMaxTabulatedPeriod) tabulate();
}

RealCharacter RealCharacter::kronecker(std::int64_t d) {
    if (d == 0) throw InvalidArgument("RealCharacter: discriminant must be nonzero");
    return RealCharacter({d}, kronecker_period(d));
}

RealCharacter RealCharacter::operator*(const RealCharacter& other) const {
    std::vector<std::int64_t> ds = discriminants_;
    ds.insert(ds.end(), other.discriminants_.begin(), other.discriminants_.end());
    return RealCharacter(std::move(ds), std::lcm(period_, other.period_));
}

int RealCharacter::evaluate(std::uint64_t n) const {
    int v = 1;
    for (std::int64_t d : discriminants_) {
        v *= qtwist::kronecker(d, static_cast<std::int64_t>(n));
        if (v == 0) break;
    }
    return v;
}

int RealCharacter::operator()(std::uint64_t n) const {
    if (!table_.empty()) return table_[n % period_];
    return evaluate(n);
}

void RealCharacter::tabulate() {
    table_.assign(period_, 0);
    table_[0] = static_cast<std::int8_t>(evaluate(0));
    if (period_ == 1) {
        // every n is 0 mod 1; chi(n) for n >= 1 is what matters
        table_[0] = static_cast<std::int8_t>(evaluate(1));
        return;
    }
    table_[1] = static_cast<std::int8_t>(evaluate(1));
    // Completely multiplicative in n: symbols only at primes.
    const Sieve& sieve = shared_sieve(static_cast<std::uint32_t>(period_));
    for (std::uint64_t r = 2; r < period_; ++r) {
        const std::uint32_t p = sieve.smallest_factor(static_cast<std::uint32_t>(r));
        table_[r] = (p == r) ? static_cast<std::int8_t>(evaluate(r)) : static_cast<std::int8_t>(table_[p] * table_[r / p]);
    }
}

}  // namespace qtwist

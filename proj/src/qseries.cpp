#include "qtwist/qseries.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qtwist/errors.hpp"

namespace qtwist {

IntegerQSeries::IntegerQSeries(std::uint64_t offset, std::vector<BigInt> coeffs, std::uint64_t truncation_order)
    : offset_(offset), order_(truncation_order), coeffs_(std::move(coeffs)) {
    const std::uint64_t width = order_ > offset_ ? order_ - offset_ : 0;
    if (coeffs_.size() > width) coeffs_.resize(width);
    if (coeffs_.size() < width) coeffs_.resize(width, 0);
}

BigInt IntegerQSeries::coefficient(std::uint64_t e) const {
    if (e >= order_) throw InvalidArgument("coefficient: exponent beyond truncation order");
    if (e < offset_) return 0;
    return coeffs_[e - offset_];
}

std::size_t IntegerQSeries::support_size() const {
    return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(), [](const BigInt& c) { return sgn(c) != 0; }));
}

std::vector<std::uint64_t> IntegerQSeries::support() const {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (sgn(coeffs_[i]) != 0) out.push_back(offset_ + i);
    return out;
}

bool IntegerQSeries::operator==(const IntegerQSeries& other) const {
    if (order_ != other.order_) return false;
    for (std::uint64_t e = std::min(offset_, other.offset_); e < order_; ++e)
        if (coefficient(e) != other.coefficient(e)) return false;
    return true;
}

IntegerQSeries operator*(const IntegerQSeries& a, const IntegerQSeries& b) {
    const bool a_sparser = a.support_size() <= b.support_size();
    const IntegerQSeries& sparse = a_sparser ? a : b;
    const IntegerQSeries& dense = a_sparser ? b : a;

    const std::uint64_t offset = a.offset() + b.offset();
    const std::uint64_t order = std::min(a.truncation_order() + b.offset(), b.truncation_order() + a.offset());
    std::vector<BigInt> out(order > offset ? order - offset : 0);
    const auto& dc = dense.coeffs();
    const auto& sc = sparse.coeffs();
    for (std::size_t j = 0; j < sc.size(); ++j) {
        const BigInt& s = sc[j];
        if (sgn(s) == 0) continue;
        // output index i + j, i over dense coefficients
        if (j >= out.size()) break;
        const std::size_t count = std::min(dc.size(), out.size() - j);
        if (s == 1) {
            for (std::size_t i = 0; i < count; ++i) out[i + j] += dc[i];
        } else if (s == -1) {
            for (std::size_t i = 0; i < count; ++i) out[i + j] -= dc[i];
        } else {
            for (std::size_t i = 0; i < count; ++i) mpz_addmul(out[i + j].get_mpz_t(), dc[i].get_mpz_t(), s.get_mpz_t());
        }
    }
    return IntegerQSeries(offset, std::move(out), order);
}

IntegerQSeries eta_series(std::uint64_t scale, std::int64_t order) {
    if (order <= 0) throw InvalidArgument("eta_series: order must be positive");
    if (scale == 0) throw InvalidArgument("eta_series: scale must be positive");
    const auto limit = static_cast<std::uint64_t>(order);
    std::vector<BigInt> coeffs(limit);
    // generalized pentagonal numbers m(3m-1)/2 and m(3m+1)/2
    coeffs[0] = 1;
    for (std::uint64_t m = 1;; ++m) {
        const std::uint64_t e1 = scale * (m * (3 * m - 1) / 2);
        const std::uint64_t e2 = scale * (m * (3 * m + 1) / 2);
        if (e1 >= limit) break;
        const int sign = (m & 1) ? -1 : 1;
        coeffs[e1] += sign;
        if (e2 < limit) coeffs[e2] += sign;
    }
    return IntegerQSeries(0, std::move(coeffs), limit);
}

IntegerQSeries theta_series(std::uint64_t scale, std::int64_t order) {
    if (order <= 0) throw InvalidArgument("theta_series: order must be positive");
    if (scale == 0) throw InvalidArgument("theta_series: scale must be positive");
    const auto limit = static_cast<std::uint64_t>(order);
    std::vector<BigInt> coeffs(limit);
    coeffs[0] = 1;
    for (std::uint64_t n = 1; scale * n * n < limit; ++n) coeffs[scale * n * n] += 2;
    return IntegerQSeries(0, std::move(coeffs), limit);
}

IntegerQSeries eta_quotient(std::span<const EtaFactor> factors, std::int64_t order) {
    if (order <= 0) throw InvalidArgument("eta_quotient: order must be positive");
    if (factors.empty()) throw InvalidArgument("eta_quotient: empty factor list");
    std::uint64_t weighted = 0;
    for (const auto& f : factors) {
        if (f.scale == 0 || f.power == 0) throw InvalidArgument("eta_quotient: scales and powers must be positive");
        weighted += f.scale * f.power;
    }
    if (weighted % 24 != 0) {
        std::ostringstream msg;
        msg << "eta_quotient: sum of scale*power = " << weighted << " is not divisible by 24 (non-integral q-offset)";
        throw InvalidArgument(msg.str());
    }
    const std::uint64_t offset = weighted / 24;
    const auto limit = static_cast<std::uint64_t>(order);
    if (offset >= limit) return IntegerQSeries(offset, {}, limit);
    const auto inner = static_cast<std::int64_t>(limit - offset);

    // Largest scale first: sparsest factors fold into the dense accumulator.
    std::vector<EtaFactor> sorted(factors.begin(), factors.end());
    std::sort(sorted.begin(), sorted.end(), [](const EtaFactor& x, const EtaFactor& y) { return x.scale > y.scale; });

    IntegerQSeries acc;
    bool first = true;
    for (const auto& f : sorted) {
        const IntegerQSeries factor = eta_series(f.scale, inner);
        for (unsigned r = 0; r < f.power; ++r) {
            if (first) {
                acc = factor;
                first = false;
            } else {
                acc = acc * factor;
            }
        }
    }
    return IntegerQSeries(offset, acc.coeffs(), limit);
}

}  // namespace qtwist

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtwist/character.hpp"
#include "qtwist/forms.hpp"
#include "qtwist/lfunc.hpp"
#include "qtwist/qseries.hpp"

namespace qtwist {

/// Half-integral weight form given as an eta-theta product.
struct HalfIntegralForm {
    std::string name;
    std::uint64_t level = 0;
    /// weight is weight_numerator / 2
    unsigned weight_numerator = 0;
    std::vector<EtaFactor> eta;
    std::vector<std::uint64_t> theta_scales;
    /// integral-weight form the coefficients are paired with (configuration record)
    std::string paired_form;
    IntegerQSeries series;

    std::uint64_t max_n() const noexcept { return series.truncation_order() - 1; }
    BigInt coefficient(std::uint64_t n) const { return series.coefficient(n); }
};

/// g = eta(8z) eta(16z) theta(2z), level 128, weight 3/2, coefficients for n < order.
HalfIntegralForm tunnell_g(std::uint64_t order);

/// n -> (-4 / n)^k (d / n). Requires d to be a fundamental discriminant.
RealCharacter composite_character(unsigned half_weight, std::int64_t d);

/// |fundamental discriminant| of the character above, i.e. its conductor.
std::uint64_t composite_conductor(unsigned half_weight, std::int64_t d);

/// One way of reading a_g(d)^2 = kappa L d^e: e is k or k - 1/2, and d is
/// either |d| or the signed discriminant.
struct RatioVariant {
    std::string name;
    double exponent = 0.0;
    bool signed_base = false;
};

std::vector<RatioVariant> ratio_variants(unsigned half_weight);

struct RatioRow {
    std::int64_t d = 0;
    /// |d| mod 8
    unsigned cls = 0;
    BigInt ag;
    double L = 0.0;
    double tail_bound = 0.0;
    /// conductor c used in Q = c sqrt(N)
    std::uint64_t conductor = 0;
    /// +1: L = 2 A(c sqrt N); -1: L = A(Q) - A(c^2 N / Q) = 0
    int root_number = 0;
    /// per variant, empty when the row is not usable
    std::vector<std::optional<double>> ratio;
};

struct ExcludedRow {
    std::int64_t d = 0;
    unsigned cls = 0;
    std::string reason;
    BigInt ag;
    double L = 0.0;
    double tail_bound = 0.0;
    /// for a_g(|d|) = 0: whether |L| is below the zero threshold
    std::optional<bool> vanishing_coherent;
};

struct ClassStats {
    unsigned cls = 0;
    std::uint64_t usable = 0;
    double mean = 0.0;
    /// standard deviation / |mean|
    double cv = 0.0;
    /// "verified", "not constant" or "inconclusive"
    std::string status;
};

struct VariantSummary {
    RatioVariant variant;
    std::vector<ClassStats> classes;
    /// every class with at least 3 usable d has cv below the tolerance
    bool constant = false;
};

struct WaldspurgerOptions {
    int threads = 0;
    std::optional<double> zero_threshold;
    /// split residual must stay below gate_factor x error budget
    double gate_factor = 100.0;
    double cv_tolerance = 1e-6;
};

struct RatioReport {
    std::string g_name;
    std::string f_name;
    std::uint64_t g_level = 0;
    std::uint64_t f_level = 0;
    unsigned half_weight = 0;
    std::uint64_t max_d = 0;
    double zero_threshold = 0.0;
    double cv_tolerance = 0.0;
    std::vector<RatioRow> rows;
    std::vector<ExcludedRow> excluded;
    std::vector<VariantSummary> variants;
    /// index into variants of the first constant variant
    std::optional<std::size_t> reported_variant;
    bool vanishing_coherent = true;
    bool inconclusive = false;
};

/// Fundamental discriminants d with |d| <= max_d, |d| odd (g only carries odd
/// exponents), sign fixed by d = 1 mod 4. Ascending |d|.
std::vector<std::int64_t> waldspurger_discriminants(std::uint64_t max_d);

/// Largest f coefficient index waldspurger_ratios may need.
std::uint64_t waldspurger_table_size(const Eigenform& f, std::uint64_t max_d, const TruncationPolicy& policy);

/// rho(d) = a_g(|d|)^2 / (L(k, f, composite) * base^e) grouped by |d| mod 8.
/// The twisted value is taken from the functional equation (conductor, sign)
/// that passes the split gate; conductors tried: |d|, then the character's.
RatioReport waldspurger_ratios(const HalfIntegralForm& g, const Eigenform& f, std::uint64_t max_d,
                               const TruncationPolicy& policy, const WaldspurgerOptions& options = {});

struct GapReport {
    std::uint64_t n_max = 0;
    /// i(n) for 0 <= n <= n_max (index 0 unused): number of consecutive zero
    /// coefficients a(n), a(n+1), ... ; 0 when a(n) != 0
    std::vector<std::uint32_t> gap;
    std::uint32_t max_gap = 0;
    std::uint64_t max_gap_at = 0;
    /// max i(n) / n^0.8 and where it occurs
    double max_ratio = 0.0;
    std::uint64_t max_ratio_at = 0;
    /// same with Serre's max{i : a(n+j) = 0, 0 <= j <= i} = run - 1
    double max_ratio_serre = 0.0;
    std::uint64_t max_ratio_serre_at = 0;
    /// every even n has i(n) >= 1 (only meaningful for series supported on odd n)
    bool even_gaps = false;
    /// (n, i(n)) for i(n) > 0
    std::vector<std::pair<std::uint64_t, std::uint32_t>> records;
};

/// Runs of zero coefficients for 1 <= n <= n_max. Needs coefficients to n_max
/// plus the end of the last run; a run reaching the truncation order is
/// reported up to the order (a lower bound).
GapReport gap_statistics(const IntegerQSeries& series, std::uint64_t n_max);

}  // namespace qtwist

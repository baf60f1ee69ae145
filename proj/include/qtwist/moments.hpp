#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qtwist/family.hpp"
#include "qtwist/forms.hpp"
#include "qtwist/lfunc.hpp"

namespace qtwist {

struct ConstantCN {
    double value = 0.0;
    /// number of unit-square classes mod 4N
    std::uint64_t gamma = 0;
};

/// C_N = 3 gamma(4N) / (pi^2 N) * prod_{p | 4N} (1 - p^-2)^-1.
ConstantCN constant_C_N(std::uint64_t level);

/// Which n = r j^2 enter B(x).
///   kLiteral: every r with all prime factors dividing 4N.
///   kCharacterAveraged: r restricted to those with chi_d(r) constant over the
///     family; for odd N this drops odd powers of 2 (d = 1 and d = 5 mod 8
///     are equally frequent, so their contributions average to zero).
/// The two agree for even N.
enum class BIndexConvention { kCharacterAveraged, kLiteral };

const char* to_string(BIndexConvention c);

struct BIndexTerm {
    std::uint64_t n = 0;
    std::uint64_t r = 0;
    std::uint64_t j = 0;
    /// prod_{p | j} (1 + 1/p)^-1
    double local_factor = 1.0;
};

/// All index terms with n <= n_max, ascending n.
std::vector<BIndexTerm> b_series_indices(std::uint64_t level, std::uint64_t n_max,
                                         BIndexConvention convention = BIndexConvention::kCharacterAveraged);

struct BValue {
    double x = 0.0;
    double value = 0.0;
    double tail_bound = 0.0;
    std::uint64_t terms = 0;
};

/// B(x) = sum_{n = r j^2} a_n / n^k prod_{p | j} (1 + 1/p)^-1 V(2 pi n / x).
BValue B_series(double x, const Eigenform& form, const TruncationPolicy& policy,
                BIndexConvention convention = BIndexConvention::kCharacterAveraged);

struct LfkEstimate {
    std::vector<double> x;
    std::vector<double> B;
    std::vector<double> B_tail;
    double L = 0.0;
    /// coefficient c in B(x) = L + c x^{-1/5}
    double c = 0.0;
    /// max_i |B_i - L - c x_i^{-1/5}| / |L|
    double fit_residual = 0.0;
    BIndexConvention convention = BIndexConvention::kCharacterAveraged;
};

inline constexpr double kDefaultLfkResidual = 1e-3;
inline constexpr std::uint64_t kBDecayFitPoints = 4;

/// Least-squares fit of B(x) = L + c x^{-1/5} over a grid of at least three
/// increasing points. Throws NumericGuardError when the relative fit residual
/// exceeds max_residual or L is indistinguishable from 0.
LfkEstimate L_f_value(const Eigenform& form, std::span<const double> grid, const TruncationPolicy& policy,
                      BIndexConvention convention = BIndexConvention::kCharacterAveraged,
                      double max_residual = kDefaultLfkResidual);

/// Slope of log |B(x_i) - L| against log x_i (least squares).
double fitted_decay_exponent(std::span<const double> x, std::span<const double> B, double L);

struct MomentOptions {
    /// 0: OpenMP default
    int threads = 0;
    /// absolute threshold for calling a value nonzero; default
    /// max(1e-8, 1e3 * largest tail bound in the window)
    std::optional<double> zero_threshold;
    /// filled in by the scan (d done, d total); may be called from any thread
    std::function<void(std::size_t, std::size_t)> progress;
};

/// L(k, f, chi_d) for each d, evaluated in parallel, returned in input order.
std::vector<LValueResult> evaluate_family(const Eigenform& form, std::span<const std::int64_t> ds,
                                          const TruncationPolicy& policy, const MomentOptions& options = {});

/// Exact rational sum of the values (independent of order and of threads).
mpq_class exact_sum(std::span<const LValueResult> records);
mpq_class exact_sum_of_squares(std::span<const LValueResult> records);

struct MomentReport {
    std::string form_id;
    std::uint64_t level = 0;
    unsigned half_weight = 0;
    int family_sign = 0;
    double X = 0.0;
    double h = 0.0;
    std::uint64_t count = 0;
    mpq_class S_exact;
    double S_f = 0.0;
    ConstantCN C_N;
    std::optional<double> L_f;
    std::optional<double> predicted;
    std::optional<double> ratio;
    std::uint64_t nonvanishing = 0;
    double zero_threshold = 0.0;
    double max_tail_bound = 0.0;
    /// window second moment sum |L|^2
    double second_moment = 0.0;
    /// h^2 / X^1.1
    double nonvanishing_reference = 0.0;
    /// max over d of |A(|d| sqrt N)| / (|d| sqrt N)^{1/2}
    double max_abel_ratio = 0.0;
    std::vector<std::string> warnings;
    std::vector<LValueResult> records;
};

/// S_f(X, h) over square-free family members with X <= |d| <= X + h. When
/// L_f is given the predicted main term C_N L_f h and the ratio are filled in.
MomentReport first_moment(const Eigenform& form, double X, double h, const TruncationPolicy& policy,
                          std::optional<double> L_f = std::nullopt, const MomentOptions& options = {});

struct SecondMomentReport {
    std::string form_id;
    double X = 0.0;
    std::uint64_t count = 0;
    double value = 0.0;
    /// value / X^1.1
    double normalized = 0.0;
    double max_tail_bound = 0.0;
    std::vector<LValueResult> records;
};

/// sum |L(k, f, chi_d)|^2 over square-free family members with |d| <= X.
SecondMomentReport second_moment(const Eigenform& form, double X, const TruncationPolicy& policy,
                                 const MomentOptions& options = {});

struct NonvanishingReport {
    double X = 0.0;
    double h = 0.0;
    std::uint64_t family_count = 0;
    std::uint64_t count = 0;
    double zero_threshold = 0.0;
    double max_tail_bound = 0.0;
    /// h^2 / X^1.1
    double reference = 0.0;
};

/// Number of d in the window with |L| > threshold. Rejects a threshold that
/// does not exceed the largest tail bound (truncation could fake a zero).
NonvanishingReport nonvanishing_count(const Eigenform& form, double X, double h, const TruncationPolicy& policy,
                                      const MomentOptions& options = {});

/// Default zero threshold for a window whose largest tail bound is max_tail.
double default_zero_threshold(double max_tail);

/// Largest coefficient index a first-moment scan of [X, X + h] needs.
std::uint64_t required_table_size_for_window(const Eigenform& form, double X, double h, const TruncationPolicy& policy);
std::uint64_t required_table_size_for_window(std::uint64_t level, unsigned half_weight, double X, double h,
                                             const TruncationPolicy& policy);

}  // namespace qtwist

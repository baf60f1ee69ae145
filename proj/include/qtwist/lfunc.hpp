#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qtwist/character.hpp"
#include "qtwist/forms.hpp"

namespace qtwist {

/// V(x) = (1 + x + ... + x^{k-1}/(k-1)!) e^{-x}, the smoothing kernel.
double kernel_V(double x, unsigned k);

/// Integral of V over [x, infinity) = e^{-x} sum_{i<k} (k - i) x^i / i!.
double kernel_tail_integral(double x, unsigned k);

struct TruncationPolicy {
    double tail_target = 1e-12;
    std::uint64_t hard_cap = 50'000'000;
};

/// Exponent and constant in d(n) <= C n^eps used for certified tails.
inline constexpr double kDivisorEps = 0.1;
/// C for kDivisorEps, computed exactly (about 4.17e10).
double divisor_bound_C();

/// Certified bound for sum_{n > n0} d(n) n^{-1/2} V(2 pi n / Q):
///   C max(n0,1)^{eps - 1/2} (Q / 2 pi) W(2 pi n0 / Q),
/// W the kernel tail integral. Valid because V is decreasing.
double certified_tail(double Q, std::uint64_t n0, unsigned k);

/// Smallest n_max = ceil(Q T / 2 pi) over the grid T = 0.25, 0.5, ...
/// whose certified tail meets the policy target. Throws NumericGuardError
/// carrying the required n_max when it exceeds hard_cap.
std::uint64_t truncation_cutoff(double Q, const TruncationPolicy& policy, unsigned k);

/// A smoothed partial sum with its error budget.
struct PartialSum {
    double value = 0.0;
    /// certified truncation tail plus a floating-point rounding bound
    double tail_bound = 0.0;
    std::uint64_t terms = 0;
};

/// A(Q, chi) = sum_n a_n n^{-k} chi(n) V(2 pi n / Q), truncated per policy.
PartialSum A_sum(double Q, const RealCharacter& chi, const Eigenform& form, const TruncationPolicy& policy);
PartialSum A_sum(double Q, std::int64_t d, const Eigenform& form, const TruncationPolicy& policy);

struct LValueResult {
    std::int64_t d = 0;
    std::string form_id;
    double value = 0.0;
    double tail_bound = 0.0;
    std::uint64_t terms = 0;
    std::optional<double> q_split_residual;
};

/// L(k, f, chi_d) = 2 A(|d| sqrt(N), chi_d) for square-free d in the form's family.
LValueResult central_L(const Eigenform& form, std::int64_t d, const TruncationPolicy& policy);

struct QSplitCheck {
    double residual = 0.0;
    /// sum of the error budgets of the three sums involved
    double bound = 0.0;
};

/// A(Q) + A(d^2 N / Q) - L(k, f, chi_d).
QSplitCheck q_split_check(const Eigenform& form, std::int64_t d, double Q, const TruncationPolicy& policy);
double q_split_residual(const Eigenform& form, std::int64_t d, double Q, const TruncationPolicy& policy);

/// Twist by an arbitrary real character with (effective) conductor c:
/// value 2 A(c sqrt N), and the split at Q = c sqrt(N) / 2 is required to
/// agree within gate_factor times the error budget. Throws NumericGuardError
/// when it does not (the assumed functional equation is wrong for this twist).
LValueResult twisted_L_general(const Eigenform& form, const RealCharacter& chi, double conductor,
                               const TruncationPolicy& policy, double gate_factor = 100.0);

/// |A(Q) - A(c^2 N / Q)| at Q = c sqrt(N) / 2. For a twist with root number
/// -1 this is the central value itself (which then vanishes).
QSplitCheck antisymmetric_split(const Eigenform& form, const RealCharacter& chi, double conductor,
                                const TruncationPolicy& policy);

/// Largest coefficient index any of the above will touch for Q.
std::uint64_t required_table_size(double Q, const TruncationPolicy& policy, unsigned k);

/// Recover w in L = A(Q) + w A(N/Q) from the untwisted sums; 0 if neither
/// sign is consistent or the table is too short.
int detect_root_number(const Eigenform& form);

}  // namespace qtwist

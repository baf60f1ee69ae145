#include "qtwist/lfunc.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qtwist/arith.hpp"
#include "qtwist/errors.hpp"
#include "qtwist/family.hpp"

namespace qtwist {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;
constexpr double kTStep = 0.25;
constexpr std::uint64_t kTSteps = 8000;

// Neumaier's variant of compensated summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

void check_Q(double Q) {
    if (!(Q > 0.0) || !std::isfinite(Q)) throw InvalidArgument("Q must be a positive finite number");
}

}  // namespace

double kernel_V(double x, unsigned k) {
    if (!(x >= 0.0)) throw InvalidArgument("kernel_V: x must be nonnegative");
    if (k == 0) throw InvalidArgument("kernel_V: k must be positive");
    if (x < 1.0 && k > 1) {
        // 1 - e^{-x} sum_{j>=k} x^j / j!: keeps V monotone where it rounds to 1
        double term = 1.0;
        for (unsigned j = 1; j <= k; ++j) term *= x / j;
        double rest = 0.0;
        for (unsigned j = k + 1; term > 1e-18 * rest; ++j) {
            rest += term;
            term *= x / j;
        }
        return 1.0 - rest * std::exp(-x);
    }
    double poly = 0.0;
    for (unsigned i = k; i-- > 0;) poly = poly * x / (i + 1) + 1.0;
    // Horner on sum_{i<k} x^i / i! written as 1 + x/1 (1 + x/2 (1 + ...))
    return poly * std::exp(-x);
}

double kernel_tail_integral(double x, unsigned k) {
    if (!(x >= 0.0)) throw InvalidArgument("kernel_tail_integral: x must be nonnegative");
    double term = 1.0, total = 0.0;
    for (unsigned i = 0; i < k; ++i) {
        total += (k - i) * term;
        term *= x / (i + 1);
    }
    return total * std::exp(-x);
}

double divisor_bound_C() {
    static const double C = divisor_bound_constant(kDivisorEps);
    return C;
}

double certified_tail(double Q, std::uint64_t n0, unsigned k) {
    check_Q(Q);
    const double n = static_cast<double>(std::max<std::uint64_t>(n0, 1));
    return divisor_bound_C() * std::pow(n, kDivisorEps - 0.5) * (Q / kTwoPi) *
           kernel_tail_integral(kTwoPi * static_cast<double>(n0) / Q, k);
}

std::uint64_t truncation_cutoff(double Q, const TruncationPolicy& policy, unsigned k) {
    check_Q(Q);
    if (!(policy.tail_target > 0.0)) throw InvalidArgument("truncation policy: tail_target must be positive");
    auto cutoff_at = [&](std::uint64_t i) {
        const double T = kTStep * static_cast<double>(i);
        return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(Q * T / kTwoPi)));
    };
    auto ok = [&](std::uint64_t i) { return certified_tail(Q, cutoff_at(i), k) <= policy.tail_target; };
    if (!ok(kTSteps)) {
        std::ostringstream msg;
        msg << "truncation_cutoff: tail target " << policy.tail_target << " unreachable for Q = " << Q;
        throw NumericGuardError(msg.str(), cutoff_at(kTSteps));
    }
    // The certified tail is decreasing in T: bisect for the first grid point.
    std::uint64_t lo = 1, hi = kTSteps;
    if (ok(lo)) hi = lo;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    const std::uint64_t n_max = cutoff_at(hi);
    if (n_max > policy.hard_cap) {
        std::ostringstream msg;
        msg << "truncation_cutoff: Q = " << Q << " needs n_max = " << n_max << " terms, above hard_cap = " << policy.hard_cap;
        throw NumericGuardError(msg.str(), n_max);
    }
    return n_max;
}

std::uint64_t required_table_size(double Q, const TruncationPolicy& policy, unsigned k) {
    return truncation_cutoff(Q, policy, k);
}

PartialSum A_sum(double Q, const RealCharacter& chi, const Eigenform& form, const TruncationPolicy& policy) {
    check_Q(Q);
    const unsigned k = form.half_weight();
    const std::uint64_t n_max = truncation_cutoff(Q, policy, k);
    if (n_max > form.max_n()) {
        std::ostringstream msg;
        msg << "A_sum: Q = " << Q << " needs coefficients up to M = " << n_max << ", table has " << form.max_n();
        throw NumericGuardError(msg.str(), n_max);
    }

    const auto& w = form.weights();
    const double step = kTwoPi / Q;
    constexpr std::uint64_t kBlock = 64;
    std::array<double, kBlock> decay{};
    for (std::uint64_t j = 0; j < kBlock; ++j) decay[j] = std::exp(-step * static_cast<double>(j));
    std::array<double, 16> inv_factorial{};
    for (unsigned i = 0; i < 16 && i < k; ++i) inv_factorial[i] = i == 0 ? 1.0 : inv_factorial[i - 1] / i;

    const bool tabulated = chi.tabulated();
    const auto* table = tabulated ? chi.table().data() : nullptr;
    const std::uint64_t period = chi.period();
    std::uint64_t residue = 1 % period;

    CompensatedSum sum;
    double error_weight = 0.0;
    for (std::uint64_t base = 1; base <= n_max; base += kBlock) {
        const double e0 = std::exp(-step * static_cast<double>(base));
        const std::uint64_t end = std::min(n_max, base + kBlock - 1);
        for (std::uint64_t n = base; n <= end; ++n) {
            const int c = tabulated ? table[residue] : chi(n);
            if (tabulated && ++residue == period) residue = 0;
            const double wn = w[n];
            if (c == 0 || wn == 0.0) continue;
            const double x = step * static_cast<double>(n);
            double poly;
            if (k <= 16) {
                poly = inv_factorial[k - 1];
                for (unsigned i = k - 1; i-- > 0;) poly = poly * x + inv_factorial[i];
            } else {
                poly = kernel_V(x, k) * std::exp(x);
            }
            const double term = (c > 0 ? wn : -wn) * poly * (e0 * decay[n - base]);
            sum.add(term);
            error_weight += std::fabs(term) * (2.0 * k + 8.0 + 2.0 * x);
        }
    }
    PartialSum out;
    out.value = sum.value();
    out.terms = n_max;
    const double rounding = kUnitRoundoff * (error_weight + 2.0 * std::fabs(out.value));
    out.tail_bound = certified_tail(Q, n_max, k) + rounding;
    return out;
}

PartialSum A_sum(double Q, std::int64_t d, const Eigenform& form, const TruncationPolicy& policy) {
    return A_sum(Q, RealCharacter::kronecker(d), form, policy);
}

LValueResult central_L(const Eigenform& form, std::int64_t d, const TruncationPolicy& policy) {
    const auto family = DiscriminantFamily::for_form(form);
    if (auto reason = family.rejection_reason(d, true)) throw InvalidArgument("central_L: " + *reason);
    const double center = static_cast<double>(d < 0 ? -d : d) * std::sqrt(static_cast<double>(form.level()));
    const PartialSum a = A_sum(center, d, form, policy);
    LValueResult r;
    r.d = d;
    r.form_id = form.source();
    r.value = 2.0 * a.value;
    r.tail_bound = 2.0 * a.tail_bound;
    r.terms = a.terms;
    return r;
}

QSplitCheck q_split_check(const Eigenform& form, std::int64_t d, double Q, const TruncationPolicy& policy) {
    check_Q(Q);
    const LValueResult central = central_L(form, d, policy);
    const double abs_d = static_cast<double>(d < 0 ? -d : d);
    const double center = abs_d * std::sqrt(static_cast<double>(form.level()));
    const double dual = (Q == center) ? center : abs_d * abs_d * static_cast<double>(form.level()) / Q;
    const auto chi = RealCharacter::kronecker(d);
    const PartialSum a = A_sum(Q, chi, form, policy);
    const PartialSum b = (dual == Q) ? a : A_sum(dual, chi, form, policy);
    return {a.value + b.value - central.value, a.tail_bound + b.tail_bound + central.tail_bound};
}

double q_split_residual(const Eigenform& form, std::int64_t d, double Q, const TruncationPolicy& policy) {
    return q_split_check(form, d, Q, policy).residual;
}

LValueResult twisted_L_general(const Eigenform& form, const RealCharacter& chi, double conductor,
                               const TruncationPolicy& policy, double gate_factor) {
    if (!(conductor > 0.0)) throw InvalidArgument("twisted_L_general: conductor must be positive");
    const double center = conductor * std::sqrt(static_cast<double>(form.level()));
    const PartialSum mid = A_sum(center, chi, form, policy);
    const PartialSum low = A_sum(center * 0.5, chi, form, policy);
    const PartialSum high = A_sum(center * 2.0, chi, form, policy);

    LValueResult r;
    r.d = 0;
    r.form_id = form.source();
    r.value = 2.0 * mid.value;
    r.tail_bound = 2.0 * mid.tail_bound;
    r.terms = mid.terms;
    const double residual = low.value + high.value - r.value;
    r.q_split_residual = residual;
    const double budget = low.tail_bound + high.tail_bound + r.tail_bound;
    if (!(std::fabs(residual) <= gate_factor * budget)) {
        std::ostringstream msg;
        msg << "twisted_L_general: split residual " << residual << " exceeds " << gate_factor << " x error budget " << budget
            << " for conductor " << conductor << "; the assumed functional equation does not hold for this twist";
        throw NumericGuardError(msg.str());
    }
    return r;
}

QSplitCheck antisymmetric_split(const Eigenform& form, const RealCharacter& chi, double conductor,
                                const TruncationPolicy& policy) {
    if (!(conductor > 0.0)) throw InvalidArgument("antisymmetric_split: conductor must be positive");
    const double center = conductor * std::sqrt(static_cast<double>(form.level()));
    const PartialSum low = A_sum(center * 0.5, chi, form, policy);
    const PartialSum high = A_sum(center * 2.0, chi, form, policy);
    return {low.value - high.value, low.tail_bound + high.tail_bound};
}

int detect_root_number(const Eigenform& form) {
    const TruncationPolicy policy{1e-10, form.max_n()};
    const double center = std::sqrt(static_cast<double>(form.level()));
    const auto chi = RealCharacter::kronecker(1);
    try {
        const PartialSum mid = A_sum(center, chi, form, policy);
        const PartialSum low = A_sum(center * 0.5, chi, form, policy);
        const PartialSum high = A_sum(center * 2.0, chi, form, policy);
        const double tol = 1e-7 * std::max(1.0, std::fabs(mid.value));
        const bool plus = std::fabs(low.value + high.value - 2.0 * mid.value) <= tol;
        const bool minus = std::fabs(low.value - high.value) <= tol;
        if (plus && !minus) return 1;
        if (minus && !plus) return -1;
        return 0;
    } catch (const NumericGuardError&) {
        return 0;
    }
}

}  // namespace qtwist

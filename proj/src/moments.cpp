#include "qtwist/moments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include <omp.h>

#include "qtwist/arith.hpp"
#include "qtwist/errors.hpp"

namespace qtwist {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_tail(std::span<const LValueResult> records) {
    double m = 0.0;
    for (const auto& r : records) m = std::max(m, r.tail_bound);
    return m;
}

}  // namespace

ConstantCN constant_C_N(std::uint64_t level) {
    if (level == 0) throw InvalidArgument("constant_C_N: level must be positive");
    const std::uint64_t m = 4 * level;
    ConstantCN out;
    out.gamma = unit_square_classes(m).size();
    double prod = 1.0;
    for (auto p : prime_divisors(m)) {
        const double pp = static_cast<double>(p);
        prod /= 1.0 - 1.0 / (pp * pp);
    }
    out.value = 3.0 * static_cast<double>(out.gamma) / (std::numbers::pi * std::numbers::pi * static_cast<double>(level)) * prod;
    return out;
}

const char* to_string(BIndexConvention c) {
    return c == BIndexConvention::kLiteral ? "literal" : "character-averaged";
}

std::vector<BIndexTerm> b_series_indices(std::uint64_t level, std::uint64_t n_max, BIndexConvention convention) {
    if (level == 0) throw InvalidArgument("b_series_indices: level must be positive");
    std::vector<BIndexTerm> out;
    if (n_max == 0) return out;
    const auto bad = prime_divisors(4 * level);
    const bool drop_odd_two = convention == BIndexConvention::kCharacterAveraged && level % 2 == 1;

    // r over (4N)-smooth numbers
    std::vector<std::uint64_t> rs{1};
    for (auto p : bad) {
        const std::size_t base = rs.size();
        for (std::size_t i = 0; i < base; ++i) {
            std::uint64_t v = rs[i];
            while (v <= n_max / p) {
                v *= p;
                rs.push_back(v);
            }
        }
    }
    if (drop_odd_two) {
        std::erase_if(rs, [](std::uint64_t r) { return std::countr_zero(r) % 2 == 1; });
    }

    const auto j_max = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n_max))) + 1;
    const Sieve& sieve = shared_sieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(j_max, 2)));
    std::vector<double> local(j_max + 1, 1.0);
    std::vector<char> allowed(j_max + 1, 1);
    allowed[0] = 0;
    for (std::uint64_t j = 2; j <= j_max; ++j) {
        const std::uint64_t p = sieve.smallest_factor(static_cast<std::uint32_t>(j));
        std::uint64_t rest = j;
        while (rest % p == 0) rest /= p;
        const bool coprime = (4 * level) % p != 0;
        allowed[j] = coprime && allowed[rest];
        local[j] = local[rest] / (1.0 + 1.0 / static_cast<double>(p));
    }
    for (auto r : rs) {
        for (std::uint64_t j = 1; j <= j_max; ++j) {
            if (j * j > n_max / r) break;
            if (!allowed[j]) continue;
            out.push_back({r * j * j, r, j, local[j]});
        }
    }
    std::sort(out.begin(), out.end(), [](const BIndexTerm& a, const BIndexTerm& b) { return a.n < b.n; });
    return out;
}

BValue B_series(double x, const Eigenform& form, const TruncationPolicy& policy, BIndexConvention convention) {
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("B_series: x must be a positive finite number");
    const unsigned k = form.half_weight();
    const std::uint64_t n_max = truncation_cutoff(x, policy, k);
    const auto terms = b_series_indices(form.level(), n_max, convention);
    long double sum = 0.0L;
    double abs_sum = 0.0;
    for (const auto& t : terms) {
        const double v = form.weight_at(t.n) * t.local_factor * kernel_V(kTwoPi * static_cast<double>(t.n) / x, k);
        sum += v;
        abs_sum += std::fabs(v);
    }
    BValue out;
    out.x = x;
    out.value = static_cast<double>(sum);
    out.terms = terms.size();
    out.tail_bound = certified_tail(x, n_max, k) + 1e-15 * abs_sum;
    return out;
}

LfkEstimate L_f_value(const Eigenform& form, std::span<const double> grid, const TruncationPolicy& policy,
                      BIndexConvention convention, double max_residual) {
    if (grid.size() < 3) throw InvalidArgument("L_f_value: the x grid needs at least three points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw InvalidArgument("L_f_value: grid points must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidArgument("L_f_value: grid must be strictly increasing");
    }
    LfkEstimate est;
    est.convention = convention;
    for (double x : grid) {
        const BValue b = B_series(x, form, policy, convention);
        est.x.push_back(x);
        est.B.push_back(b.value);
        est.B_tail.push_back(b.tail_bound);
    }
    // normal equations for [1, u] with u = x^{-1/5}
    const double m = static_cast<double>(grid.size());
    double su = 0, suu = 0, sb = 0, sub = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = std::pow(est.x[i], -0.2);
        su += u;
        suu += u * u;
        sb += est.B[i];
        sub += u * est.B[i];
    }
    const double det = m * suu - su * su;
    est.c = (m * sub - su * sb) / det;
    est.L = (sb - est.c * su) / m;
    double worst = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::fabs(est.B[i] - est.L - est.c * std::pow(est.x[i], -0.2)));
        tail = std::max(tail, est.B_tail[i]);
    }
    if (!(std::fabs(est.L) > 10.0 * tail)) {
        std::ostringstream msg;
        msg << "L_f_value: extrapolated L = " << est.L << " is not distinguishable from 0 (tail " << tail << ")";
        throw NumericGuardError(msg.str());
    }
    est.fit_residual = worst / std::fabs(est.L);
    if (!(est.fit_residual <= max_residual)) {
        std::ostringstream msg;
        msg << "L_f_value: relative fit residual " << est.fit_residual << " exceeds " << max_residual
            << "; use larger x values";
        throw NumericGuardError(msg.str());
    }
    return est;
}

double fitted_decay_exponent(std::span<const double> x, std::span<const double> B, double L) {
    if (x.size() != B.size() || x.size() < 2) throw InvalidArgument("fitted_decay_exponent: need matching grids of size >= 2");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double gap = std::fabs(B[i] - L);
        if (!(gap > 0.0)) throw NumericGuardError("fitted_decay_exponent: B(x) coincides with L");
        const double lx = std::log(x[i]), ly = std::log(gap);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<LValueResult> evaluate_family(const Eigenform& form, std::span<const std::int64_t> ds,
                                          const TruncationPolicy& policy, const MomentOptions& options) {
    const std::size_t count = ds.size();
    std::vector<LValueResult> out(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> done{0};
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
    // coefficient() may grow the shared sieve; make sure it exists before the parallel phase
    shared_sieve(2);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::size_t i = 0; i < count; ++i) {
        try {
            out[i] = central_L(form, ds[i], policy);
        } catch (...) {
            errors[i] = std::current_exception();
        }
        const std::size_t finished = ++done;
        if (options.progress) options.progress(finished, count);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

mpq_class exact_sum(std::span<const LValueResult> records) {
    mpq_class total = 0;
    for (const auto& r : records) total += mpq_class(r.value);
    return total;
}

mpq_class exact_sum_of_squares(std::span<const LValueResult> records) {
    mpq_class total = 0;
    for (const auto& r : records) {
        const mpq_class v(r.value);
        total += v * v;
    }
    return total;
}

double default_zero_threshold(double max_tail) { return std::max(1e-8, 1e3 * max_tail); }

namespace {

double resolve_threshold(const MomentOptions& options, double max_tail_bound) {
    if (!options.zero_threshold) return default_zero_threshold(max_tail_bound);
    const double t = *options.zero_threshold;
    if (!(t > max_tail_bound)) {
        std::ostringstream msg;
        msg << "zero threshold " << t << " does not exceed the largest tail bound " << max_tail_bound
            << " in the window; truncation error could fake a zero";
        throw NumericGuardError(msg.str());
    }
    return t;
}

void check_window(double X, double h) {
    if (!(X >= 1.0) || !std::isfinite(X)) throw InvalidArgument("window: X must be at least 1");
    if (!(h >= 0.0) || !std::isfinite(h)) throw InvalidArgument("window: h must be nonnegative");
}

}  // namespace

MomentReport first_moment(const Eigenform& form, double X, double h, const TruncationPolicy& policy,
                          std::optional<double> L_f, const MomentOptions& options) {
    check_window(X, h);
    const auto family = DiscriminantFamily::for_form(form);
    const auto ds = family.enumerate(X, h, true);

    MomentReport rep;
    rep.form_id = form.source();
    rep.level = form.level();
    rep.half_weight = form.half_weight();
    rep.family_sign = family.sign();
    rep.X = X;
    rep.h = h;
    rep.C_N = constant_C_N(form.level());
    if (h < std::pow(X, 0.75) || h > X) {
        std::ostringstream msg;
        msg << "h = " << h << " is outside the regime X^(3/4) <= h <= X";
        rep.warnings.push_back(msg.str());
    }
    rep.records = evaluate_family(form, ds, policy, options);
    rep.count = rep.records.size();
    rep.S_exact = exact_sum(rep.records);
    rep.S_f = rep.S_exact.get_d();
    rep.second_moment = exact_sum_of_squares(rep.records).get_d();
    rep.max_tail_bound = max_tail(rep.records);
    rep.zero_threshold = resolve_threshold(options, rep.max_tail_bound);
    const double sqrtN = std::sqrt(static_cast<double>(form.level()));
    for (const auto& r : rep.records) {
        if (std::fabs(r.value) > rep.zero_threshold) ++rep.nonvanishing;
        const double Q = static_cast<double>(r.d < 0 ? -r.d : r.d) * sqrtN;
        rep.max_abel_ratio = std::max(rep.max_abel_ratio, 0.5 * std::fabs(r.value) / std::sqrt(Q));
    }
    rep.nonvanishing_reference = h * h / std::pow(X, 1.1);
    if (L_f) {
        rep.L_f = *L_f;
        rep.predicted = rep.C_N.value * *L_f * h;
        if (*rep.predicted != 0.0) rep.ratio = rep.S_f / *rep.predicted;
    }
    return rep;
}

SecondMomentReport second_moment(const Eigenform& form, double X, const TruncationPolicy& policy,
                                 const MomentOptions& options) {
    if (!(X > 0.0) || !std::isfinite(X)) throw InvalidArgument("second_moment: X must be positive");
    SecondMomentReport rep;
    rep.form_id = form.source();
    rep.X = X;
    if (X >= 1.0) {
        const auto family = DiscriminantFamily::for_form(form);
        const auto ds = family.enumerate(1.0, X - 1.0, true);
        rep.records = evaluate_family(form, ds, policy, options);
    }
    rep.count = rep.records.size();
    rep.value = exact_sum_of_squares(rep.records).get_d();
    rep.normalized = rep.value / std::pow(X, 1.1);
    rep.max_tail_bound = max_tail(rep.records);
    return rep;
}

NonvanishingReport nonvanishing_count(const Eigenform& form, double X, double h, const TruncationPolicy& policy,
                                      const MomentOptions& options) {
    check_window(X, h);
    const auto family = DiscriminantFamily::for_form(form);
    const auto ds = family.enumerate(X, h, true);
    const auto records = evaluate_family(form, ds, policy, options);
    NonvanishingReport rep;
    rep.X = X;
    rep.h = h;
    rep.family_count = records.size();
    rep.max_tail_bound = max_tail(records);
    rep.zero_threshold = resolve_threshold(options, rep.max_tail_bound);
    for (const auto& r : records)
        if (std::fabs(r.value) > rep.zero_threshold) ++rep.count;
    rep.reference = h * h / std::pow(X, 1.1);
    return rep;
}

std::uint64_t required_table_size_for_window(std::uint64_t level, unsigned half_weight, double X, double h,
                                             const TruncationPolicy& policy) {
    check_window(X, h);
    const double top = std::floor(X + h);
    return truncation_cutoff(top * std::sqrt(static_cast<double>(level)), policy, half_weight);
}

std::uint64_t required_table_size_for_window(const Eigenform& form, double X, double h, const TruncationPolicy& policy) {
    return required_table_size_for_window(form.level(), form.half_weight(), X, h, policy);
}

}  // namespace qtwist

#include "qtwist/waldspurger.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include <omp.h>

#include "qtwist/arith.hpp"
#include "qtwist/errors.hpp"
#include "qtwist/family.hpp"

namespace qtwist {

HalfIntegralForm tunnell_g(std::uint64_t order) {
    if (order < 2) throw InvalidArgument("tunnell_g: order must be at least 2");
    HalfIntegralForm g;
    g.name = "tunnell";
    g.level = 128;
    g.weight_numerator = 3;
    g.eta = {{8, 1}, {16, 1}};
    g.theta_scales = {2};
    g.paired_form = "x32";
    const auto o = static_cast<std::int64_t>(order);
    g.series = eta_quotient(g.eta, o) * theta_series(2, o);
    return g;
}

RealCharacter composite_character(unsigned half_weight, std::int64_t d) {
    if (!is_fundamental_discriminant(d)) {
        std::ostringstream msg;
        msg << "composite_character: d = " << d << " is not a fundamental discriminant";
        throw InvalidArgument(msg.str());
    }
    if (half_weight % 2 == 0) return RealCharacter::kronecker(d);
    return RealCharacter::kronecker(-4) * RealCharacter::kronecker(d);
}

std::uint64_t composite_conductor(unsigned half_weight, std::int64_t d) {
    if (!is_fundamental_discriminant(d)) throw InvalidArgument("composite_conductor: d must be a fundamental discriminant");
    const auto a = static_cast<std::uint64_t>(d < 0 ? -d : d);
    if (half_weight % 2 == 0) return a;
    // -4d is fundamental for odd d; for even d the 2-parts cancel down to d/4
    if (a % 2 == 1) return 4 * a;
    return a % 8 == 0 ? a : a / 4;
}

std::vector<RatioVariant> ratio_variants(unsigned half_weight) {
    const double k = half_weight;
    return {
        {"abs_d^k", k, false},
        {"signed_d^k", k, true},
        {"abs_d^(k-1/2)", k - 0.5, false},
    };
}

std::vector<std::int64_t> waldspurger_discriminants(std::uint64_t max_d) {
    std::vector<std::int64_t> out;
    if (max_d == 0) return out;
    const auto flags = squarefree_flags(1, max_d);
    for (std::uint64_t n = 1; n <= max_d; n += 2) {
        if (!flags[n - 1]) continue;
        const auto sn = static_cast<std::int64_t>(n);
        out.push_back(n % 4 == 1 ? sn : -sn);
    }
    return out;
}

std::uint64_t waldspurger_table_size(const Eigenform& f, std::uint64_t max_d, const TruncationPolicy& policy) {
    if (max_d == 0) return 1;
    std::uint64_t c = 0;
    for (std::uint64_t n = std::max<std::uint64_t>(1, max_d - 8); n <= max_d; ++n) {
        const std::int64_t d = n % 4 == 1 ? static_cast<std::int64_t>(n) : -static_cast<std::int64_t>(n);
        if (n % 2 == 1 && is_squarefree(n)) c = std::max(c, composite_conductor(f.half_weight(), d));
    }
    if (c == 0) c = 4 * max_d;
    return truncation_cutoff(2.0 * static_cast<double>(c) * std::sqrt(static_cast<double>(f.level())), policy,
                             f.half_weight());
}

namespace {

struct TwistValue {
    bool ok = false;
    double L = 0.0;
    double tail = 0.0;
    std::uint64_t conductor = 0;
    int root_number = 0;
    std::string failure;
};

TwistValue evaluate_twist(const Eigenform& f, std::int64_t d, const TruncationPolicy& policy, double gate) {
    const auto chi = composite_character(f.half_weight(), d);
    const auto abs_d = static_cast<std::uint64_t>(d < 0 ? -d : d);
    std::vector<std::uint64_t> candidates{abs_d};
    const std::uint64_t cc = composite_conductor(f.half_weight(), d);
    if (cc != abs_d) candidates.push_back(cc);
    const double sqrtN = std::sqrt(static_cast<double>(f.level()));
    TwistValue out;
    std::ostringstream why;
    for (auto c : candidates) {
        const double center = static_cast<double>(c) * sqrtN;
        const PartialSum low = A_sum(center * 0.5, chi, f, policy);
        const PartialSum mid = A_sum(center, chi, f, policy);
        const PartialSum high = A_sum(center * 2.0, chi, f, policy);
        const double budget = low.tail_bound + high.tail_bound + 2.0 * mid.tail_bound;
        const double sym = low.value + high.value - 2.0 * mid.value;
        const double anti = low.value - high.value;
        if (std::fabs(sym) <= gate * budget) {
            out = {true, 2.0 * mid.value, 2.0 * mid.tail_bound, c, 1, {}};
            return out;
        }
        if (std::fabs(anti) <= gate * budget) {
            out = {true, anti, low.tail_bound + high.tail_bound, c, -1, {}};
            return out;
        }
        why << "conductor " << c << ": split residuals " << sym << " (w=+1), " << anti << " (w=-1) vs budget " << budget << "; ";
    }
    out.failure = "no functional equation passes the split gate: " + why.str();
    return out;
}

}  // namespace

RatioReport waldspurger_ratios(const HalfIntegralForm& g, const Eigenform& f, std::uint64_t max_d,
                               const TruncationPolicy& policy, const WaldspurgerOptions& options) {
    if (g.max_n() < max_d) {
        std::ostringstream msg;
        msg << "waldspurger_ratios: g has coefficients to " << g.max_n() << ", need " << max_d;
        throw InvalidArgument(msg.str());
    }
    RatioReport rep;
    rep.g_name = g.name;
    rep.f_name = f.source();
    rep.g_level = g.level;
    rep.f_level = f.level();
    rep.half_weight = f.half_weight();
    rep.max_d = max_d;
    rep.cv_tolerance = options.cv_tolerance;

    const auto ds = waldspurger_discriminants(max_d);
    const std::size_t count = ds.size();
    std::vector<TwistValue> values(count);
    std::vector<std::exception_ptr> errors(count);
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
    shared_sieve(2);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::size_t i = 0; i < count; ++i) {
        try {
            values[i] = evaluate_twist(f, ds[i], policy, options.gate_factor);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    double max_tail = 0.0;
    for (const auto& v : values)
        if (v.ok) max_tail = std::max(max_tail, v.tail);
    if (options.zero_threshold) {
        if (!(*options.zero_threshold > max_tail)) {
            std::ostringstream msg;
            msg << "zero threshold " << *options.zero_threshold << " does not exceed the largest tail bound " << max_tail;
            throw NumericGuardError(msg.str());
        }
        rep.zero_threshold = *options.zero_threshold;
    } else {
        rep.zero_threshold = std::max(1e-8, 1e3 * max_tail);
    }

    const auto variants = ratio_variants(f.half_weight());
    for (std::size_t i = 0; i < count; ++i) {
        const std::int64_t d = ds[i];
        const auto abs_d = static_cast<std::uint64_t>(d < 0 ? -d : d);
        const auto cls = static_cast<unsigned>(abs_d % 8);
        const BigInt ag = g.coefficient(abs_d);
        const auto& v = values[i];
        if (!v.ok) {
            rep.excluded.push_back({d, cls, v.failure, ag, 0.0, 0.0, std::nullopt});
            continue;
        }
        if (ag == 0) {
            const bool coherent = std::fabs(v.L) <= rep.zero_threshold;
            if (!coherent) rep.vanishing_coherent = false;
            rep.excluded.push_back({d, cls, "a_g(|d|) = 0", ag, v.L, v.tail, coherent});
            continue;
        }
        if (!(std::fabs(v.L) > 1e3 * v.tail)) {
            rep.excluded.push_back({d, cls, "|L| not above 1e3 x tail bound while a_g(|d|) != 0", ag, v.L, v.tail, std::nullopt});
            continue;
        }
        RatioRow row;
        row.d = d;
        row.cls = cls;
        row.ag = ag;
        row.L = v.L;
        row.tail_bound = v.tail;
        row.conductor = v.conductor;
        row.root_number = v.root_number;
        const double a = ag.get_d();
        for (const auto& var : variants) {
            double base = std::pow(static_cast<double>(abs_d), var.exponent);
            if (var.signed_base && d < 0 && std::fmod(var.exponent, 2.0) != 0.0) base = -base;
            row.ratio.push_back(a * a / (v.L * base));
        }
        rep.rows.push_back(std::move(row));
    }

    bool any_class = false;
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        VariantSummary summary;
        summary.variant = variants[vi];
        bool all_ok = true, some = false;
        for (unsigned cls = 1; cls < 8; cls += 2) {
            std::vector<double> r;
            for (const auto& row : rep.rows)
                if (row.cls == cls && row.ratio[vi]) r.push_back(*row.ratio[vi]);
            ClassStats st;
            st.cls = cls;
            st.usable = r.size();
            if (!r.empty()) {
                double s = 0.0;
                for (double x : r) s += x;
                st.mean = s / static_cast<double>(r.size());
                double var = 0.0;
                for (double x : r) var += (x - st.mean) * (x - st.mean);
                var /= static_cast<double>(r.size());
                st.cv = st.mean != 0.0 ? std::sqrt(var) / std::fabs(st.mean) : INFINITY;
            }
            if (r.size() < 3) {
                st.status = "inconclusive";
            } else {
                some = true;
                st.status = st.cv < options.cv_tolerance ? "verified" : "not constant";
                if (st.status != "verified") all_ok = false;
            }
            summary.classes.push_back(st);
        }
        summary.constant = some && all_ok;
        any_class = any_class || some;
        if (summary.constant && !rep.reported_variant) rep.reported_variant = vi;
        rep.variants.push_back(std::move(summary));
    }
    rep.inconclusive = !any_class;
    return rep;
}

GapReport gap_statistics(const IntegerQSeries& series, std::uint64_t n_max) {
    if (n_max == 0) throw InvalidArgument("gap_statistics: n_max must be positive");
    const std::uint64_t order = series.truncation_order();
    if (n_max >= order) {
        std::ostringstream msg;
        msg << "gap_statistics: coefficients known below " << order << ", need n_max = " << n_max;
        throw InvalidArgument(msg.str());
    }
    GapReport rep;
    rep.n_max = n_max;
    // run lengths are needed past n_max; compute over the whole known range
    std::vector<std::uint32_t> run(order + 1, 0);
    for (std::uint64_t n = order; n-- > 1;) run[n] = series.coefficient(n) == 0 ? run[n + 1] + 1 : 0;
    rep.gap.assign(run.begin(), run.begin() + static_cast<std::ptrdiff_t>(n_max + 1));
    rep.gap[0] = 0;
    rep.even_gaps = true;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const std::uint32_t i = rep.gap[n];
        if (n % 2 == 0 && i < 1) rep.even_gaps = false;
        if (i == 0) continue;
        rep.records.emplace_back(n, i);
        if (i > rep.max_gap) {
            rep.max_gap = i;
            rep.max_gap_at = n;
        }
        const double scale = std::pow(static_cast<double>(n), 0.8);
        if (i / scale > rep.max_ratio) {
            rep.max_ratio = i / scale;
            rep.max_ratio_at = n;
        }
        if ((i - 1) / scale > rep.max_ratio_serre) {
            rep.max_ratio_serre = (i - 1) / scale;
            rep.max_ratio_serre_at = n;
        }
    }
    return rep;
}

}  // namespace qtwist

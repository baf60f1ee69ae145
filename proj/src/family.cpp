#include "qtwist/family.hpp"

#include <cmath>
#include <sstream>

#include "qtwist/arith.hpp"
#include "qtwist/errors.hpp"
#include "qtwist/forms.hpp"

namespace qtwist {

DiscriminantFamily::DiscriminantFamily(std::uint64_t level, unsigned half_weight, int sign)
    : level_(level), half_weight_(half_weight), sign_(sign) {
    if (level_ == 0) throw InvalidArgument("DiscriminantFamily: level must be positive");
    if (sign_ != 1 && sign_ != -1) throw InvalidArgument("DiscriminantFamily: sign must be +1 or -1");
    residues_ = unit_square_classes(modulus());
    is_residue_.assign(modulus(), 0);
    for (auto r : residues_) is_residue_[r] = 1;
}

DiscriminantFamily DiscriminantFamily::for_form(const Eigenform& form) {
    if (form.root_number() == 0)
        throw NumericGuardError("discriminant family: root number of form '" + form.source() + "' is undetermined");
    return DiscriminantFamily(form.level(), form.half_weight(), form.root_number());
}

DiscriminantFamily DiscriminantFamily::weight_sign_convention(std::uint64_t level, unsigned half_weight) {
    return DiscriminantFamily(level, half_weight, (half_weight % 2) ? -1 : 1);
}

bool DiscriminantFamily::contains(std::int64_t d) const {
    if (d == 0 || (d > 0 ? 1 : -1) != sign_) return false;
    const auto m = static_cast<std::int64_t>(modulus());
    return is_residue_[static_cast<std::size_t>(((d % m) + m) % m)] != 0;
}

std::optional<std::string> DiscriminantFamily::rejection_reason(std::int64_t d, bool require_squarefree) const {
    std::ostringstream msg;
    if (d == 0) return std::string("d = 0 is not a discriminant");
    if ((d > 0 ? 1 : -1) != sign_) {
        msg << "d = " << d << " has the wrong sign for this family (need " << (sign_ > 0 ? "d > 0" : "d < 0")
            << " for level " << level_ << ", weight " << 2 * half_weight_ << ")";
        return msg.str();
    }
    if (!contains(d)) {
        msg << "d = " << d << " is not congruent to a unit square modulo " << modulus();
        return msg.str();
    }
    if (require_squarefree && !is_squarefree(static_cast<std::uint64_t>(d < 0 ? -d : d))) {
        msg << "d = " << d << " is not square-free";
        return msg.str();
    }
    return std::nullopt;
}

std::vector<char> squarefree_flags(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) return {};
    std::vector<char> flags(hi - lo + 1, 1);
    if (lo == 0) flags[0] = 0;
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
    const Sieve& sieve = shared_sieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(root, 2)));
    for (std::uint32_t p : sieve.primes_up_to(static_cast<std::uint32_t>(root))) {
        const std::uint64_t sq = static_cast<std::uint64_t>(p) * p;
        if (sq > hi) break;
        for (std::uint64_t m = (lo + sq - 1) / sq * sq; m <= hi; m += sq) flags[m - lo] = 0;
    }
    return flags;
}

std::vector<std::int64_t> DiscriminantFamily::enumerate(double X, double h, bool squarefree_only) const {
    if (!(X >= 1.0)) throw InvalidArgument("enumerate: X must be at least 1");
    if (!(h >= 0.0)) throw InvalidArgument("enumerate: h must be nonnegative");
    const auto lo = static_cast<std::uint64_t>(std::ceil(X));
    const auto hi = static_cast<std::uint64_t>(std::floor(X + h));
    std::vector<std::int64_t> out;
    if (hi < lo) return out;
    const auto flags = squarefree_only ? squarefree_flags(lo, hi) : std::vector<char>{};
    for (std::uint64_t m = lo; m <= hi; ++m) {
        const std::int64_t d = sign_ * static_cast<std::int64_t>(m);
        if (!contains(d)) continue;
        if (squarefree_only && !flags[m - lo]) continue;
        out.push_back(d);
    }
    return out;
}

}  // namespace qtwist

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qtwist {

class Eigenform;

/// Discriminants d of a fixed sign with d = v^2 mod 4N for a unit v.
///
/// The sign is the one making the twisted root number w * chi_d(-N) equal
/// to +1, so that L(k, f, chi_d) = A(Q) + A(d^2 N / Q) holds. Since
/// chi_d(N) = 1 on these residue classes this is sign(d) = w. For level 1
/// (w = (-1)^k) it is the familiar 0 < (-1)^k d; weight_sign_convention() keeps
/// that rule regardless of w.
class DiscriminantFamily {
public:
    DiscriminantFamily(std::uint64_t level, unsigned half_weight, int sign);

    static DiscriminantFamily for_form(const Eigenform& form);
    static DiscriminantFamily weight_sign_convention(std::uint64_t level, unsigned half_weight);

    std::uint64_t level() const noexcept { return level_; }
    unsigned half_weight() const noexcept { return half_weight_; }
    int sign() const noexcept { return sign_; }
    std::uint64_t modulus() const noexcept { return 4 * level_; }
    const std::vector<std::uint64_t>& residues() const noexcept { return residues_; }

    /// Sign and residue class only.
    bool contains(std::int64_t d) const;

    /// Why d is not an admissible member, or nullopt if it is.
    std::optional<std::string> rejection_reason(std::int64_t d, bool require_squarefree) const;

    /// All members with X <= |d| <= X + h, ascending |d|. Endpoints are
    /// decided on integers: ceil(X) <= |d| <= floor(X + h).
    std::vector<std::int64_t> enumerate(double X, double h, bool squarefree_only) const;

private:
    std::uint64_t level_;
    unsigned half_weight_;
    int sign_;
    std::vector<std::uint64_t> residues_;
    std::vector<char> is_residue_;
};

/// Squarefree flags for lo <= m <= hi, segmented sieve over p^2.
std::vector<char> squarefree_flags(std::uint64_t lo, std::uint64_t hi);

}  // namespace qtwist

#pragma once

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "qtwist/lfunc.hpp"
#include "qtwist/moments.hpp"
#include "qtwist/waldspurger.hpp"

namespace qtwist {

inline constexpr int kReportSchemaVersion = 1;

/// Shortest round-trip decimal form, independent of the C++ locale.
std::string format_double(double v);

/// d,value,tail_bound,terms
void write_lvalues_csv(std::span<const LValueResult> records, std::ostream& out);

nlohmann::ordered_json to_json(const LValueResult& r);
nlohmann::ordered_json to_json(const MomentReport& r);
nlohmann::ordered_json to_json(const SecondMomentReport& r);
nlohmann::ordered_json to_json(const NonvanishingReport& r);
nlohmann::ordered_json to_json(const LfkEstimate& e);
nlohmann::ordered_json to_json(const RatioReport& r);
/// Summary only; the full table goes to CSV.
nlohmann::ordered_json to_json(const GapReport& r);

/// class,d,ag,L,ratio  (ratio under the reported variant, or the first one
/// when none is constant)
void write_ratio_csv(const RatioReport& r, std::ostream& out);

/// n,gap for every n with gap > 0
void write_gap_csv(const GapReport& r, std::ostream& out);

/// x,B,tail_bound
void write_lfk_csv(const LfkEstimate& e, std::ostream& out);

/// Dump with a trailing newline.
void write_json(const nlohmann::ordered_json& j, std::ostream& out);

}  // namespace qtwist

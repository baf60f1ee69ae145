#include "qtwist/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace qtwist {

using nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

namespace {

ordered_json header(const char* kind) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["kind"] = kind;
    return j;
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

void write_lvalues_csv(std::span<const LValueResult> records, std::ostream& out) {
    out << "d,value,tail_bound,terms\n";
    for (const auto& r : records)
        out << r.d << ',' << format_double(r.value) << ',' << format_double(r.tail_bound) << ',' << r.terms << '\n';
}

ordered_json to_json(const LValueResult& r) {
    ordered_json j = header("lvalue");
    j["form"] = r.form_id;
    j["d"] = r.d;
    j["value"] = r.value;
    j["tail_bound"] = r.tail_bound;
    j["terms"] = r.terms;
    j["q_split_residual"] = optional_number(r.q_split_residual);
    return j;
}

ordered_json to_json(const MomentReport& r) {
    ordered_json j = header("first_moment");
    j["form"] = r.form_id;
    j["level"] = r.level;
    j["weight"] = 2 * r.half_weight;
    j["family_sign"] = r.family_sign;
    j["X"] = r.X;
    j["h"] = r.h;
    j["count"] = r.count;
    j["S_f"] = r.S_f;
    j["S_f_exact"] = r.S_exact.get_str();
    j["C_N"] = r.C_N.value;
    j["gamma"] = r.C_N.gamma;
    j["L_f"] = optional_number(r.L_f);
    j["predicted"] = optional_number(r.predicted);
    j["ratio"] = optional_number(r.ratio);
    j["nonvanishing"] = r.nonvanishing;
    j["zero_threshold"] = r.zero_threshold;
    j["nonvanishing_reference"] = r.nonvanishing_reference;
    j["max_tail_bound"] = r.max_tail_bound;
    j["second_moment"] = r.second_moment;
    j["max_abel_ratio"] = r.max_abel_ratio;
    j["warnings"] = r.warnings;
    auto& recs = j["records"] = ordered_json::array();
    for (const auto& x : r.records) recs.push_back({{"d", x.d}, {"value", x.value}, {"tail_bound", x.tail_bound}, {"terms", x.terms}});
    return j;
}

ordered_json to_json(const SecondMomentReport& r) {
    ordered_json j = header("second_moment");
    j["form"] = r.form_id;
    j["X"] = r.X;
    j["count"] = r.count;
    j["value"] = r.value;
    j["normalized_X^1.1"] = r.normalized;
    j["max_tail_bound"] = r.max_tail_bound;
    return j;
}

ordered_json to_json(const NonvanishingReport& r) {
    ordered_json j = header("nonvanishing");
    j["X"] = r.X;
    j["h"] = r.h;
    j["family_count"] = r.family_count;
    j["count"] = r.count;
    j["zero_threshold"] = r.zero_threshold;
    j["max_tail_bound"] = r.max_tail_bound;
    j["reference_h^2/X^1.1"] = r.reference;
    return j;
}

ordered_json to_json(const LfkEstimate& e) {
    ordered_json j = header("lfk");
    j["convention"] = to_string(e.convention);
    j["x"] = e.x;
    j["B"] = e.B;
    j["B_tail_bound"] = e.B_tail;
    j["L"] = e.L;
    j["c"] = e.c;
    j["fit_residual"] = e.fit_residual;
    return j;
}

ordered_json to_json(const RatioReport& r) {
    ordered_json j = header("waldspurger");
    j["g"] = r.g_name;
    j["g_level"] = r.g_level;
    j["f"] = r.f_name;
    j["f_level"] = r.f_level;
    j["half_weight"] = r.half_weight;
    j["max_d"] = r.max_d;
    j["zero_threshold"] = r.zero_threshold;
    j["cv_tolerance"] = r.cv_tolerance;
    j["inconclusive"] = r.inconclusive;
    j["vanishing_coherent"] = r.vanishing_coherent;
    j["reported_variant"] = r.reported_variant ? ordered_json(r.variants[*r.reported_variant].variant.name) : ordered_json(nullptr);
    auto& vs = j["variants"] = ordered_json::array();
    for (const auto& v : r.variants) {
        ordered_json vj;
        vj["name"] = v.variant.name;
        vj["exponent"] = v.variant.exponent;
        vj["signed"] = v.variant.signed_base;
        vj["constant"] = v.constant;
        auto& cs = vj["classes"] = ordered_json::array();
        for (const auto& c : v.classes)
            cs.push_back({{"class", c.cls}, {"usable", c.usable}, {"kappa_hat", c.mean}, {"cv", c.cv}, {"status", c.status}});
        vs.push_back(std::move(vj));
    }
    auto& rows = j["rows"] = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json rj{{"class", row.cls}, {"d", row.d}, {"ag", row.ag.get_str()}, {"L", row.L}, {"tail_bound", row.tail_bound},
                        {"conductor", row.conductor}, {"root_number", row.root_number}};
        auto& ratios = rj["ratio"] = ordered_json::array();
        for (const auto& x : row.ratio) ratios.push_back(optional_number(x));
        rows.push_back(std::move(rj));
    }
    auto& ex = j["excluded"] = ordered_json::array();
    for (const auto& e : r.excluded) {
        ex.push_back({{"class", e.cls}, {"d", e.d}, {"reason", e.reason}, {"ag", e.ag.get_str()}, {"L", e.L}, {"tail_bound", e.tail_bound},
                      {"vanishing_coherent", e.vanishing_coherent ? ordered_json(*e.vanishing_coherent) : ordered_json(nullptr)}});
    }
    return j;
}

ordered_json to_json(const GapReport& r) {
    ordered_json j = header("gaps");
    j["n_max"] = r.n_max;
    j["max_gap"] = r.max_gap;
    j["max_gap_at"] = r.max_gap_at;
    j["max_ratio_n^0.8"] = r.max_ratio;
    j["max_ratio_at"] = r.max_ratio_at;
    j["max_ratio_serre"] = r.max_ratio_serre;
    j["max_ratio_serre_at"] = r.max_ratio_serre_at;
    j["even_gaps"] = r.even_gaps;
    j["records"] = r.records.size();
    return j;
}

void write_ratio_csv(const RatioReport& r, std::ostream& out) {
    const std::size_t v = r.reported_variant.value_or(0);
    out << "class,d,ag,L,ratio\n";
    for (const auto& row : r.rows) {
        out << row.cls << ',' << row.d << ',' << row.ag.get_str() << ',' << format_double(row.L) << ','
            << (row.ratio.size() > v && row.ratio[v] ? format_double(*row.ratio[v]) : std::string()) << '\n';
    }
}

void write_gap_csv(const GapReport& r, std::ostream& out) {
    out << "n,gap\n";
    for (const auto& [n, g] : r.records) out << n << ',' << g << '\n';
}

void write_lfk_csv(const LfkEstimate& e, std::ostream& out) {
    out << "x,B,tail_bound\n";
    for (std::size_t i = 0; i < e.x.size(); ++i)
        out << format_double(e.x[i]) << ',' << format_double(e.B[i]) << ',' << format_double(e.B_tail[i]) << '\n';
}

void write_json(const ordered_json& j, std::ostream& out) { out << j.dump(2) << '\n'; }

}  // namespace qtwist

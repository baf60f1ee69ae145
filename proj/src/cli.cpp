#include "qtwist/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qtwist/errors.hpp"
#include "qtwist/family.hpp"
#include "qtwist/forms.hpp"
#include "qtwist/report.hpp"
#include "qtwist/waldspurger.hpp"

namespace qtwist::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_number(const std::string& text, const char* what, const char* expected) {
    std::ostringstream msg;
    msg << "--" << what << ": '" << text << "' is not " << expected;
    throw InvalidArgument(msg.str());
}

const char* command_name(Command c) {
    switch (c) {
        case Command::kCoeffs: return "coeffs";
        case Command::kLValue: return "lvalue";
        case Command::kScan: return "scan";
        case Command::kMoment: return "moment";
        case Command::kSecondMoment: return "second-moment";
        case Command::kLfk: return "lfk";
        case Command::kWaldspurger: return "waldspurger";
        case Command::kGaps: return "gaps";
    }
    return "?";
}

}  // namespace

double parse_real(const std::string& raw, const char* what) {
    const std::string text = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        bad_number(raw, what, "a finite number");
    return v;
}

std::int64_t parse_signed(const std::string& raw, const char* what) {
    const double v = parse_real(raw, what);
    if (v != std::floor(v) || std::fabs(v) > 9.0e15) bad_number(raw, what, "an integer");
    return static_cast<std::int64_t>(v);
}

std::uint64_t parse_count(const std::string& raw, const char* what) {
    const std::int64_t v = parse_signed(raw, what);
    if (v < 1) bad_number(raw, what, "a positive integer");
    return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_grid(const std::string& raw, const char* what) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(item, what));
    if (out.empty()) bad_number(raw, what, "a comma-separated list of numbers");
    return out;
}

RunConfig parse_invocation(std::span<const std::string> args) {
    CLI::App app{"Central values of quadratic twists of modular L-functions"};
    app.name(args.empty() ? "qtwist" : std::filesystem::path(args[0]).filename().string());
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    app.set_config("--config", "", "file of 'key = value' lines (flags override it)");

    std::vector<std::string> x_grid;
    std::string form, max_n, d, x, h, max_d, tail_target, hard_cap, threads, out, format, zero_threshold, b_index;
    app.add_option("--form", form, "delta | x32 | tunnell | file:PATH");
    app.add_option("--max-n", max_n, "coefficient table size (default: sized to the command)");
    app.add_option("--d", d, "discriminant");
    app.add_option("--x", x, "window start X (or bound for second-moment)");
    app.add_option("--h", h, "window length h");
    app.add_option("--x-grid", x_grid, "comma-separated x values for B(x) (default 1e5,2e5,4e5)")->delimiter(',');
    app.add_option("--max-d", max_d, "largest |d| for waldspurger (default 2000)");
    app.add_option("--tail-target", tail_target, "certified truncation tail per sum (default 1e-12)");
    app.add_option("--hard-cap", hard_cap, "largest admissible term count (default 5e7)");
    app.add_option("--threads", threads, "worker threads, 0 = all (default 0)");
    app.add_option("--out", out, "output file (default: stdout)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--zero-threshold", zero_threshold, "|L| above this counts as nonzero");
    app.add_option("--b-index", b_index, "averaged | literal (B(x) index set)")->check(CLI::IsMember({"averaged", "literal"}));

    const std::vector<std::pair<Command, const char*>> commands{
        {Command::kCoeffs, "write a coefficient file"},
        {Command::kLValue, "central value L(k, f, chi_d)"},
        {Command::kScan, "central values over a window of discriminants"},
        {Command::kMoment, "first moment over a window with predicted main term"},
        {Command::kSecondMoment, "sum of squared central values for |d| <= X"},
        {Command::kLfk, "B(x) values and the extrapolated main-term constant"},
        {Command::kWaldspurger, "coefficient / central value ratios for the eta(8z)eta(16z)theta(2z) pair"},
        {Command::kGaps, "runs of vanishing coefficients"},
    };
    std::vector<std::pair<Command, CLI::App*>> subs;
    for (const auto& [c, help] : commands) {
        auto* sub = app.add_subcommand(command_name(c), help);
        sub->fallthrough();
        subs.emplace_back(c, sub);
    }

    std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(argv_rest.begin(), argv_rest.end());
    try {
        app.parse(argv_rest);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::FileError& e) {
        throw FormatError(e.what());
    } catch (const CLI::ParseError& e) {
        throw InvalidArgument(e.what());
    }

    RunConfig cfg;
    for (const auto& [c, sub] : subs)
        if (sub->parsed()) cfg.command = c;

    if (form.empty()) {
        if (cfg.command == Command::kWaldspurger) form = "x32";
        else if (cfg.command == Command::kGaps) form = "tunnell";
        else throw InvalidArgument(std::string(command_name(cfg.command)) + ": --form is required");
    }
    if (form == "delta") {
        cfg.form.kind = FormSelector::Kind::kDelta;
    } else if (form == "x32") {
        cfg.form.kind = FormSelector::Kind::kX32;
    } else if (form == "tunnell") {
        if (cfg.command != Command::kGaps) throw InvalidArgument("--form tunnell is only valid for gaps");
        cfg.form.kind = FormSelector::Kind::kTunnell;
    } else if (form.rfind("file:", 0) == 0) {
        cfg.form.kind = FormSelector::Kind::kFile;
        cfg.form.path = form.substr(5);
        std::ifstream probe(cfg.form.path);
        if (!probe) throw FormatError("cannot read coefficient file '" + cfg.form.path.string() + "'");
    } else {
        throw InvalidArgument("--form: unknown form '" + form + "' (expected delta, x32, tunnell or file:PATH)");
    }

    if (!max_n.empty()) cfg.max_n = parse_count(max_n, "max-n");
    if (!d.empty()) cfg.d = parse_signed(d, "d");
    if (!x.empty()) {
        cfg.X = parse_real(x, "x");
        if (!(*cfg.X >= 1.0)) throw InvalidArgument("--x must be at least 1");
    }
    if (!h.empty()) {
        cfg.h = parse_real(h, "h");
        if (!(*cfg.h >= 0.0)) throw InvalidArgument("--h must be nonnegative");
    }
    if (!x_grid.empty()) {
        for (const auto& item : x_grid) cfg.x_grid.push_back(parse_real(item, "x-grid"));
        for (double v : cfg.x_grid)
            if (!(v > 0.0)) throw InvalidArgument("--x-grid values must be positive");
    }
    if (!max_d.empty()) cfg.max_d = parse_count(max_d, "max-d");
    if (!tail_target.empty()) {
        cfg.policy.tail_target = parse_real(tail_target, "tail-target");
        if (!(cfg.policy.tail_target > 0.0)) throw InvalidArgument("--tail-target must be positive");
    }
    if (!hard_cap.empty()) cfg.policy.hard_cap = parse_count(hard_cap, "hard-cap");
    if (!threads.empty()) {
        const auto t = parse_signed(threads, "threads");
        if (t < 0 || t > 4096) throw InvalidArgument("--threads must be between 0 and 4096");
        cfg.threads = static_cast<int>(t);
    }
    if (!out.empty()) cfg.out = out;
    if (format == "csv") cfg.format = OutputFormat::kCsv;
    if (format == "json") cfg.format = OutputFormat::kJson;
    if (!zero_threshold.empty()) {
        cfg.zero_threshold = parse_real(zero_threshold, "zero-threshold");
        if (!(*cfg.zero_threshold > 0.0)) throw InvalidArgument("--zero-threshold must be positive");
    }
    if (b_index == "literal") cfg.b_index = BIndexConvention::kLiteral;

    switch (cfg.command) {
        case Command::kCoeffs:
            if (!cfg.max_n && cfg.form.kind != FormSelector::Kind::kFile)
                throw InvalidArgument("coeffs: --max-n is required for generated forms");
            break;
        case Command::kLValue:
            if (!cfg.d) throw InvalidArgument("lvalue: --d is required");
            break;
        case Command::kScan:
        case Command::kMoment:
            if (!cfg.X || !cfg.h) throw InvalidArgument(std::string(command_name(cfg.command)) + ": --x and --h are required");
            break;
        case Command::kSecondMoment:
            if (!cfg.X) throw InvalidArgument("second-moment: --x is required");
            break;
        case Command::kLfk:
            if (cfg.x_grid.empty()) cfg.x_grid = kDefaultLfkGrid;
            break;
        case Command::kWaldspurger:
        case Command::kGaps:
            break;
    }
    if (cfg.command == Command::kMoment && cfg.x_grid.empty()) cfg.x_grid = kDefaultLfkGrid;

    // family membership is known up front for the built-in forms
    if (cfg.command == Command::kLValue && cfg.form.kind != FormSelector::Kind::kFile) {
        const bool delta = cfg.form.kind == FormSelector::Kind::kDelta;
        const DiscriminantFamily family(delta ? 1 : 32, delta ? 6 : 1, 1);
        if (auto reason = family.rejection_reason(*cfg.d, true)) throw InvalidArgument("lvalue: " + *reason);
    }
    return cfg;
}

namespace {

struct Sink {
    std::ostream& artifact;
    std::ostream& summary;
};

Eigenform builtin_form(FormSelector::Kind kind, std::uint64_t size) {
    size = std::max<std::uint64_t>(size, 64);
    return kind == FormSelector::Kind::kDelta ? delta_coefficients(size) : level32_form(size);
}

std::uint64_t builtin_level(FormSelector::Kind kind) { return kind == FormSelector::Kind::kDelta ? 1 : 32; }
unsigned builtin_half_weight(FormSelector::Kind kind) { return kind == FormSelector::Kind::kDelta ? 6 : 1; }

/// Builtin forms are generated to `wanted` unless --max-n pins the size.
Eigenform load_form(const RunConfig& cfg, std::uint64_t wanted) {
    if (cfg.form.kind == FormSelector::Kind::kFile) {
        Eigenform f = load_coefficients(cfg.form.path);
        if (cfg.max_n && *cfg.max_n < f.max_n()) return f.truncated(*cfg.max_n);
        return f;
    }
    return builtin_form(cfg.form.kind, cfg.max_n.value_or(wanted));
}

std::string form_label(const RunConfig& cfg) {
    switch (cfg.form.kind) {
        case FormSelector::Kind::kDelta: return "delta";
        case FormSelector::Kind::kX32: return "x32";
        case FormSelector::Kind::kTunnell: return "tunnell";
        case FormSelector::Kind::kFile: return "file:" + cfg.form.path.string();
    }
    return "?";
}

bool want_json(const RunConfig& cfg, bool json_default) {
    if (cfg.format == OutputFormat::kDefault) return json_default;
    return cfg.format == OutputFormat::kJson;
}

MomentOptions moment_options(const RunConfig& cfg) {
    MomentOptions o;
    o.threads = cfg.threads;
    o.zero_threshold = cfg.zero_threshold;
    return o;
}

std::uint64_t window_table(const RunConfig& cfg, double X, double h) {
    if (cfg.form.kind == FormSelector::Kind::kFile) return 0;
    return required_table_size_for_window(builtin_level(cfg.form.kind), builtin_half_weight(cfg.form.kind), X, h, cfg.policy);
}

void run_command(const RunConfig& cfg, Sink sink) {
    using K = FormSelector::Kind;
    std::ostringstream line;
    line << command_name(cfg.command) << ": ";
    switch (cfg.command) {
        case Command::kCoeffs: {
            const Eigenform f = load_form(cfg, cfg.max_n.value_or(1));
            save_coefficients(f, sink.artifact);
            line << "form=" << form_label(cfg) << " level=" << f.level() << " weight=" << f.weight() << " max_n=" << f.max_n();
            break;
        }
        case Command::kLValue: {
            std::uint64_t need = 0;
            if (cfg.form.kind != K::kFile) {
                const double Q = static_cast<double>(std::llabs(*cfg.d)) * std::sqrt(static_cast<double>(builtin_level(cfg.form.kind)));
                need = truncation_cutoff(2.0 * Q, cfg.policy, builtin_half_weight(cfg.form.kind));
            }
            const Eigenform f = load_form(cfg, need);
            LValueResult r = central_L(f, *cfg.d, cfg.policy);
            const double Q = static_cast<double>(std::llabs(*cfg.d)) * std::sqrt(static_cast<double>(f.level()));
            try {
                r.q_split_residual = q_split_residual(f, *cfg.d, 0.5 * Q, cfg.policy);
            } catch (const NumericGuardError&) {
                // table too short for the split diagnostic; value stands on its own
            }
            if (want_json(cfg, true)) {
                write_json(to_json(r), sink.artifact);
            } else {
                const LValueResult one[] = {r};
                write_lvalues_csv(one, sink.artifact);
            }
            line << "form=" << form_label(cfg) << " d=" << r.d << " L=" << format_double(r.value)
                 << " tail_bound=" << format_double(r.tail_bound) << " terms=" << r.terms;
            break;
        }
        case Command::kScan: {
            const Eigenform f = load_form(cfg, window_table(cfg, *cfg.X, *cfg.h));
            const auto family = DiscriminantFamily::for_form(f);
            const auto ds = family.enumerate(*cfg.X, *cfg.h, true);
            const auto records = evaluate_family(f, ds, cfg.policy, moment_options(cfg));
            if (want_json(cfg, false)) {
                nlohmann::ordered_json j;
                j["schema_version"] = kReportSchemaVersion;
                j["kind"] = "scan";
                j["form"] = f.source();
                j["X"] = *cfg.X;
                j["h"] = *cfg.h;
                auto& arr = j["records"] = nlohmann::ordered_json::array();
                for (const auto& r : records) arr.push_back(to_json(r));
                write_json(j, sink.artifact);
            } else {
                write_lvalues_csv(records, sink.artifact);
            }
            line << "form=" << form_label(cfg) << " X=" << format_double(*cfg.X) << " h=" << format_double(*cfg.h)
                 << " count=" << records.size();
            break;
        }
        case Command::kMoment: {
            const Eigenform f = load_form(cfg, window_table(cfg, *cfg.X, *cfg.h));
            const LfkEstimate lfk = L_f_value(f, cfg.x_grid, cfg.policy, cfg.b_index);
            const MomentReport r = first_moment(f, *cfg.X, *cfg.h, cfg.policy, lfk.L, moment_options(cfg));
            if (want_json(cfg, false)) {
                auto j = to_json(r);
                j["lfk"] = to_json(lfk);
                write_json(j, sink.artifact);
            } else {
                write_lvalues_csv(r.records, sink.artifact);
            }
            line << "form=" << form_label(cfg) << " X=" << format_double(r.X) << " h=" << format_double(r.h) << " count=" << r.count
                 << " S_f=" << format_double(r.S_f) << " predicted=" << format_double(r.predicted.value_or(0.0))
                 << " ratio=" << format_double(r.ratio.value_or(0.0)) << " nonvanishing=" << r.nonvanishing;
            for (const auto& w : r.warnings) line << " warning=\"" << w << '"';
            break;
        }
        case Command::kSecondMoment: {
            const Eigenform f = load_form(cfg, window_table(cfg, 1.0, std::max(0.0, *cfg.X - 1.0)));
            const SecondMomentReport r = second_moment(f, *cfg.X, cfg.policy, moment_options(cfg));
            if (want_json(cfg, true)) {
                write_json(to_json(r), sink.artifact);
            } else {
                write_lvalues_csv(r.records, sink.artifact);
            }
            line << "form=" << form_label(cfg) << " X=" << format_double(r.X) << " count=" << r.count
                 << " sum=" << format_double(r.value) << " sum/X^1.1=" << format_double(r.normalized);
            break;
        }
        case Command::kLfk: {
            const Eigenform f = load_form(cfg, 4096);
            const LfkEstimate e = L_f_value(f, cfg.x_grid, cfg.policy, cfg.b_index);
            if (want_json(cfg, true)) write_json(to_json(e), sink.artifact);
            else write_lfk_csv(e, sink.artifact);
            line << "form=" << form_label(cfg) << " L=" << format_double(e.L) << " fit_residual=" << format_double(e.fit_residual);
            break;
        }
        case Command::kWaldspurger: {
            std::uint64_t need = 0;
            if (cfg.form.kind != K::kFile) need = waldspurger_table_size(builtin_form(cfg.form.kind, 64), cfg.max_d, cfg.policy);
            const Eigenform f = load_form(cfg, need);
            const HalfIntegralForm g = tunnell_g(cfg.max_d + 2);
            WaldspurgerOptions o;
            o.threads = cfg.threads;
            o.zero_threshold = cfg.zero_threshold;
            const RatioReport r = waldspurger_ratios(g, f, cfg.max_d, cfg.policy, o);
            if (want_json(cfg, true)) write_json(to_json(r), sink.artifact);
            else write_ratio_csv(r, sink.artifact);
            line << "max_d=" << r.max_d << " usable=" << r.rows.size() << " excluded=" << r.excluded.size() << " variant="
                 << (r.reported_variant ? r.variants[*r.reported_variant].variant.name : std::string("none"))
                 << " vanishing_coherent=" << (r.vanishing_coherent ? "yes" : "no");
            break;
        }
        case Command::kGaps: {
            const std::uint64_t n_max = cfg.max_n.value_or(kDefaultGapMax);
            IntegerQSeries series;
            if (cfg.form.kind == K::kTunnell) {
                // headroom so the last run is not cut short
                series = tunnell_g(n_max + 1 + 64).series;
            } else {
                const Eigenform f = load_form(cfg, n_max + 64);
                series = IntegerQSeries(0, f.coefficients(), f.max_n() + 1);
            }
            const GapReport r = gap_statistics(series, n_max);
            if (want_json(cfg, false)) write_json(to_json(r), sink.artifact);
            else write_gap_csv(r, sink.artifact);
            line << "form=" << form_label(cfg) << " n_max=" << r.n_max << " max_gap=" << r.max_gap << " at " << r.max_gap_at
                 << " max_gap/n^0.8=" << format_double(r.max_ratio) << " at " << r.max_ratio_at;
            break;
        }
    }
    sink.summary << line.str() << '\n';
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (!config.out) {
        run_command(config, {out, err});
        out.flush();
        return 0;
    }
    // write to a buffer first so a failed run leaves no partial file
    std::ostringstream buffer;
    run_command(config, {buffer, out});
    std::ofstream file(*config.out, std::ios::binary | std::ios::trunc);
    if (!file) throw FormatError("cannot open output file '" + config.out->string() + "'");
    file << buffer.str();
    file.flush();
    if (!file) throw FormatError("write failed for '" + config.out->string() + "'");
    return 0;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    try {
        return execute(parse_invocation(args), out, err);
    } catch (const HelpRequested& h) {
        out << h.what();
        return 0;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericGuardError& e) {
        err << "numeric guard: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        err << "i/o: " << e.what() << '\n';
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace qtwist::cli

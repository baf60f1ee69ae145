#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtwist/lfunc.hpp"
#include "qtwist/moments.hpp"

namespace qtwist::cli {

enum class Command { kCoeffs, kLValue, kScan, kMoment, kSecondMoment, kLfk, kWaldspurger, kGaps };

enum class OutputFormat { kDefault, kCsv, kJson };

struct FormSelector {
    enum class Kind { kDelta, kX32, kTunnell, kFile };
    Kind kind = Kind::kDelta;
    std::filesystem::path path;
};

struct RunConfig {
    Command command = Command::kLValue;
    FormSelector form;
    std::optional<std::uint64_t> max_n;
    std::optional<std::int64_t> d;
    std::optional<double> X;
    std::optional<double> h;
    std::vector<double> x_grid;
    std::uint64_t max_d = 2000;
    TruncationPolicy policy;
    int threads = 0;
    std::optional<std::filesystem::path> out;
    OutputFormat format = OutputFormat::kDefault;
    std::optional<double> zero_threshold;
    BIndexConvention b_index = BIndexConvention::kCharacterAveraged;
};

/// --help / --version: text to print, exit 0.
struct HelpRequested : std::runtime_error {
    explicit HelpRequested(std::string text) : std::runtime_error(std::move(text)) {}
};

inline const std::vector<double> kDefaultLfkGrid{1e5, 2e5, 4e5};
inline constexpr std::uint64_t kDefaultGapMax = 100'000;

/// args[0] is the program name. Throws InvalidArgument (usage), FormatError
/// (unreadable files) or HelpRequested.
RunConfig parse_invocation(std::span<const std::string> args);

/// Runs one command. Returns the process exit code; artifacts go to
/// config.out when set (summary line on out) and to out otherwise (summary on err).
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + execute with the exit-code mapping
///   0 ok, 1 usage, 2 numeric guard, 3 I/O or format.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Accepts 100000, 1e5, 1.5e3 (must be integral).
std::uint64_t parse_count(const std::string& text, const char* what);
std::int64_t parse_signed(const std::string& text, const char* what);
double parse_real(const std::string& text, const char* what);
std::vector<double> parse_grid(const std::string& text, const char* what);

}  // namespace qtwist::cli

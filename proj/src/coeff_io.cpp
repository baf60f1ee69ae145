#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include "qtwist/errors.hpp"
#include "qtwist/forms.hpp"
#include "qtwist/lfunc.hpp"

namespace qtwist {

void save_coefficients(const Eigenform& form, std::ostream& out) {
    out << "# level=" << form.level() << " weight=" << form.weight() << " maxn=" << form.max_n()
        << " source=" << form.source() << '\n';
    const auto& a = form.coefficients();
    for (std::uint64_t n = 1; n <= form.max_n(); ++n) out << n << ',' << a[n].get_str() << '\n';
}

void save_coefficients(const Eigenform& form, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    save_coefficients(form, out);
    out.flush();
    if (!out) throw FormatError("write failed for " + path.string());
}

namespace {

std::uint64_t parse_u64(const std::string& text, const std::string& what, std::size_t line) {
    std::uint64_t v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        std::ostringstream msg;
        msg << "line " << line << ": " << what << " '" << text << "' is not a nonnegative integer";
        throw FormatError(msg.str());
    }
    return v;
}

}  // namespace

Eigenform load_coefficients(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("empty coefficient file: missing header");
    static const std::regex header_re(R"(^# level=(\d+) weight=(\d+) maxn=(\d+) source=(\S+)$)");
    std::smatch m;
    if (!std::regex_match(header, m, header_re))
        throw FormatError("malformed header '" + header + "' (expected '# level=<N> weight=<2k> maxn=<M> source=<tag>')");
    const std::uint64_t level = parse_u64(m[1], "level", 1);
    const std::uint64_t weight = parse_u64(m[2], "weight", 1);
    const std::uint64_t max_n = parse_u64(m[3], "maxn", 1);
    const std::string source = m[4];
    if (level == 0) throw FormatError("header: level must be positive");
    if (weight == 0 || weight % 2 != 0) throw FormatError("header: weight must be a positive even integer");
    if (max_n == 0) throw FormatError("header: maxn must be positive");

    std::vector<BigInt> coeffs(max_n + 1);
    std::string line;
    std::uint64_t expected = 1;
    std::size_t line_no = 1;
    while (expected <= max_n && std::getline(in, line)) {
        ++line_no;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected '<n>,<a_n>'";
            throw FormatError(msg.str());
        }
        const std::uint64_t n = parse_u64(line.substr(0, comma), "index", line_no);
        if (n != expected) {
            std::ostringstream msg;
            msg << "line " << line_no << ": index " << n << " out of sequence (expected " << expected << ")";
            throw FormatError(msg.str());
        }
        const std::string value = line.substr(comma + 1);
        const std::size_t digits_from = (!value.empty() && value[0] == '-') ? 1 : 0;
        if (value.size() == digits_from ||
            value.find_first_not_of("0123456789", digits_from) != std::string::npos) {
            std::ostringstream msg;
            msg << "line " << line_no << ": value '" << value << "' is not an integer";
            throw FormatError(msg.str());
        }
        coeffs[n].set_str(value, 10);
        ++expected;
    }
    if (expected <= max_n) {
        std::ostringstream msg;
        msg << "truncated file: header promises maxn=" << max_n << " but only " << expected - 1 << " coefficients present";
        throw FormatError(msg.str());
    }
    if (coeffs[1] != 1) throw FormatError("a_1 must be 1 for a normalized eigenform");

    Eigenform provisional(level, static_cast<unsigned>(weight / 2), 0, source, std::move(coeffs));
    const int w = detect_root_number(provisional);
    if (w == 0) return provisional;
    return Eigenform(level, provisional.half_weight(), w, source, provisional.coefficients());
}

Eigenform load_coefficients(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open coefficient file " + path.string());
    return load_coefficients(in);
}

}  // namespace qtwist

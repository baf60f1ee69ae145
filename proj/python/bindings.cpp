#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qtwist/arith.hpp"
#include "qtwist/cli.hpp"
#include "qtwist/errors.hpp"
#include "qtwist/forms.hpp"
#include "qtwist/lfunc.hpp"
#include "qtwist/moments.hpp"
#include "qtwist/report.hpp"
#include "qtwist/waldspurger.hpp"

namespace py = pybind11;
using namespace qtwist;

namespace {

TruncationPolicy make_policy(double tail_target, std::uint64_t hard_cap) { return TruncationPolicy{tail_target, hard_cap}; }

std::string dump(const nlohmann::ordered_json& j) { return j.dump(); }

py::int_ to_py(const BigInt& v) { return py::int_(py::str(v.get_str())); }

}  // namespace

PYBIND11_MODULE(_qtwist, m) {
    m.doc() = "central values of quadratic twists of modular L-functions";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<NumericGuardError>(m, "NumericGuardError", PyExc_ArithmeticError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_IOError);

    m.def("kronecker", &kronecker, py::arg("d"), py::arg("n"));
    m.def("moebius", &moebius, py::arg("n"));
    m.def("unit_square_classes", &unit_square_classes, py::arg("m"));
    m.def("factorize", [](std::uint64_t n) { return factorize(n).factors; }, py::arg("n"));
    m.def("kernel_V", &kernel_V, py::arg("x"), py::arg("k"));

    py::class_<Eigenform>(m, "Eigenform")
        .def_property_readonly("level", &Eigenform::level)
        .def_property_readonly("weight", &Eigenform::weight)
        .def_property_readonly("half_weight", &Eigenform::half_weight)
        .def_property_readonly("root_number", &Eigenform::root_number)
        .def_property_readonly("source", &Eigenform::source)
        .def_property_readonly("max_n", &Eigenform::max_n)
        .def("coefficient", [](const Eigenform& f, std::uint64_t n) { return to_py(f.coefficient(n)); }, py::arg("n"))
        .def("coefficients", [](const Eigenform& f, std::uint64_t upto) {
            py::list out;
            const std::uint64_t last = std::min(upto, f.max_n());
            for (std::uint64_t n = 1; n <= last; ++n) out.append(to_py(f.coefficients()[n]));
            return out;
        }, py::arg("upto"))
        .def("save", [](const Eigenform& f, const std::string& path) { save_coefficients(f, path); }, py::arg("path"));

    m.def("delta_coefficients", [](std::uint64_t n) { return delta_coefficients(n); }, py::arg("max_n"));
    m.def("level32_form", [](std::uint64_t n) { return level32_form(n); }, py::arg("max_n"));
    m.def("load_coefficients", [](const std::string& path) { return load_coefficients(std::filesystem::path(path)); }, py::arg("path"));
    m.def("ramanujan_tau", [](std::uint64_t n) {
        py::list out;
        for (const auto& v : ramanujan_tau(n)) out.append(to_py(v));
        return out;
    }, py::arg("max_n"));

    m.def("central_L", [](const Eigenform& f, std::int64_t d, double tail_target, std::uint64_t hard_cap) {
        py::gil_scoped_release release;
        return dump(to_json(central_L(f, d, make_policy(tail_target, hard_cap))));
    }, py::arg("form"), py::arg("d"), py::arg("tail_target") = 1e-12, py::arg("hard_cap") = 50'000'000);

    m.def("q_split_residual", [](const Eigenform& f, std::int64_t d, double Q, double tail_target) {
        const auto c = q_split_check(f, d, Q, make_policy(tail_target, 50'000'000));
        return std::make_pair(c.residual, c.bound);
    }, py::arg("form"), py::arg("d"), py::arg("Q"), py::arg("tail_target") = 1e-12);

    m.def("L_f_value", [](const Eigenform& f, std::vector<double> grid, double tail_target, bool literal) {
        py::gil_scoped_release release;
        const auto conv = literal ? BIndexConvention::kLiteral : BIndexConvention::kCharacterAveraged;
        return dump(to_json(L_f_value(f, grid, make_policy(tail_target, 50'000'000), conv)));
    }, py::arg("form"), py::arg("grid"), py::arg("tail_target") = 1e-12, py::arg("literal") = false);

    m.def("first_moment", [](const Eigenform& f, double X, double h, std::optional<double> L_f, int threads, double tail_target) {
        py::gil_scoped_release release;
        MomentOptions o;
        o.threads = threads;
        return dump(to_json(first_moment(f, X, h, make_policy(tail_target, 50'000'000), L_f, o)));
    }, py::arg("form"), py::arg("X"), py::arg("h"), py::arg("L_f") = std::nullopt, py::arg("threads") = 0,
       py::arg("tail_target") = 1e-12);

    m.def("second_moment", [](const Eigenform& f, double X, int threads) {
        py::gil_scoped_release release;
        MomentOptions o;
        o.threads = threads;
        return dump(to_json(second_moment(f, X, TruncationPolicy{}, o)));
    }, py::arg("form"), py::arg("X"), py::arg("threads") = 0);

    m.def("nonvanishing_count", [](const Eigenform& f, double X, double h, int threads) {
        py::gil_scoped_release release;
        MomentOptions o;
        o.threads = threads;
        return dump(to_json(nonvanishing_count(f, X, h, TruncationPolicy{}, o)));
    }, py::arg("form"), py::arg("X"), py::arg("h"), py::arg("threads") = 0);

    m.def("required_table_size_for_window", [](std::uint64_t level, unsigned k, double X, double h) {
        return required_table_size_for_window(level, k, X, h, TruncationPolicy{});
    }, py::arg("level"), py::arg("half_weight"), py::arg("X"), py::arg("h"));

    m.def("tunnell_coefficients", [](std::uint64_t order) {
        const auto g = tunnell_g(order);
        py::list out;
        for (std::uint64_t n = 0; n < order; ++n) out.append(to_py(g.coefficient(n)));
        return out;
    }, py::arg("order"));

    m.def("waldspurger_ratios", [](std::uint64_t max_d, int threads) {
        py::gil_scoped_release release;
        const TruncationPolicy policy;
        const auto f = level32_form(waldspurger_table_size(level32_form(64), max_d, policy));
        WaldspurgerOptions o;
        o.threads = threads;
        return dump(to_json(waldspurger_ratios(tunnell_g(max_d + 2), f, max_d, policy, o)));
    }, py::arg("max_d"), py::arg("threads") = 0);

    m.def("tunnell_gaps", [](std::uint64_t n_max) {
        const auto r = gap_statistics(tunnell_g(n_max + 65).series, n_max);
        return std::make_pair(dump(to_json(r)), r.gap);
    }, py::arg("n_max"));

    m.def("run_cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "qtwist");
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));

    m.attr("REPORT_SCHEMA_VERSION") = kReportSchemaVersion;
}

#ifndef LIEODE_CLI_HPP
#define LIEODE_CLI_HPP

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "json_io.hpp"
#include "noether.hpp"
#include "numerics.hpp"
#include "parse.hpp"
#include "symmetry.hpp"

namespace lieode::cli {

inline double default_tol() {
    if (const char* env = std::getenv("LIEODE_TOL")) {
        try {
            return std::stod(env);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("LIEODE_TOL is not a number");
        }
    }
    return 1e-10;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::logic_error&) {
        throw std::invalid_argument("malformed " + what + ": '" + s + "'");
    }
}

inline std::pair<double, double> parse_span(const std::string& s) {
    auto parts = split(s, ':');
    if (parts.size() != 2) throw std::invalid_argument("span must be given as x0:x1");
    return {to_double(parts[0], "span endpoint"), to_double(parts[1], "span endpoint")};
}

inline std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& piece : split(s, ',')) out.push_back(to_double(piece, what));
    return out;
}

inline std::vector<std::pair<double, double>> parse_points(const std::string& s) {
    std::vector<std::pair<double, double>> out;
    for (const auto& pair : split(s, ';')) {
        auto xy = parse_doubles(pair, "point coordinate");
        if (xy.size() != 2) throw std::invalid_argument("points must be given as x,y;x,y;...");
        out.emplace_back(xy[0], xy[1]);
    }
    return out;
}

} // namespace detail

// f-spec grammar: power:p=<rat>,lambda=<sym|num> | exp:lambda=...,alpha=... |
// const | linear | expr:<jet_expr in y>
inline EquationSpec parse_fspec(int n, const std::string& spec) {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "expr") return EquationSpec::symbolic(n, parse(rest));

    std::optional<Rat> p;
    std::optional<double> lambda_value, alpha_value;
    if (!rest.empty()) {
        for (const auto& kv : detail::split(rest, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("f-spec entries must look like key=value: '" + kv + "'");
            std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
            if (key == "p")
                p = Rat::parse(value);
            else if (key == "lambda" || key == "alpha") {
                std::optional<double>& slot = key == "lambda" ? lambda_value : alpha_value;
                if (value != "sym") slot = detail::to_double(value, key);
            } else {
                throw std::invalid_argument("unknown f-spec key: '" + key + "'");
            }
        }
    }

    EquationSpec eq;
    if (head == "power") {
        if (!p) throw std::invalid_argument("power nonlinearity needs p=<rational>");
        eq = EquationSpec::power(n, *p);
    } else if (head == "exp") {
        eq = EquationSpec::exponential(n);
    } else if (head == "const") {
        eq = EquationSpec::constant(n);
    } else if (head == "linear") {
        eq = EquationSpec::linear(n);
    } else {
        throw std::invalid_argument("unknown nonlinearity '" + head +
                                    "' (expected power, exp, const, linear or expr)");
    }
    eq.lambda_value = lambda_value;
    eq.alpha_value = alpha_value;
    return eq;
}

// Accepts a catalog label (X1, Dp, Y3, ...) or the literal form "xi=...;eta=...".
inline VectorField resolve_generator(const std::string& text, const EquationSpec& eq) {
    if (text.find('=') != std::string::npos) return parse_generator(text);
    std::string labels;
    for (const VectorField& vf : catalog(eq)) {
        if (vf.label == text) return vf;
        labels += labels.empty() ? vf.label : ", " + vf.label;
    }
    throw std::invalid_argument("unknown generator '" + text + "' (catalog has: " + labels + ")");
}

inline int classify_dimension(const EquationSpec& eq, const std::vector<VectorField>& fields) {
    for (const VectorField& vf : fields)
        if (vf.label == "Vbeta") return int(fields.size()) - 1 + 2 * eq.n;
    return int(fields.size());
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"symbolic-numeric Lie and Noether symmetry analysis of y^(2n) + f(y) = 0"};
    app.require_subcommand(1);
    std::string format = "text";
    int max_order = 0;
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--max-order", max_order, "override the operator truncation order");

    int n = 1;
    std::string fspec, generator, span_str, lambda_str = "sym";
    double lambda = 0.0, alpha = 1.0, beta = 0.0, gamma = -1.0, epsilon = 0.0;
    double tol = default_tol();
    std::string ics_str, family_str, integral_id = "I1", kind_str, points_str;

    CLI::App* classify = app.add_subcommand("classify", "list the symmetry generator basis");
    classify->add_option("--n", n)->required();
    classify->add_option("--f", fspec, "nonlinearity spec")->required();

    CLI::App* checksym = app.add_subcommand("check-symmetry", "verify the invariance condition");
    checksym->add_option("--n", n)->required();
    checksym->add_option("--f", fspec)->required();
    checksym->add_option("--generator", generator, "catalog label or xi=...;eta=...")->required();

    CLI::App* noether = app.add_subcommand("noether", "classify a generator against the Lagrangian");
    noether->add_option("--n", n)->required();
    noether->add_option("--f", fspec)->required();
    noether->add_option("--generator", generator)->required();

    CLI::App* firstints = app.add_subcommand("first-integrals", "emit the closed-form integrals");
    firstints->add_option("--n", n)->required();
    firstints->add_option("--lambda", lambda_str, "sym or an exact rational");

    CLI::App* solve = app.add_subcommand("solve", "integrate the critical equation from exact-family data");
    solve->add_option("--n", n)->required();
    solve->add_option("--lambda", lambda)->required();
    solve->add_option("--alpha", alpha);
    solve->add_option("--beta", beta);
    solve->add_option("--gamma", gamma);
    solve->add_option("--span", span_str, "x0:x1")->required();
    solve->add_option("--tol", tol);

    double drift_threshold = 1e-6;
    CLI::App* drift_cmd = app.add_subcommand("drift", "first-integral drift along a trajectory");
    drift_cmd->add_option("--n", n)->required();
    drift_cmd->add_option("--lambda", lambda)->required();
    drift_cmd->add_option("--family", family_str, "alpha,beta,gamma exact-family initial data");
    drift_cmd->add_option("--ics", ics_str, "comma-separated initial state of dimension 2n");
    drift_cmd->add_option("--span", span_str)->required();
    drift_cmd->add_option("--tol", tol);
    drift_cmd->add_option("--integral-id", integral_id)->check(CLI::IsMember({"I1", "I2", "I3"}));
    drift_cmd->add_option("--threshold", drift_threshold, "acceptance bound on the drift");

    CLI::App* transform = app.add_subcommand("transform", "apply a one-parameter group to points");
    transform->add_option("--kind", kind_str)->required()->check(
        CLI::IsMember({"translation", "scaling", "projective"}));
    transform->add_option("--epsilon", epsilon)->required();
    transform->add_option("--n", n)->required();
    transform->add_option("--points", points_str, "x,y;x,y;...")->required();

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }
    const bool json = format == "json";

    try {
        if (classify->parsed()) {
            EquationSpec eq = parse_fspec(n, fspec);
            auto fields = catalog(eq);
            bool all_ok = true;
            for (const VectorField& vf : fields) all_ok = all_ok && invariance_check(vf, eq).invariant;
            int dim = classify_dimension(eq, fields);
            if (json) {
                ordered_json j = catalog_json(eq, fields, dim);
                j["verified"] = all_ok;
                out << j.dump(2) << "\n";
            } else {
                out << "n = " << n << ", f = " << eq.fspec() << ", dimension " << dim << "\n";
                for (const VectorField& vf : fields) out << vf.label << ": " << to_text(vf) << "\n";
                out << "verified: " << (all_ok ? "true" : "false") << "\n";
            }
            return all_ok ? 0 : 1;
        }
        if (checksym->parsed()) {
            EquationSpec eq = parse_fspec(n, fspec);
            VectorField vf = resolve_generator(generator, eq);
            InvarianceResult r = invariance_check(vf, eq);
            if (json)
                out << invariance_json(vf, r).dump(2) << "\n";
            else if (r.invariant)
                out << "invariant: true\n";
            else
                out << "invariant: false\nresidual: " << to_string(r.residual) << "\n";
            return r.invariant ? 0 : 1;
        }
        if (noether->parsed()) {
            EquationSpec eq = parse_fspec(n, fspec);
            VectorField vf = resolve_generator(generator, eq);
            NoetherVerdict v =
                noether_check(vf, eq, max_order > 0 ? std::optional<int>(max_order) : std::nullopt);
            if (json)
                out << verdict_json(v).dump(2) << "\n";
            else {
                ordered_json j = verdict_json(v);
                out << "kind: " << j["kind"].get<std::string>() << "\n";
                if (v.gauge) out << "gauge: " << to_string(*v.gauge) << "\n";
                if (v.residual) out << "residual: " << to_string(*v.residual) << "\n";
            }
            return v.is_noether() ? 0 : 1;
        }
        if (firstints->parsed()) {
            FirstIntegralSet s = first_integral_catalog(n);
            auto render = [&](const FirstIntegral& I) {
                JetExpr e = I.expr;
                if (lambda_str != "sym") e = substitute_sym(e, Sym::lambda, Rat::parse(lambda_str));
                return to_string(e);
            };
            if (json) {
                ordered_json j{{"command", "first-integrals"},
                               {"n", n},
                               {"lambda", lambda_str},
                               {"I1", render(s.I1)},
                               {"I2", render(s.I2)},
                               {"I3", render(s.I3)}};
                out << j.dump(2) << "\n";
            } else {
                out << "I1 = " << render(s.I1) << "\n";
                out << "I2 = " << render(s.I2) << "\n";
                out << "I3 = " << render(s.I3) << "\n";
            }
            return 0;
        }
        if (solve->parsed()) {
            auto [x0, x1] = detail::parse_span(span_str);
            SolutionFamily fam = SolutionFamily::make(n, lambda, alpha, beta, gamma);
            Trajectory traj = integrate(fam.equation(), fam.state(x0), x0, x1, tol);
            write_csv(traj, out);
            if (!traj.complete) {
                err << "warning: " << traj.diagnostic << "\n";
                return 1;
            }
            return 0;
        }
        if (drift_cmd->parsed()) {
            auto [x0, x1] = detail::parse_span(span_str);
            EquationSpec eq = EquationSpec::power(n, critical_power(n));
            eq.lambda_value = lambda;
            std::vector<double> ics;
            if (!family_str.empty() == !ics_str.empty())
                throw std::invalid_argument("give exactly one of --family or --ics");
            if (!family_str.empty()) {
                auto abg = detail::parse_doubles(family_str, "family parameter");
                if (abg.size() != 3) throw std::invalid_argument("--family needs alpha,beta,gamma");
                ics = SolutionFamily::make(n, lambda, abg[0], abg[1], abg[2]).state(x0);
            } else {
                ics = detail::parse_doubles(ics_str, "initial value");
            }
            Trajectory traj = integrate(eq, std::move(ics), x0, x1, tol);
            double value = drift(traj, first_integral_catalog(n).by_id(integral_id));
            bool accepted = traj.complete && value < drift_threshold;
            if (json) {
                ordered_json j = drift_json(traj, integral_id, value);
                j["threshold"] = drift_threshold;
                j["accepted"] = accepted;
                out << j.dump(2) << "\n";
            } else {
                out << "drift(" << integral_id << ") = " << value << " over " << traj.samples.size()
                    << " samples (threshold " << drift_threshold << ", "
                    << (accepted ? "accepted" : "exceeded") << ")\n";
            }
            if (!traj.complete) err << "warning: " << traj.diagnostic << "\n";
            return accepted ? 0 : 1;
        }
        if (transform->parsed()) {
            PointTransformation t;
            t.kind = kind_str == "translation" ? PointTransformation::Kind::translation
                     : kind_str == "scaling"   ? PointTransformation::Kind::scaling
                                               : PointTransformation::Kind::projective;
            t.epsilon = epsilon;
            t.n = n;
            auto mapped = apply_transformation(t, detail::parse_points(points_str));
            if (json) {
                ordered_json j = ordered_json::array();
                for (const auto& [x, y] : mapped) j.push_back(ordered_json{{"x", x}, {"y", y}});
                out << j.dump(2) << "\n";
            } else {
                out << std::setprecision(17);
                for (const auto& [x, y] : mapped) out << x << " " << y << "\n";
            }
            return 0;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace lieode::cli

#endif

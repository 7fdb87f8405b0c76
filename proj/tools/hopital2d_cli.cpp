#include "hopital2d/parser.hpp"
#include "hopital2d/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hopital2d;
using nlohmann::json;

Coord parse_coord(const std::string& tok) {
    if (tok == "inf" || tok == "+inf") return Coord::plus_inf();
    if (tok == "-inf") return Coord::minus_inf();
    return Coord::finite(parse_rational(tok));
}

LimitPoint parse_point(const std::string& s) {
    size_t comma = s.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("--at expects \"x0,y0\", got \"" + s + "\"");
    return {parse_coord(s.substr(0, comma)), parse_coord(s.substr(comma + 1))};
}

std::string coord_text(const Coord& c) {
    switch (c.kind) {
        case Coord::Kind::Finite: return to_string(c.value);
        case Coord::Kind::PlusInf: return "inf";
        case Coord::Kind::MinusInf: return "-inf";
    }
    return "?";
}

std::string point_text(const LimitPoint& p) {
    return "(" + coord_text(p.x) + ", " + coord_text(p.y) + ")";
}

std::string value_text(const EvalResult& v) {
    switch (v.kind) {
        case EvalResult::Kind::Exact: return to_string(v.exact);
        case EvalResult::Kind::Approx: {
            std::ostringstream os;
            os << v.approx;
            return os.str();
        }
        case EvalResult::Kind::PlusInf: return "+inf";
        case EvalResult::Kind::MinusInf: return "-inf";
        case EvalResult::Kind::Undefined: return "undefined (" + v.reason + ")";
    }
    return "?";
}

struct CommonArgs {
    std::string num, den, at;
    int max_order = default_max_order();
    bool no_oracle = false;
    bool as_json = false;
    double tol = 1e-6;
    std::string curves = "default";
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--num", a.num, "numerator expression")->required();
    cmd->add_option("--den", a.den, "denominator expression")->required();
    cmd->add_option("--at", a.at, "limit point \"x0,y0\" (rationals or inf/-inf)")->required();
    cmd->add_option("--max-order", a.max_order, "highest derivative order tried");
    cmd->add_flag("--no-oracle", a.no_oracle, "skip the numeric cross-check");
    cmd->add_flag("--json", a.as_json, "emit a JSON report");
    cmd->add_option("--tol", a.tol, "oracle convergence tolerance");
    cmd->add_option("--curves", a.curves, "curve family: default or fuzz:<seed>");
}

std::vector<oracle::Curve> family_for(const std::string& name, const LimitPoint& p) {
    if (name == "default") return oracle::default_family(p);
    if (name.rfind("fuzz", 0) == 0) {
        uint32_t seed = 1;
        if (name.size() > 5 && name[4] == ':') seed = std::stoul(name.substr(5));
        return oracle::fuzz_family(seed);
    }
    throw std::runtime_error("unknown curve family \"" + name + "\"");
}

oracle::Curve parse_curve(const std::string& s) {
    // "ax,px,ay,py"
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
    if (parts.size() != 4)
        throw std::runtime_error("--curve expects \"ax,px,ay,py\", got \"" + s + "\"");
    oracle::Curve c;
    c.ax = parse_rational(parts[0]);
    c.px = std::stoi(parts[1]);
    c.ay = parse_rational(parts[2]);
    c.py = std::stoi(parts[3]);
    c.description = "custom curve (" + s + ")";
    return c;
}

void print_verdict(const LimitVerdict& v) {
    std::cout << "engine: ";
    switch (v.result) {
        case LimitVerdict::Result::Exists:
            std::cout << "limit exists, value " << value_text(v.value);
            break;
        case LimitVerdict::Result::NotExists: std::cout << "limit does not exist"; break;
        case LimitVerdict::Result::InfiniteMagnitude:
            std::cout << "quotient is unbounded near the point";
            break;
        case LimitVerdict::Result::Inconclusive: std::cout << "inconclusive"; break;
    }
    std::cout << "  [case " << case_name(v.label) << ", order " << v.order << "]\n";
    for (const auto& r : v.ratios) {
        std::cout << "  ratio l=" << r.index << ": " << value_text(r.num_entry) << " / "
                  << value_text(r.den_entry);
        switch (r.status) {
            case RatioEntry::Status::Ratio:
                std::cout << " = " << value_text(r.ratio);
                break;
            case RatioEntry::Status::SkippedBothZero: std::cout << "  (both zero, skipped)"; break;
            case RatioEntry::Status::ZeroMismatch: std::cout << "  (zero mismatch)"; break;
        }
        std::cout << "\n";
    }
    for (const auto& w : v.witnesses)
        std::cout << "  witness " << w.description << ": value " << value_text(w.value) << "\n";
    for (Flag f : v.flags) std::cout << "  flag: " << flag_name(f) << "\n";
    if (!v.note.empty()) std::cout << "  note: " << v.note << "\n";
}

void print_oracle(const oracle::OracleVerdict& o) {
    std::cout << "oracle: ";
    switch (o.kind) {
        case oracle::OracleVerdict::Kind::AllAgree:
            std::cout << "all curves agree near " << o.value;
            break;
        case oracle::OracleVerdict::Kind::Disagree:
            std::cout << "curves disagree (" << o.estimates[o.curve_a].curve.description
                      << " vs " << o.estimates[o.curve_b].curve.description << ")";
            break;
        case oracle::OracleVerdict::Kind::SomeDiverge:
            std::cout << "some curves diverge";
            break;
        case oracle::OracleVerdict::Kind::Unclear: std::cout << "unclear"; break;
    }
    std::cout << "\n";
    for (const auto& e : o.estimates) {
        std::cout << "  " << e.curve.description << ": ";
        switch (e.kind) {
            case oracle::DirectionalEstimate::Kind::Converged:
                std::cout << e.value << " (residual " << e.residual << ")";
                break;
            case oracle::DirectionalEstimate::Kind::Diverged:
                std::cout << (e.sign > 0 ? "diverges to +inf" : "diverges to -inf");
                break;
            case oracle::DirectionalEstimate::Kind::Oscillating:
                std::cout << "no settled value (last " << e.value << ", residual " << e.residual
                          << ")";
                break;
            case oracle::DirectionalEstimate::Kind::Unusable:
                std::cout << "unusable (" << e.note << ")";
                break;
        }
        std::cout << "\n";
    }
    if (o.iterated.x_then_y)
        std::cout << "  iterated lim_x lim_y = " << *o.iterated.x_then_y << "\n";
    if (o.iterated.y_then_x)
        std::cout << "  iterated lim_y lim_x = " << *o.iterated.y_then_x << "\n";
}

int cmd_limit(const CommonArgs& a) {
    ExprPtr f = parse(a.num);
    ExprPtr g = parse(a.den);
    LimitPoint p = parse_point(a.at);

    DecideConfig cfg;
    cfg.n_max = a.max_order;
    LimitVerdict v = decide(f, g, p, cfg);

    Agreement agreement = Agreement::OracleSkipped;
    oracle::OracleVerdict orc;
    if (!a.no_oracle) {
        oracle::OracleConfig ocfg;
        ocfg.tol = a.tol;
        orc = oracle::verify(f, g, p, family_for(a.curves, p), ocfg);
        agreement = judge_agreement(v, orc);
    }

    if (a.as_json) {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        j["input"] = {{"num", format(f)},
                      {"den", format(g)},
                      {"point", json_detail::point_json(p)}};
        j["config"] = {{"max_order", a.max_order}, {"tol", a.tol}, {"curves", a.curves}};
        j["engine"] = json_detail::verdict_json(v);
        if (!a.no_oracle) j["oracle"] = json_detail::oracle_json(orc);
        j["agreement"] = agreement_name(agreement);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "lim (" << format(f) << ") / (" << format(g) << ")" << "  at " << point_text(p)
                  << "\n";
        print_verdict(v);
        if (!a.no_oracle) print_oracle(orc);
        std::cout << "agreement: " << agreement_name(agreement) << "\n";
    }

    if (agreement == Agreement::Conflict) return 2;
    if (v.result == LimitVerdict::Result::Inconclusive) return 3;
    return 0;
}

int cmd_oracle(const CommonArgs& a, const std::vector<std::string>& extra_curves) {
    ExprPtr f = parse(a.num);
    ExprPtr g = parse(a.den);
    LimitPoint p = parse_point(a.at);
    std::vector<oracle::Curve> fam;
    if (extra_curves.empty()) {
        fam = family_for(a.curves, p);
    } else {
        for (const auto& s : extra_curves) fam.push_back(parse_curve(s));
    }
    oracle::OracleConfig ocfg;
    ocfg.tol = a.tol;
    oracle::OracleVerdict orc = oracle::verify(f, g, p, fam, ocfg);
    if (a.as_json) {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        j["input"] = {{"num", format(f)},
                      {"den", format(g)},
                      {"point", json_detail::point_json(p)}};
        j["oracle"] = json_detail::oracle_json(orc);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "lim (" << format(f) << ") / (" << format(g) << ")" << "  at " << point_text(p)
                  << "\n";
        print_oracle(orc);
    }
    return 0;
}

struct GenerateArgs {
    std::string f, g, at, k;
    int order = 1;
    bool as_json = false;
};

int cmd_generate(const GenerateArgs& a) {
    ExprPtr f = parse(a.f);
    ExprPtr g = parse(a.g);
    LimitPoint p = parse_point(a.at);
    Rational k = parse_rational(a.k);

    GeneratedProblem prob =
        a.order == 1 ? construct_order1(f, g, p, k) : construct_order2(f, g, p, k);

    if (a.as_json) {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        j["problem"] = json_detail::problem_json(prob);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "compute  lim " << format(prob.numerator) << " / " << format(prob.denominator)
              << "  at " << point_text(p) << "  = ?\n";
    for (const auto& [name, value] : prob.constants)
        std::cout << "  " << name << " = " << to_string(value) << "\n";
    std::cout << "answer: " << to_string(prob.target) << "  (order " << prob.order << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-variable indeterminate-limit engine"};
    app.require_subcommand(1);

    CommonArgs largs, oargs;
    GenerateArgs gargs;
    std::vector<std::string> extra_curves;

    CLI::App* limit = app.add_subcommand("limit", "decide a limit and cross-check numerically");
    add_common(limit, largs);

    CLI::App* orc = app.add_subcommand("oracle", "numeric directional estimates only");
    add_common(orc, oargs);
    orc->add_option("--curve", extra_curves, "custom curve \"ax,px,ay,py\" (repeatable)");

    CLI::App* gen = app.add_subcommand("generate", "build a problem with a prescribed limit");
    gen->add_option("--f", gargs.f, "numerator seed")->required();
    gen->add_option("--g", gargs.g, "denominator seed")->required();
    gen->add_option("--at", gargs.at, "construction point \"x0,y0\"")->required();
    gen->add_option("--k", gargs.k, "prescribed limit (rational)")->required();
    gen->add_option("--order", gargs.order, "construction order (1 or 2)")
        ->check(CLI::Range(1, 2));
    gen->add_flag("--json", gargs.as_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (limit->parsed()) return cmd_limit(largs);
        if (orc->parsed()) return cmd_oracle(oargs, extra_curves);
        if (gen->parsed()) return cmd_generate(gargs);
    } catch (const hopital2d::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const hopital2d::GeneratorError& e) {
        std::cerr << "generator error: " << e.what() << "\n";
        return 4;
    } catch (const hopital2d::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

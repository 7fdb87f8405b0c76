#ifndef HOPITAL2D_REPORT_HPP
#define HOPITAL2D_REPORT_HPP

#include "generator.hpp"
#include "oracle.hpp"

#include <json.hpp>

#include <string>

namespace hopital2d {

inline constexpr const char* kReportSchemaVersion = "1";

enum class Agreement { Agree, Conflict, OracleSkipped };

inline const char* agreement_name(Agreement a) {
    switch (a) {
        case Agreement::Agree: return "Agree";
        case Agreement::Conflict: return "Conflict";
        case Agreement::OracleSkipped: return "OracleSkipped";
    }
    return "?";
}

// Conflict: the engine claims a limit the oracle refutes, or the engine
// denies a limit the whole family agrees on.
inline Agreement judge_agreement(const LimitVerdict& engine, const oracle::OracleVerdict& orc) {
    if (engine.result == LimitVerdict::Result::Exists &&
        orc.kind == oracle::OracleVerdict::Kind::Disagree)
        return Agreement::Conflict;
    if (engine.result == LimitVerdict::Result::NotExists &&
        orc.kind == oracle::OracleVerdict::Kind::AllAgree)
        return Agreement::Conflict;
    return Agreement::Agree;
}

namespace json_detail {

using nlohmann::json;

// exact rationals ship as strings so no reader mangles them into floats
inline json rational_json(const Rational& r) {
    return json{{"num", num(r).str()}, {"den", den(r).str()}};
}

inline json value_json(const EvalResult& v) {
    switch (v.kind) {
        case EvalResult::Kind::Exact:
            return json{{"kind", "exact"}, {"value", rational_json(v.exact)}};
        case EvalResult::Kind::Approx:
            return json{{"kind", "approx"}, {"value", v.approx}};
        case EvalResult::Kind::PlusInf:
            return json{{"kind", "+inf"}};
        case EvalResult::Kind::MinusInf:
            return json{{"kind", "-inf"}};
        case EvalResult::Kind::Undefined:
            return json{{"kind", "undefined"}, {"reason", v.reason}};
    }
    return json{};
}

inline json coord_json(const Coord& c) {
    switch (c.kind) {
        case Coord::Kind::Finite: return json{{"kind", "finite"}, {"value", rational_json(c.value)}};
        case Coord::Kind::PlusInf: return json{{"kind", "+inf"}};
        case Coord::Kind::MinusInf: return json{{"kind", "-inf"}};
    }
    return json{};
}

inline json point_json(const LimitPoint& p) {
    return json{{"x", coord_json(p.x)}, {"y", coord_json(p.y)}};
}

inline json verdict_json(const LimitVerdict& v) {
    json j;
    switch (v.result) {
        case LimitVerdict::Result::Exists:
            j["result"] = "Exists";
            j["value"] = value_json(v.value);
            break;
        case LimitVerdict::Result::NotExists: j["result"] = "NotExists"; break;
        case LimitVerdict::Result::InfiniteMagnitude: j["result"] = "InfiniteMagnitude"; break;
        case LimitVerdict::Result::Inconclusive: j["result"] = "Inconclusive"; break;
    }
    j["case"] = case_name(v.label);
    j["order"] = v.order;
    j["ratios"] = json::array();
    for (const auto& r : v.ratios) {
        json e{{"index", r.index},
               {"numerator_entry", value_json(r.num_entry)},
               {"denominator_entry", value_json(r.den_entry)}};
        switch (r.status) {
            case RatioEntry::Status::Ratio: e["ratio"] = value_json(r.ratio); break;
            case RatioEntry::Status::SkippedBothZero: e["skipped"] = "both zero"; break;
            case RatioEntry::Status::ZeroMismatch: e["skipped"] = "zero mismatch"; break;
        }
        j["ratios"].push_back(e);
    }
    j["flags"] = json::array();
    for (Flag f : v.flags) j["flags"].push_back(flag_name(f));
    j["witnesses"] = json::array();
    for (const auto& w : v.witnesses) {
        j["witnesses"].push_back(json{{"dx", rational_json(w.dx)},
                                      {"dy", rational_json(w.dy)},
                                      {"value", value_json(w.value)},
                                      {"description", w.description}});
    }
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

inline json curve_json(const oracle::Curve& c) {
    return json{{"ax", rational_json(c.ax)},
                {"ay", rational_json(c.ay)},
                {"px", c.px},
                {"py", c.py},
                {"description", c.description}};
}

inline json estimate_json(const oracle::DirectionalEstimate& e) {
    json j{{"curve", curve_json(e.curve)}};
    switch (e.kind) {
        case oracle::DirectionalEstimate::Kind::Converged:
            j["kind"] = "Converged";
            j["value"] = e.value;
            j["residual"] = e.residual;
            break;
        case oracle::DirectionalEstimate::Kind::Diverged:
            j["kind"] = "Diverged";
            j["sign"] = e.sign;
            break;
        case oracle::DirectionalEstimate::Kind::Oscillating:
            j["kind"] = "Oscillating";
            j["value"] = e.value;
            j["residual"] = e.residual;
            break;
        case oracle::DirectionalEstimate::Kind::Unusable:
            j["kind"] = "Unusable";
            j["note"] = e.note;
            break;
    }
    return j;
}

inline json oracle_json(const oracle::OracleVerdict& v) {
    json j;
    switch (v.kind) {
        case oracle::OracleVerdict::Kind::AllAgree:
            j["kind"] = "AllAgree";
            j["value"] = v.value;
            break;
        case oracle::OracleVerdict::Kind::Disagree:
            j["kind"] = "Disagree";
            j["curve_a"] = v.curve_a;
            j["curve_b"] = v.curve_b;
            break;
        case oracle::OracleVerdict::Kind::SomeDiverge: j["kind"] = "SomeDiverge"; break;
        case oracle::OracleVerdict::Kind::Unclear: j["kind"] = "Unclear"; break;
    }
    j["curves"] = json::array();
    for (const auto& e : v.estimates) j["curves"].push_back(estimate_json(e));
    json it;
    it["x_then_y"] = v.iterated.x_then_y ? json(*v.iterated.x_then_y) : json(nullptr);
    it["y_then_x"] = v.iterated.y_then_x ? json(*v.iterated.y_then_x) : json(nullptr);
    j["iterated"] = it;
    return j;
}

inline json problem_json(const GeneratedProblem& p) {
    json consts = json::object();
    for (const auto& [name, value] : p.constants) consts[name] = rational_json(value);
    json flags = json::array();
    for (Flag f : p.flags) flags.push_back(flag_name(f));
    return json{{"numerator", format(p.numerator)},
                {"denominator", format(p.denominator)},
                {"point", point_json(p.point)},
                {"target", rational_json(p.target)},
                {"order", p.order},
                {"constants", consts},
                {"seed_f", format(p.seed_f)},
                {"seed_g", format(p.seed_g)},
                {"flags", flags}};
}

} // namespace json_detail
} // namespace hopital2d

#endif

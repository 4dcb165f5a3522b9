#include "optexec/cli/scenario_file.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace optexec::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ScenarioFileError(path + ": " + why);
}

void reject_unknown(const json& object, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : object.items()) {
        if (!allowed.count(key)) fail(path + "." + key, "unknown key \"" + key + "\"");
    }
}

double number(const json& object, const std::string& path, const std::string& key) {
    if (!object.contains(key)) fail(path, "missing required key \"" + key + "\"");
    const json& v = object.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path + "." + key, "must be finite");
    return d;
}

std::vector<double> number_array(const json& object, const std::string& path, const std::string& key) {
    if (!object.contains(key)) fail(path, "missing required key \"" + key + "\"");
    const json& v = object.at(key);
    if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string at = path + "." + key + "[" + std::to_string(i) + "]";
        if (!v[i].is_number()) fail(at, "expected a number");
        const double d = v[i].get<double>();
        if (!std::isfinite(d)) fail(at, "must be finite");
        out.push_back(d);
    }
    return out;
}

CoefficientFunction coefficient(const json& document, const std::string& key) {
    const std::string path = "$." + key;
    if (!document.contains(key)) fail("$", "missing required key \"" + key + "\"");
    const json& object = document.at(key);
    if (!object.is_object()) fail(path, "expected a coefficient object");
    if (!object.contains("family")) fail(path, "missing required key \"family\"");
    if (!object.at("family").is_string()) fail(path + ".family", "expected a string");
    const std::string family = object.at("family").get<std::string>();

    try {
        if (family == "Constant") {
            reject_unknown(object, path, {"family", "c0"});
            return CoefficientFunction::constant(number(object, path, "c0"));
        }
        if (family == "Exponential") {
            reject_unknown(object, path, {"family", "c0", "rate"});
            return CoefficientFunction::exponential(number(object, path, "c0"), number(object, path, "rate"));
        }
        if (family == "CoshPower") {
            reject_unknown(object, path, {"family", "c0", "gamma", "a", "power"});
            const double power = number(object, path, "power");
            if (power != 1.0 && power != 2.0) fail(path + ".power", "must be 1 or 2");
            return CoefficientFunction::cosh_power(number(object, path, "c0"), number(object, path, "gamma"),
                                                   number(object, path, "a"), static_cast<int>(power));
        }
        if (family == "QuadraticProduct") {
            reject_unknown(object, path, {"family", "c0", "k", "power"});
            const double power = object.contains("power") ? number(object, path, "power") : 1.0;
            if (power != 1.0 && power != 0.5) fail(path + ".power", "must be 1 or 0.5");
            return CoefficientFunction::quadratic_product(number(object, path, "c0"), number(object, path, "k"),
                                                          power);
        }
        if (family == "Tabulated") {
            reject_unknown(object, path, {"family", "knots", "values"});
            auto knots = number_array(object, path, "knots");
            auto values = number_array(object, path, "values");
            if (knots.size() != values.size()) fail(path, "\"knots\" and \"values\" differ in length");
            return CoefficientFunction::tabulated(std::move(knots), std::move(values));
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(path + ".family", "unknown family \"" + family + "\"");
}

}  // namespace

Scenario parse_scenario(const json& document) {
    if (!document.is_object()) fail("$", "expected a JSON object");
    reject_unknown(document, "$", {"t0", "T", "x0", "lambda", "eta", "sigma", "frame"});
    const double t0 = number(document, "$", "t0");
    const double T = number(document, "$", "T");
    const double x0 = number(document, "$", "x0");
    const double lambda = number(document, "$", "lambda");
    if (!(T > t0)) fail("$.T", "must exceed t0");
    if (lambda < 0.0) fail("$.lambda", "must be nonnegative");
    Frame frame = Frame::Physical;
    if (document.contains("frame")) {
        const json& f = document.at("frame");
        if (!f.is_string()) fail("$.frame", "expected \"physical\" or \"trader\"");
        const auto name = f.get<std::string>();
        if (name == "physical") frame = Frame::Physical;
        else if (name == "trader") frame = Frame::Trader;
        else fail("$.frame", "expected \"physical\" or \"trader\", got \"" + name + "\"");
    }
    auto eta = coefficient(document, "eta");
    auto sigma = coefficient(document, "sigma");
    const Span span{t0, T};
    try {
        eta.require_positive(span, "$.eta");
    } catch (const std::invalid_argument& e) {
        throw ScenarioFileError(e.what());
    }
    try {
        sigma.require_positive(span, "$.sigma", true);
    } catch (const std::invalid_argument& e) {
        throw ScenarioFileError(e.what());
    }
    try {
        return Scenario(t0, T, x0, lambda, std::move(eta), std::move(sigma), frame);
    } catch (const std::invalid_argument& e) {
        fail("$", e.what());
    }
}

Scenario parse_scenario_text(const std::string& text) {
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("$", std::string("invalid JSON: ") + e.what());
    }
    return parse_scenario(document);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioFileError(path.string() + ": cannot open scenario file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

}  // namespace optexec::cli

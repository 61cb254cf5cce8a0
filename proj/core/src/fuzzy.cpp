#include "stereo_avoid/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "stereo_avoid/errors.hpp"

namespace stereo_avoid::fuzzy {

void Trapezoid::validate() const {
    if (!(std::isfinite(a) && std::isfinite(d)) || !(a <= b && b <= c && c <= d))
        throw std::invalid_argument("membership function corners must satisfy a <= b <= c <= d");
}

double Trapezoid::operator()(double x) const noexcept {
    if (x < a || x > d) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);
    return (d - x) / (d - c);
}

void LinguisticVariable::validate() const {
    if (name.empty()) throw std::invalid_argument("linguistic variable needs a name");
    if (!(universe_lo < universe_hi))
        throw std::invalid_argument("variable '" + name + "': universe_lo must be < universe_hi");
    std::set<std::string> seen;
    for (const auto& t : terms) {
        t.mf.validate();
        if (!seen.insert(t.name).second)
            throw std::invalid_argument("variable '" + name + "': duplicate term '" + t.name + "'");
    }
}

const Trapezoid& LinguisticVariable::term(std::string_view term_name) const {
    for (const auto& t : terms)
        if (t.name == term_name) return t.mf;
    throw std::invalid_argument("variable '" + name + "' has no term '" + std::string(term_name) + "'");
}

bool LinguisticVariable::has_term(std::string_view term_name) const noexcept {
    return std::any_of(terms.begin(), terms.end(), [&](const Term& t) { return t.name == term_name; });
}

double tnorm(double a, double b, AndKind kind) noexcept {
    return kind == AndKind::min ? std::min(a, b) : a * b;
}

double snorm(double a, double b, OrKind kind) noexcept {
    return kind == OrKind::max ? std::max(a, b) : a + b - a * b;
}

double sample_position(double lo, double hi, std::size_t q, std::size_t j) noexcept {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double steps = static_cast<double>(q - 1);
    return mid + half * ((2.0 * static_cast<double>(j) - steps) / steps);
}

double OutputDistribution::position(std::size_t j) const noexcept {
    return sample_position(universe_lo, universe_hi, samples.size(), j);
}

namespace {

const LinguisticVariable* find_var(const std::vector<LinguisticVariable>& vars, std::string_view name) {
    for (const auto& v : vars)
        if (v.name == name) return &v;
    return nullptr;
}

}  // namespace

RuleBase::RuleBase(RuleBaseSpec spec) : spec_(std::move(spec)) {
    if (spec_.q < 3 || spec_.q % 2 == 0) throw std::invalid_argument("rule base: q must be odd and >= 3");
    std::set<std::string> names;
    for (const auto* group : {&spec_.inputs, &spec_.outputs}) {
        for (const auto& v : *group) {
            v.validate();
            if (!names.insert(v.name).second)
                throw std::invalid_argument("rule base: duplicate variable '" + v.name + "'");
        }
    }
    for (std::size_t i = 0; i < spec_.rules.size(); ++i) {
        const auto& rule = spec_.rules[i];
        const std::string where = "rule " + std::to_string(i + 1);
        if (rule.antecedent.empty()) throw std::invalid_argument(where + ": empty antecedent");
        if (rule.consequents.empty()) throw std::invalid_argument(where + ": no consequent");
        for (const auto& c : rule.antecedent) {
            const auto* v = find_var(spec_.inputs, c.variable);
            if (!v) throw std::invalid_argument(where + ": unknown input variable '" + c.variable + "'");
            if (!v->has_term(c.term))
                throw std::invalid_argument(where + ": variable '" + c.variable + "' has no term '" + c.term + "'");
        }
        for (const auto& c : rule.consequents) {
            const auto* v = find_var(spec_.outputs, c.variable);
            if (!v) throw std::invalid_argument(where + ": unknown output variable '" + c.variable + "'");
            if (!v->has_term(c.term))
                throw std::invalid_argument(where + ": variable '" + c.variable + "' has no term '" + c.term + "'");
        }
    }
}

const LinguisticVariable& RuleBase::input(std::string_view name) const {
    if (const auto* v = find_var(spec_.inputs, name)) return *v;
    throw std::invalid_argument("rule base has no input '" + std::string(name) + "'");
}

const LinguisticVariable& RuleBase::output(std::string_view name) const {
    if (const auto* v = find_var(spec_.outputs, name)) return *v;
    throw std::invalid_argument("rule base has no output '" + std::string(name) + "'");
}

std::vector<double> RuleBase::rule_strengths(const std::map<std::string, double>& crisp_inputs) const {
    std::vector<double> strengths;
    strengths.reserve(spec_.rules.size());
    for (const auto& rule : spec_.rules) {
        double s = 0.0;
        bool first = true;
        for (const auto& clause : rule.antecedent) {
            const auto it = crisp_inputs.find(clause.variable);
            if (it == crisp_inputs.end())
                throw std::invalid_argument("missing crisp input '" + clause.variable + "'");
            double degree = input(clause.variable).term(clause.term)(it->second);
            if (clause.negated) degree = 1.0 - degree;
            if (first) {
                s = degree;
                first = false;
            } else {
                s = rule.connective == Connective::all_of ? tnorm(s, degree, spec_.and_kind)
                                                          : snorm(s, degree, spec_.or_kind);
            }
        }
        strengths.push_back(s);
    }
    return strengths;
}

InferenceResult RuleBase::infer(const std::map<std::string, double>& crisp_inputs) const {
    InferenceResult result;
    result.rule_strengths = rule_strengths(crisp_inputs);
    const auto q = static_cast<std::size_t>(spec_.q);
    for (const auto& out : spec_.outputs) {
        OutputDistribution dist{out.name, out.universe_lo, out.universe_hi, std::vector<double>(q, 0.0)};
        result.outputs.emplace(out.name, std::move(dist));
    }
    for (std::size_t i = 0; i < spec_.rules.size(); ++i) {
        const double s = result.rule_strengths[i];
        if (s <= 0.0) continue;
        for (const auto& cons : spec_.rules[i].consequents) {
            auto& dist = result.outputs.at(cons.variable);
            const auto& mf = output(cons.variable).term(cons.term);
            for (std::size_t j = 0; j < q; ++j) {
                const double clipped = std::min(mf(dist.position(j)), s);
                double& agg = dist.samples[j];
                agg = spec_.aggregation == Aggregation::max ? std::max(agg, clipped) : std::min(1.0, agg + clipped);
            }
        }
    }
    return result;
}

std::map<std::string, double> RuleBase::evaluate(const std::map<std::string, double>& crisp_inputs) const {
    std::map<std::string, double> crisp;
    for (const auto& [name, dist] : infer(crisp_inputs).outputs) {
        try {
            crisp.emplace(name, defuzzify(dist, spec_.defuzz));
        } catch (const NoActivationError&) {
        }
    }
    return crisp;
}

double defuzz_centroid(const OutputDistribution& dist) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        num += dist.position(j) * dist.samples[j];
        den += dist.samples[j];
    }
    if (!(den > 0.0)) throw NoActivationError("defuzz_centroid: '" + dist.variable + "' has no activation");
    return num / den;
}

double defuzz_mean_of_max(const OutputDistribution& dist) {
    double peak = 0.0;
    for (double s : dist.samples) peak = std::max(peak, s);
    if (!(peak > 0.0)) throw NoActivationError("defuzz_mean_of_max: '" + dist.variable + "' has no activation");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        if (dist.samples[j] == peak) {
            sum += dist.position(j);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

double defuzzify(const OutputDistribution& dist, Defuzz kind) {
    return kind == Defuzz::centroid ? defuzz_centroid(dist) : defuzz_mean_of_max(dist);
}

std::string_view to_string(AndKind k) noexcept { return k == AndKind::min ? "min" : "product"; }
std::string_view to_string(OrKind k) noexcept { return k == OrKind::max ? "max" : "probabilistic_sum"; }
std::string_view to_string(Aggregation k) noexcept { return k == Aggregation::max ? "max" : "bounded_sum"; }
std::string_view to_string(Defuzz k) noexcept { return k == Defuzz::centroid ? "centroid" : "mean_of_max"; }

}  // namespace stereo_avoid::fuzzy

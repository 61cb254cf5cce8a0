#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stereo_avoid::fuzzy {

/// Trapezoid a <= b <= c <= d: 1 on [b, c], 0 outside [a, d], linear between.
/// b == c gives a triangle; a == b or c == d a shoulder.
struct Trapezoid {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    void validate() const;
    double operator()(double x) const noexcept;

    friend bool operator==(const Trapezoid&, const Trapezoid&) = default;
};

inline double mf_eval(const Trapezoid& mf, double x) noexcept { return mf(x); }

struct Term {
    std::string name;
    Trapezoid mf;

    friend bool operator==(const Term&, const Term&) = default;
};

struct LinguisticVariable {
    std::string name;
    double universe_lo = 0.0;
    double universe_hi = 1.0;
    std::vector<Term> terms;

    void validate() const;
    /// Throws std::invalid_argument for an unknown term.
    const Trapezoid& term(std::string_view term_name) const;
    bool has_term(std::string_view term_name) const noexcept;

    friend bool operator==(const LinguisticVariable&, const LinguisticVariable&) = default;
};

enum class AndKind { min, product };
enum class OrKind { max, probabilistic_sum };
enum class Aggregation { max, bounded_sum };
enum class Defuzz { centroid, mean_of_max };
enum class Connective { all_of, any_of };

double tnorm(double a, double b, AndKind kind) noexcept;
double snorm(double a, double b, OrKind kind) noexcept;

struct Clause {
    std::string variable;
    std::string term;
    bool negated = false;

    friend bool operator==(const Clause&, const Clause&) = default;
};

struct Consequent {
    std::string variable;
    std::string term;

    friend bool operator==(const Consequent&, const Consequent&) = default;
};

struct FuzzyRule {
    std::vector<Clause> antecedent;
    std::vector<Consequent> consequents;
    Connective connective = Connective::all_of;

    friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

/// Output membership sampled at q evenly spaced points of the universe.
struct OutputDistribution {
    std::string variable;
    double universe_lo = 0.0;
    double universe_hi = 1.0;
    std::vector<double> samples;

    std::size_t size() const noexcept { return samples.size(); }
    double position(std::size_t j) const noexcept;
};

/// Sample j of q on [lo, hi]. Computed about the midpoint so a universe
/// symmetric about zero yields exactly mirrored positions.
double sample_position(double lo, double hi, std::size_t q, std::size_t j) noexcept;

struct InferenceResult {
    std::map<std::string, OutputDistribution> outputs;
    std::vector<double> rule_strengths;
};

struct RuleBaseSpec {
    std::vector<LinguisticVariable> inputs;
    std::vector<LinguisticVariable> outputs;
    std::vector<FuzzyRule> rules;
    AndKind and_kind = AndKind::min;
    OrKind or_kind = OrKind::max;
    Aggregation aggregation = Aggregation::max;
    Defuzz defuzz = Defuzz::centroid;
    int q = 1001;
};

/// Validated, immutable Mamdani rule base.
class RuleBase {
public:
    /// Throws std::invalid_argument if a rule references an undeclared
    /// variable or term, variable names collide, or q is not an odd number >= 3.
    explicit RuleBase(RuleBaseSpec spec);

    const RuleBaseSpec& spec() const noexcept { return spec_; }
    const std::vector<FuzzyRule>& rules() const noexcept { return spec_.rules; }
    const LinguisticVariable& input(std::string_view name) const;
    const LinguisticVariable& output(std::string_view name) const;

    /// Degree of each rule's antecedent. Throws std::invalid_argument when an
    /// input referenced by a rule is missing from `crisp_inputs`.
    std::vector<double> rule_strengths(const std::map<std::string, double>& crisp_inputs) const;

    /// Rule strengths, clipping implication and aggregation over q samples.
    InferenceResult infer(const std::map<std::string, double>& crisp_inputs) const;

    /// Defuzzifies each output with the configured method. Outputs whose
    /// distribution is all zero are left out of the returned map.
    std::map<std::string, double> evaluate(const std::map<std::string, double>& crisp_inputs) const;

private:
    RuleBaseSpec spec_;
};

/// Eq. sum z_j u(z_j) / sum u(z_j). Throws NoActivationError for an all-zero distribution.
double defuzz_centroid(const OutputDistribution& dist);

/// Mean of the sample positions attaining the maximum. Throws NoActivationError
/// for an all-zero distribution.
double defuzz_mean_of_max(const OutputDistribution& dist);

double defuzzify(const OutputDistribution& dist, Defuzz kind);

std::string_view to_string(AndKind k) noexcept;
std::string_view to_string(OrKind k) noexcept;
std::string_view to_string(Aggregation k) noexcept;
std::string_view to_string(Defuzz k) noexcept;

}  // namespace stereo_avoid::fuzzy

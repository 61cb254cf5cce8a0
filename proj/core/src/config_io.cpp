#include "stereo_avoid/config_io.hpp"

#include <charconv>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stereo_avoid/errors.hpp"
#include "stereo_avoid/image_io.hpp"

namespace stereo_avoid::io {

using json = nlohmann::ordered_json;

namespace {

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

template <class T>
T get(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string(what) + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": bad value for '" + key + "': " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const char* what) {
    if (!j.contains(key)) return fallback;
    return get<T>(j, key, what);
}

sim::Vec3 vec3(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) throw ParseError(std::string(what) + ": expected [x, y, z]");
    try {
        return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

json vec3_json(sim::Vec3 v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

CameraRig parse_rig_json(const std::string& text) {
    const json j = parse_json(text, "rig");
    CameraRig rig;
    rig.baseline_m = get<double>(j, "baseline_m", "rig");
    rig.focal_px = get<double>(j, "focal_px", "rig");
    rig.principal_x_px = get<double>(j, "principal_x_px", "rig");
    rig.principal_y_px = get<double>(j, "principal_y_px", "rig");
    rig.width_px = get<int>(j, "width_px", "rig");
    rig.height_px = get<int>(j, "height_px", "rig");
    rig.validate();
    return rig;
}

std::string rig_to_json(const CameraRig& rig) {
    json j;
    j["baseline_m"] = rig.baseline_m;
    j["focal_px"] = rig.focal_px;
    j["principal_x_px"] = rig.principal_x_px;
    j["principal_y_px"] = rig.principal_y_px;
    j["width_px"] = rig.width_px;
    j["height_px"] = rig.height_px;
    return j.dump(2);
}

CameraRig load_rig(const std::filesystem::path& path) { return parse_rig_json(read_file(path)); }

MatchParams parse_match_json(const std::string& text) {
    const json j = parse_json(text, "match params");
    MatchParams p;
    p.window_radius_px = get_or<int>(j, "window_radius_px", p.window_radius_px, "match params");
    p.max_disparity_px = get_or<int>(j, "max_disparity_px", p.max_disparity_px, "match params");
    p.uniqueness_ratio = get_or<double>(j, "uniqueness_ratio", p.uniqueness_ratio, "match params");
    if (j.contains("lr_consistency_px") && !j["lr_consistency_px"].is_null())
        p.lr_consistency_px = get<int>(j, "lr_consistency_px", "match params");
    p.validate();
    return p;
}

std::string match_to_json(const MatchParams& p) {
    json j;
    j["window_radius_px"] = p.window_radius_px;
    j["max_disparity_px"] = p.max_disparity_px;
    j["uniqueness_ratio"] = p.uniqueness_ratio;
    j["lr_consistency_px"] = p.lr_consistency_px ? json(*p.lr_consistency_px) : json(nullptr);
    return j.dump(2);
}

namespace {

template <class E>
E enum_from(const json& j, const char* key, E fallback, std::initializer_list<std::pair<const char*, E>> table) {
    if (!j.contains(key)) return fallback;
    const auto s = get<std::string>(j, key, "rule base");
    for (const auto& [name, value] : table)
        if (s == name) return value;
    throw ParseError("rule base: unknown value '" + s + "' for '" + key + "'");
}

}  // namespace

fuzzy::RuleBase parse_rulebase_json(const std::string& text) {
    const json j = parse_json(text, "rule base");
    fuzzy::RuleBaseSpec spec;
    if (!j.contains("variables") || !j["variables"].is_array()) throw ParseError("rule base: missing 'variables'");
    if (!j.contains("rules") || !j["rules"].is_array()) throw ParseError("rule base: missing 'rules'");

    std::set<std::string> consequent_vars;
    for (const auto& r : j["rules"])
        if (r.contains("then") && r["then"].is_array())
            for (const auto& c : r["then"])
                if (c.is_array() && !c.empty() && c[0].is_string()) consequent_vars.insert(c[0].get<std::string>());

    for (const auto& v : j["variables"]) {
        fuzzy::LinguisticVariable var;
        var.name = get<std::string>(v, "name", "rule base variable");
        const auto universe = get<std::vector<double>>(v, "universe", "rule base variable");
        if (universe.size() != 2) throw ParseError("rule base: universe of '" + var.name + "' must be [lo, hi]");
        var.universe_lo = universe[0];
        var.universe_hi = universe[1];
        if (!v.contains("terms") || !v["terms"].is_object())
            throw ParseError("rule base: variable '" + var.name + "' needs a 'terms' object");
        for (const auto& [term_name, corners] : v["terms"].items()) {
            std::vector<double> c;
            try {
                c = corners.get<std::vector<double>>();
            } catch (const json::exception&) {
                throw ParseError("rule base: term '" + term_name + "' must be [a, b, c, d]");
            }
            if (c.size() != 4) throw ParseError("rule base: term '" + term_name + "' must be [a, b, c, d]");
            var.terms.push_back({term_name, {c[0], c[1], c[2], c[3]}});
        }
        std::string role = get_or<std::string>(v, "role", consequent_vars.count(var.name) ? "output" : "input",
                                               "rule base variable");
        if (role == "input")
            spec.inputs.push_back(std::move(var));
        else if (role == "output")
            spec.outputs.push_back(std::move(var));
        else
            throw ParseError("rule base: role must be 'input' or 'output'");
    }

    for (const auto& r : j["rules"]) {
        fuzzy::FuzzyRule rule;
        const auto op = get_or<std::string>(r, "op", "and", "rule");
        if (op == "and")
            rule.connective = fuzzy::Connective::all_of;
        else if (op == "or")
            rule.connective = fuzzy::Connective::any_of;
        else
            throw ParseError("rule: op must be 'and' or 'or'");
        for (const auto& c : get<json>(r, "if", "rule")) {
            if (!c.is_array() || (c.size() != 2 && c.size() != 3))
                throw ParseError("rule: clause must be [var, term] or [var, term, \"not\"]");
            fuzzy::Clause clause{c[0].get<std::string>(), c[1].get<std::string>(), false};
            if (c.size() == 3) {
                if (c[2] != "not") throw ParseError("rule: third clause element must be \"not\"");
                clause.negated = true;
            }
            rule.antecedent.push_back(std::move(clause));
        }
        for (const auto& c : get<json>(r, "then", "rule")) {
            if (!c.is_array() || c.size() != 2) throw ParseError("rule: consequent must be [var, term]");
            rule.consequents.push_back({c[0].get<std::string>(), c[1].get<std::string>()});
        }
        spec.rules.push_back(std::move(rule));
    }

    spec.and_kind = enum_from(j, "and", fuzzy::AndKind::min,
                              {{"min", fuzzy::AndKind::min}, {"product", fuzzy::AndKind::product}});
    spec.or_kind = enum_from(j, "or", fuzzy::OrKind::max,
                             {{"max", fuzzy::OrKind::max}, {"probabilistic_sum", fuzzy::OrKind::probabilistic_sum}});
    spec.aggregation = enum_from(j, "aggregation", fuzzy::Aggregation::max,
                                 {{"max", fuzzy::Aggregation::max}, {"bounded_sum", fuzzy::Aggregation::bounded_sum}});
    spec.defuzz = enum_from(j, "defuzz", fuzzy::Defuzz::centroid,
                            {{"centroid", fuzzy::Defuzz::centroid}, {"mean_of_max", fuzzy::Defuzz::mean_of_max}});
    spec.q = get_or<int>(j, "q", spec.q, "rule base");
    return fuzzy::RuleBase(std::move(spec));
}

std::string rulebase_to_json(const fuzzy::RuleBase& rb) {
    const auto& spec = rb.spec();
    json j;
    j["variables"] = json::array();
    auto add_vars = [&](const std::vector<fuzzy::LinguisticVariable>& vars, const char* role) {
        for (const auto& v : vars) {
            json jv;
            jv["name"] = v.name;
            jv["role"] = role;
            jv["universe"] = {v.universe_lo, v.universe_hi};
            jv["terms"] = json::object();
            for (const auto& t : v.terms) jv["terms"][t.name] = {t.mf.a, t.mf.b, t.mf.c, t.mf.d};
            j["variables"].push_back(jv);
        }
    };
    add_vars(spec.inputs, "input");
    add_vars(spec.outputs, "output");
    j["rules"] = json::array();
    for (const auto& r : spec.rules) {
        json jr;
        jr["if"] = json::array();
        for (const auto& c : r.antecedent) {
            json clause = {c.variable, c.term};
            if (c.negated) clause.push_back("not");
            jr["if"].push_back(clause);
        }
        jr["then"] = json::array();
        for (const auto& c : r.consequents) jr["then"].push_back({c.variable, c.term});
        if (r.connective == fuzzy::Connective::any_of) jr["op"] = "or";
        j["rules"].push_back(jr);
    }
    j["and"] = fuzzy::to_string(spec.and_kind);
    j["or"] = fuzzy::to_string(spec.or_kind);
    j["aggregation"] = fuzzy::to_string(spec.aggregation);
    j["defuzz"] = fuzzy::to_string(spec.defuzz);
    j["q"] = spec.q;
    return j.dump(2);
}

fuzzy::RuleBase load_rulebase(const std::filesystem::path& path) { return parse_rulebase_json(read_file(path)); }

sim::Scene parse_scene_json(const std::string& text) {
    const json j = parse_json(text, "scene");
    sim::Scene scene;
    if (!j.contains("boxes") || !j["boxes"].is_array()) throw ParseError("scene: missing 'boxes' array");
    for (const auto& b : j["boxes"]) {
        sim::Box box;
        box.min = vec3(get<json>(b, "min", "scene box"), "scene box min");
        box.max = vec3(get<json>(b, "max", "scene box"), "scene box max");
        box.seed = get_or<std::uint64_t>(b, "seed", 0, "scene box");
        if (b.contains("velocity")) box.velocity = vec3(b["velocity"], "scene box velocity");
        scene.boxes.push_back(box);
    }
    if (j.contains("bounds")) {
        scene.bounds_min = vec3(get<json>(j["bounds"], "min", "scene bounds"), "scene bounds min");
        scene.bounds_max = vec3(get<json>(j["bounds"], "max", "scene bounds"), "scene bounds max");
    }
    scene.validate();
    return scene;
}

std::string scene_to_json(const sim::Scene& scene) {
    json j;
    j["boxes"] = json::array();
    for (const auto& b : scene.boxes) {
        json jb;
        jb["min"] = vec3_json(b.min);
        jb["max"] = vec3_json(b.max);
        jb["seed"] = b.seed;
        if (!(b.velocity == sim::Vec3{})) jb["velocity"] = vec3_json(b.velocity);
        j["boxes"].push_back(jb);
    }
    j["bounds"] = {{"min", vec3_json(scene.bounds_min)}, {"max", vec3_json(scene.bounds_max)}};
    return j.dump(2);
}

sim::Scene load_scene(const std::filesystem::path& path) { return parse_scene_json(read_file(path)); }

std::string region_depths_to_json(const RegionDepths& depths) {
    json j;
    for (Region r : kAllRegions) j[std::string(region_name(r))] = depths[r];
    return j.dump(2);
}

RegionDepths parse_region_depths_json(const std::string& text) {
    const json j = parse_json(text, "region depths");
    RegionDepths d;
    for (Region r : kAllRegions) d[r] = get<double>(j, std::string(region_name(r)).c_str(), "region depths");
    return d;
}

std::string grid_to_json(const RegionGrid& grid) {
    json j;
    j["width_px"] = grid.width_px;
    j["height_px"] = grid.height_px;
    for (Region r : kAllRegions) {
        const auto rect = grid.rect(r);
        j["regions"][std::string(region_name(r))] = {
            {"x", {rect.x_lo, rect.x_hi}},
            {"y", {rect.y_lo, rect.y_hi}},
        };
    }
    return j.dump(2);
}

std::string depth_map_csv(const DepthMap& depth) {
    std::string out;
    out.reserve(static_cast<std::size_t>(depth.width()) * depth.height() * 8);
    char buf[32];
    for (int y = 0; y < depth.height(); ++y) {
        auto row = depth.row(y);
        for (int x = 0; x < depth.width(); ++x) {
            if (x) out.push_back(',');
            if (!is_valid(row[x])) {
                out += "nan";
            } else {
                const int n = std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(row[x]));
                out.append(buf, static_cast<std::size_t>(n));
            }
        }
        out.push_back('\n');
    }
    return out;
}

DepthMap parse_depth_map_csv(const std::string& text) {
    std::vector<float> values;
    int width = -1;
    int height = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int count = 0;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const auto comma = std::min(line.find(',', pos), line.size());
            const std::string_view field(line.data() + pos, comma - pos);
            if (field == "nan") {
                values.push_back(kInvalid);
            } else {
                float v = 0.0f;
                const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
                if (ec != std::errc{} || ptr != field.data() + field.size())
                    throw ParseError("depth CSV row " + std::to_string(height + 1) + ": bad value");
                values.push_back(v);
            }
            ++count;
            pos = comma + 1;
        }
        if (width < 0) width = count;
        if (count != width) throw ParseError("depth CSV: ragged rows");
        ++height;
    }
    if (width < 0) return {};
    return {width, height, std::move(values)};
}

GrayImage disparity_to_pgm_image(const DisparityMap& disparity, double scale) {
    GrayImage img(disparity.width(), disparity.height());
    for (int y = 0; y < disparity.height(); ++y) {
        auto src = disparity.row(y);
        auto dst = img.row(y);
        for (int x = 0; x < disparity.width(); ++x) {
            if (!is_valid(src[x])) {
                dst[x] = 0;
                continue;
            }
            const long v = std::lround(static_cast<double>(src[x]) * scale);
            dst[x] = static_cast<std::uint8_t>(std::clamp(v, 0l, 255l));
        }
    }
    return img;
}

}  // namespace stereo_avoid::io

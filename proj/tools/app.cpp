#include "app.hpp"

#include "CLI11.hpp"
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "stereo_avoid/config_io.hpp"
#include "stereo_avoid/errors.hpp"
#include "stereo_avoid/image_io.hpp"
#include "stereo_avoid/sim.hpp"

namespace stereo_avoid::app {

using nlohmann::json;
namespace fs = std::filesystem;

void require_file(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) throw UsageError("cannot open " + path.string() + ": no such file");
}

RegionGrid RunConfig::grid() const {
    const int side = center_side_px.value_or(center_region_px(rig.focal_px, 0.5, 1.5));
    return make_grid(rig.width_px, rig.height_px, side);
}

void apply_rules_option(RunConfig& cfg, const std::string& rules) {
    if (rules.empty()) return;
    if (auto p = preset_from_name(rules)) {
        cfg.controller.preset = *p;
        cfg.custom_rules.reset();
        return;
    }
    require_file(rules);
    cfg.custom_rules = io::load_rulebase(rules);
}

namespace {

AvoidanceController make_controller(const RunConfig& cfg) {
    if (cfg.custom_rules) return AvoidanceController(*cfg.custom_rules, cfg.controller);
    return AvoidanceController(cfg.controller);
}

json regions_json(const RegionDepths& d) {
    json j;
    for (Region r : kAllRegions) j[std::string(region_name(r))] = d[r];
    return j;
}

}  // namespace

PipelineOutput run_pipeline(const StereoPair& pair, const RunConfig& cfg) {
    const int side = cfg.center_side_px.value_or(center_region_px(pair.rig().focal_px, 0.5, 1.5));
    const RegionGrid grid = make_grid(pair.width(), pair.height(), side);
    PipelineOutput out{block_match(pair, cfg.match, cfg.workers), {}, {}};
    if (out.disparity.valid_count() == 0) throw ComputationError("no valid disparities");
    out.fused = fused_pipeline(pair, cfg.match, grid, cfg.lut, cfg.workers);
    out.decision = make_controller(cfg).steer_detailed(out.fused.regions);
    return out;
}

std::string steer_json(const SteerResult& r) {
    json j;
    j["pitch"] = r.command.pitch;
    j["yaw"] = r.command.yaw;
    j["active_controller"] = std::string(to_string(r.active));
    j["rule_strengths"] = r.rule_strengths;
    return j.dump(2);
}

namespace {

StereoPair pair_for(GrayImage left, GrayImage right, const CameraRig& rig) {
    if (left.width() != rig.width_px || left.height() != rig.height_px)
        throw UsageError("image size " + std::to_string(left.width()) + "x" + std::to_string(left.height()) +
                         " does not match rig " + std::to_string(rig.width_px) + "x" +
                         std::to_string(rig.height_px));
    return {std::move(left), std::move(right), rig};
}

void write_outputs(const PipelineOutput& po, const RunConfig& cfg, const std::string& command) {
    fs::create_directories(cfg.out_dir);
    write_file(cfg.out_dir / "depth.csv", io::depth_map_csv(po.fused.depth));
    write_pgm(cfg.out_dir / "disparity.pgm", io::disparity_to_pgm_image(po.disparity, cfg.disparity_scale));
    write_file(cfg.out_dir / "command.json", command + "\n");
}

std::string command_json(const PipelineOutput& po) {
    json j = json::parse(steer_json(po.decision));
    j["regions"] = regions_json(po.fused.regions);
    return j.dump(2);
}

}  // namespace

std::string run_pipeline(const fs::path& left, const fs::path& right, const RunConfig& cfg) {
    require_file(left);
    require_file(right);
    StereoPair pair = pair_for(read_pgm(left), read_pgm(right), cfg.rig);
    const auto po = run_pipeline(pair, cfg);
    const auto cmd = command_json(po);
    write_outputs(po, cfg, cmd);
    return cmd;
}

double BenchReport::speedup_at(unsigned w) const {
    for (std::size_t i = 0; i < workers.size(); ++i)
        if (workers[i] == w) return speedup[i];
    throw std::out_of_range("no bench entry for " + std::to_string(w) + " workers");
}

BenchReport bench(const RunConfig& cfg, const std::vector<unsigned>& worker_counts, int repeats) {
    if (worker_counts.size() < 2 || std::find(worker_counts.begin(), worker_counts.end(), 1u) == worker_counts.end())
        throw std::invalid_argument("bench: need at least two worker counts including 1");
    if (repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");
    for (unsigned w : worker_counts)
        if (w == 0) throw std::invalid_argument("bench: worker counts must be >= 1");

    const auto scenario = sim::empty_corridor();
    sim::RenderOptions ro;
    ro.noise_seed = 7;
    const StereoPair pair = sim::render_stereo(scenario.scene, scenario.start, cfg.rig, ro);
    const RegionGrid grid = cfg.grid();

    const FusedResult reference = unfused_pipeline(pair, cfg.match, grid, cfg.lut, 1);
    BenchReport rep;
    rep.width = pair.width();
    rep.height = pair.height();
    rep.max_disparity = cfg.match.max_disparity_px;
    rep.outputs_equal = true;
    for (unsigned w : worker_counts) {
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < repeats; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            const FusedResult got = fused_pipeline(pair, cfg.match, grid, cfg.lut, w);
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            best = std::min(best, dt.count());
            if (!got.depth.bit_identical(reference.depth) || got.regions.values != reference.regions.values)
                rep.outputs_equal = false;
        }
        rep.workers.push_back(w);
        rep.seconds.push_back(best);
    }
    if (!rep.outputs_equal) throw std::logic_error("bench: fused output differs across worker counts");
    const auto one = std::find(rep.workers.begin(), rep.workers.end(), 1u) - rep.workers.begin();
    for (double s : rep.seconds) rep.speedup.push_back(rep.seconds[one] / s);
    return rep;
}

std::string bench_json(const BenchReport& r) {
    json j;
    j["width"] = r.width;
    j["height"] = r.height;
    j["max_disparity"] = r.max_disparity;
    j["outputs_equal"] = r.outputs_equal;
    j["runs"] = json::array();
    for (std::size_t i = 0; i < r.workers.size(); ++i)
        j["runs"].push_back({{"workers", r.workers[i]}, {"seconds", r.seconds[i]}, {"speedup", r.speedup[i]}});
    return j.dump(2);
}

std::string bench_csv(const BenchReport& r) {
    std::ostringstream os;
    os << std::setprecision(9) << "workers,seconds,speedup,width,height,max_disparity,outputs_equal\n";
    for (std::size_t i = 0; i < r.workers.size(); ++i)
        os << r.workers[i] << ',' << r.seconds[i] << ',' << r.speedup[i] << ',' << r.width << ',' << r.height
           << ',' << r.max_disparity << ',' << (r.outputs_equal ? 1 : 0) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// CLI

namespace {

struct PairFlags {
    std::string left, right, sbs;
};

struct MatchFlags {
    std::string match_json;
    std::optional<int> window, max_disp, lr_check;
    std::optional<double> uniqueness;

    MatchParams apply(MatchParams base) const {
        if (!match_json.empty()) {
            require_file(match_json);
            base = io::parse_match_json(read_file(match_json));
        }
        if (window) base.window_radius_px = *window;
        if (max_disp) base.max_disparity_px = *max_disp;
        if (uniqueness) base.uniqueness_ratio = *uniqueness;
        if (lr_check) {
            if (*lr_check < 0)
                base.lr_consistency_px.reset();
            else
                base.lr_consistency_px = *lr_check;
        }
        base.validate();
        return base;
    }
};

struct CommonFlags {
    std::string rig, lut, rules;
    std::optional<int> center_px;
    std::optional<double> span;
    unsigned workers = 0;
    std::string out_dir = ".";
    double scale = 4.0;
};

void add_pair(CLI::App* sc, PairFlags& p) {
    sc->add_option("--left", p.left, "Left PGM (P5)");
    sc->add_option("--right", p.right, "Right PGM (P5)");
    sc->add_option("--sbs", p.sbs, "Side-by-side PGM, left half is the left view");
}

void add_match(CLI::App* sc, MatchFlags& m) {
    sc->add_option("--match", m.match_json, "Match-parameter JSON");
    sc->add_option("--window", m.window, "SAD window radius r (window is 2r+1)");
    sc->add_option("--max-disp", m.max_disp, "Maximum disparity in px");
    sc->add_option("--uniqueness", m.uniqueness, "Uniqueness ratio in [0,1)");
    sc->add_option("--lr-check", m.lr_check, "Left-right tolerance in px, negative disables");
}

void add_common(CLI::App* sc, CommonFlags& c, bool rules) {
    sc->add_option("--rig", c.rig, "Camera rig JSON");
    sc->add_option("--lut", c.lut, "Depth LUT CSV (computed_m,true_m)");
    sc->add_option("--center-px", c.center_px, "Center region side in px");
    sc->add_option("--workers", c.workers, "Worker threads, 0 = all cores");
    sc->add_option("--out-dir", c.out_dir, "Output directory");
    if (rules) {
        sc->add_option("--rules", c.rules, "paper-literal, paper-corrected or rule-base JSON");
        sc->add_option("--span", c.span, "Depth normalization span in m");
    }
}

RunConfig build_config(const CommonFlags& c, const MatchFlags& m, MatchParams base = {}) {
    RunConfig cfg;
    if (!c.rig.empty()) {
        require_file(c.rig);
        cfg.rig = io::load_rig(c.rig);
    }
    if (!c.lut.empty()) {
        require_file(c.lut);
        cfg.lut = load_lut_csv(c.lut);
    }
    cfg.match = m.apply(base);
    if (c.span) cfg.controller.normalization_span_m = *c.span;
    apply_rules_option(cfg, c.rules);
    cfg.controller.validate();
    cfg.center_side_px = c.center_px;
    cfg.workers = c.workers;
    cfg.out_dir = c.out_dir;
    cfg.disparity_scale = c.scale;
    return cfg;
}

// Without --rig the default intrinsics are kept but the size and principal
// point follow the images.
StereoPair load_pair(const PairFlags& p, RunConfig& cfg, bool explicit_rig) {
    GrayImage left, right;
    if (!p.sbs.empty()) {
        if (!p.left.empty() || !p.right.empty()) throw UsageError("use either --sbs or --left/--right");
        require_file(p.sbs);
        std::tie(left, right) = split_side_by_side(read_pgm(p.sbs));
    } else {
        if (p.left.empty() || p.right.empty()) throw UsageError("need --left and --right, or --sbs");
        require_file(p.left);
        require_file(p.right);
        left = read_pgm(p.left);
        right = read_pgm(p.right);
    }
    if (!explicit_rig) {
        cfg.rig.width_px = left.width();
        cfg.rig.height_px = left.height();
        cfg.rig.principal_x_px = left.width() / 2.0;
        cfg.rig.principal_y_px = left.height() / 2.0;
    }
    return pair_for(std::move(left), std::move(right), cfg.rig);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw UsageError("bad number '" + s + "' for " + what);
    return v;
}

sim::Vec3 parse_vec3(const std::string& s, const std::string& what) {
    const auto parts = split(s, ',');
    if (parts.size() != 3) throw UsageError(what + " needs x,y,z");
    return {to_double(parts[0], what), to_double(parts[1], what), to_double(parts[2], what)};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stereo depth to fuzzy avoidance commands", "stereo-avoid"};
    app.require_subcommand(1);

    PairFlags pair_f;
    MatchFlags match_f;
    CommonFlags common_f;

    // depth
    auto* depth = app.add_subcommand("depth", "Disparity PGM and depth CSV from a stereo pair");
    add_pair(depth, pair_f);
    add_match(depth, match_f);
    add_common(depth, common_f, false);
    depth->add_option("--scale", common_f.scale, "Disparity PGM gray levels per px");

    // regions
    bool dump_grid = false;
    std::string depth_csv;
    auto* regions = app.add_subcommand("regions", "Nine region minimum depths as JSON");
    add_pair(regions, pair_f);
    add_match(regions, match_f);
    add_common(regions, common_f, false);
    regions->add_option("--depth", depth_csv, "Depth CSV instead of a stereo pair");
    regions->add_flag("--grid", dump_grid, "Also dump the region rectangles");

    // steer
    std::string depths_json;
    std::map<Region, double> region_flags;
    for (Region r : kAllRegions) region_flags[r] = kFarSentinelM;
    auto* steer_c = app.add_subcommand("steer", "Steering command from nine region depths");
    add_common(steer_c, common_f, true);
    steer_c->add_option("--depths", depths_json, "Region depths JSON keyed by region name");
    for (Region r : kAllRegions) {
        std::string name(region_name(r));
        std::replace(name.begin(), name.end(), '_', '-');
        steer_c->add_option("--" + name, region_flags[r], "Depth in m (default 9.0)");
    }

    // fuzzy-eval
    std::string rule_file, dump_csv;
    std::vector<std::string> inputs;
    auto* feval = app.add_subcommand("fuzzy-eval", "Evaluate a rule base on crisp inputs");
    feval->add_option("--rules", rule_file, "Rule-base JSON or preset name")->required();
    feval->add_option("--input", inputs, "name=value, repeatable");
    feval->add_option("--dump", dump_csv, "Write output distributions as CSV");

    // lut
    std::string lut_out;
    std::vector<double> queries;
    auto* lut_c = app.add_subcommand("lut", "Build and validate a depth LUT");
    lut_c->add_option("--lut", common_f.lut, "LUT CSV (computed_m,true_m)")->required();
    lut_c->add_option("--query", queries, "Computed depth to refine, repeatable");
    lut_c->add_option("--out", lut_out, "Write the normalized LUT CSV");

    // sim
    std::string scenario, scene_file, start_s, frames_dir, traj_out;
    std::optional<int> steps;
    std::optional<double> noise;
    std::uint64_t seed = 1;
    auto* sim_c = app.add_subcommand("sim", "Closed-loop episode in a rendered scene");
    add_match(sim_c, match_f);
    add_common(sim_c, common_f, true);
    sim_c->add_option("--scenario", scenario, "Built-in scenario name");
    sim_c->add_option("--scene", scene_file, "Scene JSON");
    sim_c->add_option("--start", start_s, "Start position x,y,z");
    sim_c->add_option("--steps", steps, "Step limit");
    sim_c->add_option("--seed", seed, "Noise seed");
    sim_c->add_option("--noise", noise, "Image noise stddev");
    sim_c->add_option("--frames", frames_dir, "Write per-step debug PPM frames here");
    sim_c->add_option("--out", traj_out, "Trajectory CSV path (default <out-dir>/trajectory.csv)");

    // bench
    std::string workers_list = "1,2,4,8", bench_out;
    int repeats = 3;
    auto* bench_c = app.add_subcommand("bench", "Time fused_pipeline across worker counts");
    add_match(bench_c, match_f);
    add_common(bench_c, common_f, false);
    bench_c->add_option("--workers-list", workers_list, "Comma-separated worker counts, must include 1");
    bench_c->add_option("--repeats", repeats, "Runs per count; the best is kept");
    bench_c->add_option("--out", bench_out, "Bench report CSV");

    // run
    auto* run_c = app.add_subcommand("run", "Full pipeline: depth, regions and command");
    add_pair(run_c, pair_f);
    add_match(run_c, match_f);
    add_common(run_c, common_f, true);
    run_c->add_option("--scale", common_f.scale, "Disparity PGM gray levels per px");

    // render
    double yaw0 = 0.0, pitch0 = 0.0;
    auto* render_c = app.add_subcommand("render", "Render a stereo pair of a scene to PGM");
    add_common(render_c, common_f, false);
    render_c->add_option("--scenario", scenario, "Built-in scenario name");
    render_c->add_option("--scene", scene_file, "Scene JSON");
    render_c->add_option("--start", start_s, "Camera position x,y,z");
    render_c->add_option("--yaw", yaw0, "Heading yaw in rad");
    render_c->add_option("--pitch", pitch0, "Heading pitch in rad");
    render_c->add_option("--seed", seed, "Noise seed");
    render_c->add_option("--noise", noise, "Image noise stddev");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (depth->parsed()) {
            RunConfig cfg = build_config(common_f, match_f);
            const StereoPair pair = load_pair(pair_f, cfg, !common_f.rig.empty());
            const DisparityMap disp = block_match(pair, cfg.match, cfg.workers);
            if (disp.valid_count() == 0) throw ComputationError("no valid disparities");
            const DepthMap dm = refine_depth_map(disparity_to_depth(disp, cfg.rig), cfg.lut);
            fs::create_directories(cfg.out_dir);
            write_pgm(cfg.out_dir / "disparity.pgm", io::disparity_to_pgm_image(disp, cfg.disparity_scale));
            write_file(cfg.out_dir / "depth.csv", io::depth_map_csv(dm));
            json j{{"width", disp.width()},
                   {"height", disp.height()},
                   {"valid_pixels", disp.valid_count()},
                   {"disparity", (cfg.out_dir / "disparity.pgm").string()},
                   {"depth", (cfg.out_dir / "depth.csv").string()}};
            out << j.dump(2) << '\n';
            return 0;
        }
        if (regions->parsed()) {
            RunConfig cfg = build_config(common_f, match_f);
            RegionDepths d;
            RegionGrid grid;
            if (!depth_csv.empty()) {
                if (!pair_f.left.empty() || !pair_f.right.empty() || !pair_f.sbs.empty())
                    throw UsageError("use either --depth or a stereo pair");
                require_file(depth_csv);
                const DepthMap dm = io::parse_depth_map_csv(read_file(depth_csv));
                cfg.rig.width_px = dm.width();
                cfg.rig.height_px = dm.height();
                grid = cfg.grid();
                d = region_min_depths(dm, grid);
            } else {
                const StereoPair pair = load_pair(pair_f, cfg, !common_f.rig.empty());
                grid = cfg.grid();
                d = fused_pipeline(pair, cfg.match, grid, cfg.lut, cfg.workers).regions;
            }
            json j = regions_json(d);
            if (dump_grid) j = {{"depths", j}, {"grid", json::parse(io::grid_to_json(grid))}};
            out << j.dump(2) << '\n';
            return 0;
        }
        if (steer_c->parsed()) {
            RunConfig cfg = build_config(common_f, match_f);
            RegionDepths d;
            if (!depths_json.empty()) {
                require_file(depths_json);
                d = io::parse_region_depths_json(read_file(depths_json));
            } else {
                for (Region r : kAllRegions) d[r] = region_flags[r];
            }
            out << steer_json(make_controller(cfg).steer_detailed(d)) << '\n';
            return 0;
        }
        if (feval->parsed()) {
            std::optional<fuzzy::RuleBase> rb;
            if (auto p = preset_from_name(rule_file)) {
                rb = build_primary_rulebase(*p);
            } else {
                require_file(rule_file);
                rb = io::load_rulebase(rule_file);
            }
            std::map<std::string, double> crisp;
            for (const auto& kv : inputs) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos || eq == 0) throw UsageError("--input expects name=value, got '" + kv + "'");
                crisp[kv.substr(0, eq)] = to_double(kv.substr(eq + 1), kv.substr(0, eq));
            }
            const auto inf = rb->infer(crisp);
            json j;
            j["rule_strengths"] = inf.rule_strengths;
            j["outputs"] = json::object();
            for (const auto& [name, dist] : inf.outputs) {
                const bool active = std::any_of(dist.samples.begin(), dist.samples.end(), [](double s) { return s > 0.0; });
                j["outputs"][name] = active ? json(fuzzy::defuzzify(dist, rb->spec().defuzz)) : json(nullptr);
            }
            if (!dump_csv.empty()) {
                std::ostringstream os;
                os << std::setprecision(17) << "variable,position,degree\n";
                for (const auto& [name, dist] : inf.outputs)
                    for (std::size_t k = 0; k < dist.size(); ++k)
                        os << name << ',' << dist.position(k) << ',' << dist.samples[k] << '\n';
                write_file(dump_csv, os.str());
            }
            out << j.dump(2) << '\n';
            return 0;
        }
        if (lut_c->parsed()) {
            require_file(common_f.lut);
            const DepthLUT lut = load_lut_csv(common_f.lut);
            json j;
            j["entries"] = lut.entries().size();
            j["identity"] = lut.is_identity();
            j["queries"] = json::array();
            for (double q : queries) j["queries"].push_back({{"computed_m", q}, {"refined_m", lut.refine(q)}});
            if (!lut_out.empty()) write_file(lut_out, encode_lut_csv(lut));
            out << j.dump(2) << '\n';
            return 0;
        }
        if (sim_c->parsed()) {
            sim::EpisodeConfig ecfg;
            RunConfig cfg = build_config(common_f, match_f, ecfg.match);
            if (!scenario.empty() && !scene_file.empty()) throw UsageError("use either --scenario or --scene");
            sim::Scenario sc;
            if (!scene_file.empty()) {
                require_file(scene_file);
                sc.name = fs::path(scene_file).stem().string();
                sc.scene = io::load_scene(scene_file);
                sc.max_steps = ecfg.max_steps;
            } else {
                try {
                    sc = sim::scenario_by_name(scenario.empty() ? "empty_corridor" : scenario);
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }
            if (!start_s.empty()) sc.start.position = parse_vec3(start_s, "--start");
            ecfg.rig = cfg.rig;
            ecfg.match = cfg.match;
            ecfg.grid = cfg.grid();
            ecfg.lut = cfg.lut;
            ecfg.controller = cfg.controller;
            ecfg.custom_rules = cfg.custom_rules;
            ecfg.max_steps = steps.value_or(sc.max_steps);
            ecfg.seed = seed;
            if (noise) ecfg.noise_stddev = *noise;
            ecfg.workers = cfg.workers;
            ecfg.validate();

            sim::FrameObserver observer;
            if (!frames_dir.empty()) {
                fs::create_directories(frames_dir);
                observer = [&](int step, const GrayImage& left, const SteerResult& dec) {
                    char name[32];
                    std::snprintf(name, sizeof name, "frame_%04d.ppm", step);
                    write_ppm(fs::path(frames_dir) / name, sim::debug_frame(left, ecfg.grid, dec.command));
                };
            }
            const auto log = sim::run_episode(sc.scene, sc.start, ecfg, observer);
            const fs::path traj = traj_out.empty() ? fs::path(cfg.out_dir) / "trajectory.csv" : fs::path(traj_out);
            if (traj.has_parent_path()) fs::create_directories(traj.parent_path());
            write_file(traj, sim::trajectory_csv(log));
            const auto& last = log.steps.empty() ? sim::TrajectoryStep{} : log.steps.back();
            json j{{"scenario", sc.name},
                   {"steps", log.steps.size()},
                   {"end", std::string(sim::to_string(log.end))},
                   {"collision", log.collided()},
                   {"closest_approach_m", log.closest_approach_m()},
                   {"final_position", {last.state.position.x, last.state.position.y, last.state.position.z}},
                   {"trajectory", traj.string()}};
            out << j.dump(2) << '\n';
            return 0;
        }
        if (bench_c->parsed()) {
            RunConfig cfg = build_config(common_f, match_f);
            std::vector<unsigned> counts;
            for (const auto& s : split(workers_list, ',')) {
                const double v = to_double(s, "--workers-list");
                if (v < 1 || v != std::floor(v)) throw UsageError("bad worker count '" + s + "'");
                counts.push_back(static_cast<unsigned>(v));
            }
            const auto rep = bench(cfg, counts, repeats);
            if (!bench_out.empty()) write_file(bench_out, bench_csv(rep));
            out << bench_json(rep) << '\n';
            return 0;
        }
        if (render_c->parsed()) {
            RunConfig cfg = build_config(common_f, match_f);
            if (!scenario.empty() && !scene_file.empty()) throw UsageError("use either --scenario or --scene");
            sim::Scenario sc;
            if (!scene_file.empty()) {
                require_file(scene_file);
                sc.scene = io::load_scene(scene_file);
            } else {
                try {
                    sc = sim::scenario_by_name(scenario.empty() ? "empty_corridor" : scenario);
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }
            if (!start_s.empty()) sc.start.position = parse_vec3(start_s, "--start");
            sc.start.heading_yaw = yaw0;
            sc.start.heading_pitch = pitch0;
            sim::RenderOptions ro;
            ro.noise_seed = seed;
            if (noise) ro.noise_stddev = *noise;
            ro.workers = cfg.workers;
            const StereoPair pair = sim::render_stereo(sc.scene, sc.start, cfg.rig, ro);
            fs::create_directories(cfg.out_dir);
            write_pgm(cfg.out_dir / "left.pgm", pair.left());
            write_pgm(cfg.out_dir / "right.pgm", pair.right());
            json j{{"left", (cfg.out_dir / "left.pgm").string()}, {"right", (cfg.out_dir / "right.pgm").string()}};
            out << j.dump(2) << '\n';
            return 0;
        }
        if (run_c->parsed()) {
            RunConfig cfg = build_config(common_f, match_f);
            const StereoPair pair = load_pair(pair_f, cfg, !common_f.rig.empty());
            const auto po = run_pipeline(pair, cfg);
            const auto cmd = command_json(po);
            write_outputs(po, cfg, cmd);
            out << cmd << '\n';
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NoActivationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const InvalidDisparityError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const InvalidDepthError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ComputationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::logic_error& e) {
        // invalid_argument is a usage problem; other logic errors are computational.
        err << "error: " << e.what() << '\n';
        return dynamic_cast<const std::invalid_argument*>(&e) ? 2 : 1;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace stereo_avoid::app

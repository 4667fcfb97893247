#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "headmouse/calibration.hpp"
#include "headmouse/config.hpp"
#include "headmouse/grammar.hpp"
#include "headmouse/ingest.hpp"
#include "headmouse/registry.hpp"
#include "headmouse/service/server.hpp"
#include "headmouse/session.hpp"

namespace fs = std::filesystem;
using namespace headmouse;

namespace {

// Loaded config, or defaults when the resolved file does not exist and was not
// asked for explicitly.
EngineConfig load_engine_config(const std::string& flag) {
    const fs::path path = resolve_config_path(flag);
    const bool explicit_path = !flag.empty() || std::getenv(kConfigEnvVar) != nullptr;
    if (!fs::exists(path)) {
        if (explicit_path) throw IoError("config file " + path.string() + " does not exist");
        return {};
    }
    return load_config(path);
}

void print_events(const std::vector<Event>& events) {
    for (const auto& e : events) std::cout << format_event(e) << '\n';
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int cmd_run(const std::string& script_path, const std::string& config_flag) {
    std::ifstream in(script_path);
    if (!in) {
        std::cerr << "error: cannot open script " << script_path << '\n';
        return 1;
    }
    const EngineConfig cfg = load_engine_config(config_flag);
    Session session(cfg.pipeline(), cfg.grammar());
    const fs::path base = fs::path(script_path).parent_path();
    auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() ? path : base / path;
    };

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto sp = line.find_first_of(" \t");
        const std::string directive = line.substr(0, sp);
        const std::string arg = sp == std::string::npos ? std::string{} : trim(line.substr(sp));
        try {
            if (directive == "frame") {
                if (arg.empty()) throw InvalidArgumentError("frame needs a path");
                print_events(session.frame(read_ppm_file(resolve(arg))));
            } else if (directive == "background") {
                if (arg.empty()) throw InvalidArgumentError("background needs a path");
                session.set_background(read_ppm_file(resolve(arg)));
            } else if (directive == "phrase") {
                print_events(session.phrase(arg));
            } else if (directive == "calibrate") {
                if (!session.state().last_face) std::cerr << "warning: line " << line_no << ": no face to calibrate on\n";
                print_events(session.calibrate());
            } else {
                throw InvalidArgumentError("unknown directive \"" + directive + "\"");
            }
        } catch (const Error& e) {
            std::cerr << "error: " << script_path << ": line " << line_no << ": " << e.what() << '\n';
            return 1;
        }
    }
    return 0;
}

int cmd_stream(const std::string& source, const std::string& background, const std::string& config_flag) {
    const EngineConfig cfg = load_engine_config(config_flag);
    Session session(cfg.pipeline(), cfg.grammar());
    auto src = stream_frames(source, std::cin);
    if (!background.empty()) session.set_background(read_ppm_file(background));
    else if (auto* synth = dynamic_cast<SynthSource*>(src.get())) session.set_background(synth->background());
    while (auto f = src->next()) print_events(session.frame(*f));
    return 0;
}

int cmd_synth(const std::string& scene_arg, const std::string& out_dir) {
    std::string text = scene_arg;
    if (!scene_arg.empty() && scene_arg.front() != '{') text = read_text_file(scene_arg);
    const SynthAnimation anim = parse_scene_text(text);
    fs::create_directories(out_dir);

    const RenderedScene base = render(anim.scene);
    write_ppm_file(base.background, fs::path(out_dir) / "background.ppm");
    json frames = json::array();
    std::ostringstream script;
    script << "background background.ppm\n";
    for (std::size_t i = 0; i < anim.frame_count(); ++i) {
        const RenderedScene r = render(anim.at(i));
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.ppm", i);
        write_ppm_file(r.frame, fs::path(out_dir) / name);
        json truth = nullptr;
        if (r.truth) truth = {{"x", r.truth->x}, {"y", r.truth->y}, {"w", r.truth->w}, {"h", r.truth->h}};
        frames.push_back({{"file", name}, {"truth", truth}});
        script << "frame " << name << '\n';
    }
    write_file_atomic(fs::path(out_dir) / "truth.json",
                      json{{"background", "background.ppm"}, {"frames", frames}}.dump(2) + "\n");
    write_file_atomic(fs::path(out_dir) / "script.txt", script.str());
    std::cout << "wrote " << anim.frame_count() << " frame(s) to " << out_dir << '\n';
    return 0;
}

int cmd_grammar(const std::string& phrase, const std::string& config_flag) {
    const EngineConfig cfg = load_engine_config(config_flag);
    const auto intent = cfg.grammar().parse(phrase);
    std::cout << (intent ? to_string(*intent) : std::string("none")) << '\n';
    return 0;
}

int cmd_calibrate_skin(const std::string& dir, double pad, int brightness_min) {
    const auto pixels = load_swatches(dir);
    const SkinRange r = fit_skin_range(pixels, pad, brightness_min);
    std::cerr << "fitted over " << pixels.size() << " swatch pixels\n";
    std::cout << to_json(r).dump(2) << '\n';
    return 0;
}

int cmd_bench(int frames, int width, int height) {
    SynthScene scene;
    scene.width = width;
    scene.height = height;
    scene.face = Ellipse{width / 2.0, height / 2.0, width / 8.0, height / 6.0};
    const Frame background = render(scene).background;
    PipelineConfig cfg;
    SessionState state;
    double seconds = 0.0;
    std::size_t events = 0;
    for (int i = 0; i < frames; ++i) {
        SynthScene s = scene;
        s.face.cx += (width / 4.0) * std::sin(i * 0.05);
        s.face.cy += (height / 6.0) * std::cos(i * 0.07);
        const Frame f = render(s).frame;
        const auto t0 = std::chrono::steady_clock::now();
        Step step = on_frame(state, f, &background, cfg);
        const auto t1 = std::chrono::steady_clock::now();
        seconds += std::chrono::duration<double>(t1 - t0).count();
        events += step.events.size();
        state = std::move(step.state);
    }
    const double fps = seconds > 0.0 ? frames / seconds : 0.0;
    std::cout << "frames=" << frames << " size=" << width << "x" << height << " seconds=" << seconds
              << " fps=" << fps << " events=" << events << '\n';
    return 0;
}

int cmd_serve(const std::string& bind, const std::string& config_flag, const std::string& static_dir, int max_w,
              int max_h) {
    service::ServerOptions opts;
    std::tie(opts.host, opts.port) = service::parse_bind(bind);
    opts.config_path = resolve_config_path(config_flag);
    if (!static_dir.empty()) opts.static_dir = fs::path(static_dir);
    opts.protocol.max_frame_width = max_w;
    opts.protocol.max_frame_height = max_h;

    service::Server server(opts);
    server.start();
    std::cerr << "listening on " << opts.host << ":" << server.port() << " (ws path /session)\n";
    boost::asio::io_context signal_ioc;
    boost::asio::signal_set signals(signal_ioc, SIGINT, SIGTERM);
    signals.async_wait([&](const boost::system::error_code&, int) { server.stop(); });
    signal_ioc.run();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"headmouse: head-tracking cursor and voice command engine"};
    app.require_subcommand(1);

    std::string config_flag;

    auto* run = app.add_subcommand("run", "Replay a run script and print the event log");
    std::string script;
    run->add_option("--script", script, "Run script")->required();
    run->add_option("--config", config_flag, "Engine config file");

    auto* stream = app.add_subcommand("stream", "Run frames from a source and print the event log");
    std::string source, background;
    stream->add_option("--source", source, "Directory of .ppm, '-' for the raw stdin stream, or a scene .json")
        ->required();
    stream->add_option("--background", background, "Background PPM");
    stream->add_option("--config", config_flag, "Engine config file");

    auto* synth = app.add_subcommand("synth", "Render synthetic oracle scenes to PPM with truth.json");
    std::string scene, out_dir;
    synth->add_option("--scene", scene, "Scene JSON file or inline JSON")->required();
    synth->add_option("--out", out_dir, "Output directory")->required();

    auto* grammar = app.add_subcommand("grammar", "Parse a phrase and print its intent");
    std::string phrase;
    grammar->add_option("--phrase", phrase, "Recognized phrase text")->required();
    grammar->add_option("--config", config_flag, "Engine config file");

    auto* registry = app.add_subcommand("registry", "Edit the application registry");
    registry->require_subcommand(1);
    registry->add_option("--config", config_flag, "Engine config file");
    auto* reg_add = registry->add_subcommand("add", "Register an application");
    std::string label, target;
    reg_add->add_option("label", label, "Spoken label")->required();
    reg_add->add_option("target", target, "Launch target")->required();
    auto* reg_remove = registry->add_subcommand("remove", "Remove an application");
    reg_remove->add_option("label", label, "Spoken label")->required();
    auto* reg_list = registry->add_subcommand("list", "List registered applications");

    auto* serve = app.add_subcommand("serve", "Run the WebSocket session service");
    std::string bind = "127.0.0.1:8943", static_dir;
    int max_w = 1920, max_h = 1080;
    serve->add_option("--bind", bind, "host:port")->capture_default_str();
    serve->add_option("--config", config_flag, "Engine config file");
    serve->add_option("--static-dir", static_dir, "Directory served at /");
    serve->add_option("--max-width", max_w, "Largest accepted frame width")->capture_default_str();
    serve->add_option("--max-height", max_h, "Largest accepted frame height")->capture_default_str();

    auto* calib = app.add_subcommand("calibrate-skin", "Fit the skin range to a directory of swatch PPMs");
    std::string swatches;
    double pad = kSkinRangePad;
    int brightness_min = kDefaultBrightnessMin;
    calib->add_option("--swatches", swatches, "Swatch directory")->required();
    calib->add_option("--pad", pad, "Padding added to each bound")->capture_default_str();
    calib->add_option("--brightness-min", brightness_min, "Minimum R+G+B")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "Measure detect+track throughput on synthetic frames");
    int frames = 300, width = 640, height = 480;
    bench->add_option("--frames", frames)->capture_default_str();
    bench->add_option("--width", width)->capture_default_str();
    bench->add_option("--height", height)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (*run) return cmd_run(script, config_flag);
        if (*stream) return cmd_stream(source, background, config_flag);
        if (*synth) return cmd_synth(scene, out_dir);
        if (*grammar) return cmd_grammar(phrase, config_flag);
        if (*calib) return cmd_calibrate_skin(swatches, pad, brightness_min);
        if (*bench) return cmd_bench(frames, width, height);
        if (*serve) return cmd_serve(bind, config_flag, static_dir, max_w, max_h);
        if (*registry) {
            const fs::path path = resolve_config_path(config_flag);
            EngineConfig cfg = fs::exists(path) ? load_config(path) : EngineConfig{};
            if (*reg_add) {
                cfg = add_app(cfg, label, target);
                save_config(cfg, path);
            } else if (*reg_remove) {
                cfg.registry = remove(cfg.registry, label);
                save_config(cfg, path);
            } else if (*reg_list) {
                for (const auto& a : cfg.registry.apps) std::cout << a.label << '\t' << a.target << '\n';
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

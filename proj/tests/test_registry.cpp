#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "headmouse/registry.hpp"
#include "support.hpp"

using namespace headmouse;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("headmouse_reg_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Registry, AddAppendsAndBumpsRevision) {
    const Registry r = add(Registry{}, "internet", "iexplore", 100);
    ASSERT_EQ(r.apps.size(), 1u);
    EXPECT_EQ(r.apps[0], (AppEntry{"internet", "iexplore", 100}));
    EXPECT_EQ(r.revision, 1);
    const Registry r2 = add(r, "Mail Client", "thunderbird", 101);
    EXPECT_EQ(r2.apps[1].label, "mail client");
    EXPECT_EQ(r2.revision, 2);
}

TEST(Registry, AddErrors) {
    const Registry r = add(Registry{}, "internet", "iexplore");
    EXPECT_THROW(add(r, "internet", "other"), DuplicateError);
    EXPECT_THROW(add(r, "INTERNET!", "other"), DuplicateError);
    EXPECT_THROW(add(Registry{}, "click", "x"), CollisionError);
    EXPECT_THROW(add(Registry{}, "  ", "x"), InvalidArgumentError);
    const Registry s = add_synonym(Registry{}, "tap", "LeftClick");
    EXPECT_THROW(add(s, "tap", "x"), CollisionError);
}

TEST(Registry, AddAppRejectsMenuNames) {
    EXPECT_THROW(add_app(EngineConfig{}, "File", "x"), CollisionError);
    EngineConfig cfg;
    cfg.menus = std::vector<std::string>{"tools"};
    EXPECT_NO_THROW(add_app(cfg, "file", "x"));
    EXPECT_THROW(add_app(cfg, "tools", "x"), CollisionError);
}

TEST(Registry, Remove) {
    const Registry r = add(Registry{}, "internet", "iexplore");
    const Registry e = remove(r, "internet");
    EXPECT_TRUE(e.apps.empty());
    EXPECT_EQ(e.revision, 2);
    EXPECT_THROW(remove(Registry{}, "internet"), NotFoundError);
    EXPECT_TRUE(remove(r, "INTERNET").apps.empty());
}

TEST(Registry, Synonyms) {
    Registry r = add_synonym(Registry{}, "Tap", "LeftClick");
    EXPECT_EQ(r.synonyms.at("tap"), "LeftClick");
    EXPECT_THROW(add_synonym(r, "tap", "Ok"), DuplicateError);
    EXPECT_THROW(add_synonym(r, "click", "Ok"), CollisionError);
    EXPECT_THROW(add_synonym(r, "zap", "Teleport"), InvalidArgumentError);
    r = remove_synonym(r, "tap");
    EXPECT_TRUE(r.synonyms.empty());
    EXPECT_THROW(remove_synonym(r, "tap"), NotFoundError);
}

TEST(Registry, GrammarNeverCollidesAfterSuccessfulAdds) {
    std::mt19937 rng(12);
    for (int i = 0; i < 300; ++i) {
        const Registry r = hmtest::random_registry(rng);
        EXPECT_NO_THROW(build_grammar(r, {}));
        for (const auto& a : r.apps) {
            EXPECT_EQ(normalize_phrase(a.label), a.label);
            EXPECT_EQ(build_grammar(r, {}).parse(a.label), (Intent{IntentKind::LaunchApp, a.label}));
        }
        // Through the config-level add, menu names are honoured too.
        EngineConfig cfg;
        for (const auto& a : r.apps) {
            try {
                cfg = add_app(cfg, a.label, a.target, a.added_at);
            } catch (const CollisionError&) {
                EXPECT_TRUE(build_grammar(std::vector<std::string>{}, cfg.menu_names()).parse(a.label).has_value());
            }
        }
        EXPECT_NO_THROW(cfg.grammar());
    }
}

TEST(Registry, CanonicalFileFormat) {
    const Registry r = add(Registry{}, "internet", "iexplore", 1700000000);
    EXPECT_EQ(serialize(r),
              "{\n"
              "  \"apps\": [\n"
              "    {\n"
              "      \"added_at\": 1700000000,\n"
              "      \"label\": \"internet\",\n"
              "      \"target\": \"iexplore\"\n"
              "    }\n"
              "  ],\n"
              "  \"revision\": 1,\n"
              "  \"synonyms\": {},\n"
              "  \"version\": 1\n"
              "}\n");
}

TEST(Registry, SaveLoadRoundTrip) {
    TempDir dir;
    Registry r = add(Registry{}, "internet", "iexplore", 1);
    r = add(r, "mail", "thunderbird", 2);
    r = add(r, "music player", "C:\\apps\\music.exe", 3);
    const fs::path file = dir.path / "headmouse.json";
    save(r, file);
    EXPECT_EQ(load(file), r);
    bool leftovers = false;
    for (const auto& e : fs::directory_iterator(dir.path)) leftovers |= e.path() != file;
    EXPECT_FALSE(leftovers);
}

TEST(Registry, LoadMissingFile) { EXPECT_THROW(load("/nonexistent/headmouse.json"), IoError); }

TEST(Registry, MalformedCorpus) {
    const fs::path dir = fs::path(hmtest::test_data_dir()) / "malformed";
    int count = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        ++count;
        if (name.find(".version.") != std::string::npos) {
            EXPECT_THROW(load(entry.path()), VersionError) << name;
        } else {
            try {
                load(entry.path());
                ADD_FAILURE() << name << " loaded";
            } catch (const ParseError& e) {
                EXPECT_FALSE(e.context().empty()) << name;
            } catch (const std::exception& e) {
                ADD_FAILURE() << name << ": wrong error " << e.what();
            }
        }
    }
    EXPECT_GE(count, 10);
}

TEST(Registry, ParseErrorCarriesLineOrField) {
    try {
        parse_config("{\n  \"version\": 1,\n  \"apps\": [\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.context().rfind("line ", 0), 0u) << e.context();
    }
    try {
        parse_config(R"({"version":1,"apps":[{"label":"a","target":"x"},{"label":"b","target":7}]})");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.context(), "apps[1].target");
    }
}

TEST(EngineConfig, OptionalSectionsRoundTrip) {
    EngineConfig cfg;
    cfg.registry = add(Registry{}, "internet", "iexplore", 5);
    cfg.skin = SkinRange{0.3, 0.6, 0.2, 0.4, 50};
    cfg.cursor = CursorConfig{};
    cfg.cursor->gain = 2.5;
    cfg.segmentation = SegParams{};
    cfg.segmentation->min_area = 40;
    cfg.menus = std::vector<std::string>{"file", "tools"};
    const EngineConfig back = parse_config(serialize(cfg));
    EXPECT_EQ(back, cfg);
    EXPECT_EQ(back.pipeline().cursor.gain, 2.5);
    EXPECT_EQ(back.grammar().parse("tools")->kind, IntentKind::MenuSelect);
}

TEST(EngineConfig, RejectsBadSections) {
    EXPECT_THROW(parse_config(R"({"version":1,"apps":[],"cursor":{"gain":-1}})"), ParseError);
    EXPECT_THROW(parse_config(R"({"version":1,"apps":[],"cursor":{"speed":1}})"), ParseError);
    EXPECT_THROW(parse_config(R"({"version":1,"apps":[],"skin":{"r_min":0.9,"r_max":0.1}})"), ParseError);
    EXPECT_THROW(parse_config(R"({"version":1,"apps":[],"extra":1})"), ParseError);
    EXPECT_THROW(parse_config(R"({"version":1,"apps":[{"label":"file","target":"x"}]})"), ParseError);
}

TEST(EngineConfig, ResolvePath) {
    ::unsetenv(kConfigEnvVar);
    EXPECT_EQ(resolve_config_path(""), fs::path("headmouse.json"));
    ::setenv(kConfigEnvVar, "/tmp/env.json", 1);
    EXPECT_EQ(resolve_config_path(""), fs::path("/tmp/env.json"));
    EXPECT_EQ(resolve_config_path("flag.json"), fs::path("flag.json"));
    ::unsetenv(kConfigEnvVar);
}

TEST(Registry, RandomRoundTripIsBitStable) {
    TempDir dir;
    std::mt19937 rng(77);
    for (int i = 0; i < 100; ++i) {
        const Registry r = hmtest::random_registry(rng);
        const fs::path file = dir.path / "r.json";
        save(r, file);
        const Registry back = load(file);
        ASSERT_EQ(back, r);
        ASSERT_EQ(serialize(back), read_text_file(file));
    }
}

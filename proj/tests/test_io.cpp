#include <gumdp/io.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace gumdp;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "gumdp_io_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

const char* kTwoState = R"({
  "n_states": 2, "n_actions": 1,
  "kernel": [[[0.5, 0.5]], [[0.0, 1.0]]],
  "p0": [1.0, 0.0],
  "state_only": true,
  "objective": {"kind": "linear", "b": [1.0, 2.0]}
})";

}  // namespace

TEST(Json, RoundTripsBuiltins) {
    for (const char* name : {"mf1", "mf2", "mf3"}) {
        for (bool so : {true, false}) {
            const Gumdp g = builtin_gumdp(name, so);
            const Gumdp back = gumdp_from_json(Json::parse(gumdp_to_json(g).dump()));
            EXPECT_EQ(back.kernel(), g.kernel());
            EXPECT_EQ(back.initial(), g.initial());
            EXPECT_EQ(back.state_only(), so);
            EXPECT_EQ(back.objective().kind(), g.objective().kind());
            EXPECT_EQ(back.name(), name);
            EXPECT_EQ(back.policy_presets().at("figure"), g.policy_presets().at("figure"));
        }
    }
}

TEST(Json, FileRoundTrip) {
    const auto path = temp_file("mf2.json");
    save_gumdp(builtin_gumdp("mf2", false), path);
    const Gumdp g = load_gumdp(path);
    EXPECT_EQ(g.objective().kind(), ObjectiveKind::kl);
    EXPECT_EQ(resolve_gumdp(path.string()).name(), "mf2");
}

TEST(Json, ParsesMinimalDocument) {
    const Gumdp g = gumdp_from_json(Json::parse(kTwoState));
    EXPECT_EQ(g.n_states(), 2);
    EXPECT_EQ(g.p(0, 0, 1), 0.5);
    EXPECT_TRUE(g.objective().is_linear());
}

TEST(Json, ErrorsNameTheField) {
    auto expect_field = [](Json doc, const std::string& needle) {
        try {
            gumdp_from_json(doc);
            ADD_FAILURE() << "expected failure mentioning " << needle;
        } catch (const ValidationError& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    Json doc = Json::parse(kTwoState);
    doc["kernel"][1][0] = {0.2, 0.2};
    expect_field(doc, "kernel[1][0]");
    doc = Json::parse(kTwoState);
    doc["kernel"][0][0] = {0.5, 0.5, 0.0};
    expect_field(doc, "kernel[0][0]");
    doc = Json::parse(kTwoState);
    doc.erase("p0");
    expect_field(doc, "p0");
    doc = Json::parse(kTwoState);
    doc["objective"] = {{"kind", "quadratic"}};
    expect_field(doc, "objective.A");
    doc = Json::parse(kTwoState);
    doc["objective"] = {{"kind", "cubic"}};
    expect_field(doc, "cubic");
    doc = Json::parse(kTwoState);
    doc["n_states"] = -1;
    expect_field(doc, "n_states");
}

TEST(Files, ErrorKinds) {
    EXPECT_THROW(load_gumdp("/nonexistent/dir/model.json"), IoError);
    const auto path = temp_file("broken.json");
    write_text_file(path, "{ not json");
    EXPECT_THROW(load_gumdp(path), ValidationError);
    EXPECT_THROW(write_text_file("/nonexistent/dir/out.json", "x"), IoError);
}

TEST(Policy, FormsAndResolution) {
    const Gumdp g = builtin_gumdp("mf3", true);
    const auto bare = policy_from_json(Json::parse("[[1,0],[0.5,0.5],[0,1]]"));
    const auto wrapped = policy_from_json(Json::parse(R"({"probs": [[1,0],[0.5,0.5],[0,1]]})"));
    EXPECT_EQ(bare.probs(), wrapped.probs());

    const auto path = temp_file("pi.json");
    write_text_file(path, "[[0.25, 0.75], [1, 0], [0, 1]]");
    EXPECT_EQ(resolve_policy(g, path.string())(0, 1), 0.75);
    EXPECT_EQ(resolve_policy(g, "figure")(0, 0), 0.5);
    EXPECT_THROW(resolve_policy(g, "no-such-policy"), ValidationError);

    write_text_file(path, "[[0.25, 0.75]]");
    EXPECT_THROW(resolve_policy(g, path.string()), ValidationError);
}

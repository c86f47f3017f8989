#include <gtest/gtest.h>

#include <filesystem>

#include "cyclegap/serialize.hpp"

using namespace cyclegap;

namespace fs = std::filesystem;

TEST(Serialize, OmcRoundTrip) {
    Rng rng(1);
    auto inst = build_omc(72, 8, 1, Label::no, rng);
    Provenance prov{1, 0, "fmt-embedding"};
    auto j = to_json(inst, prov);
    EXPECT_EQ(j["provenance"]["tool_version"], "0.3.0");
    EXPECT_EQ(j["cycle_profile"], Json::parse(R"({"8": 9})"));
    auto back = omc_from_json(j);
    EXPECT_EQ(back.n, inst.n);
    EXPECT_EQ(back.k, inst.k);
    EXPECT_EQ(back.label, inst.label);
    EXPECT_EQ(back.alice, inst.alice);
    EXPECT_EQ(back.bob, inst.bob);
    EXPECT_EQ(dump(to_json(back, prov)), dump(j));
}

TEST(Serialize, OmcRejectsNonCrossingEdge) {
    Rng rng(2);
    auto j = to_json(build_planted_omc(12, 4, Label::yes, rng), Provenance{});
    j["alice_edges"][0][1] = 0;
    EXPECT_THROW(omc_from_json(j), std::invalid_argument);
    j["problem"] = "fmt";
    EXPECT_THROW(omc_from_json(j), std::invalid_argument);
}

TEST(Serialize, FmtRoundTrip) {
    Rng rng(3);
    auto inst = build_fmt(5, 2, 2, Label::yes, rng);
    Provenance prov{3, 1, "fmt"};
    auto j = to_json(inst, prov);
    auto back = fmt_from_json(j);
    EXPECT_EQ(back.graph.seq().values(), inst.graph.seq().values());
    EXPECT_EQ(back.graph.matchings(), inst.graph.matchings());
    EXPECT_EQ(back.y_perm, inst.y_perm);
    EXPECT_EQ(dump(to_json(back, prov)), dump(j));
}

TEST(Serialize, ProblemRoundTrip) {
    Rng rng(4);
    auto pi = to_mst(build_planted_omc(24, 4, Label::no, rng), 0.1, 5, rng);
    Provenance prov{4, 0, "mst"};
    auto j = to_json(pi, prov);
    EXPECT_EQ(j["optimum"]["lo"], "44/1");
    EXPECT_EQ(j["gap"]["yes_when"], "below");
    auto back = problem_from_json(j);
    EXPECT_EQ(back.stream, pi.stream);
    EXPECT_EQ(back.optimum.lo, pi.optimum.lo);
    EXPECT_EQ(back.gap.threshold, pi.gap.threshold);
    EXPECT_EQ(back.metadata, pi.metadata);
    EXPECT_EQ(dump(to_json(back, prov)), dump(j));

    auto sch = to_schatten(build_k_vs_2k(32, 4, Label::no, rng), 0.5, rng);
    auto sj = to_json(sch, prov);
    EXPECT_EQ(problem_from_json(sj).optimum.value, sch.optimum.value);
}

TEST(Serialize, StreamValidationOnLoad) {
    EdgeStream s;
    s.n_vertices = 3;
    s.items = {{0, 1, 1}, {1, 2, 1}};
    auto j = to_json(s);
    EXPECT_EQ(stream_from_json(j), s);
    j["items"][1][1] = 7;
    EXPECT_THROW(stream_from_json(j), std::invalid_argument);
}

TEST(Serialize, ProfileJson) {
    EXPECT_EQ(profile_json({6, 6, 30}).dump(), R"({"30":1,"6":2})");
}

TEST(Serialize, WriteAtomic) {
    auto dir = fs::temp_directory_path() / ("cyclegap_ser_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::create_directories(dir);
    auto path = (dir / "out.json").string();
    write_atomic(path, "first\n");
    write_atomic(path, "second\n");
    EXPECT_EQ(read_file(path), "second\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
    EXPECT_EQ(entries, 1u);
    EXPECT_THROW(write_atomic((dir / "missing" / "x.json").string(), "x"), std::runtime_error);
    EXPECT_THROW(read_file((dir / "nope").string()), std::runtime_error);
    fs::remove_all(dir);
}

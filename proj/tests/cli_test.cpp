#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"
#include "test_util.hpp"

namespace tablescout {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tablescout");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write_page(const fs::path& path, PageKind kind, std::uint64_t seed) {
  save_gray(path, generate(page_spec_for(kind, seed)).image);
}

TEST(Cli, NoSubcommandFails) { EXPECT_EQ(invoke({}).code, 1); }

TEST(Cli, HelpSucceeds) { EXPECT_EQ(invoke({"--help"}).code, 0); }

TEST(CliDetect, BlankPageExitsWithNoTextLine) {
  testing::TempDir dir;
  save_gray(dir / "blank.pgm", GrayImage(120, 160, 255));
  const auto r = invoke({"detect", (dir / "blank.pgm").string()});
  EXPECT_EQ(r.code, 2);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("diagnostic"), "NoTextLine");
  EXPECT_TRUE(j.at("regions").empty());
}

TEST(CliDetect, ReportMatchesLibrary) {
  testing::TempDir dir;
  const auto page = generate(page_spec_for(PageKind::C, 8));
  save_gray(dir / "c8.pgm", page.image);
  const auto r = invoke({"detect", (dir / "c8.pgm").string(), "-o", (dir / "c8.report.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = report_from_json(read_json_file(dir / "c8.report.json"));
  EXPECT_EQ(rep, detect(page.image, RunConfig{}, "c8"));
  EXPECT_EQ(rep.regions.size(), 1u);
}

TEST(CliDetect, OverlayOnlyTouchesRegionBorders) {
  testing::TempDir dir;
  const auto page = generate(page_spec_for(PageKind::A, 9));
  save_gray(dir / "a.pgm", page.image);
  const auto r = invoke({"detect", (dir / "a.pgm").string(), "--overlay", (dir / "ov.pgm").string(), "--crops",
                         (dir / "crops").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = report_from_json(Json::parse(r.out));
  ASSERT_EQ(rep.regions.size(), 1u);
  const Rect rr = rep.regions[0].rect;
  const auto ov = load_gray(dir / "ov.pgm");
  ASSERT_EQ(ov.width(), page.image.width());
  for (int y = 0; y < ov.height(); ++y) {
    for (int x = 0; x < ov.width(); ++x) {
      if (ov.at(x, y) == page.image.at(x, y)) continue;
      const bool inside = rr.x <= x && x < rr.right() && rr.y <= y && y < rr.bottom();
      const bool near_edge = x < rr.x + 2 || x >= rr.right() - 2 || y < rr.y + 2 || y >= rr.bottom() - 2;
      ASSERT_TRUE(inside && near_edge) << x << "," << y;
    }
  }
  const auto crop_path = dir / "crops" / "a.region00.A.pbm";
  ASSERT_TRUE(fs::exists(crop_path));
  const auto c = load_binary(crop_path);
  EXPECT_EQ(c.width(), rr.w);
  EXPECT_EQ(c.height(), rr.h);
}

TEST(CliDetect, RejectsAlphaOnBoundary) {
  testing::TempDir dir;
  write_page(dir / "p.pgm", PageKind::B, 1);
  const auto r = invoke({"detect", (dir / "p.pgm").string(), "--alpha-ws", "2.0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("AlphaOutOfRange"), std::string::npos) << r.err;
}

TEST(CliDetect, MissingFile) {
  const auto r = invoke({"detect", "/nonexistent/page.pgm"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("FileNotFound"), std::string::npos) << r.err;
}

TEST(CliConfig, DumpedConfigReproducesReports) {
  testing::TempDir dir;
  write_page(dir / "p.pgm", PageKind::C, 4);
  const auto dump = invoke({"detect", "--dump-config", "--alpha-ws", "1.6", "--min-table-lines", "4"});
  ASSERT_EQ(dump.code, 0) << dump.err;
  testing::spit(dir / "cfg.json", dump.out);
  const auto via_flags = invoke({"detect", (dir / "p.pgm").string(), "--alpha-ws", "1.6", "--min-table-lines", "4"});
  const auto via_file = invoke({"detect", (dir / "p.pgm").string(), "--config", (dir / "cfg.json").string()});
  ASSERT_EQ(via_flags.code, 0);
  EXPECT_EQ(via_flags.out, via_file.out);
  EXPECT_NE(via_flags.out, invoke({"detect", (dir / "p.pgm").string()}).out);  // fingerprint differs
}

TEST(CliBatch, EmptyDirectory) {
  testing::TempDir dir;
  const auto r = invoke({"batch", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = read_json_file(dir / "manifest.json");
  EXPECT_EQ(m.at("page_count"), 0);
  EXPECT_TRUE(m.at("pages").empty());
}

TEST(CliBatch, ManifestInLexicographicOrder) {
  testing::TempDir dir;
  write_page(dir / "c.pgm", PageKind::C, 1);
  write_page(dir / "a.pgm", PageKind::A, 1);
  write_page(dir / "b.pgm", PageKind::B, 1);
  testing::spit(dir / "notes.txt", "ignored");
  const auto r = invoke({"batch", dir.path().string(), "--out-dir", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = read_json_file(dir / "out" / "manifest.json");
  ASSERT_EQ(m.at("pages").size(), 3u);
  EXPECT_EQ(m.at("pages")[0].at("page_id"), "a");
  EXPECT_EQ(m.at("pages")[1].at("page_id"), "b");
  EXPECT_EQ(m.at("pages")[2].at("page_id"), "c");
  EXPECT_EQ(m.at("config_fingerprint"), config_fingerprint(RunConfig{}));
  for (const char* id : {"a", "b", "c"}) EXPECT_TRUE(fs::exists(dir / "out" / (std::string(id) + ".report.json")));
}

TEST(CliBatch, CorruptFileIsIsolated) {
  testing::TempDir dir;
  for (int i = 0; i < 4; ++i) write_page(dir / ("p" + std::to_string(i) + ".pgm"), PageKind::C, 10 + i);
  testing::spit(dir / "p9.pgm", "P5\n10 10\n255\nshort");
  const auto r = invoke({"batch", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = read_json_file(dir / "manifest.json");
  EXPECT_EQ(m.at("page_count"), 5);
  EXPECT_EQ(m.at("failure_count"), 1);
  const auto& bad = m.at("pages")[4];
  EXPECT_EQ(bad.at("status"), "error");
  EXPECT_TRUE(bad.at("report").is_null());
  EXPECT_NE(bad.at("error").get<std::string>().find("CorruptImage"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "p9.report.json"));
}

TEST(CliBatch, JobCountDoesNotChangeReports) {
  testing::TempDir dir;
  for (int i = 0; i < 6; ++i) write_page(dir / ("p" + std::to_string(i) + ".pgm"), static_cast<PageKind>(i % 4), 30 + i);
  ASSERT_EQ(invoke({"batch", dir.path().string(), "--out-dir", (dir / "one").string(), "-j", "1"}).code, 0);
  ASSERT_EQ(invoke({"batch", dir.path().string(), "--out-dir", (dir / "four").string(), "-j", "4"}).code, 0);
  for (int i = 0; i < 6; ++i) {
    const auto name = "p" + std::to_string(i) + ".report.json";
    EXPECT_EQ(testing::slurp(dir / "one" / name), testing::slurp(dir / "four" / name));
  }
  EXPECT_EQ(read_json_file(dir / "four" / "manifest.json").at("jobs"), 4);
}

TEST(CliEval, TableOneFixture) {
  const auto r = invoke({"eval", "--fixture", "table1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("82.7"), std::string::npos);
  EXPECT_NE(r.out.find("67.4"), std::string::npos);
  EXPECT_NE(r.out.find("75.5"), std::string::npos);
  EXPECT_NE(r.out.find("74.5"), std::string::npos);
}

TEST(CliEval, PerfectAndShiftedCorpus) {
  testing::TempDir dir;
  const fs::path truth = dir / "truth", good = dir / "good", bad = dir / "bad";
  fs::create_directories(truth);
  fs::create_directories(good);
  fs::create_directories(bad);
  for (int i = 0; i < 3; ++i) {
    const auto id = "p" + std::to_string(i);
    auto page = generate(page_spec_for(static_cast<PageKind>(i), 60 + i));
    page.truth.page_id = id;
    write_json_file(truth / (id + ".truth.json"), to_json(page.truth));
    DetectionReport rep;
    rep.page_id = id;
    for (const auto& e : page.truth.entries) rep.regions.push_back({e.rect, e.category, {}, 0});
    write_json_file(good / (id + ".report.json"), to_json(rep));
    for (auto& r : rep.regions) r.rect.y += r.rect.h;  // no overlap left
    write_json_file(bad / (id + ".report.json"), to_json(rep));
  }
  const auto perfect = invoke({"eval", good.string(), truth.string(), "--out", (dir / "s.json").string()});
  ASSERT_EQ(perfect.code, 0) << perfect.err;
  const auto s = read_json_file(dir / "s.json");
  EXPECT_EQ(s.at("overall").at("accuracy_pct"), "100.0");

  const auto shifted = invoke({"eval", bad.string(), truth.string(), "--out", (dir / "t.json").string()});
  ASSERT_EQ(shifted.code, 0);
  const auto t = read_json_file(dir / "t.json");
  EXPECT_EQ(t.at("overall").at("accuracy_pct"), "0.0");
  EXPECT_EQ(t.at("false_positives"), 3);
}

TEST(CliEval, MissingReportCountsAsMiss) {
  testing::TempDir dir;
  auto page = generate(page_spec_for(PageKind::B, 3));
  page.truth.page_id = "only";
  write_json_file(dir / "only.truth.json", to_json(page.truth));
  const auto r = invoke({"eval", dir.path().string(), dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("MissingReport"), std::string::npos);
  EXPECT_NE(r.out.find("0.0"), std::string::npos);
}

TEST(CliEval, EmptyCorpusFails) {
  testing::TempDir dir;
  const auto r = invoke({"eval", dir.path().string(), dir.path().string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("EmptyCorpus"), std::string::npos);
}

TEST(CliSynth, TypeIsReproducible) {
  testing::TempDir dir;
  ASSERT_EQ(invoke({"synth", "--type", "A", "--seed", "7", "--out-dir", (dir / "x").string()}).code, 0);
  ASSERT_EQ(invoke({"synth", "--type", "A", "--seed", "7", "--out-dir", (dir / "y").string()}).code, 0);
  for (const char* f : {"synth-A-7.pgm", "synth-A-7.truth.json"}) {
    ASSERT_TRUE(fs::exists(dir / "x" / f));
    EXPECT_EQ(testing::slurp(dir / "x" / f), testing::slurp(dir / "y" / f));
  }
}

TEST(CliSynth, DeskSuite) {
  testing::TempDir dir;
  const auto r = invoke({"synth", "--suite", "desk", "--out-dir", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  int pgm = 0, truth = 0;
  for (const auto& e : fs::directory_iterator(dir.path())) {
    const auto name = e.path().filename().string();
    pgm += name.ends_with(".pgm");
    truth += name.ends_with(".truth.json");
  }
  EXPECT_EQ(pgm, 90);
  EXPECT_EQ(truth, 90);
  const auto t = truth_from_json(read_json_file(dir / "desk-B-04.truth.json"));
  EXPECT_EQ(t.page_id, "desk-B-04");
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(t.entries[0].category, Category::B);
}

TEST(CliSynth, SpecFileAndOverflow) {
  testing::TempDir dir;
  testing::spit(dir / "ok.json", R"({"seed": 3, "blocks": [{"type": "Paragraph", "lines": 2},
                                    {"type": "TableC", "rows": 4, "cols": 3}]})");
  ASSERT_EQ(invoke({"synth", "--spec", (dir / "ok.json").string(), "--out-dir", dir.path().string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "ok.pgm"));
  EXPECT_EQ(truth_from_json(read_json_file(dir / "ok.truth.json")).entries.size(), 1u);

  testing::spit(dir / "big.json", R"({"blocks": [{"type": "Paragraph", "lines": 300}]})");
  const auto r = invoke({"synth", "--spec", (dir / "big.json").string(), "--out-dir", dir.path().string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("SpecOverflow"), std::string::npos);
}

TEST(CliSynth, ExactlyOneMode) {
  EXPECT_EQ(invoke({"synth"}).code, 1);
  EXPECT_EQ(invoke({"synth", "--type", "A", "--suite", "desk"}).code, 1);
  EXPECT_EQ(invoke({"synth", "--type", "Z"}).code, 1);
}

}  // namespace
}  // namespace tablescout

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "tablescout/profile.hpp"
#include "tablescout/synth.hpp"
#include "test_util.hpp"

namespace tablescout {
namespace {

TEST(HorizontalProjection, Examples) {
  const auto zeros = horizontal_projection(BinaryImage(7, 5));
  EXPECT_EQ(zeros, std::vector<int>(5, 0));

  BinaryImage img(10, 4);
  testing::fill_rect(img, 0, 2, 10, 1);
  EXPECT_EQ(horizontal_projection(img), (std::vector<int>{0, 0, 10, 0}));
}

TEST(HorizontalProjection, ConservesInk) {
  std::mt19937 rng(1);
  for (int iter = 0; iter < 50; ++iter) {
    const auto img = testing::random_binary(rng, 16, 16, 0.02 * iter);
    const auto prof = horizontal_projection(img);
    EXPECT_EQ(static_cast<std::size_t>(std::accumulate(prof.begin(), prof.end(), 0)), count_foreground(img));
  }
}

TEST(SegmentLines, Examples) {
  const ProfileConfig cfg;
  EXPECT_TRUE(segment_lines({}, cfg).empty());
  EXPECT_EQ(segment_lines({0, 5, 5, 0, 0, 6, 0}, cfg), (std::vector<Band>{{1, 2}, {5, 5}}));
  EXPECT_EQ(segment_lines({0, 5, 0, 5, 0}, cfg), (std::vector<Band>{{1, 3}}));
}

TEST(SegmentLines, NoiseFloor) {
  ProfileConfig cfg;
  cfg.row_noise_floor = 3;
  EXPECT_EQ(segment_lines({2, 4, 4, 1, 0, 0, 9}, cfg), (std::vector<Band>{{1, 2}, {6, 6}}));
}

TEST(SegmentLines, BandsDisjointSortedAndCoverInkedRows) {
  std::mt19937 rng(9);
  for (int iter = 0; iter < 200; ++iter) {
    ProfileConfig cfg;
    cfg.min_blank_rows = 1 + static_cast<int>(rng() % 4);
    std::vector<int> prof(1 + rng() % 60);
    for (auto& v : prof) v = rng() % 3 == 0 ? static_cast<int>(rng() % 9) : 0;
    const auto bands = segment_lines(prof, cfg);
    for (std::size_t i = 0; i < bands.size(); ++i) {
      EXPECT_LE(bands[i].y_top, bands[i].y_bottom);
      if (i > 0) { EXPECT_GE(bands[i].y_top - bands[i - 1].y_bottom - 1, cfg.min_blank_rows); }
    }
    for (int y = 0; y < static_cast<int>(prof.size()); ++y) {
      const bool covered = std::any_of(bands.begin(), bands.end(),
                                       [y](const Band& b) { return b.y_top <= y && y <= b.y_bottom; });
      if (prof[static_cast<std::size_t>(y)] > 0) { EXPECT_TRUE(covered) << y; }
    }
  }
}

TEST(AnalyzeGaps, RuleLineHasNoGaps) {
  BinaryImage img(40, 6);
  testing::fill_rect(img, 0, 2, 40, 2);
  const auto line = analyze_gaps(img, {2, 3}, ProfileConfig{});
  EXPECT_EQ(line.gap_count(), 0);
  EXPECT_EQ(line.max_word_space(), 0);
}

TEST(AnalyzeGaps, TwoBlocks) {
  BinaryImage img(20, 5);
  testing::fill_rect(img, 0, 1, 4, 3);
  testing::fill_rect(img, 10, 1, 4, 3);
  const auto line = analyze_gaps(img, {1, 3}, ProfileConfig{});
  EXPECT_EQ(line.gaps, (std::vector<Gap>{{4, 6}}));
  EXPECT_EQ(line.max_word_space(), 6);
  EXPECT_EQ(line.x_left, 0);
  EXPECT_EQ(line.x_right, 13);
}

TEST(AnalyzeGaps, ThreeWords) {
  BinaryImage img(60, 5);
  testing::fill_rect(img, 5, 0, 10, 5);   // word 1: 5..14
  testing::fill_rect(img, 18, 0, 10, 5);  // 3-px blank (15..17)
  testing::fill_rect(img, 36, 0, 10, 5);  // 8-px blank (28..35)
  const auto line = analyze_gaps(img, {0, 4}, ProfileConfig{});
  EXPECT_EQ(line.gap_count(), 2);
  EXPECT_EQ(line.max_word_space(), 8);
}

TEST(AnalyzeGaps, NarrowRunsAreNotGaps) {
  BinaryImage img(30, 3);
  testing::fill_rect(img, 2, 0, 5, 3);
  testing::fill_rect(img, 8, 0, 5, 3);   // 1-px blank
  testing::fill_rect(img, 15, 0, 5, 3);  // 2-px blank
  const auto line = analyze_gaps(img, {0, 2}, ProfileConfig{});
  EXPECT_EQ(line.gaps, (std::vector<Gap>{{13, 2}}));
}

TEST(AnalyzeGaps, EmptyBandAndOutOfRange) {
  BinaryImage img(10, 10);
  try {
    analyze_gaps(img, {2, 4}, ProfileConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyBand);
  }
  EXPECT_THROW(analyze_gaps(img, {8, 12}, ProfileConfig{}), Error);
}

TEST(AnalyzeGaps, DependsOnlyOnColumnBlankness) {
  std::mt19937 rng(4);
  for (int iter = 0; iter < 30; ++iter) {
    auto img = testing::random_binary(rng, 40, 6, 0.05);
    img.set(0, 0, 1);
    const auto before = analyze_gaps(img, {0, 5}, ProfileConfig{});
    // reverse the rows of the band: column blankness is unchanged
    BinaryImage flipped(40, 6);
    for (int y = 0; y < 6; ++y)
      for (int x = 0; x < 40; ++x) flipped.set(x, 5 - y, img.at(x, y));
    EXPECT_EQ(analyze_gaps(flipped, {0, 5}, ProfileConfig{}), before);
  }
}

TEST(BuildPage, BlankPage) { EXPECT_TRUE(build_page(BinaryImage(50, 50), ProfileConfig{}).empty()); }

BinaryImage ink_of(const GrayImage& g) {
  BinaryImage b(g.width(), g.height());
  for (std::size_t i = 0; i < g.size(); ++i) b.pixels()[i] = g.pixels()[i] < 128 ? 1 : 0;
  return b;
}

TEST(BuildPage, SynthParagraphMatchesGeneratorBands) {
  PageSpec spec;
  spec.seed = 3;
  spec.blocks = {Paragraph{3}};
  const auto page = generate(spec);
  const auto lines = build_page(ink_of(page.image), ProfileConfig{});
  ASSERT_EQ(lines.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(lines[i].index, static_cast<int>(i));
    EXPECT_EQ(lines[i].y_top, page.line_bands[i].y_top);
    EXPECT_EQ(lines[i].y_bottom, page.line_bands[i].y_bottom);
    EXPECT_EQ(lines[i].height(), spec.text_line_height);
  }
}

TEST(BuildPage, TranslationEquivariance) {
  PageSpec spec;
  spec.seed = 8;
  spec.blocks = {Paragraph{4}, TableC{4, 3, 30}};
  const auto bin = ink_of(generate(spec).image);
  const auto base = build_page(bin, ProfileConfig{});

  const auto down = build_page(testing::pad_top(bin, 10, 0), ProfileConfig{});
  ASSERT_EQ(down.size(), base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto expected = base[i];
    expected.y_top += 10;
    expected.y_bottom += 10;
    EXPECT_EQ(down[i], expected);
  }

  const auto right = build_page(testing::pad_left(bin, 7, 0), ProfileConfig{});
  ASSERT_EQ(right.size(), base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(right[i].gap_count(), base[i].gap_count());
    EXPECT_EQ(right[i].max_word_space(), base[i].max_word_space());
    EXPECT_EQ(right[i].x_left, base[i].x_left + 7);
    if (!base[i].gaps.empty()) { EXPECT_EQ(right[i].gaps.front().x_start, base[i].gaps.front().x_start + 7); }
  }
}

}  // namespace
}  // namespace tablescout

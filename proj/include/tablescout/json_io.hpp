#pragma once

// JSON documents exchanged by the CLI. Every document carries "schema": 1.
// Pixel quantities are integers; percentages are one-decimal strings.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tablescout/config.hpp"
#include "tablescout/detector.hpp"
#include "tablescout/error.hpp"
#include "tablescout/evaluator.hpp"
#include "tablescout/synth.hpp"

namespace tablescout {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

namespace json_detail {

inline void check_schema(const Json& j, const char* what) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, std::string(what) + ": expected a JSON object");
  if (j.contains("schema") && j.at("schema") != kSchemaVersion) {
    throw Error(Errc::UnsupportedFormat, std::string(what) + ": unsupported schema " + j.at("schema").dump());
  }
}

inline Category category_from(const Json& j) {
  const auto s = j.get<std::string>();
  auto c = parse_category(s);
  if (!c) throw Error(Errc::InvalidArgument, "unknown table category '" + s + "'");
  return *c;
}

inline Json rect_fields(const Rect& r) { return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

inline Rect rect_from(const Json& j) {
  return {j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(), j.at("h").get<int>()};
}

// nlohmann throws its own exception types; surface them as library errors
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string(what) + ": " + e.what());
  }
}

}  // namespace json_detail

// ---- RunConfig -------------------------------------------------------------

inline Json to_json(const RunConfig& c) {
  return {
      {"schema", kSchemaVersion},
      {"preprocess",
       {{"bin_window", c.preprocess.bin_window},
        {"bin_k", c.preprocess.bin_k},
        {"bin_R", c.preprocess.bin_R},
        {"border_margin_frac", c.preprocess.border_margin_frac},
        {"dilate_w", c.preprocess.dilate_w},
        {"dilate_h", c.preprocess.dilate_h}}},
      {"profile",
       {{"row_noise_floor", c.profile.row_noise_floor},
        {"min_blank_rows", c.profile.min_blank_rows},
        {"min_gap_px", c.profile.min_gap_px}}},
      {"detector",
       {{"min_table_lines", c.detector.min_table_lines},
        {"max_interior_text_lines", c.detector.max_interior_text_lines},
        {"header_footer_exclusion_frac", c.detector.header_footer_exclusion_frac}}},
      {"alpha_ws", c.alpha_ws},
      {"alpha_lh", c.alpha_lh},
      {"iou_min", c.iou_min},
  };
}

/// Missing keys keep their defaults.
inline RunConfig run_config_from_json(const Json& j) {
  json_detail::check_schema(j, "config");
  return json_detail::guarded("config", [&] {
    RunConfig c;
    const Json empty = Json::object();
    const auto& p = j.contains("preprocess") ? j.at("preprocess") : empty;
    c.preprocess.bin_window = p.value("bin_window", c.preprocess.bin_window);
    c.preprocess.bin_k = p.value("bin_k", c.preprocess.bin_k);
    c.preprocess.bin_R = p.value("bin_R", c.preprocess.bin_R);
    c.preprocess.border_margin_frac = p.value("border_margin_frac", c.preprocess.border_margin_frac);
    c.preprocess.dilate_w = p.value("dilate_w", c.preprocess.dilate_w);
    c.preprocess.dilate_h = p.value("dilate_h", c.preprocess.dilate_h);
    const auto& pr = j.contains("profile") ? j.at("profile") : empty;
    c.profile.row_noise_floor = pr.value("row_noise_floor", c.profile.row_noise_floor);
    c.profile.min_blank_rows = pr.value("min_blank_rows", c.profile.min_blank_rows);
    c.profile.min_gap_px = pr.value("min_gap_px", c.profile.min_gap_px);
    const auto& d = j.contains("detector") ? j.at("detector") : empty;
    c.detector.min_table_lines = d.value("min_table_lines", c.detector.min_table_lines);
    c.detector.max_interior_text_lines = d.value("max_interior_text_lines", c.detector.max_interior_text_lines);
    c.detector.header_footer_exclusion_frac =
        d.value("header_footer_exclusion_frac", c.detector.header_footer_exclusion_frac);
    c.alpha_ws = j.value("alpha_ws", c.alpha_ws);
    c.alpha_lh = j.value("alpha_lh", c.alpha_lh);
    c.iou_min = j.value("iou_min", c.iou_min);
    return c;
  });
}

// ---- DetectionReport -------------------------------------------------------

inline Json to_json(const PageThresholds& t) {
  return {{"standard_line_index", t.standard_line_index},
          {"WS_std", t.ws_std},
          {"LH_std", t.lh_std},
          {"ws", t.ws},
          {"lh", t.lh},
          {"alpha_ws", t.alpha_ws},
          {"alpha_lh", t.alpha_lh}};
}

inline Json to_json(const TableRegion& r) {
  Json j = json_detail::rect_fields(r.rect);
  j["category"] = std::string(category_name(r.category));
  j["line_indices"] = r.line_indices;
  j["rule_line_count"] = r.rule_line_count;
  return j;
}

inline Json to_json(const DetectionReport& rep) {
  Json lines = Json::array();
  for (std::size_t i = 0; i < rep.lines.size(); ++i) {
    const auto& l = rep.lines[i];
    lines.push_back({{"index", i},
                     {"y_top", l.y_top},
                     {"y_bottom", l.y_bottom},
                     {"LH", l.height},
                     {"gap_count", l.gap_count},
                     {"WS", l.max_ws},
                     {"class", std::string(line_class_name(l.cls))},
                     {"excluded", l.excluded}});
  }
  Json regions = Json::array();
  for (const auto& r : rep.regions) regions.push_back(to_json(r));
  return {
      {"schema", kSchemaVersion},
      {"page_id", rep.page_id},
      {"page_size", {{"w", rep.page_width}, {"h", rep.page_height}}},
      {"config_fingerprint", rep.config_fingerprint},
      {"diagnostic", rep.diagnostic ? Json(*rep.diagnostic) : Json(nullptr)},
      {"thresholds", rep.thresholds ? to_json(*rep.thresholds) : Json(nullptr)},
      {"lines", lines},
      {"regions", regions},
  };
}

inline DetectionReport report_from_json(const Json& j) {
  json_detail::check_schema(j, "report");
  return json_detail::guarded("report", [&] {
    DetectionReport rep;
    rep.page_id = j.at("page_id").get<std::string>();
    rep.page_width = j.at("page_size").at("w").get<int>();
    rep.page_height = j.at("page_size").at("h").get<int>();
    rep.config_fingerprint = j.value("config_fingerprint", std::string{});
    if (j.contains("diagnostic") && !j.at("diagnostic").is_null()) rep.diagnostic = j.at("diagnostic").get<std::string>();
    if (j.contains("thresholds") && !j.at("thresholds").is_null()) {
      const auto& t = j.at("thresholds");
      rep.thresholds = PageThresholds{t.at("standard_line_index").get<int>(), t.at("WS_std").get<int>(),
                                      t.at("LH_std").get<int>(),             t.at("ws").get<double>(),
                                      t.at("lh").get<double>(),              t.at("alpha_ws").get<double>(),
                                      t.at("alpha_lh").get<double>()};
    }
    for (const auto& l : j.value("lines", Json::array())) {
      const auto cls = parse_line_class(l.at("class").get<std::string>());
      if (!cls) throw Error(Errc::InvalidArgument, "report: unknown line class");
      rep.lines.push_back({l.at("y_top").get<int>(), l.at("y_bottom").get<int>(), l.at("LH").get<int>(),
                           l.at("gap_count").get<int>(), l.at("WS").get<int>(), *cls, l.value("excluded", false)});
    }
    for (const auto& r : j.at("regions")) {
      TableRegion reg;
      reg.rect = json_detail::rect_from(r);
      reg.category = json_detail::category_from(r.at("category"));
      reg.line_indices = r.value("line_indices", std::vector<int>{});
      reg.rule_line_count = r.value("rule_line_count", 0);
      rep.regions.push_back(std::move(reg));
    }
    return rep;
  });
}

// ---- GroundTruth -----------------------------------------------------------

inline Json to_json(const GroundTruth& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries) {
    Json je = json_detail::rect_fields(e.rect);
    je["category"] = std::string(category_name(e.category));
    entries.push_back(je);
  }
  Json j = {{"schema", kSchemaVersion}, {"page_id", t.page_id}};
  if (t.page_width > 0 && t.page_height > 0) j["page_size"] = {{"w", t.page_width}, {"h", t.page_height}};
  j["entries"] = entries;
  return j;
}

inline GroundTruth truth_from_json(const Json& j) {
  json_detail::check_schema(j, "truth");
  return json_detail::guarded("truth", [&] {
    GroundTruth t;
    t.page_id = j.at("page_id").get<std::string>();
    if (j.contains("page_size")) {
      t.page_width = j.at("page_size").at("w").get<int>();
      t.page_height = j.at("page_size").at("h").get<int>();
    }
    for (const auto& e : j.at("entries")) {
      const Rect r = json_detail::rect_from(e);
      if (r.w <= 0 || r.h <= 0 || r.x < 0 || r.y < 0 ||
          (t.page_width > 0 && (r.right() > t.page_width || r.bottom() > t.page_height))) {
        throw Error(Errc::OutOfBounds, "truth entry " + to_string(r) + " is not bound-valid");
      }
      t.entries.push_back({r, json_detail::category_from(e.at("category"))});
    }
    return t;
  });
}

// ---- PageSpec --------------------------------------------------------------

inline Json to_json(const PageSpec& s) {
  Json blocks = Json::array();
  for (const auto& b : s.blocks) {
    std::visit(
        [&](const auto& blk) {
          using T = std::decay_t<decltype(blk)>;
          if constexpr (std::is_same_v<T, Paragraph>) {
            blocks.push_back({{"type", "Paragraph"}, {"lines", blk.lines}});
          } else if constexpr (std::is_same_v<T, RunningHeader>) {
            blocks.push_back({{"type", "RunningHeader"}, {"lines", blk.lines}});
          } else if constexpr (std::is_same_v<T, TableA>) {
            blocks.push_back({{"type", "TableA"}, {"rows", blk.rows}, {"cols", blk.cols}, {"rule_px", blk.rule_px}});
          } else if constexpr (std::is_same_v<T, TableB>) {
            blocks.push_back({{"type", "TableB"}, {"rows", blk.rows}, {"cols", blk.cols}, {"rule_px", blk.rule_px}});
          } else {
            blocks.push_back(
                {{"type", "TableC"}, {"rows", blk.rows}, {"cols", blk.cols}, {"col_gap_px", blk.col_gap_px}});
          }
        },
        b);
  }
  auto range = [](const IntRange& r) { return Json::array({r.lo, r.hi}); };
  return {
      {"schema", kSchemaVersion},
      {"seed", s.seed},
      {"page", {{"w", s.page_w}, {"h", s.page_h}}},
      {"margin", s.margin},
      {"text_line_height", s.text_line_height},
      {"line_gap", s.line_gap},
      {"word_len_range", range(s.word_len_range)},
      {"word_gap_range", range(s.word_gap_range)},
      {"char_gap_range", range(s.char_gap_range)},
      {"blocks", blocks},
      {"noise", {{"salt_pepper_rate", s.noise.salt_pepper_rate}, {"border_smear", s.noise.border_smear}}},
  };
}

inline PageSpec page_spec_from_json(const Json& j) {
  json_detail::check_schema(j, "page spec");
  return json_detail::guarded("page spec", [&] {
    PageSpec s;
    s.seed = j.value("seed", s.seed);
    if (j.contains("page")) {
      s.page_w = j.at("page").value("w", s.page_w);
      s.page_h = j.at("page").value("h", s.page_h);
    }
    s.margin = j.value("margin", s.margin);
    s.text_line_height = j.value("text_line_height", s.text_line_height);
    s.line_gap = j.value("line_gap", s.line_gap);
    auto range = [&](const char* key, IntRange def) {
      if (!j.contains(key)) return def;
      const auto& a = j.at(key);
      return IntRange{a.at(0).get<int>(), a.at(1).get<int>()};
    };
    s.word_len_range = range("word_len_range", s.word_len_range);
    s.word_gap_range = range("word_gap_range", s.word_gap_range);
    s.char_gap_range = range("char_gap_range", s.char_gap_range);
    for (const auto& b : j.value("blocks", Json::array())) {
      const auto type = b.at("type").get<std::string>();
      if (type == "Paragraph") {
        s.blocks.push_back(Paragraph{b.at("lines").get<int>()});
      } else if (type == "RunningHeader") {
        s.blocks.push_back(RunningHeader{b.at("lines").get<int>()});
      } else if (type == "TableA") {
        s.blocks.push_back(TableA{b.at("rows").get<int>(), b.at("cols").get<int>(), b.value("rule_px", 2)});
      } else if (type == "TableB") {
        s.blocks.push_back(TableB{b.at("rows").get<int>(), b.at("cols").get<int>(), b.value("rule_px", 2)});
      } else if (type == "TableC") {
        s.blocks.push_back(TableC{b.at("rows").get<int>(), b.at("cols").get<int>(),
                                  b.value("col_gap_px", 3 * s.word_gap_range.hi)});
      } else {
        throw Error(Errc::InvalidArgument, "page spec: unknown block type '" + type + "'");
      }
    }
    if (j.contains("noise")) {
      s.noise.salt_pepper_rate = j.at("noise").value("salt_pepper_rate", 0.0);
      s.noise.border_smear = j.at("noise").value("border_smear", false);
    }
    return s;
  });
}

// ---- EvalSummary -----------------------------------------------------------

inline Json to_json(const EvalSummary& s) {
  Json cats = Json::object();
  Json confusion = Json::object();
  for (auto c : {Category::A, Category::B, Category::C}) {
    const auto& t = s.per_category[static_cast<std::size_t>(category_index(c))];
    const std::string name(category_name(c));
    cats[name] = {{"total", t.total}, {"correct", t.correct}, {"accuracy_pct", s.accuracy(c)}};
    const auto& row = s.confusion[static_cast<std::size_t>(category_index(c))];
    confusion[name] = {{"A", row[0]}, {"B", row[1]}, {"C", row[2]}, {"unmatched", row[3]}};
  }
  return {
      {"schema", kSchemaVersion},
      {"pages", s.pages},
      {"categories", cats},
      {"overall", {{"total", s.overall.total}, {"correct", s.overall.correct}, {"accuracy_pct", s.overall_accuracy()}}},
      {"false_positives", s.false_positives},
      {"confusion", confusion},
  };
}

// ---- files -----------------------------------------------------------------

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

}  // namespace tablescout

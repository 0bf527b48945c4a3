#pragma once

// Command implementations behind the `tablescout` executable. Kept in a
// header so the test suites can drive the exact same code paths.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "tablescout/json_io.hpp"
#include "tablescout/tablescout.hpp"

namespace tablescout::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kFailure = 1, kNoTextLine = 2 };

/// Flag bindings for every RunConfig field. Only flags that were given on
/// the command line override the values from --config.
class ConfigFlags {
 public:
  void attach(CLI::App& app) {
    app.add_option("--config", config_path_, "JSON run configuration (as written by --dump-config)");
    app.add_flag("--dump-config", dump_, "Print the effective configuration as JSON and exit");
    add(app, "--bin-window", [](RunConfig& c) -> auto& { return c.preprocess.bin_window; }, "Binarization window side (odd)");
    add(app, "--bin-k", [](RunConfig& c) -> auto& { return c.preprocess.bin_k; }, "Binarization sensitivity k in (0,1)");
    add(app, "--bin-r", [](RunConfig& c) -> auto& { return c.preprocess.bin_R; }, "Binarization dynamic range R");
    add(app, "--border-margin", [](RunConfig& c) -> auto& { return c.preprocess.border_margin_frac; }, "Border-noise margin fraction");
    add(app, "--dilate-w", [](RunConfig& c) -> auto& { return c.preprocess.dilate_w; }, "Dilation element width");
    add(app, "--dilate-h", [](RunConfig& c) -> auto& { return c.preprocess.dilate_h; }, "Dilation element height");
    add(app, "--row-noise-floor", [](RunConfig& c) -> auto& { return c.profile.row_noise_floor; }, "Ink pixels below which a row is blank");
    add(app, "--min-blank-rows", [](RunConfig& c) -> auto& { return c.profile.min_blank_rows; }, "Blank rows separating two lines");
    add(app, "--min-gap", [](RunConfig& c) -> auto& { return c.profile.min_gap_px; }, "Narrowest blank-column run counted as a gap");
    add(app, "--min-table-lines", [](RunConfig& c) -> auto& { return c.detector.min_table_lines; }, "Minimum member lines of a B/C region");
    add(app, "--max-interior-text", [](RunConfig& c) -> auto& { return c.detector.max_interior_text_lines; },
        "Consecutive text lines tolerated inside a region");
    add(app, "--header-footer-frac", [](RunConfig& c) -> auto& { return c.detector.header_footer_exclusion_frac; },
        "Page-height fraction ignored at top and bottom");
    add(app, "--alpha-ws", [](RunConfig& c) -> auto& { return c.alpha_ws; }, "Word-space threshold factor, open interval (1,2)");
    add(app, "--alpha-lh", [](RunConfig& c) -> auto& { return c.alpha_lh; }, "Line-height threshold factor, open interval (1,1.5)");
    add(app, "--iou-min", [](RunConfig& c) -> auto& { return c.iou_min; }, "IoU needed for a detection to count as correct");
  }

  bool dump_requested() const { return dump_; }

  RunConfig resolve() const {
    RunConfig c = config_path_.empty() ? RunConfig{} : run_config_from_json(read_json_file(config_path_));
    for (const auto& apply : overrides_) apply(c);
    c.validate();
    return c;
  }

 private:
  template <typename Get>
  void add(CLI::App& app, const std::string& name, Get get, const std::string& help) {
    auto* opt = app.add_option(name, get(v_), help)->capture_default_str();
    overrides_.push_back([opt, get, this](RunConfig& c) {
      if (opt->count() > 0) get(c) = get(v_);
    });
  }

  RunConfig v_;
  std::string config_path_;
  bool dump_ = false;
  std::vector<std::function<void(RunConfig&)>> overrides_;
};

inline void print_config(std::ostream& out, const RunConfig& c) { out << to_json(c).dump(2) << '\n'; }

// ---- detect ----------------------------------------------------------------

struct DetectArgs {
  std::string image;
  std::string out;
  std::string overlay;
  std::string crops;
  std::string page_id;
};

inline int cmd_detect(const DetectArgs& a, const RunConfig& cfg, std::ostream& out) {
  const fs::path image(a.image);
  const auto gray = load_gray(image);
  const auto bin = preprocess(gray, cfg.preprocess);
  const auto rep = detect_binary(bin, cfg, a.page_id.empty() ? image.stem().string() : a.page_id);

  const auto doc = to_json(rep);
  if (a.out.empty() || a.out == "-") {
    out << doc.dump(2) << '\n';
  } else {
    write_json_file(a.out, doc);
  }
  if (!a.overlay.empty()) {
    const auto regions = overlay_regions(rep);
    save_gray(a.overlay, render_overlay(gray, regions));
  }
  if (!a.crops.empty()) {
    fs::create_directories(a.crops);
    for (std::size_t i = 0; i < rep.regions.size(); ++i) {
      std::ostringstream name;
      name << rep.page_id << ".region" << std::setw(2) << std::setfill('0') << i << '.'
           << category_name(rep.regions[i].category) << ".pbm";
      save_binary(fs::path(a.crops) / name.str(), crop(bin, rep.regions[i].rect));
    }
  }
  return rep.diagnostic ? kNoTextLine : kOk;
}

// ---- batch -----------------------------------------------------------------

struct BatchArgs {
  std::string dir;
  std::string out_dir;
  int jobs = 1;
};

struct BatchEntry {
  std::string page_id;
  std::string image;
  std::string report;
  std::string status;  // ok | no_text_line | error
  std::string error;
};

inline std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_supported_image(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

/// Pages are processed by `jobs` workers; every result lands in its own
/// slot so the manifest order is the sorted file order.
inline int cmd_batch(const BatchArgs& a, const RunConfig& cfg, std::ostream& out) {
  const fs::path dir(a.dir);
  if (!fs::is_directory(dir)) throw Error(Errc::FileNotFound, "not a directory: " + a.dir);
  const fs::path out_dir = a.out_dir.empty() ? dir : fs::path(a.out_dir);
  fs::create_directories(out_dir);

  const auto start = std::chrono::steady_clock::now();
  const auto files = list_images(dir);
  std::vector<BatchEntry> entries(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      auto& e = entries[i];
      e.page_id = files[i].stem().string();
      e.image = files[i].filename().string();
      try {
        const auto rep = detect(load_gray(files[i]), cfg, e.page_id);
        e.report = e.page_id + ".report.json";
        write_json_file(out_dir / e.report, to_json(rep));
        e.status = rep.diagnostic ? "no_text_line" : "ok";
      } catch (const std::exception& ex) {
        e.report.clear();
        e.status = "error";
        e.error = ex.what();
      }
    }
  };
  const int jobs = std::max(1, a.jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json pages = Json::array();
  int failures = 0;
  for (const auto& e : entries) {
    Json p = {{"page_id", e.page_id}, {"image", e.image}, {"status", e.status}};
    p["report"] = e.report.empty() ? Json(nullptr) : Json(e.report);
    if (!e.error.empty()) {
      p["error"] = e.error;
      ++failures;
    }
    pages.push_back(p);
  }
  const Json manifest = {{"schema", kSchemaVersion}, {"config_fingerprint", config_fingerprint(cfg)},
                         {"config", to_json(cfg)},   {"jobs", jobs},
                         {"wall_time_s", wall},      {"page_count", entries.size()},
                         {"failure_count", failures}, {"pages", pages}};
  write_json_file(out_dir / "manifest.json", manifest);
  out << "processed " << entries.size() << " page(s), " << failures << " failure(s) -> "
      << (out_dir / "manifest.json").string() << '\n';
  return kOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string reports_dir;
  std::string truth_dir;
  std::string fixture;
  std::string out;
};

inline void print_summary(std::ostream& out, const EvalSummary& s) {
  out << std::left << std::setw(10) << "Category" << std::right << std::setw(8) << "Total" << std::setw(10)
      << "Correct" << std::setw(11) << "Accuracy" << '\n';
  for (auto c : {Category::A, Category::B, Category::C}) {
    const auto& t = s.per_category[static_cast<std::size_t>(category_index(c))];
    out << std::left << std::setw(10) << category_name(c) << std::right << std::setw(8) << t.total << std::setw(10)
        << t.correct << std::setw(11) << s.accuracy(c) << '\n';
  }
  out << std::left << std::setw(10) << "Overall" << std::right << std::setw(8) << s.overall.total << std::setw(10)
      << s.overall.correct << std::setw(11) << s.overall_accuracy() << '\n';
  out << "false positives: " << s.false_positives << '\n';
}

inline std::map<std::string, fs::path> index_by_page(const fs::path& dir, const std::string& suffix,
                                                     std::vector<std::string>& errors) {
  std::map<std::string, fs::path> out;
  if (!fs::is_directory(dir)) throw Error(Errc::FileNotFound, "not a directory: " + dir.string());
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (!e.is_regular_file() || name.size() <= suffix.size() || !name.ends_with(suffix)) continue;
    try {
      const auto j = read_json_file(e.path());
      out[j.at("page_id").get<std::string>()] = e.path();
    } catch (const std::exception& ex) {
      errors.push_back(name + ": " + ex.what());
    }
  }
  return out;
}

inline int cmd_eval(const EvalArgs& a, const RunConfig& cfg, std::ostream& out) {
  std::vector<PageResult> pages;
  std::vector<std::string> errors;
  if (!a.fixture.empty()) {
    if (a.fixture != "table1") throw Error(Errc::InvalidArgument, "unknown fixture '" + a.fixture + "'");
    pages = table1_fixture();
  } else {
    const auto reports = index_by_page(a.reports_dir, ".report.json", errors);
    const auto truths = index_by_page(a.truth_dir, ".truth.json", errors);
    for (const auto& [page_id, report_path] : reports) {
      const auto t = truths.find(page_id);
      if (t == truths.end()) {
        errors.push_back(page_id + ": MissingTruth");
        continue;
      }
      const auto rep = report_from_json(read_json_file(report_path));
      const auto truth = truth_from_json(read_json_file(t->second));
      pages.push_back(evaluate_page(rep.regions, truth, cfg.iou_min));
    }
    for (const auto& [page_id, truth_path] : truths) {
      if (reports.count(page_id)) continue;
      // an undetected page still counts against accuracy
      errors.push_back(page_id + ": MissingReport");
      pages.push_back(evaluate_page({}, truth_from_json(read_json_file(truth_path)), cfg.iou_min));
    }
  }
  const auto summary = aggregate(pages);
  print_summary(out, summary);
  for (const auto& e : errors) out << "error: " << e << '\n';
  if (!a.out.empty()) {
    Json j = to_json(summary);
    j["iou_min"] = cfg.iou_min;
    j["errors"] = errors;
    write_json_file(a.out, j);
  }
  return kOk;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string spec;
  std::string type;
  std::uint64_t seed = 1;
  std::string suite;
  std::string out_dir = ".";
  std::string name;
};

inline void write_synth_page(const fs::path& dir, const std::string& page_id, const PageSpec& spec) {
  auto page = generate(spec);
  page.truth.page_id = page_id;
  save_gray(dir / (page_id + ".pgm"), page.image);
  write_json_file(dir / (page_id + ".truth.json"), to_json(page.truth));
}

inline std::optional<PageKind> parse_page_kind(const std::string& s) {
  if (s == "A" || s == "a") return PageKind::A;
  if (s == "B" || s == "b") return PageKind::B;
  if (s == "C" || s == "c") return PageKind::C;
  if (s == "control" || s == "P") return PageKind::Control;
  return std::nullopt;
}

inline int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const int modes = !a.spec.empty() + !a.type.empty() + !a.suite.empty();
  if (modes != 1) throw Error(Errc::InvalidArgument, "give exactly one of --spec, --type or --suite");

  if (!a.suite.empty()) {
    std::vector<SuitePage> pages;
    if (a.suite == "desk") pages = desk_suite();
    else if (a.suite == "control") pages = control_suite();
    else throw Error(Errc::InvalidArgument, "unknown suite '" + a.suite + "' (desk|control)");
    for (const auto& p : pages) write_synth_page(dir, p.page_id, p.spec);
    out << "wrote " << pages.size() << " page(s) to " << dir.string() << '\n';
    return kOk;
  }
  if (!a.type.empty()) {
    const auto kind = parse_page_kind(a.type);
    if (!kind) throw Error(Errc::InvalidArgument, "unknown page type '" + a.type + "' (A|B|C|control)");
    const auto id = a.name.empty() ? "synth-" + page_kind_name(*kind) + "-" + std::to_string(a.seed) : a.name;
    write_synth_page(dir, id, page_spec_for(*kind, a.seed));
    out << "wrote " << (dir / (id + ".pgm")).string() << '\n';
    return kOk;
  }
  const auto spec = page_spec_from_json(read_json_file(a.spec));
  const auto id = a.name.empty() ? fs::path(a.spec).stem().string() : a.name;
  write_synth_page(dir, id, spec);
  out << "wrote " << (dir / (id + ".pgm")).string() << '\n';
  return kOk;
}

// ---- entry point -----------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Locate tables in scanned single-column document pages", "tablescout"};
  app.require_subcommand(1);

  DetectArgs detect_args;
  ConfigFlags detect_cfg;
  auto* detect_cmd = app.add_subcommand("detect", "Detect tables on one page image");
  detect_cmd->add_option("image", detect_args.image, "Input page (PGM/PBM/PPM)");
  detect_cmd->add_option("-o,--out", detect_args.out, "Report path (default: stdout)");
  detect_cmd->add_option("--overlay", detect_args.overlay, "Write the page with region borders burned in (PGM)");
  detect_cmd->add_option("--crops", detect_args.crops, "Directory for one binary crop per region (PBM)");
  detect_cmd->add_option("--page-id", detect_args.page_id, "Page id (default: image file stem)");
  detect_cfg.attach(*detect_cmd);

  BatchArgs batch_args;
  ConfigFlags batch_cfg;
  auto* batch_cmd = app.add_subcommand("batch", "Detect tables on every page image in a directory");
  batch_cmd->add_option("dir", batch_args.dir, "Directory of page images");
  batch_cmd->add_option("--out-dir", batch_args.out_dir, "Where reports and manifest.json go (default: dir)");
  batch_cmd->add_option("-j,--jobs", batch_args.jobs, "Worker threads")
      ->envname("TABLESCOUT_JOBS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  batch_cfg.attach(*batch_cmd);

  EvalArgs eval_args;
  ConfigFlags eval_cfg;
  auto* eval_cmd = app.add_subcommand("eval", "Score reports against ground-truth sidecars");
  eval_cmd->add_option("reports_dir", eval_args.reports_dir, "Directory of *.report.json");
  eval_cmd->add_option("truth_dir", eval_args.truth_dir, "Directory of *.truth.json");
  eval_cmd->add_option("--fixture", eval_args.fixture, "Built-in count fixture (table1)");
  eval_cmd->add_option("--out", eval_args.out, "Write the summary as JSON");
  eval_cfg.attach(*eval_cmd);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic pages with ground truth");
  synth_cmd->add_option("--spec", synth_args.spec, "Page spec JSON");
  synth_cmd->add_option("--type", synth_args.type, "Generated layout: A, B, C or control");
  synth_cmd->add_option("--seed", synth_args.seed, "Seed for --type")->capture_default_str();
  synth_cmd->add_option("--suite", synth_args.suite, "Fixed corpus: desk (90 pages) or control (10 pages)");
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "Output directory")->capture_default_str();
  synth_cmd->add_option("--name", synth_args.name, "Page id / file stem for single pages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }

  try {
    auto with_config = [&](ConfigFlags& flags, auto&& body) -> int {
      const auto cfg = flags.resolve();
      if (flags.dump_requested()) {
        print_config(out, cfg);
        return kOk;
      }
      return body(cfg);
    };
    if (*detect_cmd) {
      return with_config(detect_cfg, [&](const RunConfig& cfg) {
        if (detect_args.image.empty()) throw Error(Errc::InvalidArgument, "detect: missing image path");
        return cmd_detect(detect_args, cfg, out);
      });
    }
    if (*batch_cmd) {
      return with_config(batch_cfg, [&](const RunConfig& cfg) {
        if (batch_args.dir.empty()) throw Error(Errc::InvalidArgument, "batch: missing directory");
        return cmd_batch(batch_args, cfg, out);
      });
    }
    if (*eval_cmd) {
      return with_config(eval_cfg, [&](const RunConfig& cfg) {
        if (eval_args.fixture.empty() && (eval_args.reports_dir.empty() || eval_args.truth_dir.empty())) {
          throw Error(Errc::InvalidArgument, "eval: give reports_dir and truth_dir, or --fixture");
        }
        return cmd_eval(eval_args, cfg, out);
      });
    }
    if (*synth_cmd) return cmd_synth(synth_args, out);
  } catch (const std::exception& e) {
    err << "tablescout: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace tablescout::cli

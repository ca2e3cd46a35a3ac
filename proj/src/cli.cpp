#include "lexiprof/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "lexiprof/annotate.hpp"
#include "lexiprof/error.hpp"
#include "lexiprof/experiment.hpp"
#include "lexiprof/ingest.hpp"
#include "lexiprof/profile.hpp"
#include "lexiprof/report.hpp"
#include "lexiprof/synth.hpp"
#include "lexiprof/text.hpp"

namespace fs = std::filesystem;

namespace lexiprof::cli {

namespace {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Verbosity comes from LEXIPROF_LOG (error|warn|info|debug), default warn.
LogLevel log_level() {
  const char* env = std::getenv("LEXIPROF_LOG");
  if (env == nullptr) return LogLevel::Warn;
  const std::string v = env;
  if (v == "error" || v == "quiet") return LogLevel::Error;
  if (v == "info") return LogLevel::Info;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  LogLevel level = log_level();

  void log(LogLevel lvl, const std::string& msg) const {
    if (lvl > level) return;
    static constexpr const char* kNames[] = {"error", "warning", "info", "debug"};
    err << "lexiprof: " << kNames[static_cast<int>(lvl)] << ": " << msg << "\n";
  }
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyConstructionWindow: return kEmptyConstruction;
    case ErrorCode::SpanOverlap: return kSpanOverlap;
    case ErrorCode::MissingLemmas: return kMissingLemmas;
    case ErrorCode::IOError: return kIo;
    default: return kUsageOrParse;
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

// Single machine-parsable line: "lexiprof: error[<Code>]: <message>".
int report_error(const Context& ctx, const Error& e) {
  ctx.err << "lexiprof: error[" << error_name(e.code()) << "]: " << one_line(e.what()) << "\n";
  return exit_code(e.code());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IOError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IOError, "write failed for " + path);
}

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string output;
};

struct TranscriptSource {
  std::string path;
  std::string format;  // "conllu", "raw" or empty for by-extension
  std::string tagger;  // "auto", "passthrough", "lexicon", "external"
  std::string lexicon;
};

Transcript load_tagged(const TranscriptSource& src) {
  const std::string content = read_file(src.path);
  const std::string format =
      !src.format.empty() ? src.format : (fs::path(src.path).extension() == ".conllu" ? "conllu" : "raw");
  Transcript t;
  if (format == "conllu") {
    t = parse_conllu(content);
  } else if (format == "raw") {
    t = parse_raw_transcript(content);
  } else {
    throw Error(ErrorCode::ParseError, "unknown transcript format '" + format + "'");
  }
  validate(t);
  if (t.speaker_id.empty()) t.speaker_id = fs::path(src.path).stem().string();

  TaggerSpec spec;
  std::string tagger = src.tagger.empty() ? "auto" : src.tagger;
  if (tagger == "auto") {
    tagger = !src.lexicon.empty() ? "lexicon" : (format == "conllu" ? "passthrough" : "lexicon");
  }
  if (tagger == "passthrough") {
    spec.kind = TaggerKind::PretaggedPassthrough;
  } else if (tagger == "external") {
    spec.kind = TaggerKind::ExternalConllu;
  } else if (tagger == "lexicon") {
    if (src.lexicon.empty()) throw Error(ErrorCode::InvalidConfig, "the lexicon tagger needs --lexicon");
    spec.kind = TaggerKind::BuiltinLexicon;
    spec.lexicon_path = src.lexicon;
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown tagger '" + tagger + "'");
  }
  return tag_transcript(t, spec);
}

int cmd_build(const Context& ctx, const Globals& g, const TranscriptSource& src, std::optional<int> minutes) {
  try {
    if (g.output.empty()) throw Error(ErrorCode::InvalidConfig, "build needs --output");
    ProfileConfig config = g.config.empty() ? ProfileConfig{} : config_from_json(read_file(g.config));
    if (minutes) {
      config.construction_minutes = *minutes;
      config.validate();
    }
    const Transcript t = load_tagged(src);
    const LexicalProfile p = build_profile(t, config);
    write_file(g.output, profile_to_json(p));
    ctx.log(LogLevel::Info, "wrote profile for '" + p.speaker_id + "' to " + g.output);
    return kOk;
  } catch (const Error& e) {
    return report_error(ctx, e);
  }
}

int cmd_eval(const Context& ctx, const Globals& g, const std::string& profile_path, const TranscriptSource& src,
             int window_minutes, const std::string& mode_name, std::optional<double> start_minute,
             std::optional<double> cutoff_minutes) {
  try {
    const auto mode = parse_match_mode(mode_name);
    if (!mode) throw Error(ErrorCode::InvalidConfig, "unknown mode '" + mode_name + "'");
    if (window_minutes < 1) throw Error(ErrorCode::InvalidConfig, "window minutes must be positive");
    const LexicalProfile p = profile_from_json(read_file(profile_path));
    const Transcript t = load_tagged(src);

    const double after = start_minute ? *start_minute * 60.0 : p.construction_span.end;
    const std::optional<double> cutoff = cutoff_minutes ? std::optional<double>(*cutoff_minutes * 60.0) : std::nullopt;
    const auto windows = make_windows(t, after, window_minutes * 60.0, cutoff, WindowOptions::from(p.config));
    if (windows.empty()) {
      ctx.log(LogLevel::Warn, "no " + std::to_string(window_minutes) + "-minute window fits in the remaining speech");
    }

    std::vector<ReportRow> rows;
    for (const EvaluationWindow& w : windows) {
      if (w.empty) {
        ReportRow skip;
        skip.speaker_id = p.speaker_id;
        skip.timepoint_min = p.config.construction_minutes;
        skip.window_minutes = window_minutes;
        skip.window_index = w.index;
        skip.k_assignment_id = "profile";
        skip.mode = std::string(match_mode_name(*mode));
        skip.scope_order = -1;
        skip.skip_reason = "EmptyWindow";
        rows.push_back(std::move(skip));
        continue;
      }
      for (const MetricRecord& m : evaluate_profile(p, w, *mode)) {
        const SweepRecord rec{p.speaker_id, p.config.construction_minutes, "profile", window_minutes, m};
        for (ReportRow& row : report_rows(rec)) rows.push_back(std::move(row));
      }
    }
    sort_rows(rows);
    const std::string csv = rows_to_csv(rows);
    if (g.output.empty() || g.output == "-") {
      ctx.out << csv;
    } else {
      write_file(g.output, csv);
    }
    return kOk;
  } catch (const Error& e) {
    return report_error(ctx, e);
  }
}

std::vector<TranscriptSource> read_manifest(const std::string& path, const std::string& text) {
  using json_io::Json;
  const Json j = json_io::parse_document(text, ErrorCode::ParseError);
  const Json& files = j.is_object() && j.contains("files") ? j["files"] : j;
  if (!files.is_array()) throw Error(ErrorCode::ParseError, "manifest must be a list of files");
  const fs::path base = fs::path(path).parent_path();
  std::vector<TranscriptSource> out;
  try {
    for (const Json& entry : files) {
      TranscriptSource src;
      if (entry.is_string()) {
        src.path = entry.get<std::string>();
      } else {
        json_io::reject_unknown_keys(entry, {"path", "format", "tagger", "lexicon"}, ErrorCode::ParseError);
        src.path = entry.at("path").get<std::string>();
        if (entry.contains("format")) src.format = entry["format"].get<std::string>();
        if (entry.contains("tagger")) src.tagger = entry["tagger"].get<std::string>();
        if (entry.contains("lexicon")) src.lexicon = (base / entry["lexicon"].get<std::string>()).string();
      }
      src.path = (base / src.path).string();
      out.push_back(std::move(src));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad manifest entry: ") + e.what());
  }
  return out;
}

int cmd_sweep(const Context& ctx, const Globals& g, const std::string& manifest_path) {
  try {
    if (g.output.empty()) throw Error(ErrorCode::InvalidConfig, "sweep needs --output <dir>");
    SweepConfig sc = g.config.empty() ? SweepConfig{} : sweep_config_from_json(read_file(g.config));
    if (g.seed) sc.seed = *g.seed;
    sc.validate();

    const std::string manifest = read_file(manifest_path);
    const auto sources = read_manifest(manifest_path, manifest);
    if (sources.empty()) throw Error(ErrorCode::ParseError, "manifest lists no transcripts");

    std::vector<Transcript> corpus;
    for (const TranscriptSource& src : sources) {
      try {
        corpus.push_back(load_tagged(src));
        ctx.log(LogLevel::Debug, "loaded " + src.path);
      } catch (const Error& e) {
        ctx.log(LogLevel::Warn, src.path + ": " + std::string(error_name(e.code())) + ": " + one_line(e.what()));
      }
    }
    if (corpus.empty()) throw Error(ErrorCode::ParseError, "no transcript in the manifest could be loaded");

    const SweepResult result = run_sweep(corpus, sc, g.jobs);
    for (const SkipRecord& s : result.skips) {
      ctx.log(LogLevel::Info, "skip " + s.speaker_id + " t=" + std::to_string(s.timepoint_min) + " " +
                                  s.assignment_id + ": " + s.reason);
    }

    fs::create_directories(g.output);
    const fs::path dir(g.output);
    write_file((dir / "rows.csv").string(), rows_to_csv(report_rows(result)));
    write_file((dir / "aggregate.csv").string(), summary_to_csv(aggregate(result)));
    write_file((dir / "provenance.json").string(),
               provenance_to_json(result, text::hex64(text::fnv1a64(manifest)), sc.seed));
    ctx.log(LogLevel::Info, std::to_string(result.records.size()) + " records, " +
                                std::to_string(result.skips.size()) + " skips");
    return kOk;
  } catch (const Error& e) {
    return report_error(ctx, e);
  } catch (const fs::filesystem_error& e) {
    return report_error(ctx, Error(ErrorCode::IOError, e.what()));
  }
}

int cmd_synth(const Context& ctx, const Globals& g, const std::string& model_path, double duration) {
  try {
    if (g.output.empty()) throw Error(ErrorCode::InvalidConfig, "synth needs --output");
    SpeakerModel m = model_from_json(read_file(model_path));
    if (g.seed) m.seed = *g.seed;
    const Transcript t = generate_transcript(m, duration);
    write_file(g.output, "# synth_seed = " + std::to_string(m.seed) + "\n" + serialize_conllu(t));
    return kOk;
  } catch (const Error& e) {
    return report_error(ctx, e);
  }
}

int cmd_tagcheck(const Context& ctx, const std::vector<std::string>& paths) {
  int status = kOk;
  for (const std::string& path : paths) {
    try {
      const Transcript t = parse_conllu(read_file(path));
      validate(t);
      std::size_t tokens = 0, untagged = 0, markers = 0;
      for (const Utterance& u : t.utterances) {
        for (const Token& tok : u.tokens) {
          ++tokens;
          if (tok.is_marker()) {
            ++markers;
          } else if (tok.pos == Upos::X) {
            ++untagged;
          }
        }
      }
      ctx.out << path << ": ok, " << t.utterances.size() << " utterances, " << tokens << " tokens, " << markers
              << " markers, " << untagged << " tagged X\n";
    } catch (const Error& e) {
      ctx.err << path << ": ";
      status = std::max(status, report_error(ctx, e));
    }
  }
  return status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Personal lexical profiles from dialogue transcripts", "lexiprof"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Profile config (build) or sweep config (sweep), JSON");
  app.add_option("--seed", g.seed, "Seed override");
  app.add_option("--jobs", g.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--output", g.output, "Output file or directory");

  TranscriptSource src;
  auto add_tagger_options = [&](CLI::App* sub) {
    sub->add_option("--format", src.format, "Transcript format: conllu or raw (default: by extension)");
    sub->add_option("--tagger", src.tagger, "auto, passthrough, lexicon or external");
    sub->add_option("--lexicon", src.lexicon, "Lexicon for the builtin tagger");
  };

  std::optional<int> minutes;
  auto* build = app.add_subcommand("build", "Build a lexical profile from one transcript");
  build->add_option("input", src.path, "Transcript (.conllu or raw)")->required();
  build->add_option("--minutes", minutes, "Construction minutes (overrides the config)");
  add_tagger_options(build);

  std::string profile_path;
  int window_minutes = 10;
  std::string mode = "exact";
  std::optional<double> start_minute, cutoff_minutes;
  auto* eval = app.add_subcommand("eval", "Evaluate a profile over later windows of a transcript");
  eval->add_option("profile", profile_path, "Profile JSON")->required();
  eval->add_option("transcript", src.path, "Transcript")->required();
  eval->add_option("--window-minutes", window_minutes, "Evaluation window size");
  eval->add_option("--mode", mode, "exact or lemmatised");
  eval->add_option("--start-minute", start_minute, "First window start (default: end of construction span)");
  eval->add_option("--cutoff-minutes", cutoff_minutes, "Ignore speech after this minute");
  add_tagger_options(eval);

  std::string manifest;
  auto* sweep = app.add_subcommand("sweep", "Run the timepoint x profile size x window grid over a corpus");
  sweep->add_option("manifest", manifest, "Corpus manifest JSON")->required();

  std::string model_path;
  double duration = 120.0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic tagged transcript");
  synth->add_option("model", model_path, "Speaker model JSON")->required();
  synth->add_option("--duration", duration, "Minutes of speech");

  std::vector<std::string> check_paths;
  auto* tagcheck = app.add_subcommand("tagcheck", "Validate CoNLL-U transcript metadata");
  tagcheck->add_option("files", check_paths, "CoNLL-U files")->required();

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("lexiprof");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrParse;
  }

  if (build->parsed()) return cmd_build(ctx, g, src, minutes);
  if (eval->parsed()) return cmd_eval(ctx, g, profile_path, src, window_minutes, mode, start_minute, cutoff_minutes);
  if (sweep->parsed()) return cmd_sweep(ctx, g, manifest);
  if (synth->parsed()) return cmd_synth(ctx, g, model_path, duration);
  if (tagcheck->parsed()) return cmd_tagcheck(ctx, check_paths);
  return kUsageOrParse;
}

}  // namespace lexiprof::cli

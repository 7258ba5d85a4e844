// treegram: extract, compact, and evaluate treebank grammars.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "treegram/chart_parser.hpp"
#include "treegram/compactor.hpp"
#include "treegram/errors.hpp"
#include "treegram/evaluator.hpp"
#include "treegram/grammar.hpp"
#include "treegram/reports.hpp"
#include "treegram/rng.hpp"
#include "treegram/synth.hpp"
#include "treegram/treebank_io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace treegram;

namespace {

struct Options {
  std::vector<std::string> files;
  std::string grammar_path;
  std::string out_dir = "out";
  std::string config_path;
  std::string mode = "naive";
  std::string order = "flat-first";
  double ratio = 1.0;
  std::uint64_t min_count = 2;
  int chunks = 10;
  std::uint64_t sample_every = 1000;
  std::uint64_t seed = 0;
  bool json_stdout = false;
  bool labelled = false;
  bool unlabelled = false;
  // synth
  int sentences = 1000;
  double flatten_p = 0.0;
  int max_depth = 10;
};

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write output file: " + path.string());
  out << content;
}

// Inputs must exist; planned outputs must not collide with them.
void validate_paths(const std::vector<std::string>& inputs,
                    const fs::path& out_dir,
                    const std::vector<std::string>& output_names) {
  std::vector<fs::path> canonical_inputs;
  for (const std::string& in : inputs) {
    std::error_code ec;
    fs::path canon = fs::weakly_canonical(in, ec);
    if (ec || !fs::exists(in))
      throw InputError("cannot read input file: " + in);
    canonical_inputs.push_back(canon);
  }
  fs::create_directories(out_dir);
  for (const std::string& name : output_names) {
    std::error_code ec;
    fs::path out = fs::weakly_canonical(out_dir / name, ec);
    for (const fs::path& in : canonical_inputs) {
      if (!ec && out == in)
        throw InputError("output would overwrite input: " + in.string());
    }
  }
}

std::string metadata_header(const std::string& command, std::uint64_t seed) {
  return "treegram " + command + " seed=" + std::to_string(seed);
}

ordered_json metadata_json(const std::string& command, std::uint64_t seed) {
  ordered_json meta;
  meta["tool"] = "treegram " + command;
  meta["seed"] = seed;
  return meta;
}

struct Corpus {
  std::vector<Tree> trees;  // normalized
  std::uint64_t raw_trees = 0;
  std::uint64_t tokens = 0;
};

Corpus load_corpus(const std::vector<std::string>& files) {
  Corpus corpus;
  for (const std::string& file : files) {
    for (const Tree& raw : read_treebank_file(file)) {
      ++corpus.raw_trees;
      if (auto tree = normalize(raw)) {
        corpus.tokens += tree->token_count();
        corpus.trees.push_back(std::move(*tree));
      }
    }
  }
  return corpus;
}

void cmd_extract(const Options& opt, bool curve_only) {
  const std::string name = curve_only ? "growth" : "extract";
  std::vector<std::string> outputs = {"growth.csv", "growth.json"};
  if (!curve_only) outputs.push_back("grammar.txt");
  validate_paths(opt.files, opt.out_dir, outputs);

  Corpus corpus = load_corpus(opt.files);
  std::cerr << name << ": " << corpus.raw_trees << " trees, " << corpus.tokens
            << " tokens (" << corpus.trees.size() << " kept after normalization)"
            << std::endl;

  GrowthCurve curve = growth_curve(corpus.trees, opt.sample_every);
  std::string csv = "# " + metadata_header(name, opt.seed) + "\n" +
                    growth_curve_csv(curve);
  write_text_file(fs::path(opt.out_dir) / "growth.csv", csv);

  ordered_json gj;
  gj["metadata"] = metadata_json(name, opt.seed);
  gj["points"] = growth_curve_json(curve)["points"];
  write_text_file(fs::path(opt.out_dir) / "growth.json", gj.dump(2) + "\n");
  if (opt.json_stdout) std::cout << gj.dump(2) << std::endl;

  if (!curve_only) {
    Grammar grammar;
    for (const Tree& tree : corpus.trees) extract_into(&grammar, tree);
    write_grammar_file(fs::path(opt.out_dir) / "grammar.txt", grammar,
                       metadata_header(name, opt.seed));
    std::cerr << name << ": " << grammar.size() << " distinct rules"
              << std::endl;
  }
}

void cmd_compact(const Options& opt) {
  validate_paths({opt.grammar_path}, opt.out_dir,
                 {"compacted.txt", "report.json"});
  Grammar grammar = read_grammar_file(opt.grammar_path);

  Grammar survivors;
  CompactionReport report;
  if (opt.mode == "naive") {
    OrderSpec order = OrderSpec::parse(opt.order, opt.seed);
    std::tie(survivors, report) = compact(grammar, order);
  } else if (opt.mode == "linguistic") {
    if (opt.order != "flat-first")
      throw InputError("linguistic compaction uses the default flat-first "
                       "order; --order is not supported with it");
    std::tie(survivors, report) = linguistic_compact(grammar, opt.ratio);
  } else {
    throw InputError("unknown mode: " + opt.mode +
                     " (expected naive|linguistic)");
  }

  write_grammar_file(fs::path(opt.out_dir) / "compacted.txt", survivors,
                     metadata_header("compact", opt.seed));
  ordered_json rj;
  rj["metadata"] = metadata_json("compact", opt.seed);
  rj.update(compaction_report_json(report));
  write_text_file(fs::path(opt.out_dir) / "report.json", rj.dump(2) + "\n");
  if (opt.json_stdout) std::cout << rj.dump(2) << std::endl;
  std::cerr << "compact: " << report.initial_size << " -> "
            << report.final_size << " rules" << std::endl;
}

void cmd_threshold(const Options& opt) {
  validate_paths({opt.grammar_path}, opt.out_dir,
                 {"thresholded.txt", "report.json"});
  Grammar grammar = read_grammar_file(opt.grammar_path);
  Grammar kept = threshold(grammar, opt.min_count);

  CompactionReport report;
  report.initial_size = grammar.size();
  report.final_size = kept.size();
  report.order_used = "input";
  for (const Rule& rule : grammar.rules()) {
    if (rule.count < opt.min_count)
      report.eliminated.push_back(
          {rule, EliminationReason::BelowThreshold, std::nullopt});
  }

  write_grammar_file(fs::path(opt.out_dir) / "thresholded.txt", kept,
                     metadata_header("threshold", opt.seed));
  ordered_json rj;
  rj["metadata"] = metadata_json("threshold", opt.seed);
  rj["min_count"] = opt.min_count;
  rj.update(compaction_report_json(report));
  write_text_file(fs::path(opt.out_dir) / "report.json", rj.dump(2) + "\n");
  if (opt.json_stdout) std::cout << rj.dump(2) << std::endl;
  std::cerr << "threshold: " << report.initial_size << " -> "
            << report.final_size << " rules" << std::endl;
}

void cmd_stage(const Options& opt) {
  if (opt.chunks < 1) throw InputError("--chunks must be >= 1");
  if (static_cast<std::size_t>(opt.chunks) > opt.files.size())
    throw InputError("--chunks exceeds the number of treebank files (" +
                     std::to_string(opt.files.size()) + ")");
  validate_paths(opt.files, opt.out_dir, {"stages.csv"});

  // Chunking by file count, remainder to the last chunk.
  std::size_t per_chunk = opt.files.size() / static_cast<std::size_t>(opt.chunks);
  std::vector<std::vector<Rule>> chunks;
  std::size_t next = 0;
  for (int c = 0; c < opt.chunks; ++c) {
    std::size_t take = (c + 1 == opt.chunks) ? opt.files.size() - next : per_chunk;
    std::vector<std::string> files(opt.files.begin() + static_cast<std::ptrdiff_t>(next),
                                   opt.files.begin() + static_cast<std::ptrdiff_t>(next + take));
    next += take;
    Corpus corpus = load_corpus(files);
    std::vector<Rule> rules;
    for (const Tree& tree : corpus.trees) {
      std::vector<Rule> extracted = extract_rules(tree);
      rules.insert(rules.end(), extracted.begin(), extracted.end());
    }
    chunks.push_back(std::move(rules));
  }

  std::vector<StagePoint> points = staged_compact(chunks);
  std::string csv = "# " + metadata_header("stage", opt.seed) + "\n" +
                    "stage,extracted,compacted\n";
  for (const StagePoint& p : points) {
    csv += std::to_string(p.stage) + ',' + std::to_string(p.extracted_size) +
           ',' + std::to_string(p.compacted_size) + '\n';
  }
  write_text_file(fs::path(opt.out_dir) / "stages.csv", csv);
  std::cerr << "stage: " << points.size() << " stages, final "
            << points.back().compacted_size << " rules" << std::endl;
}

void cmd_eval(const Options& opt) {
  std::vector<std::string> inputs = opt.files;
  inputs.push_back(opt.grammar_path);
  validate_paths(inputs, opt.out_dir, {"eval.json", "eval.txt"});

  Grammar grammar = read_grammar_file(opt.grammar_path);
  Corpus gold = load_corpus(opt.files);
  EvalReport report = evaluate_corpus(grammar, gold.trees);

  ordered_json rj;
  rj["metadata"] = metadata_json("eval", opt.seed);
  rj.update(eval_report_json(report));
  write_text_file(fs::path(opt.out_dir) / "eval.json", rj.dump(2) + "\n");

  // --labelled/--unlabelled narrow the table; both or neither mean both.
  EvalReport shown = report;
  std::string table = eval_report_table(shown);
  if (opt.labelled != opt.unlabelled) {
    std::istringstream in(table);
    std::string line, filtered;
    bool keep = true;
    while (std::getline(in, line)) {
      if (line.rfind("Labelled", 0) == 0) keep = opt.labelled;
      else if (line.rfind("Unlabelled", 0) == 0) keep = opt.unlabelled;
      else if (line.rfind("  ", 0) != 0) keep = true;
      if (keep) filtered += line + '\n';
    }
    table = filtered;
  }
  write_text_file(fs::path(opt.out_dir) / "eval.txt", table);
  std::cout << table;
  if (opt.json_stdout) std::cout << rj.dump(2) << std::endl;
}

void cmd_synth(const Options& opt) {
  validate_paths({opt.grammar_path}, opt.out_dir,
                 {"treebank.txt", "synth.json"});
  GeneratorConfig config;
  config.base_grammar = read_grammar_file(opt.grammar_path);
  config.flatten_probability = opt.flatten_p;
  config.max_depth = opt.max_depth;
  config.sentence_count = opt.sentences;
  config.seed = opt.seed;

  GeneratedCorpus corpus = generate(config);
  write_treebank_file(fs::path(opt.out_dir) / "treebank.txt", corpus.trees);

  ordered_json sidecar;
  sidecar["metadata"] = metadata_json("synth", opt.seed);
  sidecar["algorithm"] = SplitMix64::algorithm_id();
  sidecar["flatten_probability"] = opt.flatten_p;
  sidecar["max_depth"] = opt.max_depth;
  sidecar["sentence_count"] = opt.sentences;
  sidecar["base_grammar"] = write_grammar(config.base_grammar);
  ordered_json usage = ordered_json::array();
  std::vector<Rule> used = corpus.used_rules;
  std::sort(used.begin(), used.end(), rule_name_less);
  for (const Rule& rule : used) {
    usage.push_back({{"rule", rule.to_string()}, {"uses", rule.count}});
  }
  sidecar["usage_log"] = std::move(usage);
  write_text_file(fs::path(opt.out_dir) / "synth.json", sidecar.dump(2) + "\n");
  std::cerr << "synth: " << corpus.trees.size() << " trees, "
            << corpus.used_rules.size() << " base rules used" << std::endl;
}

// Flat key=value config files mirror the long flags; command-line flags win.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file: " + path);
  std::vector<std::string> args;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::size_t eq = line.find('=', first);
    if (eq == std::string::npos)
      throw InputError("config line " + std::to_string(line_no) +
                       " is not key=value: " + line);
    std::string key = line.substr(first, eq - first);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      std::size_t e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (key.empty())
      throw InputError("config line " + std::to_string(line_no) +
                       " has an empty key");
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> raw(argv + 1, argv + argc);

  try {
    // Pull in --config values before CLI11 sees the arguments, so that
    // explicit flags (parsed later, take-last) override the file.
    std::string config_path;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == "--config" && i + 1 < raw.size()) config_path = raw[i + 1];
      else if (raw[i].rfind("--config=", 0) == 0) config_path = raw[i].substr(9);
    }
    std::vector<std::string> args;
    if (!raw.empty()) args.push_back(raw.front());
    if (!config_path.empty()) {
      std::vector<std::string> injected = config_args(config_path);
      args.insert(args.end(), injected.begin(), injected.end());
    }
    args.insert(args.end(), raw.begin() + (raw.empty() ? 0 : 1), raw.end());

    CLI::App app{"Treebank grammar extraction, compaction, and evaluation"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
      sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      sub->add_option("--out", opt.out_dir, "Output directory");
      sub->add_option("--seed", opt.seed, "Random seed (recorded in outputs)");
      sub->add_option("--config", opt.config_path,
                      "key=value config file; flags override it");
      sub->add_flag("--json", opt.json_stdout, "Echo JSON output to stdout");
    };

    CLI::App* extract = app.add_subcommand(
        "extract", "Extract a counted grammar and its growth curve");
    add_common(extract);
    extract->add_option("files", opt.files, "Treebank files")->required();
    extract->add_option("--sample-every", opt.sample_every,
                        "Growth sampling interval in tokens");

    CLI::App* growth = app.add_subcommand(
        "growth", "Emit the rule-set growth curve only");
    add_common(growth);
    growth->add_option("files", opt.files, "Treebank files")->required();
    growth->add_option("--sample-every", opt.sample_every,
                       "Growth sampling interval in tokens");

    CLI::App* compact_cmd = app.add_subcommand(
        "compact", "Eliminate rules parsable by the rest of the grammar");
    add_common(compact_cmd);
    compact_cmd->add_option("grammar", opt.grammar_path, "Grammar file")
        ->required();
    compact_cmd->add_option("--mode", opt.mode, "naive|linguistic");
    compact_cmd->add_option("--ratio", opt.ratio,
                            "Linguistic elimination threshold ratio");
    compact_cmd->add_option("--order", opt.order,
                            "Visiting order: flat-first|input|random");

    CLI::App* threshold_cmd = app.add_subcommand(
        "threshold", "Drop rules whose count is below a minimum");
    add_common(threshold_cmd);
    threshold_cmd->add_option("grammar", opt.grammar_path, "Grammar file")
        ->required();
    threshold_cmd->add_option("--min-count", opt.min_count,
                              "Minimum surviving count");

    CLI::App* stage = app.add_subcommand(
        "stage", "Staged add-then-compact over file chunks");
    add_common(stage);
    stage->add_option("files", opt.files, "Treebank files")->required();
    stage->add_option("--chunks", opt.chunks, "Number of chunks (by files)");

    CLI::App* eval = app.add_subcommand(
        "eval", "PARSEVAL-score a grammar's parses against gold trees");
    add_common(eval);
    eval->add_option("grammar", opt.grammar_path, "Grammar file")->required();
    eval->add_option("files", opt.files, "Gold treebank files")->required();
    eval->add_flag("--labelled", opt.labelled, "Show labelled scores only");
    eval->add_flag("--unlabelled", opt.unlabelled,
                   "Show unlabelled scores only");

    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a treebank from a base grammar with flattening");
    add_common(synth);
    synth->add_option("--grammar", opt.grammar_path, "Base grammar file")
        ->required();
    synth->add_option("--sentences", opt.sentences, "Number of sentences");
    synth->add_option("--flatten-p", opt.flatten_p,
                      "Per-node splice probability");
    synth->add_option("--max-depth", opt.max_depth,
                      "Maximum expansion depth");

    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }

    if (extract->parsed()) cmd_extract(opt, false);
    else if (growth->parsed()) cmd_extract(opt, true);
    else if (compact_cmd->parsed()) cmd_compact(opt);
    else if (threshold_cmd->parsed()) cmd_threshold(opt);
    else if (stage->parsed()) cmd_stage(opt);
    else if (eval->parsed()) cmd_eval(opt);
    else if (synth->parsed()) cmd_synth(opt);
    return 0;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << std::endl;
    return 1;
  }
}

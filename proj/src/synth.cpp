#include "treegram/synth.hpp"

#include <algorithm>
#include <unordered_map>

#include "treegram/errors.hpp"
#include "treegram/rng.hpp"

namespace treegram {
namespace {

constexpr int kMaxResamples = 10000;

struct LhsGroup {
  std::vector<std::size_t> rule_indices;  // into grammar.rules()
  std::uint64_t total = 0;
};

class Generator {
 public:
  explicit Generator(const GeneratorConfig& config) : config_(config) {
    const Grammar& g = config.base_grammar;
    if (g.empty()) throw InputError("generator needs a non-empty base grammar");
    for (std::size_t i = 0; i < g.rules().size(); ++i) {
      const Rule& rule = g.rules()[i];
      if (rule.rhs.size() < 2)
        throw InputError("base grammar must have all RHS lengths >= 2: " +
                         rule.to_string());
      if (rule.count == 0)
        throw InputError("base grammar rule has zero count: " +
                         rule.to_string());
      LhsGroup& group = groups_[rule.lhs.id()];
      group.rule_indices.push_back(i);
      group.total += rule.count;
    }
    check_termination_depths();
    pick_start_distribution();
  }

  GeneratedCorpus run() {
    GeneratedCorpus corpus;
    std::unordered_map<std::string, std::size_t> usage_index;
    for (int s = 0; s < config_.sentence_count; ++s) {
      SplitMix64 rng = SplitMix64::for_index(config_.seed, static_cast<std::uint64_t>(s));
      std::vector<std::size_t> used;
      Tree tree = sample_sentence(&rng, &used);
      for (std::size_t rule_index : used) {
        const Rule& rule = config_.base_grammar.rules()[rule_index];
        std::string key = rule.to_string();
        auto it = usage_index.find(key);
        if (it == usage_index.end()) {
          usage_index.emplace(std::move(key), corpus.used_rules.size());
          Rule entry = rule;
          entry.count = 1;
          corpus.used_rules.push_back(std::move(entry));
        } else {
          ++corpus.used_rules[it->second].count;
        }
      }
      if (config_.flatten_probability > 0.0)
        tree = flatten_with(tree, config_.flatten_probability, &rng);
      tree.assign_spans(0);
      corpus.trees.push_back(std::move(tree));
    }
    return corpus;
  }

  static Tree flatten_with(const Tree& tree, double p, SplitMix64* rng) {
    if (tree.is_preterminal()) return tree;
    std::vector<Tree> children;
    for (const Tree& child : tree.children())
      splice_into(child, p, rng, &children);
    Tree out = Tree::node(tree.label(), std::move(children));
    out.assign_spans(0);
    return out;
  }

 private:
  // min #expansion levels needed to derive a terminal string from each LHS.
  void check_termination_depths() {
    const Grammar& g = config_.base_grammar;
    std::unordered_map<std::uint32_t, int> depth;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [lhs_id, group] : groups_) {
        int best = -1;
        for (std::size_t i : group.rule_indices) {
          const Rule& rule = g.rules()[i];
          int worst_child = 0;
          bool viable = true;
          for (Category sym : rule.rhs) {
            if (groups_.count(sym.id()) == 0) continue;  // terminal: depth 0
            auto it = depth.find(sym.id());
            if (it == depth.end()) {
              viable = false;
              break;
            }
            worst_child = std::max(worst_child, it->second);
          }
          if (viable) {
            int d = 1 + worst_child;
            if (best < 0 || d < best) best = d;
          }
        }
        if (best >= 0) {
          auto it = depth.find(lhs_id);
          if (it == depth.end() || best < it->second) {
            depth[lhs_id] = best;
            changed = true;
          }
        }
      }
    }
    for (const auto& [lhs_id, group] : groups_) {
      const Rule& sample = g.rules()[group.rule_indices.front()];
      auto it = depth.find(lhs_id);
      if (it == depth.end() || it->second > config_.max_depth)
        throw InputError("nonterminal '" + sample.lhs.name() +
                         "' cannot derive a terminal string within max_depth " +
                         std::to_string(config_.max_depth));
    }
  }

  void pick_start_distribution() {
    for (const auto& [root, count] : config_.base_grammar.roots_by_name()) {
      if (groups_.count(root.id()) == 0) continue;  // roots must expand
      start_choices_.emplace_back(root, count);
      start_total_ += count;
    }
    if (start_choices_.empty()) {
      Category first = config_.base_grammar.rules().front().lhs;
      start_choices_.emplace_back(first, 1);
      start_total_ = 1;
    }
  }

  Category sample_start(SplitMix64* rng) const {
    if (start_choices_.size() == 1) return start_choices_.front().first;
    std::uint64_t r = rng->next_below(start_total_);
    for (const auto& [cat, weight] : start_choices_) {
      if (r < weight) return cat;
      r -= weight;
    }
    return start_choices_.back().first;
  }

  Tree sample_sentence(SplitMix64* rng, std::vector<std::size_t>* used) const {
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
      used->clear();
      Category start = sample_start(rng);
      Tree tree;
      if (expand(start, config_.max_depth, rng, used, &tree)) return tree;
    }
    throw InternalError("generator could not fit a derivation within "
                        "max_depth after repeated resampling");
  }

  bool expand(Category cat, int remaining, SplitMix64* rng,
              std::vector<std::size_t>* used, Tree* out) const {
    auto group_it = groups_.find(cat.id());
    if (group_it == groups_.end()) {
      *out = Tree::leaf(cat, cat.name());
      return true;
    }
    if (remaining <= 0) return false;
    const LhsGroup& group = group_it->second;
    std::uint64_t r = rng->next_below(group.total);
    std::size_t chosen = group.rule_indices.back();
    for (std::size_t i : group.rule_indices) {
      std::uint64_t w = config_.base_grammar.rules()[i].count;
      if (r < w) {
        chosen = i;
        break;
      }
      r -= w;
    }
    used->push_back(chosen);
    const Rule& rule = config_.base_grammar.rules()[chosen];
    std::vector<Tree> children;
    children.reserve(rule.rhs.size());
    for (Category sym : rule.rhs) {
      Tree child;
      if (!expand(sym, remaining - 1, rng, used, &child)) return false;
      children.push_back(std::move(child));
    }
    *out = Tree::node(cat, std::move(children));
    return true;
  }

  static void splice_into(const Tree& node, double p, SplitMix64* rng,
                          std::vector<Tree>* out) {
    if (node.is_preterminal()) {
      out->push_back(node);
      return;
    }
    // One draw per internal non-root node, made before descending.
    bool splice = rng->next_double() < p;
    std::vector<Tree> children;
    for (const Tree& child : node.children())
      splice_into(child, p, rng, &children);
    if (splice) {
      for (Tree& child : children) out->push_back(std::move(child));
    } else {
      out->push_back(Tree::node(node.label(), std::move(children)));
    }
  }

  const GeneratorConfig& config_;
  std::unordered_map<std::uint32_t, LhsGroup> groups_;
  std::vector<std::pair<Category, std::uint64_t>> start_choices_;
  std::uint64_t start_total_ = 0;
};

}  // namespace

GeneratedCorpus generate(const GeneratorConfig& config) {
  if (config.sentence_count < 0)
    throw InputError("sentence_count must be >= 0");
  if (config.flatten_probability < 0.0 || config.flatten_probability > 1.0)
    throw InputError("flatten_probability must be in [0, 1]");
  if (config.max_depth < 1) throw InputError("max_depth must be >= 1");
  Generator generator(config);
  return generator.run();
}

Tree flatten(const Tree& tree, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0)
    throw InputError("flatten probability must be in [0, 1]");
  SplitMix64 rng(seed);
  return Generator::flatten_with(tree, p, &rng);
}

}  // namespace treegram

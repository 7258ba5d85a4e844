#include "treegram/chart_parser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treegram/errors.hpp"

namespace treegram {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::size_t ChartParser::KeyHash::operator()(
    const std::vector<std::uint32_t>& ids) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (std::uint32_t id : ids) {
    h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

ChartParser::ChartParser(const Grammar& grammar, Mode mode) : mode_(mode) {
  rules_.reserve(grammar.size());
  for (const Rule& rule : grammar.rules()) {
    IndexedRule ir;
    ir.original = rule;
    if (mode == Mode::Weighted) {
      if (rule.count == 0)
        throw InputError("weighted parsing requires positive rule counts: " +
                         rule.to_string());
      ir.logprob = std::log(grammar.probability(rule));
    } else {
      ir.logprob = 0.0;
    }
    ir.ordinal = 0;
    rules_.push_back(std::move(ir));
  }

  // Ordinals rank rules by (lhs, rhs) names for deterministic tie-breaking.
  std::vector<int> order(rules_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [this](int a, int b) {
    return rule_name_less(rules_[a].original, rules_[b].original);
  });
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    rules_[order[rank]].ordinal = static_cast<int>(rank);

  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Rule& r = rules_[i].original;
    std::uint32_t first = r.rhs.front().id();
    if (r.rhs.size() == 1) {
      unary_with_[first].push_back(static_cast<int>(i));
    } else {
      starts_with_[first].push_back(static_cast<int>(i));
    }
    std::vector<std::uint32_t> key;
    key.reserve(r.rhs.size() + 1);
    key.push_back(r.lhs.id());
    for (Category c : r.rhs) key.push_back(c.id());
    rule_ids_.emplace(std::move(key), static_cast<int>(i));
  }

  // Closure passes iterate unary rules in ordinal order.
  for (auto& [cat, ids] : unary_with_) {
    std::sort(ids.begin(), ids.end(), [this](int a, int b) {
      return rules_[a].ordinal < rules_[b].ordinal;
    });
  }

  if (mode == Mode::Weighted) check_degenerate_unary_cycles();
}

void ChartParser::check_degenerate_unary_cycles() const {
  // Edges lhs -> rhs[0] over unary rules of probability exactly 1; any cycle
  // makes Viterbi ill-defined.
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> edges;
  for (const IndexedRule& ir : rules_) {
    if (ir.original.rhs.size() == 1 && ir.logprob == 0.0)
      edges[ir.original.lhs.id()].push_back(ir.original.rhs.front().id());
  }
  std::unordered_map<std::uint32_t, int> state;  // 0 new, 1 active, 2 done
  struct Frame {
    std::uint32_t node;
    std::size_t next = 0;
  };
  for (const auto& [start, _] : edges) {
    if (state[start] != 0) continue;
    std::vector<Frame> stack{{start}};
    state[start] = 1;
    while (!stack.empty()) {
      Frame& frame = stack.back();
      auto it = edges.find(frame.node);
      if (it == edges.end() || frame.next >= it->second.size()) {
        state[frame.node] = 2;
        stack.pop_back();
        continue;
      }
      std::uint32_t next = it->second[frame.next++];
      int s = state[next];
      if (s == 1) {
        std::string name;
        for (const IndexedRule& ir : rules_) {
          if (ir.original.lhs.id() == next) {
            name = ir.original.lhs.name();
            break;
          }
        }
        throw DegenerateGrammarError(
            "probability-1.0 unary cycle through category '" + name +
            "'; degenerate grammar");
      }
      if (s == 0) {
        state[next] = 1;
        stack.push_back({next});
      }
    }
  }
}

int ChartParser::rule_id(const Rule& key) const {
  std::vector<std::uint32_t> k;
  k.reserve(key.rhs.size() + 1);
  k.push_back(key.lhs.id());
  for (Category c : key.rhs) k.push_back(c.id());
  auto it = rule_ids_.find(k);
  return it == rule_ids_.end() ? -1 : it->second;
}

std::vector<bool> ChartParser::make_excluded(
    const std::vector<Rule>& rules) const {
  std::vector<bool> excluded(rules_.size(), false);
  for (const Rule& r : rules) {
    int id = rule_id(r);
    if (id >= 0) excluded[static_cast<std::size_t>(id)] = true;
  }
  return excluded;
}

// One parse chart. Complete items live per (span, category); partial items
// track a dotted n-ary rule with the dot after `dot` matched symbols.
class ChartParser::Chart {
 public:
  struct Item {
    double lp = kNegInf;
    enum Kind { kLeaf, kUnary, kCompletion } kind = kLeaf;
    int rule = -1;
    int split = -1;      // completion: last split point
    int ordinal = -1;    // backing rule's ordinal; -1 for leaves
  };

  struct Partial {
    double lp = kNegInf;
    int last_split = -1;
  };

  Chart(const ChartParser& parser, const std::vector<Category>& input,
        std::vector<bool> excluded)
      : parser_(parser),
        input_(input),
        excluded_(std::move(excluded)),
        n_(static_cast<int>(input.size())) {
    completes_.resize(static_cast<std::size_t>(n_) * (n_ + 1) / 2);
    partials_.resize(completes_.size());
    run();
  }

  const Item* find(Category cat, int i, int j) const {
    const auto& cell = completes_[cell_index(i, j)];
    auto it = cell.find(cat.id());
    return it == cell.end() ? nullptr : &it->second;
  }

  Tree build_tree(Category cat, int i, int j) const {
    const Item* item = find(cat, i, j);
    if (item == nullptr)
      throw InternalError("backpointer chase hit a missing item");
    switch (item->kind) {
      case Item::kLeaf:
        return Tree::leaf(cat, cat.name());
      case Item::kUnary: {
        const Rule& rule = parser_.rules_[item->rule].original;
        std::vector<Tree> children;
        children.push_back(build_tree(rule.rhs.front(), i, j));
        return Tree::node(cat, std::move(children));
      }
      case Item::kCompletion: {
        const Rule& rule = parser_.rules_[item->rule].original;
        int len = static_cast<int>(rule.rhs.size());
        // Recover child spans by walking the partial chain right to left.
        std::vector<std::pair<int, int>> spans(len);
        int right = j;
        for (int dot = len; dot >= 2; --dot) {
          const Partial& p = partial_at(item->rule, dot, i, right);
          spans[dot - 1] = {p.last_split, right};
          right = p.last_split;
        }
        spans[0] = {i, right};
        std::vector<Tree> children;
        children.reserve(spans.size());
        for (int t = 0; t < len; ++t)
          children.push_back(
              build_tree(rule.rhs[t], spans[t].first, spans[t].second));
        return Tree::node(cat, std::move(children));
      }
    }
    throw InternalError("unreachable backpointer kind");
  }

 private:
  std::size_t cell_index(int i, int j) const {
    // Cells ordered by width then start; width w = j - i in [1, n].
    int w = j - i;
    return static_cast<std::size_t>(w - 1) * n_ -
           static_cast<std::size_t>(w - 1) * (w - 2) / 2 + i;
  }

  static std::uint64_t partial_key(int rule, int dot) {
    return (static_cast<std::uint64_t>(rule) << 8) | static_cast<unsigned>(dot);
  }

  const Partial& partial_at(int rule, int dot, int i, int j) const {
    const auto& cell = partials_[cell_index(i, j)];
    auto it = cell.find(partial_key(rule, dot));
    if (it == cell.end())
      throw InternalError("backpointer chase hit a missing partial");
    return it->second;
  }

  bool is_excluded(int rule) const {
    return !excluded_.empty() && excluded_[static_cast<std::size_t>(rule)];
  }

  // Candidate ordering for complete items: higher probability, then the rule
  // sorting first by name, then the leftmost split. Leaves rank best.
  static bool better(const Item& cand, const Item& cur) {
    if (cand.lp != cur.lp) return cand.lp > cur.lp;
    if (cand.ordinal != cur.ordinal) return cand.ordinal < cur.ordinal;
    return cand.split != -1 && cur.split != -1 && cand.split < cur.split;
  }

  void offer_complete(std::unordered_map<std::uint32_t, Item>& cell,
                      Category cat, const Item& cand) {
    auto [it, inserted] = cell.emplace(cat.id(), cand);
    if (!inserted && better(cand, it->second)) it->second = cand;
  }

  void offer_partial(std::unordered_map<std::uint64_t, Partial>& cell,
                     int rule, int dot, const Partial& cand) {
    auto [it, inserted] = cell.emplace(partial_key(rule, dot), cand);
    if (inserted) return;
    Partial& cur = it->second;
    if (cand.lp > cur.lp ||
        (cand.lp == cur.lp && cand.last_split < cur.last_split))
      cur = cand;
  }

  void run() {
    for (int width = 1; width <= n_; ++width) {
      for (int i = 0; i + width <= n_; ++i) {
        int j = i + width;
        auto& completes = completes_[cell_index(i, j)];
        auto& partials = partials_[cell_index(i, j)];

        if (width == 1) {
          // Input symbols match themselves at probability 1.
          Item leaf;
          leaf.lp = 0.0;
          leaf.kind = Item::kLeaf;
          completes.emplace(input_[static_cast<std::size_t>(i)].id(), leaf);
        } else {
          for (int k = i + 1; k < j; ++k) {
            const auto& left_partials = partials_[cell_index(i, k)];
            const auto& right_completes = completes_[cell_index(k, j)];
            if (left_partials.empty() || right_completes.empty()) continue;
            for (const auto& [key, partial] : left_partials) {
              int rule = static_cast<int>(key >> 8);
              int dot = static_cast<int>(key & 0xff);
              const IndexedRule& ir = parser_.rules_[rule];
              int len = static_cast<int>(ir.original.rhs.size());
              if (dot >= len) continue;
              auto rc = right_completes.find(ir.original.rhs[dot].id());
              if (rc == right_completes.end()) continue;
              Partial next;
              next.lp = partial.lp + rc->second.lp;
              next.last_split = k;
              offer_partial(partials, rule, dot + 1, next);
            }
          }
          // Dots that reached the end complete their rule.
          for (const auto& [key, partial] : partials) {
            int rule = static_cast<int>(key >> 8);
            int dot = static_cast<int>(key & 0xff);
            const IndexedRule& ir = parser_.rules_[rule];
            if (dot != static_cast<int>(ir.original.rhs.size())) continue;
            Item cand;
            cand.lp = partial.lp + ir.logprob;
            cand.kind = Item::kCompletion;
            cand.rule = rule;
            cand.split = partial.last_split;
            cand.ordinal = ir.ordinal;
            offer_complete(completes, ir.original.lhs, cand);
          }
        }

        close_unary(completes);
        seed_partials(completes, partials);
      }
    }
  }

  void close_unary(std::unordered_map<std::uint32_t, Item>& completes) {
    std::size_t max_passes = 0;
    for (const auto& [_, ids] : parser_.unary_with_) max_passes += ids.size();
    max_passes += 2;
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
      bool changed = false;
      // Deterministic order: group lookup per existing child, rules by
      // ordinal; updates fire only on strict improvement, so first writers
      // win ties and chains stay acyclic.
      std::vector<std::pair<int, std::uint32_t>> candidates;
      for (const auto& [cat_id, item] : completes) {
        auto group = parser_.unary_with_.find(cat_id);
        if (group == parser_.unary_with_.end()) continue;
        for (int rule : group->second) candidates.emplace_back(rule, cat_id);
      }
      std::sort(candidates.begin(), candidates.end());
      for (const auto& [rule, child_id] : candidates) {
        if (is_excluded(rule)) continue;
        const IndexedRule& ir = parser_.rules_[rule];
        auto child = completes.find(child_id);
        if (child == completes.end()) continue;
        double lp = child->second.lp + ir.logprob;
        auto it = completes.find(ir.original.lhs.id());
        if (it == completes.end()) {
          Item item;
          item.lp = lp;
          item.kind = Item::kUnary;
          item.rule = rule;
          item.ordinal = ir.ordinal;
          completes.emplace(ir.original.lhs.id(), item);
          changed = true;
        } else if (lp > it->second.lp) {
          it->second.lp = lp;
          it->second.kind = Item::kUnary;
          it->second.rule = rule;
          it->second.split = -1;
          it->second.ordinal = ir.ordinal;
          changed = true;
        }
      }
      if (!changed) return;
    }
    throw InternalError("unary closure failed to reach a fixpoint");
  }

  void seed_partials(const std::unordered_map<std::uint32_t, Item>& completes,
                     std::unordered_map<std::uint64_t, Partial>& partials) {
    for (const auto& [cat_id, item] : completes) {
      auto group = parser_.starts_with_.find(cat_id);
      if (group == parser_.starts_with_.end()) continue;
      for (int rule : group->second) {
        if (is_excluded(rule)) continue;
        Partial seed;
        seed.lp = item.lp;
        seed.last_split = -1;
        offer_partial(partials, rule, 1, seed);
      }
    }
  }

  const ChartParser& parser_;
  const std::vector<Category>& input_;
  std::vector<bool> excluded_;
  int n_;
  std::vector<std::unordered_map<std::uint32_t, Item>> completes_;
  std::vector<std::unordered_map<std::uint64_t, Partial>> partials_;
};

bool ChartParser::recognize(const std::vector<Category>& input, Category goal,
                            const std::vector<bool>& excluded) const {
  if (input.empty()) throw InputError("cannot parse an empty input");
  Chart chart(*this, input, excluded);
  return chart.find(goal, 0, static_cast<int>(input.size())) != nullptr;
}

ParseResult ChartParser::parse(const std::vector<Category>& input,
                               Category goal,
                               const std::vector<bool>& excluded) const {
  if (input.empty()) throw InputError("cannot parse an empty input");
  Chart chart(*this, input, excluded);
  ParseResult result;
  const Chart::Item* item = chart.find(goal, 0, static_cast<int>(input.size()));
  if (item == nullptr) return result;
  result.recognized = true;
  result.best_logprob = item->lp;
  result.best_tree = chart.build_tree(goal, 0, static_cast<int>(input.size()));
  result.best_tree->assign_spans(0);
  return result;
}

ParseResult ChartParser::parse_any(const std::vector<Category>& input,
                                   const std::vector<Category>& roots) const {
  if (input.empty()) throw InputError("cannot parse an empty input");
  Chart chart(*this, input, {});
  std::vector<Category> sorted = roots;
  std::sort(sorted.begin(), sorted.end(), CategoryNameLess());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const Chart::Item* best = nullptr;
  Category best_root;
  for (Category root : sorted) {
    const Chart::Item* item = chart.find(root, 0, static_cast<int>(input.size()));
    if (item == nullptr) continue;
    if (best == nullptr || item->lp > best->lp) {
      best = item;
      best_root = root;
    }
  }
  ParseResult result;
  if (best == nullptr) return result;
  result.recognized = true;
  result.best_logprob = best->lp;
  result.best_tree =
      chart.build_tree(best_root, 0, static_cast<int>(input.size()));
  result.best_tree->assign_spans(0);
  return result;
}

namespace {

void format_derivation_node(const Tree& tree, std::string* out) {
  if (tree.is_preterminal()) {
    out->append(tree.label().name());
    return;
  }
  out->push_back('(');
  out->append(tree.label().name());
  for (const Tree& child : tree.children()) {
    out->push_back(' ');
    format_derivation_node(child, out);
  }
  out->push_back(')');
}

}  // namespace

std::string format_derivation(const Tree& tree) {
  std::string out;
  format_derivation_node(tree, &out);
  return out;
}

bool recognize(const Grammar& grammar, const std::vector<Category>& input,
               Category goal, const std::vector<Rule>& excluded) {
  ChartParser parser(grammar, ChartParser::Mode::Unweighted);
  return parser.recognize(input, goal, parser.make_excluded(excluded));
}

ParseResult viterbi(const Grammar& grammar, const std::vector<Category>& input,
                    Category goal, const std::vector<Rule>& excluded) {
  ChartParser parser(grammar, ChartParser::Mode::Weighted);
  return parser.parse(input, goal, parser.make_excluded(excluded));
}

ParseResult parse_sentence(const Grammar& grammar,
                           const std::vector<Category>& pos_tags,
                           const std::vector<Category>& roots) {
  if (pos_tags.empty()) throw InputError("cannot parse an empty tag sequence");
  ChartParser parser(grammar, ChartParser::Mode::Weighted);
  ParseResult result = parser.parse_any(pos_tags, roots);
  if (result.recognized) return result;

  Category label = grammar.most_frequent_root();
  if (!label.valid()) {
    std::vector<Category> sorted = roots;
    std::sort(sorted.begin(), sorted.end(), CategoryNameLess());
    if (sorted.empty())
      throw InputError("parse_sentence requires at least one root category");
    label = sorted.front();
  }
  std::vector<Tree> leaves;
  leaves.reserve(pos_tags.size());
  for (Category tag : pos_tags) leaves.push_back(Tree::leaf(tag, tag.name()));
  Tree flat = Tree::node(label, std::move(leaves));
  flat.assign_spans(0);
  result.fallback = true;
  result.best_tree = std::move(flat);
  return result;
}

}  // namespace treegram

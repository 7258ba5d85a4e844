#include "treegram/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "treegram/errors.hpp"

namespace treegram {

Rule::Rule(Category lhs, std::vector<Category> rhs, std::uint64_t count)
    : lhs(lhs), rhs(std::move(rhs)), count(count) {
  if (this->rhs.empty())
    throw InputError("epsilon rule rejected: " + lhs.name() + " -> <empty>");
}

std::string Rule::to_string() const {
  std::string out = lhs.name();
  out += " ->";
  for (Category c : rhs) {
    out += ' ';
    out += c.name();
  }
  return out;
}

bool rule_name_less(const Rule& a, const Rule& b) {
  if (a.lhs.name() != b.lhs.name()) return a.lhs.name() < b.lhs.name();
  std::size_t n = std::min(a.rhs.size(), b.rhs.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.rhs[i].name() != b.rhs[i].name())
      return a.rhs[i].name() < b.rhs[i].name();
  }
  return a.rhs.size() < b.rhs.size();
}

std::size_t Grammar::KeyHash::operator()(
    const std::vector<std::uint32_t>& ids) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (std::uint32_t id : ids) {
    h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::vector<std::uint32_t> Grammar::make_key(
    Category lhs, const std::vector<Category>& rhs) {
  std::vector<std::uint32_t> key;
  key.reserve(rhs.size() + 1);
  key.push_back(lhs.id());
  for (Category c : rhs) key.push_back(c.id());
  return key;
}

void Grammar::add_rule(const Rule& rule) {
  if (rule.rhs.empty())
    throw InputError("epsilon rule rejected: " + rule.lhs.name() +
                     " -> <empty>");
  rule.lhs.observe_kind(SymbolKind::Nonterminal);
  auto key = make_key(rule.lhs, rule.rhs);
  auto it = index_.find(key);
  if (it == index_.end()) {
    index_.emplace(std::move(key), rules_.size());
    rules_.push_back(rule);
  } else {
    rules_[it->second].count += rule.count;
  }
  totals_[rule.lhs] += rule.count;
}

void Grammar::add_rules(const std::vector<Rule>& rules) {
  for (const Rule& r : rules) add_rule(r);
}

bool Grammar::remove_rule(const Rule& key) {
  auto it = index_.find(make_key(key.lhs, key.rhs));
  if (it == index_.end()) return false;
  std::size_t pos = it->second;
  const Rule& victim = rules_[pos];
  auto total = totals_.find(victim.lhs);
  total->second -= victim.count;
  if (total->second == 0) totals_.erase(total);
  index_.erase(it);
  rules_.erase(rules_.begin() + static_cast<std::ptrdiff_t>(pos));
  for (auto& entry : index_) {
    if (entry.second > pos) --entry.second;
  }
  return true;
}

const Rule* Grammar::find(const Rule& key) const {
  return find(key.lhs, key.rhs);
}

const Rule* Grammar::find(Category lhs,
                          const std::vector<Category>& rhs) const {
  auto it = index_.find(make_key(lhs, rhs));
  if (it == index_.end()) return nullptr;
  return &rules_[it->second];
}

std::uint64_t Grammar::lhs_total(Category lhs) const {
  auto it = totals_.find(lhs);
  return it == totals_.end() ? 0 : it->second;
}

double Grammar::probability(const Rule& rule) const {
  std::uint64_t total = lhs_total(rule.lhs);
  if (total == 0)
    throw InternalError("probability requested for LHS with zero total: " +
                        rule.lhs.name());
  return static_cast<double>(rule.count) / static_cast<double>(total);
}

void Grammar::observe_root(Category root, std::uint64_t count) {
  roots_[root] += count;
}

std::vector<std::pair<Category, std::uint64_t>> Grammar::roots_by_name()
    const {
  std::vector<std::pair<Category, std::uint64_t>> out(roots_.begin(),
                                                      roots_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.first.name() < b.first.name();
  });
  return out;
}

Category Grammar::most_frequent_root() const {
  Category best;
  std::uint64_t best_count = 0;
  for (const auto& [cat, count] : roots_by_name()) {
    if (count > best_count) {
      best = cat;
      best_count = count;
    }
  }
  return best;
}

namespace {

// Splices out single-subtree chains; the surviving node is a preterminal or
// has >= 2 children.
const Tree* collapse_unary(const Tree* node) {
  while (!node->is_preterminal() && node->children().size() == 1)
    node = &node->children().front();
  return node;
}

class RuleAccumulator {
 public:
  void walk(const Tree& node) {
    const Tree* n = collapse_unary(&node);
    if (n->is_preterminal()) {
      n->label().observe_kind(SymbolKind::Terminal);
      return;
    }
    n->label().observe_kind(SymbolKind::Nonterminal);
    std::vector<Category> rhs;
    std::vector<const Tree*> kids;
    rhs.reserve(n->children().size());
    kids.reserve(n->children().size());
    for (const Tree& child : n->children()) {
      const Tree* c = collapse_unary(&child);
      rhs.push_back(c->label());
      kids.push_back(c);
    }
    record(n->label(), std::move(rhs));
    for (const Tree* kid : kids) walk(*kid);
  }

  std::vector<Rule> take() { return std::move(rules_); }

 private:
  void record(Category lhs, std::vector<Category> rhs) {
    std::string key = lhs.name();
    for (Category c : rhs) {
      key += '\x1f';
      key += c.name();
    }
    auto it = seen_.find(key);
    if (it == seen_.end()) {
      seen_.emplace(std::move(key), rules_.size());
      rules_.emplace_back(lhs, std::move(rhs), 1);
    } else {
      ++rules_[it->second].count;
    }
  }

  std::vector<Rule> rules_;
  std::unordered_map<std::string, std::size_t> seen_;
};

std::vector<const Tree*> extraction_starts(const Tree& tree) {
  std::vector<const Tree*> starts;
  if (is_top(tree.label())) {
    for (const Tree& child : tree.children())
      starts.push_back(collapse_unary(&child));
  } else {
    starts.push_back(collapse_unary(&tree));
  }
  return starts;
}

}  // namespace

std::vector<Rule> extract_rules(const Tree& tree) {
  RuleAccumulator acc;
  for (const Tree* start : extraction_starts(tree)) acc.walk(*start);
  return acc.take();
}

void extract_into(Grammar* grammar, const Tree& tree) {
  grammar->add_rules(extract_rules(tree));
  for (const Tree* start : extraction_starts(tree))
    grammar->observe_root(start->label());
}

std::vector<Category> observed_roots(const Tree& tree) {
  std::vector<Category> roots;
  for (const Tree* start : extraction_starts(tree))
    roots.push_back(start->label());
  return roots;
}

GrowthCurve growth_curve(const std::vector<Tree>& trees,
                         std::uint64_t sample_every) {
  if (sample_every == 0)
    throw InputError("growth curve sampling interval must be >= 1");
  GrowthCurve curve;
  std::unordered_set<std::string> distinct;
  std::uint64_t tokens = 0;
  for (const Tree& tree : trees) {
    std::uint64_t before_bucket = tokens / sample_every;
    tokens += tree.token_count();
    for (const Rule& rule : extract_rules(tree)) {
      distinct.insert(rule.to_string());
    }
    if (tokens / sample_every > before_bucket)
      curve.points.emplace_back(tokens, distinct.size());
  }
  return curve;
}

namespace {

bool parse_root_comment(const std::string& line, std::string* name,
                        std::uint64_t* count) {
  std::istringstream in(line);
  std::string hash, tag, root_name;
  long long n = 0;
  if (!(in >> hash >> tag)) return false;
  if (hash != "#" || tag != "root") return false;
  if (!(in >> root_name >> n) || n < 0) return false;
  std::string rest;
  if (in >> rest) return false;
  *name = root_name;
  *count = static_cast<std::uint64_t>(n);
  return true;
}

}  // namespace

Grammar read_grammar(std::string_view text) {
  Grammar grammar;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::string root_name;
      std::uint64_t root_count = 0;
      if (parse_root_comment(line.substr(first), &root_name, &root_count))
        grammar.observe_root(Category::intern(root_name), root_count);
      continue;
    }
    std::istringstream fields(line);
    long long count = 0;
    std::string lhs_name, arrow;
    if (!(fields >> count >> lhs_name >> arrow))
      throw InputError("malformed grammar rule at line " +
                       std::to_string(line_no) + ": " + line);
    if (count <= 0)
      throw InputError("rule count must be positive at line " +
                       std::to_string(line_no) + ": " + line);
    if (arrow != "->")
      throw InputError("expected '->' at line " + std::to_string(line_no) +
                       ": " + line);
    std::vector<Category> rhs;
    std::string symbol;
    while (fields >> symbol) rhs.push_back(Category::intern(symbol));
    if (rhs.empty())
      throw InputError("empty rule right-hand side at line " +
                       std::to_string(line_no) + ": " + line);
    grammar.add_rule(Rule(Category::intern(lhs_name, SymbolKind::Nonterminal),
                          std::move(rhs),
                          static_cast<std::uint64_t>(count)));
  }
  return grammar;
}

Grammar read_grammar_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read grammar file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return read_grammar(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string write_grammar(const Grammar& grammar) {
  std::string out;
  for (const auto& [root, count] : grammar.roots_by_name()) {
    out += "# root " + root.name() + ' ' + std::to_string(count) + '\n';
  }
  std::vector<const Rule*> sorted;
  sorted.reserve(grammar.size());
  for (const Rule& r : grammar.rules()) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const Rule* a, const Rule* b) { return rule_name_less(*a, *b); });
  for (const Rule* r : sorted) {
    out += std::to_string(r->count) + ' ' + r->to_string() + '\n';
  }
  return out;
}

void write_grammar_file(const std::filesystem::path& path,
                        const Grammar& grammar,
                        const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write grammar file: " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << write_grammar(grammar);
}

}  // namespace treegram

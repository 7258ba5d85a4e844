#include "treegram/treebank_io.hpp"

#include <fstream>
#include <sstream>

#include "treegram/errors.hpp"

namespace treegram {
namespace {

// Raw s-expression node; validated into Tree after the balance check so that
// unbalanced input is always reported as such.
struct RawNode {
  std::string head;             // empty for an unlabeled pair
  std::vector<RawNode> kids;    // sub-nodes
  std::vector<std::string> words;
  int line = 0;
  int column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  enum class Kind { Open, Close, Atom, End };

  struct Lexeme {
    Kind kind;
    std::string_view atom;
    int line;
    int column;
  };

  Lexeme next() {
    skip_blank_and_comments();
    Lexeme out{Kind::End, {}, line_, column_};
    if (pos_ >= text_.size()) return out;
    char c = text_[pos_];
    if (c == '(') {
      out.kind = Kind::Open;
      advance();
      return out;
    }
    if (c == ')') {
      out.kind = Kind::Close;
      advance();
      return out;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      advance();
    out.kind = Kind::Atom;
    out.atom = text_.substr(start, pos_ - start);
    return out;
  }

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
      at_line_start_ = true;
    } else {
      ++column_;
      if (!std::isspace(static_cast<unsigned char>(text_[pos_])))
        at_line_start_ = false;
    }
    ++pos_;
  }

  void skip_blank_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' && at_line_start_) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  bool at_line_start_ = true;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  std::vector<RawNode> parse_all() {
    std::vector<RawNode> roots;
    while (current_.kind != Lexer::Kind::End) {
      if (current_.kind != Lexer::Kind::Open)
        fail("expected '('", current_);
      roots.push_back(parse_node());
    }
    return roots;
  }

 private:
  RawNode parse_node() {
    RawNode node;
    node.line = current_.line;
    node.column = current_.column;
    shift();  // consume '('
    if (current_.kind == Lexer::Kind::Atom) {
      node.head = std::string(current_.atom);
      shift();
    }
    for (;;) {
      switch (current_.kind) {
        case Lexer::Kind::Open:
          node.kids.push_back(parse_node());
          break;
        case Lexer::Kind::Atom:
          node.words.emplace_back(current_.atom);
          shift();
          break;
        case Lexer::Kind::Close:
          shift();
          return node;
        case Lexer::Kind::End:
          fail("unexpected end of input: unbalanced parentheses", current_);
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg, const Lexer::Lexeme& at) {
    throw TreebankParseError(msg, at.line, at.column);
  }

  void shift() { current_ = lexer_.next(); }

  Lexer lexer_;
  Lexer::Lexeme current_;
};

Tree to_tree(const RawNode& raw) {
  if (raw.head.empty())
    throw TreebankParseError("unlabeled bracket pair below the sentence level",
                             raw.line, raw.column);
  if (!raw.words.empty() && !raw.kids.empty())
    throw TreebankParseError(
        "node (" + raw.head + " ...) mixes words and subtrees", raw.line,
        raw.column);
  if (raw.words.size() > 1)
    throw TreebankParseError(
        "preterminal (" + raw.head + " ...) dominates more than one token",
        raw.line, raw.column);
  if (raw.words.size() == 1)
    return Tree::leaf(Category::intern(raw.head), raw.words.front());
  if (raw.kids.empty())
    throw TreebankParseError("node (" + raw.head + ") has no children",
                             raw.line, raw.column);
  std::vector<Tree> children;
  children.reserve(raw.kids.size());
  for (const RawNode& kid : raw.kids) children.push_back(to_tree(kid));
  return Tree::node(Category::intern(raw.head), std::move(children));
}

Tree to_sentence(const RawNode& raw) {
  Tree tree = [&] {
    if (!raw.head.empty()) return to_tree(raw);
    // Outermost unlabeled pair: wrap under TOP.
    if (!raw.words.empty())
      throw TreebankParseError("bare token at the sentence level", raw.line,
                               raw.column);
    if (raw.kids.empty())
      throw TreebankParseError("empty sentence bracket pair", raw.line,
                               raw.column);
    std::vector<Tree> children;
    children.reserve(raw.kids.size());
    for (const RawNode& kid : raw.kids) children.push_back(to_tree(kid));
    return Tree::node(top_category(), std::move(children));
  }();
  tree.assign_spans(0);
  return tree;
}

const std::string kNoneTag = "-NONE-";

bool is_reserved_marker(const std::string& name) {
  return name == kNoneTag || name == "-LRB-" || name == "-RRB-";
}

std::string strip_label(const std::string& name) {
  if (is_reserved_marker(name)) return name;
  std::size_t cut = name.find_first_of("-=");
  if (cut == std::string::npos || cut == 0) return name;
  return name.substr(0, cut);
}

std::optional<Tree> normalize_node(const Tree& tree) {
  Category label = Category::intern(strip_label(tree.label().name()));
  if (tree.is_preterminal()) {
    if (is_null_leaf(tree)) return std::nullopt;
    return Tree::leaf(label, tree.word());
  }
  std::vector<Tree> children;
  children.reserve(tree.children().size());
  for (const Tree& child : tree.children()) {
    if (auto kept = normalize_node(child)) children.push_back(std::move(*kept));
  }
  if (children.empty()) return std::nullopt;
  return Tree::node(label, std::move(children));
}

void write_node(const Tree& tree, std::string* out) {
  out->push_back('(');
  out->append(tree.label().name());
  if (tree.is_preterminal()) {
    out->push_back(' ');
    out->append(tree.word());
  } else {
    for (const Tree& child : tree.children()) {
      out->push_back(' ');
      write_node(child, out);
    }
  }
  out->push_back(')');
}

}  // namespace

bool is_null_leaf(const Tree& leaf) {
  if (leaf.label().name() == kNoneTag) return true;
  const std::string& w = leaf.word();
  return w == "-NULL-" || (!w.empty() && w[0] == '*');
}

std::vector<Tree> read_treebank(std::string_view text) {
  Parser parser(text);
  std::vector<RawNode> raw = parser.parse_all();
  std::vector<Tree> trees;
  trees.reserve(raw.size());
  for (const RawNode& node : raw) trees.push_back(to_sentence(node));
  return trees;
}

std::vector<Tree> read_treebank_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read treebank file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return read_treebank(buffer.str());
  } catch (const TreebankParseError& e) {
    throw TreebankParseError(path.string() + ": " + e.bare_message(), e.line(),
                             e.column());
  }
}

std::optional<Tree> normalize(const Tree& tree) {
  std::optional<Tree> out = normalize_node(tree);
  if (out) out->assign_spans(0);
  return out;
}

std::string write_tree(const Tree& tree) {
  std::string out;
  if (is_top(tree.label())) {
    out.push_back('(');
    for (const Tree& child : tree.children()) {
      out.push_back(' ');
      write_node(child, &out);
    }
    out.push_back(')');
  } else {
    write_node(tree, &out);
  }
  return out;
}

void write_treebank_file(const std::filesystem::path& path,
                         const std::vector<Tree>& trees) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write treebank file: " + path.string());
  for (const Tree& tree : trees) out << write_tree(tree) << '\n';
}

}  // namespace treegram

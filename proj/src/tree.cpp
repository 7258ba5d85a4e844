#include "treegram/tree.hpp"

#include "treegram/errors.hpp"

namespace treegram {

Tree Tree::leaf(Category pos, std::string word) {
  if (word.empty()) throw InternalError("token word must be non-empty");
  Tree t;
  t.label_ = pos;
  t.word_ = std::move(word);
  return t;
}

Tree Tree::node(Category label, std::vector<Tree> children) {
  if (children.empty())
    throw InternalError("internal node must have at least one child");
  Tree t;
  t.label_ = label;
  t.children_ = std::move(children);
  return t;
}

std::int32_t Tree::assign_spans(std::int32_t first) {
  if (is_preterminal()) {
    start_ = first;
    end_ = first + 1;
    return end_;
  }
  start_ = first;
  std::int32_t next = first;
  for (Tree& child : children_) next = child.assign_spans(next);
  end_ = next;
  return next;
}

void Tree::yield(std::vector<Token>* out) const {
  if (is_preterminal()) {
    out->push_back(token());
    return;
  }
  for (const Tree& child : children_) child.yield(out);
}

std::vector<Token> Tree::yield() const {
  std::vector<Token> out;
  yield(&out);
  return out;
}

std::vector<Category> Tree::tag_sequence() const {
  std::vector<Category> tags;
  std::vector<Token> tokens = yield();
  tags.reserve(tokens.size());
  for (const Token& t : tokens) tags.push_back(t.pos);
  return tags;
}

std::size_t Tree::node_count() const {
  std::size_t n = 1;
  for (const Tree& child : children_) n += child.node_count();
  return n;
}

std::size_t Tree::token_count() const {
  if (is_preterminal()) return 1;
  std::size_t n = 0;
  for (const Tree& child : children_) n += child.token_count();
  return n;
}

bool operator==(const Tree& a, const Tree& b) {
  if (a.label_ != b.label_ || a.word_ != b.word_ ||
      a.children_.size() != b.children_.size())
    return false;
  for (std::size_t i = 0; i < a.children_.size(); ++i)
    if (!(a.children_[i] == b.children_[i])) return false;
  return true;
}

}  // namespace treegram

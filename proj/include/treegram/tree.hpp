#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "treegram/symbols.hpp"

namespace treegram {

struct Token {
  std::string word;
  Category pos;
};

// Bracketed constituent tree. A preterminal node carries its token's surface
// word and has no children; every other node has >= 1 child. Spans are token
// indices, end-exclusive, assigned left to right over the tree's own yield.
class Tree {
 public:
  Tree() = default;

  static Tree leaf(Category pos, std::string word);
  static Tree node(Category label, std::vector<Tree> children);

  Category label() const { return label_; }
  bool is_preterminal() const { return children_.empty(); }

  const std::vector<Tree>& children() const { return children_; }
  std::vector<Tree>& children() { return children_; }

  const std::string& word() const { return word_; }
  Token token() const { return Token{word_, label_}; }

  std::int32_t start() const { return start_; }
  std::int32_t end() const { return end_; }

  void set_label(Category label) { label_ = label; }
  void set_span(std::int32_t start, std::int32_t end) {
    start_ = start;
    end_ = end;
  }

  // Renumbers spans left to right over the current yield; returns the token
  // count.
  std::int32_t assign_spans(std::int32_t first = 0);

  void yield(std::vector<Token>* out) const;
  std::vector<Token> yield() const;
  // POS tag per token, in order.
  std::vector<Category> tag_sequence() const;

  std::size_t node_count() const;
  std::size_t token_count() const;

  // Structural equality over labels, words, and shape (spans are derived
  // data and excluded).
  friend bool operator==(const Tree& a, const Tree& b);
  friend bool operator!=(const Tree& a, const Tree& b) { return !(a == b); }

 private:
  Category label_;
  std::vector<Tree> children_;
  std::string word_;
  std::int32_t start_ = 0;
  std::int32_t end_ = 0;
};

}  // namespace treegram

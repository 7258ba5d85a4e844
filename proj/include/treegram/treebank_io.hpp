#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treegram/tree.hpp"

namespace treegram {

// Reads concatenated Penn-style bracketed s-expressions. Lines whose first
// non-blank character is '#' are comments. An unlabeled outermost pair per
// sentence is wrapped under the reserved TOP label. Token spans are assigned
// left to right; no normalization is applied. Unbalanced input throws
// TreebankParseError with a 1-based line/column; empty input yields an empty
// sequence.
std::vector<Tree> read_treebank(std::string_view text);
std::vector<Tree> read_treebank_file(const std::filesystem::path& path);

// Label cleanup and null-element removal: function tags and coindices are
// stripped (everything from the first '-' or '=' on, with -NONE-, -LRB-,
// -RRB- exempt), null leaves (-NONE- tags, -NULL-/*T*-style trace words) are
// deleted, and nodes emptied by the deletion are removed recursively upward.
// Returns nothing if the whole tree is emptied. Surviving spans are
// renumbered to a gap-free sequence.
std::optional<Tree> normalize(const Tree& tree);

// Single-line bracketed form; a TOP root is written as an unlabeled pair.
// Inverse of read_treebank on normalized trees.
std::string write_tree(const Tree& tree);

void write_treebank_file(const std::filesystem::path& path,
                         const std::vector<Tree>& trees);

bool is_null_leaf(const Tree& leaf);

}  // namespace treegram

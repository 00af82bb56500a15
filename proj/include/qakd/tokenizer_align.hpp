#ifndef QAKD_TOKENIZER_ALIGN_HPP
#define QAKD_TOKENIZER_ALIGN_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "qakd/types.hpp"

namespace qakd {

struct Token {
  std::string text;
  bool is_continuation = false;  ///< sub-word piece glued to the previous token ("##" in WordPiece)

  /// Builds a token from WordPiece surface text: a leading "##" marks a continuation.
  static Token from_wordpiece(std::string text);
};

enum class TokenSource { student, teacher };

struct TokenSequence {
  std::vector<Token> tokens;
  TokenSource source = TokenSource::student;

  std::size_t size() const { return tokens.size(); }
};

/// One matched pair of token groups, as half-open index ranges.
struct AlignedGroup {
  std::size_t student_begin = 0;
  std::size_t student_end = 0;
  std::size_t teacher_begin = 0;
  std::size_t teacher_end = 0;
};

/// For each student position, the teacher position whose logits it takes.
struct AlignmentMap {
  std::vector<std::size_t> mapping;
  /// false for student positions after the first in a many-to-one group; the
  /// logits they receive are replicated from the group leader and can be masked.
  std::vector<bool> leader;
  std::vector<AlignedGroup> groups;
  std::size_t teacher_length = 0;

  std::size_t size() const { return mapping.size(); }
};

struct AlignOptions {
  /// Teacher sequences longer than this are rejected (0 disables the check).
  std::size_t max_teacher_tokens = 384;
};

/// Comparison form of a token: continuation marker removed, NFKD folded to
/// ASCII, lower-cased, whitespace removed.
std::string normalize_token(const Token& token);

/// Rule-based alignment: exact 1:1 matches where the normalized tokens agree,
/// otherwise the shorter side is extended token by token until both groups
/// spell the same string. Scans left to right without backtracking.
AlignmentMap align(const TokenSequence& student, const TokenSequence& teacher, const AlignOptions& options = {});

/// Gathers teacher start/end logits onto student positions.
SpanLogits project_teacher_logits(const AlignmentMap& map, const SpanLogits& teacher);

}  // namespace qakd

#endif  // QAKD_TOKENIZER_ALIGN_HPP

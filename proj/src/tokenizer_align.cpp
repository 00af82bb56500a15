#include "qakd/tokenizer_align.hpp"

#include <cctype>

#include "qakd/errors.hpp"
#include "qakd/unicode.hpp"

namespace qakd {
namespace {

void check_sequence(const TokenSequence& seq, const char* name) {
  if (seq.tokens.empty()) throw ArgumentError(std::string(name) + " token sequence is empty");
  if (seq.tokens.front().is_continuation)
    throw ArgumentError(std::string(name) + " token sequence starts with a continuation token");
  for (std::size_t i = 0; i < seq.tokens.size(); ++i)
    if (seq.tokens[i].text.empty())
      throw ArgumentError(std::string(name) + " token " + std::to_string(i) + " has empty text");
}

std::vector<std::string> normalize_all(const TokenSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.tokens.size());
  for (const auto& t : seq.tokens) out.push_back(normalize_token(t));
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

AlignmentError mismatch(const std::string& detail, std::size_t i, std::size_t j) {
  return AlignmentError("cannot align student token " + std::to_string(i) + " with teacher token " +
                            std::to_string(j) + ": " + detail,
                        i, j);
}

}  // namespace

Token Token::from_wordpiece(std::string text) {
  const bool cont = text.size() > 2 && text.compare(0, 2, "##") == 0;
  return Token{std::move(text), cont};
}

std::string normalize_token(const Token& token) {
  std::string_view text = token.text;
  if (token.is_continuation && text.substr(0, 2) == "##") text.remove_prefix(2);
  std::string folded = unicode::fold_to_ascii(text);
  std::string out;
  out.reserve(folded.size());
  for (char c : folded) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) continue;
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

AlignmentMap align(const TokenSequence& student, const TokenSequence& teacher, const AlignOptions& options) {
  check_sequence(student, "student");
  check_sequence(teacher, "teacher");
  if (options.max_teacher_tokens != 0 && teacher.size() > options.max_teacher_tokens)
    throw AlignmentError("teacher sequence has " + std::to_string(teacher.size()) +
                             " tokens, above the maximum of " + std::to_string(options.max_teacher_tokens),
                         0, options.max_teacher_tokens);

  const std::vector<std::string> s = normalize_all(student);
  const std::vector<std::string> t = normalize_all(teacher);
  const std::size_t n = s.size();
  const std::size_t m = t.size();

  AlignmentMap map;
  map.teacher_length = m;
  map.mapping.reserve(n);
  map.leader.reserve(n);

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    std::string student_text = s[i];
    std::string teacher_text = t[j];
    std::size_t si = i + 1;
    std::size_t tj = j + 1;
    while (student_text != teacher_text) {
      if (student_text.size() < teacher_text.size()) {
        if (!starts_with(teacher_text, student_text))
          throw mismatch("\"" + student_text + "\" is not a prefix of \"" + teacher_text + "\"", i, j);
        if (si == n) throw mismatch("student tokens exhausted while matching \"" + teacher_text + "\"", i, j);
        student_text += s[si++];
      } else if (teacher_text.size() < student_text.size()) {
        if (!starts_with(student_text, teacher_text))
          throw mismatch("\"" + teacher_text + "\" is not a prefix of \"" + student_text + "\"", i, j);
        if (tj == m) throw mismatch("teacher tokens exhausted while matching \"" + student_text + "\"", i, j);
        teacher_text += t[tj++];
      } else {
        throw mismatch("\"" + student_text + "\" differs from \"" + teacher_text + "\"", i, j);
      }
    }
    map.groups.push_back({i, si, j, tj});
    for (std::size_t k = i; k < si; ++k) {
      map.mapping.push_back(j);
      map.leader.push_back(k == i);
    }
    i = si;
    j = tj;
  }

  // Trailing tokens that normalize to nothing join the last group.
  for (; i < n; ++i) {
    if (!s[i].empty() || map.groups.empty()) throw mismatch("teacher tokens exhausted", i, j);
    map.groups.back().student_end = i + 1;
    map.mapping.push_back(map.groups.back().teacher_begin);
    map.leader.push_back(false);
  }
  for (; j < m; ++j) {
    if (!t[j].empty() || map.groups.empty()) throw mismatch("student tokens exhausted", i, j);
    map.groups.back().teacher_end = j + 1;
  }
  return map;
}

SpanLogits project_teacher_logits(const AlignmentMap& map, const SpanLogits& teacher) {
  if (teacher.start.size() != teacher.end.size())
    throw ContractViolation("teacher start/end logits differ in length");
  const auto n = static_cast<Index>(map.mapping.size());
  SpanLogits out{LogitVector(n), LogitVector(n)};
  for (Index k = 0; k < n; ++k) {
    const auto src = static_cast<Index>(map.mapping[static_cast<std::size_t>(k)]);
    if (src >= teacher.start.size())
      throw ContractViolation("alignment references teacher position " + std::to_string(src) +
                              " but teacher logits have length " + std::to_string(teacher.start.size()));
    out.start(k) = teacher.start(src);
    out.end(k) = teacher.end(src);
  }
  return out;
}

}  // namespace qakd

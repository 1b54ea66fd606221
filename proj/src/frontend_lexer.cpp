#include "frontend_lexer.hpp"

#include <array>
#include <cctype>
#include <set>
#include <sstream>

namespace mtbmc {

SourceError::SourceError(const std::string& origin, SourceLoc loc, const std::string& msg)
    : std::runtime_error(origin + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) +
                         ": " + msg),
      loc_(loc),
      msg_(msg) {}

namespace {

std::string expected_list(const std::vector<std::string>& expected) {
  std::ostringstream os;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) os << (i + 1 == expected.size() ? " or " : ", ");
    os << expected[i];
  }
  return os.str();
}

}  // namespace

SyntaxError::SyntaxError(const std::string& origin, SourceLoc loc, const std::string& found,
                         std::vector<std::string> expected)
    : SourceError(origin, loc, "syntax error at '" + found + "', expected " + expected_list(expected)),
      expected_(std::move(expected)) {}

namespace detail {

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"int",  "bool",  "mutex",  "cond",   "thread_t", "thread",
                                          "main", "if",    "else",   "while",  "assert",   "assume",
                                          "true", "false", "skip"};
  return k;
}

// Longest match first.
constexpr std::array<const char*, 30> kPuncts = {
    "<<", ">>", "==", "!=", "<=", ">=", "&&", "||", "(", ")", "{", "}", "[", "]", ";",
    ",",  "=",  "<",  ">",  "+",  "-",  "*",  "/",  "%", "!", "~", "&", "|", "^", "?"};

}  // namespace

std::vector<Token> lex(const SourceProgram& src) {
  const std::string& s = src.text;
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  std::size_t line_start = 0;
  auto loc_at = [&](std::size_t pos) { return SourceLoc{pos, line, static_cast<int>(pos - line_start) + 1}; };

  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      SourceLoc start = loc_at(i);
      i += 2;
      while (i + 1 < s.size() && !(s[i] == '*' && s[i + 1] == '/')) {
        if (s[i] == '\n') {
          ++line;
          line_start = i + 1;
        }
        ++i;
      }
      if (i + 1 >= s.size()) throw SyntaxError(src.origin, start, "/*", {"'*/' closing the comment"});
      i += 2;
      continue;
    }
    SourceLoc loc = loc_at(i);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word = s.substr(i, j - i);
      out.push_back({keywords().count(word) ? Tok::Keyword : Tok::Ident, word, 0, loc});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      int base = 10;
      if (c == '0' && j + 1 < s.size() && (s[j + 1] == 'x' || s[j + 1] == 'X')) {
        base = 16;
        j += 2;
      }
      std::size_t digits_start = j;
      while (j < s.size() && std::isxdigit(static_cast<unsigned char>(s[j])) &&
             (base == 16 || std::isdigit(static_cast<unsigned char>(s[j]))))
        ++j;
      if (j == digits_start || (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '_')))
        throw SyntaxError(src.origin, loc, s.substr(i, j - i + 1), {"an integer literal"});
      std::uint64_t v = 0;
      for (std::size_t k = digits_start; k < j; ++k) {
        int d = std::isdigit(static_cast<unsigned char>(s[k])) ? s[k] - '0'
                                                               : std::tolower(static_cast<unsigned char>(s[k])) - 'a' + 10;
        v = v * base + d;
      }
      out.push_back({Tok::Int, s.substr(i, j - i), static_cast<std::int64_t>(v), loc});
      i = j;
      continue;
    }
    bool matched = false;
    for (const char* p : kPuncts) {
      std::string_view pv(p);
      if (s.compare(i, pv.size(), pv) == 0) {
        out.push_back({Tok::Punct, std::string(pv), 0, loc});
        i += pv.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(src.origin, loc, std::string(1, c), {"a token"});
  }
  out.push_back({Tok::End, "<end of input>", 0, loc_at(s.size())});
  return out;
}

}  // namespace detail
}  // namespace mtbmc

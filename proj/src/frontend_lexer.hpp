#ifndef MTBMC_FRONTEND_LEXER_HPP
#define MTBMC_FRONTEND_LEXER_HPP

#include <string>
#include <vector>

#include "mtbmc/frontend.hpp"

namespace mtbmc::detail {

enum class Tok { Ident, Int, Punct, Keyword, End };

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

std::vector<Token> lex(const SourceProgram& src);

}  // namespace mtbmc::detail

#endif

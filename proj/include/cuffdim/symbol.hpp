#pragma once

#include <array>
#include <cstdint>

#include "cuffdim/tolerances.hpp"

namespace cuffdim {

/// Labels of the four glued octagon sides. The enumerator order is the
/// lexicographic order used for words everywhere in the library.
enum class Symbol : std::uint8_t { alpha = 0, alpha_bar = 1, beta = 2, beta_bar = 3 };

inline constexpr std::array<Symbol, 4> kSymbols = {Symbol::alpha, Symbol::alpha_bar, Symbol::beta,
                                                   Symbol::beta_bar};

constexpr Symbol bar(Symbol s) { return static_cast<Symbol>(static_cast<std::uint8_t>(s) ^ 1u); }

constexpr int index_of(Symbol s) { return static_cast<int>(s); }

/// Text form used in files: a = alpha, A = alpha-bar, b = beta, B = beta-bar.
constexpr char to_char(Symbol s) {
  constexpr char letters[] = {'a', 'A', 'b', 'B'};
  return letters[index_of(s)];
}

inline Symbol symbol_from_char(char c) {
  switch (c) {
    case 'a': return Symbol::alpha;
    case 'A': return Symbol::alpha_bar;
    case 'b': return Symbol::beta;
    case 'B': return Symbol::beta_bar;
    default: throw Error(std::string("not a word symbol: '") + c + "'");
  }
}

}  // namespace cuffdim

#ifndef KVLOG_GEN_HPP
#define KVLOG_GEN_HPP

#include <cstddef>

#include "kvlog/formula.hpp"
#include "kvlog/random.hpp"

namespace kvlog {

struct FormulaShape {
  std::size_t modal_depth = 2;
  /// Bound on the height of the syntax tree.
  std::size_t height = 5;
};

/// Random formula of the given language over vocab, with modal depth at most
/// shape.modal_depth. Deterministic in the state of rng.
Formula random_formula(Rng& rng, const Vocabulary& vocab, Language lang,
                       FormulaShape shape = {});

}  // namespace kvlog

#endif  // KVLOG_GEN_HPP

#ifndef KVLOG_SYNTAX_HPP
#define KVLOG_SYNTAX_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kvlog/formula.hpp"

namespace kvlog {

/// Parses the ASCII grammar:
///   T F p ~f (f & g) (f | g) (f -> g) (f <-> g)
///   [a]f <a>f [a]^c f <a>^c f [a]^c(f, g) <a>^c(f, g) Kv[a](f, c) Kv[a](c)
/// Precedence: prefix operators, then &, |, ->, <-> (the last two
/// right-associative). Symbols are checked against vocab.
Formula parse(std::string_view text, const Vocabulary& vocab);

/// Parses without a vocabulary check. Used for schema templates.
Formula parse_free(std::string_view text);

struct PrintOptions {
  bool resugar = true;
};

/// Fully parenthesized rendering; parse(print(f)) == f.
std::string print(const Formula& f, PrintOptions opts = {});

std::set<Language> language_of(const Formula& f);
bool in_language(const Formula& f, Language l);

/// T: Kv_i(phi, c) becomes [i]^c ~T(phi).
Formula translate_T(const Formula& f);
/// Inverse translation: [i]^c psi becomes Kv_i(~psi', c), one ~~ stripped.
Formula translate_T_inv(const Formula& f);
/// Rewrites every unary [i]^c psi into [i]^c(psi, psi).
Formula embed_unary(const Formula& f);

/// The disjunction equivalent to <i>^c(phi, psi) over unary modalities.
Formula binary_diamond_expansion(const std::string& agent, const std::string& c,
                                 const Formula& phi, const Formula& psi);
/// Eliminates every binary [i]^c(., .), innermost first.
Formula reduce_r(const Formula& f);

using Substitution = std::map<std::string, Formula>;

/// Simultaneous uniform substitution of propositions.
Formula substitute(const Formula& f, const Substitution& sigma);
/// Renames agents and constants (used when instantiating schemas).
Formula rename_symbols(const Formula& f,
                       const std::map<std::string, std::string>& agents,
                       const std::map<std::string, std::string>& constants);

/// Child-index path from the root.
using Path = std::vector<std::size_t>;

const Formula& subterm_at(const Formula& f, const Path& path);
/// Preorder paths of every occurrence of psi in f.
std::vector<Path> occurrences(const Formula& f, const Formula& psi);
/// Replaces the occurrences of psi at the given paths by chi.
Formula replace_at(const Formula& f, const std::set<Path>& positions,
                   const Formula& psi, const Formula& chi);

std::string path_to_string(const Path& p);
Path path_from_string(std::string_view s);

std::size_t modal_depth(const Formula& f);

}  // namespace kvlog

#endif  // KVLOG_SYNTAX_HPP

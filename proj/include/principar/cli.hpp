#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace principar {

/// Runs the command line (`args` excludes the program name). Returns the exit
/// code: 0 on success, 2 when a sentence gets no tree or the oracle finds a
/// mismatch, 1 on usage, grammar, lexicon or I/O errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
/// Same, reading sentences from `in` instead of standard input.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Grammar used when neither `--grammar` nor PRINCIPAR_GRAMMAR is given.
std::string default_grammar_path();
/// Lexicon used when neither `--lexicon` nor PRINCIPAR_LEXICON is given.
std::string default_lexicon_path();

}  // namespace principar

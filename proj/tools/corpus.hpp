#pragma once

#include <string>
#include <vector>

#include "wordorder/distributions.hpp"

namespace wordorder::cli {

enum class Tokenization { whitespace, character };

struct Corpus {
  TokenSequence tokens;
  std::size_t types = 0;
  std::vector<std::string> warnings;
};

/// Throws io.InputParseError on invalid UTF-8. Character mode yields one
/// token per code point and drops line breaks.
Corpus tokenize(const std::string& text, Tokenization mode);
/// Throws io.ReadError when the file cannot be opened.
Corpus ingest_corpus(const std::string& path, Tokenization mode);
std::string read_file(const std::string& path);

/// Joins tokens with single spaces (whitespace mode) or nothing (character mode).
std::string render_tokens(const TokenSequence& tokens, Tokenization mode);

}  // namespace wordorder::cli
